#pragma once

#include "qap/solution.hpp"

namespace qap {

// Plain two-step revenue-ordered policy: pick the offline assortment by its
// own revenue, then give each online segment its best revenue-ordered subset
// of it. With a cardinality constraint the first step switches to the
// constrained-MNL LP; general linear constraints are not supported here.
QapSolution two_step_ro(const Instance& instance);

// Prefix-enumeration variant: scans all revenue-ordered offline prefixes and
// scores each by offline plus online revenue before committing.
QapSolution improved_ro(const Instance& instance);

}  // namespace qap
