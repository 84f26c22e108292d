#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qap {

// One consumer segment. Index 0 is the offline store, 1..m are online types.
struct Segment {
  double alpha = 0.0;            // arrival probability
  double u0 = 1.0;               // no-purchase preference weight
  std::vector<double> revenue;   // r_j, length n
  std::vector<double> weight;    // u_j >= 0, length n
};

// Dominance DAG for a two-stage Luce segment. Arc (a, b) means a dominates b:
// whenever a is offered alongside b, consumers discard b before choosing.
struct PartialOrder {
  int segment = 0;                         // owning online segment, 1-based
  std::vector<std::pair<int, int>> arcs;   // (dominator, dominated), 0-based products
};

struct OfflineConstraint {
  enum class Kind { Unconstrained, Cardinality, Linear };
  Kind kind = Kind::Unconstrained;
  int cardinality = 0;                          // K, used when kind == Cardinality
  std::vector<std::vector<double>> rows;        // A0, used when kind == Linear
  std::vector<double> rhs;                      // b0
};

struct Instance {
  int n = 0;
  std::vector<Segment> segments;            // offline first, then m online
  std::vector<PartialOrder> orders;         // one entry per 2SLM online segment
  OfflineConstraint offline_constraint;

  int num_online() const { return static_cast<int>(segments.size()) - 1; }
  const Segment& offline() const { return segments[0]; }
  // nullptr when segment i (1-based online index) is plain MNL.
  const PartialOrder* order_for(int segment) const;
};

// Independent-demand variant: MNL offline plus per-segment purchase
// probabilities theta, and precedence arcs (j, k) meaning x_j >= x_k.
struct IdmInstance {
  Instance base;                                // only segment 0 is used for choice
  std::vector<std::vector<double>> theta;       // theta[i][j], i over online segments
  std::vector<std::pair<int, int>> precedence;  // arcs (j, k), 0-based
};

struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate(const Instance& instance);
std::vector<Violation> validate(const IdmInstance& instance);

Instance generate_synthetic(int n, int m, double alpha0, double u_on0, std::uint64_t seed);
std::vector<PartialOrder> generate_partial_orders(int n, int m, std::uint64_t seed);

Instance read_instance(const std::string& path);
void write_instance(const Instance& instance, const std::string& path);
// The optional idm block rides along inside the same JSON document.
IdmInstance read_idm_instance(const std::string& path);
void write_idm_instance(const IdmInstance& instance, const std::string& path);

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

}  // namespace qap
