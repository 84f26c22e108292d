#include "qap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qap/rng.hpp"

namespace qap {

using nlohmann::json;

const PartialOrder* Instance::order_for(int segment) const {
  for (const auto& o : orders) {
    if (o.segment == segment) return &o;
  }
  return nullptr;
}

namespace {

bool is_acyclic(int n, const std::vector<std::pair<int, int>>& arcs) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : arcs) {
    out[static_cast<std::size_t>(a)].push_back(b);
    ++indeg[static_cast<std::size_t>(b)];
  }
  std::queue<int> q;
  for (int v = 0; v < n; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) q.push(v);
  }
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++seen;
    for (int w : out[static_cast<std::size_t>(v)]) {
      if (--indeg[static_cast<std::size_t>(w)] == 0) q.push(w);
    }
  }
  return seen == n;
}

void check_segment(const Segment& s, int n, int index, std::vector<Violation>& out) {
  const std::string name = "segments[" + std::to_string(index) + "]";
  if (s.revenue.size() != static_cast<std::size_t>(n)) {
    out.push_back({name + ".r", "length != n"});
  }
  if (s.weight.size() != static_cast<std::size_t>(n)) {
    out.push_back({name + ".u", "length != n"});
  }
  if (!(s.u0 > 0.0)) out.push_back({name + ".u0", "no-purchase weight must be > 0"});
  if (s.alpha < 0.0) out.push_back({name + ".alpha", "arrival probability must be >= 0"});
  for (std::size_t j = 0; j < s.weight.size(); ++j) {
    if (s.weight[j] < 0.0) {
      out.push_back({name + ".u[" + std::to_string(j) + "]", "preference weight must be >= 0"});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Instance& instance) {
  std::vector<Violation> out;
  if (instance.n < 0) out.push_back({"n", "product count must be >= 0"});
  if (instance.segments.empty()) {
    out.push_back({"segments", "offline segment missing"});
    return out;
  }
  for (std::size_t i = 0; i < instance.segments.size(); ++i) {
    check_segment(instance.segments[i], instance.n, static_cast<int>(i), out);
  }
  double alpha_sum = 0.0;
  for (const auto& s : instance.segments) alpha_sum += s.alpha;
  if (std::abs(alpha_sum - 1.0) > 1e-12) {
    out.push_back({"segments.alpha", "arrival probabilities sum != 1"});
  }
  const int m = instance.num_online();
  std::vector<bool> has_order(static_cast<std::size_t>(m) + 1, false);
  for (const auto& o : instance.orders) {
    const std::string name = "orders[segment " + std::to_string(o.segment) + "]";
    if (o.segment < 1 || o.segment > m) {
      out.push_back({name, "segment index out of range"});
      continue;
    }
    if (has_order[static_cast<std::size_t>(o.segment)]) {
      out.push_back({name, "duplicate order for segment"});
    }
    has_order[static_cast<std::size_t>(o.segment)] = true;
    bool in_range = true;
    for (const auto& [a, b] : o.arcs) {
      if (a < 0 || a >= instance.n || b < 0 || b >= instance.n || a == b) {
        out.push_back({name + ".arcs", "arc references invalid product"});
        in_range = false;
        break;
      }
    }
    if (in_range && !is_acyclic(instance.n, o.arcs)) {
      out.push_back({name + ".arcs", "partial order cyclic"});
    }
  }
  const auto& oc = instance.offline_constraint;
  if (oc.kind == OfflineConstraint::Kind::Cardinality) {
    if (oc.cardinality < 1 || oc.cardinality > instance.n) {
      out.push_back({"offline_constraint.K", "cardinality must be in [1, n]"});
    }
  } else if (oc.kind == OfflineConstraint::Kind::Linear) {
    if (oc.rows.size() != oc.rhs.size()) {
      out.push_back({"offline_constraint", "row/rhs count mismatch"});
    }
    for (std::size_t r = 0; r < oc.rows.size(); ++r) {
      if (oc.rows[r].size() != static_cast<std::size_t>(instance.n)) {
        out.push_back({"offline_constraint.A[" + std::to_string(r) + "]", "row length != n"});
      }
    }
  }
  return out;
}

std::vector<Violation> validate(const IdmInstance& instance) {
  std::vector<Violation> out = validate(instance.base);
  const int n = instance.base.n;
  const int m = instance.base.num_online();
  if (instance.theta.size() != static_cast<std::size_t>(m)) {
    out.push_back({"idm.theta", "need one theta vector per online segment"});
  }
  for (std::size_t i = 0; i < instance.theta.size(); ++i) {
    if (instance.theta[i].size() != static_cast<std::size_t>(n)) {
      out.push_back({"idm.theta[" + std::to_string(i) + "]", "length != n"});
      continue;
    }
    for (int j = 0; j < n; ++j) {
      if (!(instance.theta[i][static_cast<std::size_t>(j)] > 0.0)) {
        out.push_back({"idm.theta[" + std::to_string(i) + "]", "theta must be > 0"});
        break;
      }
    }
  }
  for (const auto& [j, k] : instance.precedence) {
    if (j < 0 || j >= n || k < 0 || k >= n || j == k) {
      out.push_back({"idm.precedence", "arc references invalid product"});
      break;
    }
  }
  if (!is_acyclic(n, instance.precedence)) {
    out.push_back({"idm.precedence", "cycle forces equality components"});
  }
  return out;
}

Instance generate_synthetic(int n, int m, double alpha0, double u_on0, std::uint64_t seed) {
  if (n < m || m < 1) {
    throw std::invalid_argument("generate_synthetic: cannot assign unique favorites (need n >= m >= 1)");
  }
  if (alpha0 < 0.0 || alpha0 > 1.0) throw std::invalid_argument("generate_synthetic: alpha0 not in [0,1]");
  if (!(u_on0 > 0.0)) throw std::invalid_argument("generate_synthetic: u_on0 must be > 0");

  Rng root(seed);
  // Stage streams: 0 offline prices, 1 offline weights, 2 favorite assignment.
  // Per-segment streams: 16 + i for online segment i.
  Rng price_rng = root.substream(0);
  Rng weight_rng = root.substream(1);
  Rng favorite_rng = root.substream(2);

  Instance inst;
  inst.n = n;
  inst.segments.resize(static_cast<std::size_t>(m) + 1);

  auto& off = inst.segments[0];
  off.alpha = alpha0;
  off.u0 = 1.0;
  off.revenue.resize(static_cast<std::size_t>(n));
  off.weight.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) off.revenue[static_cast<std::size_t>(j)] = price_rng.uniform(10.0, 20.0);
  for (int j = 0; j < n; ++j) off.weight[static_cast<std::size_t>(j)] = weight_rng.uniform(0.0, 1.0);

  const std::vector<int> favorites = favorite_rng.sample(n, m);
  const int regular = (m + 1) / 2;  // first ceil(m/2) segments keep offline prices, rest are VIP

  for (int i = 1; i <= m; ++i) {
    Rng rng = root.substream(16 + static_cast<std::uint64_t>(i));
    auto& seg = inst.segments[static_cast<std::size_t>(i)];
    seg.alpha = (1.0 - alpha0) / m;
    seg.u0 = u_on0;
    seg.revenue.resize(static_cast<std::size_t>(n));
    seg.weight.resize(static_cast<std::size_t>(n));
    const bool vip = i > regular;
    for (int j = 0; j < n; ++j) {
      const double base = off.revenue[static_cast<std::size_t>(j)];
      seg.revenue[static_cast<std::size_t>(j)] = vip ? base * rng.uniform(0.8, 1.0) : base;
    }
    const int favorite = favorites[static_cast<std::size_t>(i - 1)];
    for (int j = 0; j < n; ++j) {
      seg.weight[static_cast<std::size_t>(j)] = (j == favorite) ? 1.0 : rng.uniform(0.0, 1.0);
    }
  }
  return inst;
}

std::vector<PartialOrder> generate_partial_orders(int n, int m, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("generate_partial_orders: need n >= 4");
  Rng root(seed);
  const int s = n / 4;
  const int w = 6;
  const int l = w / 2;
  std::vector<PartialOrder> orders;
  orders.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    PartialOrder order;
    order.segment = i;
    std::vector<int> perm = rng.sample(n, s);
    // v runs over permutation positions 1..s-w; the last w positions only
    // receive arcs.
    for (int v = 1; v <= s - w; ++v) {
      const int k = (v < w) ? static_cast<int>(rng.uniform_int(1, l)) : static_cast<int>(rng.uniform_int(0, l));
      std::vector<int> window(static_cast<std::size_t>(w));
      for (int t = 0; t < w; ++t) window[static_cast<std::size_t>(t)] = perm[static_cast<std::size_t>(v + t)];
      rng.shuffle(window);
      for (int t = 0; t < k; ++t) {
        order.arcs.emplace_back(perm[static_cast<std::size_t>(v - 1)], window[static_cast<std::size_t>(t)]);
      }
    }
    orders.push_back(std::move(order));
  }
  return orders;
}

namespace {

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("instance schema: unknown field '" + it.key() + "' in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::runtime_error("instance schema: missing field '" + std::string(key) + "' in " + where);
  return *it;
}

std::vector<double> number_array(const json& arr, std::size_t expect, const std::string& where) {
  if (!arr.is_array() || arr.size() != expect) {
    throw std::runtime_error("instance schema: " + where + " must be a number array of length " + std::to_string(expect));
  }
  std::vector<double> out;
  out.reserve(expect);
  for (const auto& v : arr) {
    if (!v.is_number()) throw std::runtime_error("instance schema: non-number entry in " + where);
    out.push_back(v.get<double>());
  }
  return out;
}

json instance_to_json_obj(const Instance& inst) {
  json doc;
  doc["n"] = inst.n;
  json segs = json::array();
  for (const auto& s : inst.segments) {
    json seg;
    seg["alpha"] = s.alpha;
    seg["u0"] = s.u0;
    seg["r"] = s.revenue;
    seg["u"] = s.weight;
    segs.push_back(std::move(seg));
  }
  doc["segments"] = std::move(segs);
  if (!inst.orders.empty()) {
    json orders = json::array();
    for (const auto& o : inst.orders) {
      json arcs = json::array();
      for (const auto& [a, b] : o.arcs) arcs.push_back(json::array({a + 1, b + 1}));
      orders.push_back(json{{"segment", o.segment}, {"arcs", std::move(arcs)}});
    }
    doc["orders"] = std::move(orders);
  }
  const auto& oc = inst.offline_constraint;
  if (oc.kind == OfflineConstraint::Kind::Cardinality) {
    doc["offline_constraint"] = json{{"type", "cardinality"}, {"K", oc.cardinality}};
  } else if (oc.kind == OfflineConstraint::Kind::Linear) {
    doc["offline_constraint"] = json{{"type", "linear"}, {"A", oc.rows}, {"b", oc.rhs}};
  }
  return doc;
}

Instance instance_from_json_obj(const json& doc) {
  if (!doc.is_object()) throw std::runtime_error("instance schema: top level must be an object");
  require_keys(doc, "top level", {"n", "segments", "orders", "offline_constraint", "idm"});
  Instance inst;
  const json& jn = require(doc, "n", "top level");
  if (!jn.is_number_integer()) throw std::runtime_error("instance schema: n must be an integer");
  inst.n = jn.get<int>();
  const json& segs = require(doc, "segments", "top level");
  if (!segs.is_array() || segs.empty()) throw std::runtime_error("instance schema: segments must be a nonempty array");
  int idx = 0;
  for (const auto& js : segs) {
    const std::string where = "segments[" + std::to_string(idx) + "]";
    if (!js.is_object()) throw std::runtime_error("instance schema: " + where + " must be an object");
    require_keys(js, where, {"alpha", "u0", "r", "u"});
    Segment s;
    s.alpha = require(js, "alpha", where).get<double>();
    s.u0 = require(js, "u0", where).get<double>();
    s.revenue = number_array(require(js, "r", where), static_cast<std::size_t>(inst.n), where + ".r");
    s.weight = number_array(require(js, "u", where), static_cast<std::size_t>(inst.n), where + ".u");
    inst.segments.push_back(std::move(s));
    ++idx;
  }
  if (doc.contains("orders")) {
    const json& orders = doc["orders"];
    if (!orders.is_array()) throw std::runtime_error("instance schema: orders must be an array");
    for (const auto& jo : orders) {
      require_keys(jo, "orders[]", {"segment", "arcs"});
      PartialOrder o;
      o.segment = require(jo, "segment", "orders[]").get<int>();
      if (o.segment < 1 || o.segment > inst.num_online()) {
        throw std::runtime_error("instance schema: orders[].segment out of range");
      }
      for (const auto& ja : require(jo, "arcs", "orders[]")) {
        if (!ja.is_array() || ja.size() != 2) throw std::runtime_error("instance schema: orders[].arcs entries must be pairs");
        const int a = ja[0].get<int>();
        const int b = ja[1].get<int>();
        if (a < 1 || a > inst.n || b < 1 || b > inst.n) {
          throw std::runtime_error("instance schema: orders[].arcs references product outside 1..n");
        }
        o.arcs.emplace_back(a - 1, b - 1);
      }
      inst.orders.push_back(std::move(o));
    }
  }
  if (doc.contains("offline_constraint")) {
    const json& joc = doc["offline_constraint"];
    require_keys(joc, "offline_constraint", {"type", "K", "A", "b"});
    const std::string type = require(joc, "type", "offline_constraint").get<std::string>();
    if (type == "none") {
      inst.offline_constraint.kind = OfflineConstraint::Kind::Unconstrained;
    } else if (type == "cardinality") {
      inst.offline_constraint.kind = OfflineConstraint::Kind::Cardinality;
      inst.offline_constraint.cardinality = require(joc, "K", "offline_constraint").get<int>();
    } else if (type == "linear") {
      inst.offline_constraint.kind = OfflineConstraint::Kind::Linear;
      for (const auto& row : require(joc, "A", "offline_constraint")) {
        inst.offline_constraint.rows.push_back(number_array(row, static_cast<std::size_t>(inst.n), "offline_constraint.A[]"));
      }
      const json& jb = require(joc, "b", "offline_constraint");
      inst.offline_constraint.rhs = number_array(jb, jb.size(), "offline_constraint.b");
      if (inst.offline_constraint.rhs.size() != inst.offline_constraint.rows.size()) {
        throw std::runtime_error("instance schema: offline_constraint A/b size mismatch");
      }
    } else {
      throw std::runtime_error("instance schema: offline_constraint.type must be none|cardinality|linear");
    }
  }
  return inst;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return doc;
}

}  // namespace

std::string instance_to_json(const Instance& instance) { return instance_to_json_obj(instance).dump(2); }

Instance instance_from_json(const std::string& text) { return instance_from_json_obj(json::parse(text)); }

Instance read_instance(const std::string& path) { return instance_from_json_obj(read_json_file(path)); }

void write_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json_obj(instance).dump(2) << '\n';
}

IdmInstance read_idm_instance(const std::string& path) {
  const json doc = read_json_file(path);
  IdmInstance idm;
  idm.base = instance_from_json_obj(doc);
  if (!doc.contains("idm")) throw std::runtime_error("instance schema: missing idm block in " + path);
  const json& ji = doc["idm"];
  require_keys(ji, "idm", {"theta", "precedence"});
  const json& jtheta = require(ji, "theta", "idm");
  for (const auto& row : jtheta) {
    idm.theta.push_back(number_array(row, static_cast<std::size_t>(idm.base.n), "idm.theta[]"));
  }
  if (idm.theta.size() != static_cast<std::size_t>(idm.base.num_online())) {
    throw std::runtime_error("instance schema: idm.theta needs one row per online segment");
  }
  if (ji.contains("precedence")) {
    for (const auto& ja : ji["precedence"]) {
      if (!ja.is_array() || ja.size() != 2) throw std::runtime_error("instance schema: idm.precedence entries must be pairs");
      const int a = ja[0].get<int>();
      const int b = ja[1].get<int>();
      if (a < 1 || a > idm.base.n || b < 1 || b > idm.base.n) {
        throw std::runtime_error("instance schema: idm.precedence references product outside 1..n");
      }
      idm.precedence.emplace_back(a - 1, b - 1);
    }
  }
  return idm;
}

void write_idm_instance(const IdmInstance& instance, const std::string& path) {
  json doc = instance_to_json_obj(instance.base);
  json ji;
  ji["theta"] = instance.theta;
  json prec = json::array();
  for (const auto& [a, b] : instance.precedence) prec.push_back(json::array({a + 1, b + 1}));
  ji["precedence"] = std::move(prec);
  doc["idm"] = std::move(ji);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace qap
