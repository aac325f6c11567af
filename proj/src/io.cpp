#include "ccl/io.hpp"

#include <cmath>
#include <string>

namespace ccl {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

HyperRect box_from_json(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw InputError("'box' must list one [lo, hi] pair per dimension");
  }
  std::vector<double> lo, hi;
  for (const json& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw InputError("'box' entries must be [lo, hi] number pairs");
    }
    lo.push_back(pair[0].get<double>());
    hi.push_back(pair[1].get<double>());
  }
  try {
    return HyperRect(std::move(lo), std::move(hi));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

json box_to_json(const HyperRect& b) {
  json out = json::array();
  for (int k = 0; k < b.dim(); ++k) out.push_back({b.lo(k), b.hi(k)});
  return out;
}

}  // namespace

BernsteinPoly poly_from_json(const json& j) {
  if (!j.is_object()) throw InputError("polynomial must be a JSON object");
  const int dim = get<int>(j, "dim");
  if (dim < 1 || dim > kMaxDimension) {
    throw InputError("dimension must be between 1 and " + std::to_string(kMaxDimension));
  }
  const std::string basis = get_or<std::string>(j, "basis", "bernstein");
  const auto coeffs = get<std::vector<double>>(j, "coeffs");
  for (const double c : coeffs) {
    if (!std::isfinite(c)) throw InputError("coefficients must be finite");
  }

  if (basis == "legendre") {
    if (coeffs.size() != (std::size_t{1} << (2 * dim))) {
      throw InputError("legendre input needs 4^dim coefficients");
    }
    const double omega = get_or<double>(j, "omega", 1.0);
    if (!(omega > 0.0)) throw InputError("omega must be positive");
    return from_legendre_tensor(dim, coeffs, omega);
  }

  const auto degree = get<std::vector<int>>(j, "degree");
  if (static_cast<int>(degree.size()) != dim) throw InputError("'degree' length must equal dim");
  for (const int n : degree) {
    if (n < 0) throw InputError("degrees must be nonnegative");
  }
  if (coeffs.size() != tensor_size(degree)) {
    throw InputError("coefficient count does not match degree");
  }
  const HyperRect box = j.contains("box") ? box_from_json(j.at("box"), dim)
                                          : HyperRect::cube(dim, 0.0, 1.0);
  if (basis == "bernstein") return BernsteinPoly(degree, box, coeffs);
  if (basis == "power") return from_power(degree, box, coeffs);
  throw InputError("unknown basis '" + basis + "'");
}

json poly_to_json(const BernsteinPoly& p) {
  return json{{"dim", p.dim()},
              {"degree", std::vector<int>(p.degree().begin(), p.degree().end())},
              {"box", box_to_json(p.box())},
              {"basis", "bernstein"},
              {"coeffs", std::vector<double>(p.coeffs().begin(), p.coeffs().end())}};
}

json labeling_to_json(const LabelingState& st) {
  json nodes = json::array();
  for (const TreeNode& n : st.tree.nodes()) {
    if (!n.is_leaf()) {
      nodes.push_back({{"first_child", n.first_child}});
      continue;
    }
    nodes.push_back({{"kind", to_string(n.kind)},
                     {"neg", st.store.label(LabelStore::slot(n.leaf, Polarity::Neg))},
                     {"pos", st.store.label(LabelStore::slot(n.leaf, Polarity::Pos))}});
  }
  return json{{"polynomial", poly_to_json(st.phi)},
              {"max_depth", st.tree.max_depth()},
              {"eps", st.tol.eps},
              {"certified", st.tree.certified()},
              {"budget_exhausted", st.tree.budget_exhausted},
              {"next_label", st.store.next_label()},
              {"nodes", std::move(nodes)}};
}

LabelingState labeling_from_json(const json& j) {
  if (!j.is_object()) throw InputError("tree dump must be a JSON object");
  if (!j.contains("polynomial")) throw InputError("missing field 'polynomial'");
  BernsteinPoly phi = poly_from_json(j.at("polynomial"));
  const int max_depth = get<int>(j, "max_depth");
  const Tolerance tol{get<double>(j, "eps")};
  const auto next_label = get<std::uint32_t>(j, "next_label");
  if (!j.contains("nodes") || !j.at("nodes").is_array() || j.at("nodes").empty()) {
    throw InputError("'nodes' must be a nonempty array");
  }
  const json& jn = j.at("nodes");
  const std::size_t fanout = std::size_t{1} << phi.dim();

  std::vector<TreeNode> nodes(jn.size());
  std::vector<bool> placed(jn.size(), false);
  nodes[0].box = phi.box();
  placed[0] = true;
  std::vector<std::uint32_t> slot_labels;
  for (std::size_t i = 0; i < jn.size(); ++i) {
    if (!placed[i]) throw InputError("tree dump: unreachable node");
    TreeNode& n = nodes[i];
    const json& e = jn[i];
    if (e.contains("first_child")) {
      const auto first = get<std::int64_t>(e, "first_child");
      if (first <= static_cast<std::int64_t>(i) ||
          static_cast<std::size_t>(first) + fanout > nodes.size()) {
        throw InputError("tree dump: child index out of range");
      }
      n.first_child = static_cast<std::int32_t>(first);
      for (unsigned code = 0; code < fanout; ++code) {
        TreeNode& c = nodes[first + code];
        if (placed[first + code]) throw InputError("tree dump: node has two parents");
        c.box = child_box(n.box, code);
        c.depth = static_cast<std::uint8_t>(n.depth + 1);
        placed[first + code] = true;
      }
    } else {
      try {
        n.kind = leaf_kind_from_string(get<std::string>(e, "kind"));
      } catch (const std::invalid_argument& ex) {
        throw InputError(ex.what());
      }
      slot_labels.push_back(get<std::uint32_t>(e, "neg"));
      slot_labels.push_back(get<std::uint32_t>(e, "pos"));
    }
  }
  try {
    SubdivTree tree(phi.box(), max_depth, std::move(nodes));
    tree.budget_exhausted = get_or<bool>(j, "budget_exhausted", false);
    LabelStore store = LabelStore::from_labels(slot_labels, next_label);
    return LabelingState{std::move(phi), tol, std::move(tree), std::move(store)};
  } catch (const std::invalid_argument& ex) {
    throw InputError(std::string("tree dump: ") + ex.what());
  }
}

EnsembleConfig ensemble_from_json(const json& j) {
  if (!j.is_object()) throw InputError("ensemble config must be a JSON object");
  EnsembleConfig c;
  c.dim = get_or(j, "dim", c.dim);
  c.count = get_or(j, "count", c.count);
  c.omega = get_or(j, "omega", c.omega);
  const std::string norm = get_or<std::string>(j, "legendre", "orthonormal");
  if (norm == "orthonormal") {
    c.norm = LegendreNorm::Orthonormal;
  } else if (norm == "classical") {
    c.norm = LegendreNorm::Classical;
  } else {
    throw InputError("'legendre' must be \"orthonormal\" or \"classical\"");
  }
  c.depth_min = get_or(j, "depth_min", c.depth_min);
  c.depth_max = get_or(j, "depth_max", c.depth_max);
  c.seed = get_or(j, "seed", c.seed);
  c.samples = get_or(j, "samples", c.samples);
  c.witnesses_per_label = get_or(j, "witnesses_per_label", c.witnesses_per_label);
  c.reference_cap = get_or(j, "reference_cap", c.reference_cap);
  c.reference_budget = get_or(j, "reference_budget", c.reference_budget);
  c.tol_scale = get_or(j, "tol_scale", c.tol_scale);
  c.gap_res = get_or(j, "gap_res", c.gap_res);
  c.gap_depths = get_or(j, "gap_depths", c.gap_depths);
  c.threads = get_or(j, "threads", c.threads);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return c;
}

json ensemble_to_json(const EnsembleConfig& c) {
  return json{{"dim", c.dim},
              {"count", c.count},
              {"omega", c.omega},
              {"legendre", c.norm == LegendreNorm::Orthonormal ? "orthonormal" : "classical"},
              {"depth_min", c.depth_min},
              {"depth_max", c.depth_max},
              {"seed", c.seed},
              {"samples", c.samples},
              {"witnesses_per_label", c.witnesses_per_label},
              {"reference_cap", c.reference_cap},
              {"reference_budget", c.reference_budget},
              {"tol_scale", c.tol_scale},
              {"gap_res", c.gap_res},
              {"gap_depths", c.gap_depths},
              {"threads", c.threads}};
}

}  // namespace ccl
