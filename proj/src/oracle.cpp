#include "ccl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace ccl {

namespace {

// Bernstein basis values b_i^n(t) computed directly from the binomial formula,
// deliberately not sharing code with de Casteljau evaluation.
std::vector<double> basis_row(int n, double t) {
  std::vector<double> row(n + 1);
  double binom = 1.0;
  for (int i = 0; i <= n; ++i) {
    row[i] = binom * std::pow(t, i) * std::pow(1.0 - t, n - i);
    binom = binom * (n - i) / (i + 1);
  }
  return row;
}

// Values of p at all nodes of a res^d lattice spanning the box (boundary
// included), axis 0 fastest, by
// contracting one axis at a time with the sampled basis matrix.
std::vector<double> grid_values(const BernsteinPoly& p, int res) {
  const int d = p.dim();
  std::vector<std::size_t> ext(d);
  for (int k = 0; k < d; ++k) ext[k] = p.degree(k) + 1;
  std::vector<double> cur(p.coeffs().begin(), p.coeffs().end());

  for (int k = 0; k < d; ++k) {
    const int n = p.degree(k);
    std::vector<double> mat(static_cast<std::size_t>(res) * (n + 1));
    for (int r = 0; r < res; ++r) {
      const std::vector<double> row = basis_row(n, static_cast<double>(r) / (res - 1));
      std::copy(row.begin(), row.end(), mat.begin() + static_cast<std::size_t>(r) * (n + 1));
    }
    std::size_t inner = 1, outer = 1;
    for (int j = 0; j < k; ++j) inner *= ext[j];
    for (int j = k + 1; j < d; ++j) outer *= ext[j];
    const std::size_t m = ext[k];
    std::vector<double> next(inner * res * outer, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      for (int r = 0; r < res; ++r) {
        double* dst = next.data() + (o * res + r) * inner;
        for (std::size_t i = 0; i < m; ++i) {
          const double w = mat[static_cast<std::size_t>(r) * m + i];
          const double* src = cur.data() + (o * m + i) * inner;
          for (std::size_t a = 0; a < inner; ++a) dst[a] += w * src[a];
        }
      }
    }
    cur = std::move(next);
    ext[k] = res;
  }
  return cur;
}

double point_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

double set_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& x : a) {
    for (const Point& y : b) best = std::min(best, point_distance(x, y));
  }
  return best;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double f = pos - static_cast<double>(i);
  return sorted[i] + f * (sorted[i + 1] - sorted[i]);
}

}  // namespace

int GridLabeling::component_count(int s) const {
  return static_cast<int>(std::count(component_sign.begin(), component_sign.end(), s));
}

std::size_t GridLabeling::cell_index(std::span<const double> x) const {
  std::size_t index = 0, stride = 1;
  for (int k = 0; k < dim(); ++k) {
    const double t = (x[k] - box.lo(k)) / box.width(k);
    const int c = std::clamp(static_cast<int>(std::lround(t * (res - 1))), 0, res - 1);
    index += static_cast<std::size_t>(c) * stride;
    stride *= res;
  }
  return index;
}

Point GridLabeling::cell_center(std::size_t index) const {
  Point x(dim());
  for (int k = 0; k < dim(); ++k) {
    const auto c = index % res;
    index /= res;
    x[k] = box.lo(k) + static_cast<double>(c) / (res - 1) * box.width(k);
  }
  return x;
}

double GridLabeling::cell_diagonal() const { return box.diagonal() / (res - 1); }

double guard_band(const Tolerance& tol) { return 10.0 * tol.eps; }

GridLabeling oracle_labels(const BernsteinPoly& p, int res, const Tolerance& tol) {
  if (res < 2) throw std::invalid_argument("oracle_labels: resolution must be at least 2");
  if (p.dim() < 1) throw std::invalid_argument("oracle_labels: dimension must be positive");
  const int d = p.dim();
  GridLabeling g;
  g.box = p.box();
  g.res = res;
  const std::vector<double> values = grid_values(p, res);
  const double guard = guard_band(tol);
  g.sign.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    g.sign[i] = std::abs(v) <= guard ? 0 : (v > 0 ? 1 : -1);
  }

  std::vector<std::size_t> strides(d);
  std::size_t s = 1;
  for (int k = 0; k < d; ++k) {
    strides[k] = s;
    s *= res;
  }

  g.component.assign(values.size(), -1);
  std::vector<std::size_t> queue;
  for (std::size_t seed = 0; seed < values.size(); ++seed) {
    if (g.sign[seed] == 0 || g.component[seed] >= 0) continue;
    const auto id = static_cast<std::int32_t>(g.component_sign.size());
    const std::int8_t sg = g.sign[seed];
    g.component_sign.push_back(sg);
    g.component[seed] = id;
    queue.assign(1, seed);
    while (!queue.empty()) {
      const std::size_t c = queue.back();
      queue.pop_back();
      for (int k = 0; k < d; ++k) {
        const std::size_t coord = (c / strides[k]) % res;
        if (coord > 0) {
          const std::size_t nb = c - strides[k];
          if (g.sign[nb] == sg && g.component[nb] < 0) {
            g.component[nb] = id;
            queue.push_back(nb);
          }
        }
        if (coord + 1 < static_cast<std::size_t>(res)) {
          const std::size_t nb = c + strides[k];
          if (g.sign[nb] == sg && g.component[nb] < 0) {
            g.component[nb] = id;
            queue.push_back(nb);
          }
        }
      }
    }
  }
  return g;
}

ReferenceLabeler grid_reference(const GridLabeling& grid, const BernsteinPoly& p) {
  return [&grid, &p](std::span<const double> x) -> std::optional<std::int64_t> {
    const std::size_t c = grid.cell_index(x);
    if (grid.sign[c] == 0) return std::nullopt;
    // Cells touching the other sign are unreliable: thin features such as
    // cusp tips break up at grid resolution.
    std::size_t stride = 1;
    for (int k = 0; k < grid.dim(); ++k) {
      const std::size_t coord = (c / stride) % grid.res;
      if (coord > 0 && grid.sign[c - stride] != grid.sign[c]) return std::nullopt;
      if (coord + 1 < static_cast<std::size_t>(grid.res) && grid.sign[c + stride] != grid.sign[c]) {
        return std::nullopt;
      }
      stride *= grid.res;
    }
    const double v = evaluate(p, x);
    if ((v > 0) != (grid.sign[c] > 0) || v == 0.0) return std::nullopt;
    return grid.component[c];
  };
}

ReferenceLabeler labeling_reference(LabelingState& st) {
  return [&st](std::span<const double> x) -> std::optional<std::int64_t> {
    if (evaluate(st.phi, x) == 0.0) return std::nullopt;
    return label_of(st, x);
  };
}

ReferenceRun reference_run(const BernsteinPoly& p, const Tolerance& tol, int hard_cap,
                           std::size_t node_budget) {
  LabelingState st = build_labeling(p, BuildOptions{hard_cap, node_budget}, tol);
  ReferenceRun run{std::move(st)};
  run.certified = run.state.tree.certified();
  run.depth_used = run.state.tree.depth_used();
  run.cap_reached = !run.certified;
  return run;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::CertifiedExact: return "certified_exact";
    case Outcome::UncertainExact: return "uncertain_exact";
    case Outcome::Glued: return "glued";
  }
  return "?";
}

PartitionComparison compare_partitions(LabelingState& st, const ReferenceLabeler& ref,
                                       std::span<const Point> points) {
  PartitionComparison cmp;
  const double guard = guard_band(st.tol);
  std::map<std::uint32_t, std::set<std::int64_t>> refs_of_label;
  std::map<std::int64_t, std::set<std::uint32_t>> labels_of_ref;
  for (const Point& x : points) {
    const double v = evaluate(st.phi, x);
    if (std::abs(v) <= guard) continue;
    const auto r = ref(x);
    if (!r) continue;
    const std::uint32_t a = label_of(st, x);
    refs_of_label[a].insert(*r);
    labels_of_ref[*r].insert(a);
    cmp.points_by_reference[*r].push_back(x);
    ++cmp.points_used;
  }
  for (const auto& [r, labels] : labels_of_ref) {
    if (labels.size() > 1) cmp.finer = true;
  }
  for (const auto& [a, refs] : refs_of_label) {
    if (refs.size() > 1) {
      cmp.coarser = true;
      cmp.glued_groups.emplace_back(refs.begin(), refs.end());
    }
  }
  return cmp;
}

std::vector<Point> sample_points(const HyperRect& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> dist;
  for (int k = 0; k < box.dim(); ++k) dist.emplace_back(box.lo(k), box.hi(k));
  std::vector<Point> out(count, Point(box.dim()));
  for (Point& x : out) {
    for (int k = 0; k < box.dim(); ++k) x[k] = dist[k](rng);
  }
  return out;
}

std::vector<Point> leaf_witness_points(const SubdivTree& tree) {
  const int d = tree.dim();
  std::vector<Point> out;
  out.reserve(tree.leaf_count() * ((std::size_t{1} << d) + 1));
  for (const std::int32_t n : tree.leaves()) {
    const HyperRect& b = tree.node(n).box;
    out.push_back(b.center());
    for (unsigned code = 0; code < (1u << d); ++code) {
      Point x(d);
      for (int k = 0; k < d; ++k) {
        x[k] = b.lo(k) + ((code >> k) & 1u ? 0.75 : 0.25) * b.width(k);
      }
      out.push_back(std::move(x));
    }
  }
  return out;
}

Classification classify_outcome(LabelingState& st, const ReferenceLabeler& ref,
                                std::span<const Point> points) {
  Classification c;
  c.comparison = compare_partitions(st, ref, points);
  if (c.comparison.finer) {
    throw BrokenComponentError("labeling splits a connected component");
  }
  if (st.tree.certified()) {
    if (c.comparison.coarser) {
      throw CertificationError("certified labeling glues distinct components");
    }
    c.outcome = Outcome::CertifiedExact;
  } else {
    c.outcome = c.comparison.coarser ? Outcome::Glued : Outcome::UncertainExact;
  }
  return c;
}

Classification classify_against_oracle(LabelingState& st, const OracleOptions& options) {
  std::vector<Point> points = sample_points(st.tree.domain(), options.samples, options.seed);
  const std::vector<Point> witnesses = leaf_witness_points(st.tree);
  points.insert(points.end(), witnesses.begin(), witnesses.end());
  for (int res = options.res;; res *= 2) {
    const GridLabeling grid = oracle_labels(st.phi, res, st.tol);
    const ReferenceLabeler ref = grid_reference(grid, st.phi);
    const bool last = res * 2 > options.max_res;
    if (!last) {
      const PartitionComparison cmp = compare_partitions(st, ref, points);
      if (!cmp.equal()) continue;
    }
    Classification c = classify_outcome(st, ref, points);
    c.oracle_res = res;
    return c;
  }
}

double glue_cost(std::span<const std::vector<Point>> components) {
  const std::size_t m = components.size();
  for (const auto& c : components) {
    if (c.empty()) throw std::invalid_argument("glue_cost: empty component sample");
  }
  if (m <= 1) return 0.0;
  std::vector<std::vector<double>> dist(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      dist[i][j] = dist[j][i] = set_distance(components[i], components[j]);
    }
  }
  // Prim on the complete graph.
  std::vector<bool> in(m, false);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  double total = 0.0;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t u = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!in[i] && (u == m || best[i] < best[u])) u = i;
    }
    in[u] = true;
    total += best[u];
    for (std::size_t i = 0; i < m; ++i) {
      if (!in[i]) best[i] = std::min(best[i], dist[u][i]);
    }
  }
  return total;
}

double smallest_cell_diagonal(const HyperRect& domain, int max_depth) {
  return domain.diagonal() / std::ldexp(1.0, max_depth);
}

GapReport measure_gap(const BernsteinPoly& p, const Tolerance& tol, const ReferenceLabeler& ref,
                      const PartitionComparison& cmp, int max_depth, int res) {
  GapReport report;
  report.smallest_cell_diagonal = smallest_cell_diagonal(p.box(), max_depth);
  if (cmp.glued_groups.empty()) return report;

  std::set<std::int64_t> wanted;
  for (const auto& group : cmp.glued_groups) wanted.insert(group.begin(), group.end());

  // Reference ids of all lattice nodes, restricted to glued components.
  GridLabeling grid;
  grid.box = p.box();
  grid.res = res;
  const int d = p.dim();
  std::size_t cells = 1;
  for (int k = 0; k < d; ++k) cells *= res;
  const std::vector<double> values = grid_values(p, res);
  const double guard = guard_band(tol);
  std::vector<std::int64_t> id(cells, -1);
  for (std::size_t c = 0; c < cells; ++c) {
    if (std::abs(values[c]) <= guard) continue;
    const Point x = grid.cell_center(c);
    const auto r = ref(x);
    if (r && wanted.count(*r)) id[c] = *r;
  }

  std::map<std::int64_t, std::vector<Point>> samples;
  for (const auto& [r, pts] : cmp.points_by_reference) {
    if (wanted.count(r)) samples[r] = pts;
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (id[c] < 0) continue;
    bool boundary = false;
    std::size_t stride = 1;
    for (int k = 0; k < d && !boundary; ++k) {
      const std::size_t coord = (c / stride) % res;
      if (coord > 0 && id[c - stride] != id[c]) boundary = true;
      if (coord + 1 < static_cast<std::size_t>(res) && id[c + stride] != id[c]) boundary = true;
      stride *= res;
    }
    if (boundary) samples[id[c]].push_back(grid.cell_center(c));
  }

  for (const auto& group : cmp.glued_groups) {
    std::vector<std::vector<Point>> parts;
    for (const std::int64_t r : group) parts.push_back(samples[r]);
    report.e = std::max(report.e, glue_cost(parts));
  }
  report.sampling_bias = grid.cell_diagonal();
  report.g = report.e / report.smallest_cell_diagonal;
  return report;
}

GapSummary gap_statistics(std::span<const GapReport> reports) {
  GapSummary s;
  s.count = reports.size();
  if (reports.empty()) return s;
  std::vector<double> g;
  g.reserve(reports.size());
  for (const GapReport& r : reports) g.push_back(r.g);
  std::sort(g.begin(), g.end());
  s.min = g.front();
  s.max = g.back();
  s.q1 = quantile(g, 0.25);
  s.median = quantile(g, 0.5);
  s.q3 = quantile(g, 0.75);
  return s;
}

}  // namespace ccl
