#include "ccl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "ccl/power_poly.hpp"

namespace ccl {

namespace {

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    stream};
  return std::mt19937_64(seq);
}

// Portable uniform on [-1,1]: 53 random bits mapped affinely.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::int64_t sign_component(std::span<const double> x, const BernsteinPoly& phi) {
  return evaluate(phi, x) < 0 ? 0 : 1;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (dim < 1 || dim > 4) throw std::invalid_argument("ensemble: dim must be in 1..4");
  if (count < 1) throw std::invalid_argument("ensemble: count must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("ensemble: omega must be > 0");
  if (depth_min < 0 || depth_max < depth_min) {
    throw std::invalid_argument("ensemble: bad depth range");
  }
  if (samples < 0 || witnesses_per_label < 0) {
    throw std::invalid_argument("ensemble: negative sample count");
  }
  if (reference_cap < depth_max) {
    throw std::invalid_argument("ensemble: reference cap below depth range");
  }
  if (gap_res < 2) throw std::invalid_argument("ensemble: gap_res must be >= 2");
}

std::vector<double> legendre_draw(const EnsembleConfig& cfg, std::uint64_t index) {
  std::mt19937_64 rng = instance_rng(cfg.seed, index, 0);
  std::vector<double> c(std::size_t{1} << (2 * cfg.dim));
  for (double& v : c) v = uniform_pm1(rng);
  return c;
}

BernsteinPoly random_poly(const EnsembleConfig& cfg, std::uint64_t index) {
  std::vector<double> c = legendre_draw(cfg, index);
  if (cfg.norm == LegendreNorm::Orthonormal) {
    for (std::size_t m = 0; m < c.size(); ++m) {
      std::size_t rest = m;
      double f = 1.0;
      for (int k = 0; k < cfg.dim; ++k) {
        f *= std::sqrt((2.0 * static_cast<double>(rest % 4) + 1.0) / 2.0);
        rest /= 4;
      }
      c[m] *= f;
    }
  }
  return from_legendre_tensor(cfg.dim, c, cfg.omega);
}

double OutcomeTally::rho_eq() const { return pct(certified, total()); }
double OutcomeTally::rho_ok() const { return pct(uncertain, total()); }
double OutcomeTally::rho_glued() const { return pct(glued, total()); }

const OutcomeTally& SweepResult::tally(int max_depth) const {
  for (const auto& t : tallies) {
    if (t.max_depth == max_depth) return t;
  }
  throw std::out_of_range("sweep: depth not in range");
}

std::vector<Point> label_witnesses(LabelingState& st, int per_label) {
  std::vector<Point> out;
  if (per_label <= 0) return out;
  const int d = st.tree.dim();
  const double guard = guard_band(st.tol);
  std::map<std::uint32_t, int> seen;
  for (const std::int32_t n : st.tree.leaves()) {
    const HyperRect& b = st.tree.node(n).box;
    for (int probe = -1; probe < (1 << d); ++probe) {
      Point x(d);
      for (int k = 0; k < d; ++k) {
        const double t = probe < 0 ? 0.5 : ((probe >> k) & 1 ? 0.75 : 0.25);
        x[k] = b.lo(k) + t * b.width(k);
      }
      if (std::abs(evaluate(st.phi, x)) <= guard) continue;
      int& c = seen[label_of(st, x)];
      if (c < per_label) {
        ++c;
        out.push_back(std::move(x));
      }
    }
  }
  return out;
}

SweepResult sweep(const EnsembleConfig& cfg,
                  const std::function<void(std::size_t)>& progress) {
  cfg.validate();
  const int depths = cfg.depth_max - cfg.depth_min + 1;
  const auto n = static_cast<std::size_t>(cfg.count);
  std::vector<std::vector<SweepRow>> per_instance(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto wants_gap = [&](int depth) {
    return cfg.gap_depths.empty() ||
           std::find(cfg.gap_depths.begin(), cfg.gap_depths.end(), depth) != cfg.gap_depths.end();
  };

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    try {
      const BernsteinPoly p = random_poly(cfg, i);
      const Tolerance tol = Tolerance::from_root(p, cfg.tol_scale);
      ReferenceRun ref = reference_run(p, tol, cfg.reference_cap, cfg.reference_budget);
      std::vector<SweepRow>& rows = per_instance[i];
      rows.resize(depths);
      for (int j = 0; j < depths; ++j) {
        rows[j].seed = cfg.seed;
        rows[j].index = i;
        rows[j].max_depth = cfg.depth_min + j;
      }
      if (ref.certified) {
        const ReferenceLabeler truth = labeling_reference(ref.state);
        std::mt19937_64 rng = instance_rng(cfg.seed, i, 1);
        std::vector<Point> points = sample_points(p.box(), cfg.samples, rng());
        const std::vector<Point> extra = label_witnesses(ref.state, cfg.witnesses_per_label);
        points.insert(points.end(), extra.begin(), extra.end());
        for (SweepRow& row : rows) {
          LabelingState st = build_labeling(p, BuildOptions{row.max_depth, 0}, tol);
          row.depth_used = st.tree.depth_used();
          Classification c;
          try {
            c = classify_outcome(st, truth, points);
          } catch (const BrokenComponentError& e) {
            std::ostringstream msg;
            msg << e.what() << " (seed " << cfg.seed << ", index " << i << ", depth "
                << row.max_depth << ")";
            throw BrokenComponentError(msg.str());
          }
          row.outcome = c.outcome;
          if (c.outcome == Outcome::Glued && wants_gap(row.max_depth)) {
            row.gap = measure_gap(p, tol, truth, c.comparison, row.max_depth, cfg.gap_res);
          }
        }
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
    const std::size_t k = ++done;
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(k);
    }
  });

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  result.config = cfg;
  result.tallies.resize(depths);
  std::vector<std::vector<GapReport>> gap_reports(depths);
  for (int j = 0; j < depths; ++j) result.tallies[j].max_depth = cfg.depth_min + j;
  for (auto& rows : per_instance) {
    for (int j = 0; j < depths; ++j) {
      const SweepRow& row = rows[j];
      OutcomeTally& t = result.tallies[j];
      if (!row.outcome) {
        ++t.excluded;
      } else if (*row.outcome == Outcome::CertifiedExact) {
        ++t.certified;
      } else if (*row.outcome == Outcome::UncertainExact) {
        ++t.uncertain;
      } else {
        ++t.glued;
      }
      if (row.gap) gap_reports[j].push_back(*row.gap);
      result.rows.push_back(row);
    }
  }
  for (int j = 0; j < depths; ++j) {
    if (!gap_reports[j].empty()) {
      result.gaps[cfg.depth_min + j] = gap_statistics(gap_reports[j]);
    }
  }
  return result;
}

void write_csv(std::ostream& os, const SweepResult& result) {
  os << "seed,index,max_depth,outcome,depth_used,gap_e,gap_g\n";
  std::ostringstream line;
  line.imbue(std::locale::classic());
  for (const SweepRow& r : result.rows) {
    line.str("");
    line << r.seed << ',' << r.index << ',' << r.max_depth << ','
         << (r.outcome ? to_string(*r.outcome) : std::string_view("excluded")) << ','
         << r.depth_used << ',';
    if (r.gap) {
      line << std::setprecision(9) << r.gap->e << ',' << r.gap->g;
    } else {
      line << ',';
    }
    os << line.str() << '\n';
  }
}

void write_summary(std::ostream& os, const SweepResult& result) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "dim=" << result.config.dim << " count=" << result.config.count
      << " omega=" << result.config.omega << " seed=" << result.config.seed << '\n';
  out << "depth  rho_eq%  rho_ok%  rho_x%  excluded\n";
  out << std::fixed;
  for (const OutcomeTally& t : result.tallies) {
    out << std::setw(5) << t.max_depth << std::setprecision(2) << std::setw(9) << t.rho_eq()
        << std::setw(9) << t.rho_ok() << std::setw(8) << t.rho_glued() << std::setw(10)
        << t.excluded << '\n';
  }
  if (!result.gaps.empty()) {
    out << "depth  glued  g_min  g_q1  g_median  g_q3  g_max\n";
    for (const auto& [depth, s] : result.gaps) {
      out << std::setw(5) << depth << std::setw(7) << s.count << std::setprecision(3) << "  "
          << s.min << "  " << s.q1 << "  " << s.median << "  " << s.q3 << "  " << s.max << '\n';
    }
  }
  os << out.str();
}

std::vector<RegressionCase> regression_corpus() {
  const PowerPoly x2 = PowerPoly::variable(2, 0), y2 = PowerPoly::variable(2, 1);
  const PowerPoly x3 = PowerPoly::variable(3, 0), y3 = PowerPoly::variable(3, 1),
                  z3 = PowerPoly::variable(3, 2);
  const PowerPoly rr = x2 * x2 + y2 * y2;
  std::vector<RegressionCase> corpus;

  {
    RegressionCase c;
    c.name = "deltoid";
    c.formula = "(x^2+y^2)^2 + 18(x^2+y^2) - 8(x^3-3xy^2) - 27";
    c.phi = (rr * rr + 18.0 * rr - 8.0 * (pow(x2, 3) - 3.0 * x2 * y2 * y2) - 27.0)
                .to_bernstein(HyperRect({-3.7, -3.9}, {4.1, 3.8}));
    c.max_depth = 8;
    c.expected = Outcome::UncertainExact;
    c.expected_neg_labels = 1;
    c.expected_pos_labels = 1;
    c.reference = [phi = c.phi](std::span<const double> x) -> std::optional<std::int64_t> {
      return sign_component(x, phi);
    };
    c.note = "cusps at (3,0) and (-1.5,+-2.598); interior negative";
    corpus.push_back(std::move(c));
  }
  {
    RegressionCase c;
    c.name = "trifolium";
    c.formula = "(x^2+y^2)^2 - x^3 + 3xy^2";
    c.phi = (rr * rr - pow(x2, 3) + 3.0 * x2 * y2 * y2)
                .to_bernstein(HyperRect({-1.5, -1.5}, {1.5, 1.5}));
    c.max_depth = 6;
    c.expected = Outcome::Glued;
    c.expected_neg_labels = 1;
    c.expected_pos_labels = 1;
    // r^3 (r - cos 3t): the three petals are where phi < 0.
    c.reference = [phi = c.phi](std::span<const double> x) -> std::optional<std::int64_t> {
      if (evaluate(phi, x) > 0) return 0;
      const double t = std::atan2(x[1], x[0]);
      const double sector = std::round(t / (2.0 * std::numbers::pi / 3.0));
      return 1 + (static_cast<std::int64_t>(sector) + 3) % 3;
    };
    c.note = "three petals meeting at the origin, each one negative component";
    corpus.push_back(std::move(c));
  }
  {
    RegressionCase c;
    constexpr double r = 0.6;
    c.name = "squared_circle";
    c.formula = "(x^2+y^2-r^2)^2, r=0.6";
    c.phi = pow(x2 * x2 + y2 * y2 - r * r, 2).to_bernstein(HyperRect::cube(2, -1.0, 1.0));
    c.max_depth = 6;
    c.expected = Outcome::Glued;
    c.expected_neg_labels = 0;
    c.expected_pos_labels = 1;
    c.reference = [](std::span<const double> x) -> std::optional<std::int64_t> {
      return x[0] * x[0] + x[1] * x[1] < r * r ? 0 : 1;
    };
    c.note = "nonnegative; inner disk and outer region are distinct positive components";
    corpus.push_back(std::move(c));
  }
  {
    RegressionCase c;
    c.name = "oloid";
    c.formula = "x^2 + y^2 + z^3";
    c.phi = (x3 * x3 + y3 * y3 + pow(z3, 3))
                .to_bernstein(HyperRect({-1.0, -0.9, -1.05}, {1.2, 1.2, 0.95}));
    c.max_depth = 6;
    c.expected = Outcome::UncertainExact;
    c.expected_neg_labels = 1;
    c.expected_pos_labels = 1;
    c.reference = [phi = c.phi](std::span<const double> x) -> std::optional<std::int64_t> {
      return sign_component(x, phi);
    };
    c.note = "single cusp at the origin";
    corpus.push_back(std::move(c));
  }
  {
    RegressionCase c;
    c.name = "junction";
    c.formula = "(x+y+z-1)(-x-y+z-1)(x-y-z-1)(-x+y-z-1) - 2(x^2+y^2+z^2-3)^2";
    c.phi = ((x3 + y3 + z3 - 1.0) * (-x3 - y3 + z3 - 1.0) * (x3 - y3 - z3 - 1.0) *
                 (-x3 + y3 - z3 - 1.0) -
             2.0 * pow(x3 * x3 + y3 * y3 + z3 * z3 - 3.0, 2))
                .to_bernstein(HyperRect({0.45, 0.4, -1.55}, {1.6, 1.55, -0.42}));
    c.max_depth = 6;
    c.expected = Outcome::Glued;
    c.note = "window around the junction at (1,1,-1); reference from the grid oracle";
    corpus.push_back(std::move(c));
  }
  {
    RegressionCase c;
    c.name = "line_singularity";
    c.formula = "xyz - x^2 - y^2";
    c.phi = (x3 * y3 * z3 - x3 * x3 - y3 * y3)
                .to_bernstein(HyperRect({-1.0, -1.05, -4.0}, {1.1, 1.0, 4.2}));
    c.max_depth = 6;
    c.expected = Outcome::Glued;
    c.expected_neg_labels = 1;
    c.expected_pos_labels = 1;
    // Positive only for |z| > 2, in the two wedges where xy has the sign of z.
    c.reference = [phi = c.phi](std::span<const double> x) -> std::optional<std::int64_t> {
      if (evaluate(phi, x) < 0) return 0;
      return 1 + (x[2] > 0 ? 0 : 2) + (x[0] > 0 ? 0 : 1);
    };
    c.note = "singular along the z-axis; four positive wedges for |z| > 2";
    corpus.push_back(std::move(c));
  }
  return corpus;
}

bool RegressionResult::matches(const RegressionCase& c) const {
  if (outcome != c.expected) return false;
  if (c.expected_neg_labels && neg_labels != *c.expected_neg_labels) return false;
  if (c.expected_pos_labels && pos_labels != *c.expected_pos_labels) return false;
  return true;
}

RegressionResult run_regression(const RegressionCase& c, int samples, std::uint64_t seed) {
  LabelingState st = build_labeling(c.phi, c.max_depth);
  std::vector<Point> points = sample_points(c.phi.box(), samples, seed);
  const std::vector<Point> extra = leaf_witness_points(st.tree);
  points.insert(points.end(), extra.begin(), extra.end());

  RegressionResult r;
  r.certified = st.tree.certified();
  r.uncertain_leaves = st.tree.leaf_count(LeafKind::NotSimplyConnected);
  Classification cl;
  if (c.reference) {
    cl = classify_outcome(st, c.reference, points);
  } else {
    const GridLabeling grid = oracle_labels(c.phi, c.phi.dim() == 2 ? 1024 : 128, st.tol);
    cl = classify_outcome(st, grid_reference(grid, c.phi), points);
  }
  r.outcome = cl.outcome;
  r.comparison = std::move(cl.comparison);

  const double guard = guard_band(st.tol);
  std::set<std::uint32_t> neg, pos;
  for (const Point& x : points) {
    const double v = evaluate(st.phi, x);
    if (std::abs(v) <= guard) continue;
    (v < 0 ? neg : pos).insert(label_of(st, x));
  }
  r.neg_labels = static_cast<int>(neg.size());
  r.pos_labels = static_cast<int>(pos.size());
  return r;
}

}  // namespace ccl
