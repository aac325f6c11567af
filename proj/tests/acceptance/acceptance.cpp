// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ccl/experiments.hpp"

using namespace ccl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Broken components seen anywhere; criterion 2 reports the total.
int g_broken = 0;
std::vector<std::string> g_broken_where;

void record_broken(const std::string& where) {
  ++g_broken;
  g_broken_where.push_back(where);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Verdict certified_exactness() {
  EnsembleConfig cfg;
  cfg.seed = 2024;
  const int want = 2000;
  int certified = 0, mismatches = 0, skipped = 0;
  OracleOptions opt{256, 2048, 1000, 0};
  for (std::uint64_t i = 0; certified < want; ++i) {
    LabelingState st = build_labeling(random_poly(cfg, i), 8);
    if (!st.tree.certified()) {
      ++skipped;
      continue;
    }
    ++certified;
    opt.seed = i;
    try {
      const Classification c = classify_against_oracle(st, opt);
      if (c.outcome != Outcome::CertifiedExact || !c.comparison.equal()) ++mismatches;
    } catch (const CertificationError&) {
      ++mismatches;
    } catch (const BrokenComponentError&) {
      ++mismatches;
      record_broken("certified instance " + std::to_string(i));
    }
  }
  std::ostringstream d;
  d << certified << " certified instances, " << mismatches << " mismatches (" << skipped
    << " uncertified skipped)";
  return {mismatches == 0, d.str()};
}

std::optional<SweepResult> run_sweep(const EnsembleConfig& cfg, const std::string& name,
                                     std::string& error) {
  try {
    return sweep(cfg);
  } catch (const BrokenComponentError& e) {
    record_broken(name + ": " + e.what());
    error = e.what();
  } catch (const std::exception& e) {
    error = e.what();
  }
  return std::nullopt;
}

EnsembleConfig sweep_2d() {
  EnsembleConfig cfg;
  cfg.dim = 2;
  cfg.count = 10000;
  cfg.depth_min = 1;
  cfg.depth_max = 8;
  cfg.seed = 0;
  cfg.gap_depths = {6};
  cfg.gap_res = 1024;
  return cfg;
}

EnsembleConfig sweep_3d() {
  EnsembleConfig cfg;
  cfg.dim = 3;
  cfg.count = 1000;
  cfg.depth_min = 1;
  cfg.depth_max = 7;
  cfg.seed = 0;
  cfg.gap_depths = {7};
  cfg.gap_res = 64;
  return cfg;
}

Verdict rho_trend_2d(const std::optional<SweepResult>& r, const std::string& error) {
  if (!r) return {false, "sweep aborted: " + error};
  std::ostringstream d;
  bool monotone = true;
  double prev = -1.0;
  d << "rho_eq by depth:";
  for (const OutcomeTally& t : r->tallies) {
    d << ' ' << t.max_depth << '=' << fmt("%.2f%%", t.rho_eq());
    monotone = monotone && t.rho_eq() >= prev;
    prev = t.rho_eq();
  }
  const double r1 = r->tally(1).rho_eq(), r6 = r->tally(6).rho_eq();
  d << "; excluded " << r->tally(1).excluded << (monotone ? "; non-decreasing" : "; NOT monotone");
  return {r1 < 15.0 && r6 >= 95.0 && monotone, d.str()};
}

Verdict rho_trend_3d(const std::optional<SweepResult>& r, const std::string& error) {
  if (!r) return {false, "sweep aborted: " + error};
  const OutcomeTally& t = r->tally(7);
  std::ostringstream d;
  d << "rho_eq(7) = " << fmt("%.2f%%", t.rho_eq()) << " over " << t.total() << " instances ("
    << t.excluded << " excluded)";
  return {t.rho_eq() >= 82.0 && t.rho_eq() <= 97.0, d.str()};
}

Verdict glue_rarity(const std::optional<SweepResult>& r, const std::string& error) {
  if (!r) return {false, "sweep aborted: " + error};
  bool ok = true;
  std::ostringstream d;
  d << "glued/uncertain-exact:";
  for (const OutcomeTally& t : r->tallies) {
    if (t.max_depth < 4) continue;
    d << ' ' << t.max_depth << '=' << fmt("%.2f", t.rho_glued()) << '/' << fmt("%.2f", t.rho_ok());
    ok = ok && t.rho_glued() < t.rho_ok();
  }
  return {ok, d.str()};
}

Verdict gap_normalization(const std::optional<SweepResult>& r, const std::string& error) {
  if (!r) return {false, "sweep aborted: " + error};
  const auto it = r->gaps.find(6);
  if (it == r->gaps.end() || it->second.count == 0) return {false, "no glued instances at depth 6"};
  const GapSummary& s = it->second;
  std::ostringstream d;
  d << "n=" << s.count << " min=" << fmt("%.3f", s.min) << " q1=" << fmt("%.3f", s.q1)
    << " median=" << fmt("%.3f", s.median) << " q3=" << fmt("%.3f", s.q3)
    << " max=" << fmt("%.3f", s.max);
  return {s.median >= 0.05 && s.median <= 1.0 && std::isfinite(s.max), d.str()};
}

Verdict regression_corpus_check() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  for (const RegressionCase& c : regression_corpus()) {
    try {
      const RegressionResult r = run_regression(c);
      d << c.name << '=' << to_string(r.outcome) << '(' << r.neg_labels << ',' << r.pos_labels
        << ") ";
      ok = ok && r.matches(c);
    } catch (const BrokenComponentError& e) {
      record_broken(c.name + ": " + e.what());
      d << c.name << "=broken ";
      ok = false;
    }
  }
  d << fmt("in %.1fs", seconds_since(t0));
  return {ok, d.str()};
}

std::vector<Point> interval_samples(double a, double b) {
  std::vector<Point> out;
  for (int i = 0; i <= 1000; ++i) out.push_back({a + (b - a) * i / 1000.0});
  return out;
}

Verdict worked_examples() {
  const std::vector<std::vector<Point>> sets{interval_samples(0, 1), interval_samples(2, 3),
                                             interval_samples(5, 6)};
  const double cost = glue_cost(sets);
  const Interval r =
      range(BernsteinPoly({2}, HyperRect::cube(1, 0.0, 1.0), {1.0, -1.0, 1.0}));  // (2x-1)^2
  std::ostringstream d;
  d << "glue_cost=" << cost << " range=[" << r.lo << ',' << r.hi << ']';
  return {cost == 3.0 && r.lo == 0.0 && r.hi == 1.0, d.str()};
}

double p_leg(int j, double x) {
  switch (j) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 0.5 * (3.0 * x * x - 1.0);
    default: return 0.5 * (5.0 * x * x * x - 3.0 * x);
  }
}

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 invert(Mat4 a) {
  Mat4 inv{};
  for (int i = 0; i < 4; ++i) inv[i][i] = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double s = a[c][c];
    for (int k = 0; k < 4; ++k) {
      a[c][k] /= s;
      inv[c][k] /= s;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (int k = 0; k < 4; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// Legendre coefficients recovered from values on a 4^3 node lattice.
std::vector<double> legendre_from_values(const BernsteinPoly& p) {
  const std::array<double, 4> nodes{-0.9, -0.3, 0.4, 0.95};
  Mat4 v{};
  for (int a = 0; a < 4; ++a) {
    for (int j = 0; j < 4; ++j) v[a][j] = p_leg(j, nodes[a]);
  }
  const Mat4 w = invert(v);
  std::vector<double> f(64);
  for (int m = 0; m < 64; ++m) {
    f[m] = evaluate(p, Point{nodes[m % 4], nodes[(m / 4) % 4], nodes[m / 16]});
  }
  // Apply the inverse along each axis in turn.
  for (int axis = 0, stride = 1; axis < 3; ++axis, stride *= 4) {
    std::vector<double> g(64, 0.0);
    for (int m = 0; m < 64; ++m) {
      const int j = (m / stride) % 4;
      const int base = m - j * stride;
      for (int a = 0; a < 4; ++a) g[m] += w[j][a] * f[base + a * stride];
    }
    f = g;
  }
  return f;
}

Verdict numerical_kernels() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0), t01(0.05, 0.95);
  double worst_sub = 0.0, worst_der = 0.0, worst_leg = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(64);
    for (double& v : c) v = u(rng);
    const HyperRect box({-1.0, 0.0, 2.0}, {1.0, 0.5, 4.0});
    const BernsteinPoly p({3, 3, 3}, box, c);
    const double scale = std::max(p.max_coeff(), -p.min_coeff());

    const int axis = trial % 3;
    const double t = t01(rng);
    const auto [lo, hi] = subdivide(p, axis, t);
    const double cut = box.lo(axis) + t * box.width(axis);
    for (int k = 0; k < 20; ++k) {
      Point x(3);
      for (int a = 0; a < 3; ++a) x[a] = box.lo(a) + box.width(a) * 0.5 * (u(rng) + 1.0);
      const BernsteinPoly& half = x[axis] <= cut ? lo : hi;
      worst_sub = std::max(worst_sub, std::abs(evaluate(half, x) - evaluate(p, x)) / scale);

      const BernsteinPoly dp = derivative(p, axis);
      const double h = 1e-5 * box.width(axis);
      x[axis] = std::clamp(x[axis], box.lo(axis) + h, box.hi(axis) - h);
      Point xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      const double fd = (evaluate(p, xp) - evaluate(p, xm)) / (2.0 * h);
      const double dscale = std::max(dp.max_coeff(), -dp.min_coeff());
      worst_der = std::max(worst_der, std::abs(evaluate(dp, x) - fd) / dscale);
    }

    const BernsteinPoly leg = from_legendre_tensor(3, c, 1.0);
    const std::vector<double> back = legendre_from_values(leg);
    for (int m = 0; m < 64; ++m) worst_leg = std::max(worst_leg, std::abs(back[m] - c[m]));
  }
  std::ostringstream d;
  d << "subdivision " << fmt("%.1e", worst_sub) << ", derivative " << fmt("%.1e", worst_der)
    << ", legendre round trip " << fmt("%.1e", worst_leg);
  return {worst_sub <= 1e-12 && worst_der <= 1e-6 && worst_leg <= 1e-12, d.str()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Verdict performance() {
  EnsembleConfig cfg;
  cfg.seed = 7;
  std::vector<double> build_us, query_us;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  volatile std::uint32_t sink = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const BernsteinPoly p = random_poly(cfg, i);
    const auto t0 = Clock::now();
    LabelingState st = build_labeling(p, 6);
    build_us.push_back(seconds_since(t0) * 1e6);
    for (int k = 0; k < 200; ++k) {
      const Point x{u(rng), u(rng)};
      const auto q0 = Clock::now();
      try {
        sink = sink + label_of(st, x);
      } catch (const ZeroSetError&) {
      }
      query_us.push_back(seconds_since(q0) * 1e6);
    }
  }
  const double mb = median(build_us), mq = median(query_us);
  std::ostringstream d;
  d << "median build " << fmt("%.1f us", mb) << " (depth 6), median query " << fmt("%.3f us", mq);
  return {mb < 1000.0 && mq < 5.0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  bool all = true;
  auto report = [&](int n, const char* name, const Verdict& v, double secs) {
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << n << ' ' << name << ": " << v.detail
              << fmt(" [%.1fs]", secs) << std::endl;
  };
  auto timed = [&](int n, const char* name, const std::function<Verdict()>& f) {
    const auto t0 = Clock::now();
    const Verdict v = f();
    report(n, name, v, seconds_since(t0));
  };

  if (wanted(1)) timed(1, "certified exactness", certified_exactness);

  std::optional<SweepResult> s2, s3;
  std::string err2, err3;
  double t2 = 0.0, t3 = 0.0;
  if (wanted(2) || wanted(3) || wanted(5) || wanted(6)) {
    const auto t0 = Clock::now();
    s2 = run_sweep(sweep_2d(), "2D sweep", err2);
    t2 = seconds_since(t0);
  }
  if (wanted(2) || wanted(4)) {
    const auto t0 = Clock::now();
    s3 = run_sweep(sweep_3d(), "3D sweep", err3);
    t3 = seconds_since(t0);
  }
  Verdict v7;
  double t7 = 0.0;
  if (wanted(2) || wanted(7)) {
    const auto t0 = Clock::now();
    v7 = regression_corpus_check();
    t7 = seconds_since(t0);
  }

  if (wanted(2)) {
    std::ostringstream d;
    d << g_broken << " broken components";
    for (const auto& w : g_broken_where) d << "; " << w;
    report(2, "never broken", {g_broken == 0, d.str()}, t2 + t3 + t7);
  }
  if (wanted(3)) report(3, "2D certification trend", rho_trend_2d(s2, err2), t2);
  if (wanted(4)) report(4, "3D certification rate", rho_trend_3d(s3, err3), t3);
  if (wanted(5)) report(5, "glue rarity", glue_rarity(s2, err2), 0.0);
  if (wanted(6)) report(6, "gap normalization", gap_normalization(s2, err2), 0.0);
  if (wanted(7)) report(7, "regression corpus", v7, t7);
  if (wanted(8)) timed(8, "worked examples", worked_examples);
  if (wanted(9)) timed(9, "numerical kernels", numerical_kernels);
  if (wanted(10)) timed(10, "performance", performance);
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
