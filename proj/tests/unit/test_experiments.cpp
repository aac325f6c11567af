#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "ccl/experiments.hpp"

using namespace ccl;

namespace {

EnsembleConfig small_config() {
  EnsembleConfig c;
  c.count = 100;
  c.depth_min = 1;
  c.depth_max = 6;
  c.samples = 300;
  c.gap_res = 128;
  c.seed = 11;
  return c;
}

double legendre_p(int j, double x) {
  switch (j) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 0.5 * (3 * x * x - 1);
    default: return 0.5 * (5 * x * x * x - 3 * x);
  }
}

}  // namespace

TEST(Ensemble, DrawsAreDeterministic) {
  EnsembleConfig c;
  EXPECT_EQ(legendre_draw(c, 5), legendre_draw(c, 5));
  EXPECT_NE(legendre_draw(c, 5), legendre_draw(c, 6));
  EnsembleConfig other = c;
  other.seed = 1;
  EXPECT_NE(legendre_draw(c, 5), legendre_draw(other, 5));
  EXPECT_EQ(legendre_draw(c, 0).size(), 16u);
  c.dim = 3;
  EXPECT_EQ(legendre_draw(c, 0).size(), 64u);
}

TEST(Ensemble, DrawsAreUniform) {
  EnsembleConfig c;
  double sum = 0.0, sq = 0.0, lo = 1.0, hi = -1.0;
  std::size_t n = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    for (const double v : legendre_draw(c, i)) {
      sum += v;
      sq += v * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.01);
  EXPECT_GE(lo, -1.0);
  EXPECT_LE(hi, 1.0);
}

TEST(Ensemble, RandomPolyMatchesOrthonormalSum) {
  EnsembleConfig c;
  for (const LegendreNorm norm : {LegendreNorm::Orthonormal, LegendreNorm::Classical}) {
    c.norm = norm;
    const auto coeffs = legendre_draw(c, 3);
    const BernsteinPoly p = random_poly(c, 3);
    for (const Point& x : std::vector<Point>{{0.1, -0.7}, {0.9, 0.4}, {-1.0, 1.0}}) {
      double want = 0.0;
      for (std::size_t m = 0; m < 16; ++m) {
        const int j0 = m % 4, j1 = m / 4;
        double f = std::pow(c.omega, j0 + j1) * legendre_p(j0, x[0]) * legendre_p(j1, x[1]);
        if (norm == LegendreNorm::Orthonormal) f *= std::sqrt((2 * j0 + 1) * (2 * j1 + 1) / 4.0);
        want += coeffs[m] * f;
      }
      EXPECT_NEAR(evaluate(p, x), want, 1e-12);
    }
  }
}

TEST(Ensemble, ZeroCoefficientsAreDegenerate) {
  const BernsteinPoly zero = from_legendre_tensor(2, std::vector<double>(16, 0.0), 0.5);
  EXPECT_THROW(build_labeling(zero, 4), std::invalid_argument);
}

TEST(Ensemble, ConfigValidation) {
  EnsembleConfig c;
  c.dim = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EnsembleConfig{};
  c.omega = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EnsembleConfig{};
  c.count = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Sweep, SmallEnsemble) {
  const SweepResult r = sweep(small_config());
  ASSERT_EQ(r.tallies.size(), 6u);
  EXPECT_EQ(r.rows.size(), 600u);
  double prev = -1.0;
  for (const OutcomeTally& t : r.tallies) {
    EXPECT_EQ(t.total() + t.excluded, 100u);
    EXPECT_NEAR(t.rho_eq() + t.rho_ok() + t.rho_glued(), 100.0, 1e-9);
    EXPECT_GE(t.rho_eq(), prev);
    prev = t.rho_eq();
  }
  EXPECT_LT(r.tally(1).rho_eq(), 30.0);
  EXPECT_GT(r.tally(6).rho_eq(), 90.0);
  for (const SweepRow& row : r.rows) {
    if (row.gap) {
      EXPECT_EQ(row.outcome, Outcome::Glued);
      EXPECT_GE(row.gap->g, 0.0);
    }
    if (row.outcome == Outcome::CertifiedExact) EXPECT_LE(row.depth_used, row.max_depth);
  }
  EXPECT_THROW(r.tally(9), std::out_of_range);
}

TEST(Sweep, CsvIsByteDeterministic) {
  EnsembleConfig c = small_config();
  c.count = 20;
  c.depth_max = 4;
  std::ostringstream a, b;
  write_csv(a, sweep(c));
  c.threads = 2;
  write_csv(b, sweep(c));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "seed,index,max_depth,outcome,depth_used,gap_e,gap_g");
  std::ostringstream summary;
  write_summary(summary, sweep(c));
  EXPECT_FALSE(summary.str().empty());
}

TEST(LabelWitnesses, OnePointPerLabelAtLeast) {
  LabelingState st = build_labeling(random_poly(EnsembleConfig{}, 7), 8);
  const auto w = label_witnesses(st, 2);
  std::set<std::uint32_t> labels;
  for (const Point& x : w) labels.insert(label_of(st, x));
  EXPECT_LE(w.size(), 2 * labels.size());
  EXPECT_GE(labels.size(), 1u);
}

TEST(Corpus, AllCasesMatch) {
  const auto corpus = regression_corpus();
  ASSERT_EQ(corpus.size(), 6u);
  for (const RegressionCase& c : corpus) {
    const RegressionResult r = run_regression(c, 5000, 1);
    EXPECT_TRUE(r.matches(c)) << c.name << " got " << to_string(r.outcome);
    EXPECT_EQ(r.outcome, c.expected) << c.name;
  }
}
