#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ccl/range_sign.hpp"

using namespace ccl;

namespace {

std::mt19937_64 rng(77);

double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

BernsteinPoly random_poly(std::vector<int> degree, const HyperRect& box) {
  std::vector<double> c(tensor_size(degree));
  for (double& v : c) v = uni(-1.0, 1.0);
  return BernsteinPoly(std::move(degree), box, std::move(c));
}

BernsteinPoly poly1(std::vector<double> c) {
  const int n = static_cast<int>(c.size()) - 1;
  return BernsteinPoly({n}, HyperRect::cube(1, 0.0, 1.0), std::move(c));
}

// Sampled extremes on a (res+1)^d lattice including the boundary.
Interval sampled_range(const BernsteinPoly& p, int res) {
  const int d = p.dim();
  Interval r{INFINITY, -INFINITY};
  std::vector<int> idx(d, 0);
  Point x(d);
  while (true) {
    for (int k = 0; k < d; ++k) x[k] = p.box().lo(k) + p.box().width(k) * idx[k] / res;
    const double v = evaluate(p, x);
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
    int k = 0;
    while (k < d && ++idx[k] > res) idx[k++] = 0;
    if (k == d) break;
  }
  return r;
}

}  // namespace

TEST(SignSet, Basics) {
  EXPECT_EQ(SignSet::of(2.0), SignSet::positive());
  EXPECT_EQ(SignSet::of(-1.0), SignSet::negative());
  EXPECT_EQ(SignSet::of(0.0), SignSet::zero());
  EXPECT_EQ(SignSet::negative().union_with_zero(SignSet::positive()), SignSet::all());
  EXPECT_EQ(SignSet::positive().union_with_zero(SignSet::positive()), SignSet::positive());
  EXPECT_EQ(SignSet::all().str(), "{-1,0,+1}");
}

TEST(CoeffMonotone, Examples) {
  EXPECT_EQ(coeff_monotone(poly1({0, 1, 2}), 0), Monotonicity::Increasing);
  EXPECT_EQ(coeff_monotone(poly1({2, 1, 0}), 0), Monotonicity::Decreasing);
  EXPECT_EQ(coeff_monotone(poly1({0, 1, 0}), 0), Monotonicity::None);
  EXPECT_EQ(coeff_monotone(poly1({4, 4, 4}), 0), Monotonicity::Both);
  EXPECT_EQ(coeff_monotone(poly1({4}), 0), Monotonicity::Both);
  // c_{i0 i1}: c00=0, c01=2, c10=1, c11=3
  const BernsteinPoly p({1, 1}, HyperRect::cube(2, 0, 1), {0.0, 1.0, 2.0, 3.0});
  EXPECT_EQ(coeff_monotone(p, 0), Monotonicity::Increasing);
  EXPECT_EQ(coeff_monotone(p, 1), Monotonicity::Increasing);
}

TEST(Range, Constant) {
  EXPECT_EQ(range(BernsteinPoly::constant(3.0, HyperRect::cube(2, 0, 1))), (Interval{3.0, 3.0}));
}

TEST(Range, ExactParabola) {
  EXPECT_EQ(range(poly1({1, -1, 1})), (Interval{0.0, 1.0}));
}

TEST(Range, BilinearMonotoneIsTight) {
  const BernsteinPoly p({1, 1}, HyperRect::cube(2, 0, 1), {0.0, 1.0, 2.0, 3.0});
  EXPECT_EQ(range(p), (Interval{0.0, 3.0}));
}

TEST(Range, ExactUnivariateUpToQuartic) {
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 200; ++t) {
      const auto p = random_poly({n}, HyperRect({uni(-2, 0)}, {uni(0.5, 2)}));
      const Interval r = range(p);
      const Interval s = sampled_range(p, 20000);
      EXPECT_LE(r.lo, s.lo + 1e-13);
      EXPECT_GE(r.hi, s.hi - 1e-13);
      EXPECT_NEAR(r.lo, s.lo, 1e-7);
      EXPECT_NEAR(r.hi, s.hi, 1e-7);
    }
  }
}

TEST(Range, ContainmentChain) {
  for (const auto& n : {std::vector<int>{3, 3}, std::vector<int>{2, 3, 1}, std::vector<int>{5}}) {
    for (int t = 0; t < 30; ++t) {
      const auto p = random_poly(n, HyperRect::cube(static_cast<int>(n.size()), -1.0, 1.0));
      const Interval r = range(p);
      const Interval s = sampled_range(p, n.size() == 3 ? 20 : 200);
      EXPECT_LE(r.lo, s.lo + 1e-13);
      EXPECT_GE(r.hi, s.hi - 1e-13);
      EXPECT_GE(r.lo, p.min_coeff() - 1e-15);
      EXPECT_LE(r.hi, p.max_coeff() + 1e-15);
    }
  }
}

TEST(Range, MonotoneAxisBoundedByFaces) {
  int checked = 0;
  for (int t = 0; t < 3000 && checked < 50; ++t) {
    auto p = random_poly({2, 2}, HyperRect::cube(2, 0.0, 1.0));
    for (int axis = 0; axis < 2; ++axis) {
      if (!is_monotone(coeff_monotone(p, axis))) continue;
      ++checked;
      const Interval a = range(restrict_to_face(p, {axis, Side::Lower}));
      const Interval b = range(restrict_to_face(p, {axis, Side::Upper}));
      const Interval r = range(p);
      EXPECT_GE(r.lo, std::min(a.lo, b.lo) - 1e-15);
      EXPECT_LE(r.hi, std::max(a.hi, b.hi) + 1e-15);
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(SignEval, Examples) {
  const Tolerance tol{1e-9};
  EXPECT_EQ(sign_eval(BernsteinPoly({1, 1}, HyperRect::cube(2, 0, 1), {1.0, 2.0, 1.5, 3.0}), tol),
            SignSet::positive());
  EXPECT_EQ(sign_eval(poly1({-1, 1}), tol), SignSet::all());
  EXPECT_EQ(sign_eval(poly1({1, -1, 1}), tol), SignSet::all());
  EXPECT_EQ(sign_eval(poly1({-3, -2, -1}), tol), SignSet::negative());
  EXPECT_EQ(sign_eval(BernsteinPoly::scalar(-2.0), tol), SignSet::negative());
  EXPECT_EQ(sign_eval(BernsteinPoly::scalar(0.0), Tolerance{0.0}), SignSet::zero());
}

TEST(SignEval, FuzzyThreshold) {
  const Tolerance tol{0.5};
  EXPECT_EQ(sign_eval(poly1({0.5, 1.0}), tol), SignSet::positive());
  EXPECT_EQ(sign_eval(poly1({0.4, 1.0}), tol), SignSet::all());
  EXPECT_EQ(sign_eval(poly1({-0.5, -1.0}), tol), SignSet::negative());
}

TEST(SignEval, ZeroToleranceIsExactIntervalSign) {
  const Tolerance tol{0.0};
  EXPECT_EQ(sign_eval(poly1({1, -1, 1}), tol), SignSet::zero() | SignSet::positive());
  EXPECT_EQ(sign_eval(poly1({1, 2}), tol), SignSet::positive());
  EXPECT_EQ(sign_eval(poly1({-1, 2}), tol), SignSet::all());
}

TEST(SignEval, Soundness) {
  for (int t = 0; t < 100; ++t) {
    const HyperRect box = HyperRect::cube(2, -1.0, 1.0);
    const auto p = random_poly({3, 3}, box);
    const Tolerance tol = Tolerance::from_root(p);
    // Subcells exercise both the fuzzy classes and the tightened bounds.
    const auto cells = split_poly(split_poly(p)[t % 4]);
    for (const auto& c : cells) {
      const SignSet s = sign_eval(c, tol);
      for (int i = 0; i < 250; ++i) {
        const Point x{uni(c.box().lo(0), c.box().hi(0)), uni(c.box().lo(1), c.box().hi(1))};
        const double v = evaluate(c, x);
        if (std::abs(v) <= tol.eps) continue;
        EXPECT_TRUE(v > 0 ? s.has_positive() : s.has_negative());
      }
    }
  }
}

TEST(Tolerance, ScalesWithRootCoefficients) {
  const auto p = poly1({-4.0, 2.0});
  EXPECT_DOUBLE_EQ(Tolerance::from_root(p).eps, 1e3 * std::numeric_limits<double>::epsilon() * 4.0);
  EXPECT_DOUBLE_EQ(Tolerance::from_root(p, 1.0).eps, std::numeric_limits<double>::epsilon() * 4.0);
}

TEST(SimplyConnected, Examples) {
  const Tolerance tol{1e-12};
  EXPECT_TRUE(simply_connected(poly1({1, 2, 3}), tol));
  EXPECT_TRUE(simply_connected(poly1({-1, 0, 1}), tol));
  EXPECT_FALSE(simply_connected(poly1({1, -1, 1}), tol));
  EXPECT_TRUE(simply_connected(BernsteinPoly::scalar(0.0), tol));
  // x on [-1,1]^2
  const BernsteinPoly x({1, 0}, HyperRect::cube(2, -1, 1), {-1.0, 1.0});
  EXPECT_TRUE(simply_connected(x, tol));
  EXPECT_TRUE(monotone_with_simple_faces(x, tol));
}

TEST(SimplyConnected, CircleIsNotAtRoot) {
  // x^2 + y^2 - 1/4 on [-1,1]^2 in Bernstein form (degree 2 each axis)
  const std::vector<double> a{-0.25, 0, 1, 0, 0, 0, 1, 0, 0};
  const auto p = from_power({2, 2}, HyperRect::cube(2, -1, 1), a);
  EXPECT_FALSE(simply_connected(p, Tolerance::from_root(p)));
}

TEST(SimplyConnected, FacesInheritProperty) {
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const auto root = random_poly({3, 3, 3}, HyperRect::cube(3, -1.0, 1.0));
    const Tolerance tol = Tolerance::from_root(root);
    for (const auto& c : split_poly(split_poly(root)[t % 8])) {
      if (!simply_connected(c, tol)) continue;
      ++checked;
      for (int axis = 0; axis < 3; ++axis) {
        for (const Side s : {Side::Lower, Side::Upper}) {
          EXPECT_TRUE(simply_connected(restrict_to_face(c, {axis, s}), tol));
        }
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(SimplyConnected, SignEvaluationExactOnSimplyConnectedCells) {
  const Tolerance exact{0.0};
  int mixed = 0;
  for (int t = 0; t < 300; ++t) {
    const auto root = random_poly({3, 3}, HyperRect::cube(2, -1.0, 1.0));
    for (const auto& c : split_poly(split_poly(root)[t % 4])) {
      if (!simply_connected(c, exact)) continue;
      const SignSet s = sign_eval(c, exact);
      const Interval sampled = sampled_range(c, 200);
      EXPECT_EQ(s.has_negative(), sampled.lo < 0);
      EXPECT_EQ(s.has_positive(), sampled.hi > 0);
      mixed += s.has_negative() && s.has_positive();
    }
  }
  EXPECT_GT(mixed, 10);
}

TEST(RealRoots, Cubic) {
  // (t-0.2)(t-0.5)(t-0.9) = t^3 - 1.6 t^2 + 0.73 t - 0.09
  double r[3];
  const int n = real_roots_in(1.0, -1.6, 0.73, -0.09, 0.0, 1.0, r);
  ASSERT_EQ(n, 3);
  std::sort(r, r + 3);
  EXPECT_NEAR(r[0], 0.2, 1e-12);
  EXPECT_NEAR(r[1], 0.5, 1e-12);
  EXPECT_NEAR(r[2], 0.9, 1e-12);
}

TEST(RealRoots, DegenerateLeadingCoefficient) {
  double r[3];
  const int n = real_roots_in(0.0, 1.0, -1.0, 0.0, -1.0, 2.0, r);  // t^2 - t
  ASSERT_EQ(n, 2);
  std::sort(r, r + 2);
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_NEAR(r[1], 1.0, 1e-15);
  EXPECT_EQ(real_roots_in(0.0, 0.0, 2.0, -1.0, 0.6, 1.0, r), 0);
}
