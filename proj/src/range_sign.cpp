#include "ccl/range_sign.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace ccl {

SignSet SignSet::of(double v) {
  if (v > 0.0) return positive();
  if (v < 0.0) return negative();
  return zero();
}

SignSet SignSet::union_with_zero(SignSet o) const {
  SignSet u = *this | o;
  if (u.has_negative() && u.has_positive()) u = u | zero();
  return u;
}

std::string SignSet::str() const {
  std::string s = "{";
  auto add = [&s](const char* t) {
    if (s.size() > 1) s += ",";
    s += t;
  };
  if (has_negative()) add("-1");
  if (has_zero()) add("0");
  if (has_positive()) add("+1");
  return s + "}";
}

Tolerance Tolerance::from_root(const BernsteinPoly& root, double scale) {
  return Tolerance{scale * std::numeric_limits<double>::epsilon() * root.max_abs_coeff()};
}

Monotonicity coeff_monotone(const BernsteinPoly& p, int axis) {
  const int n = p.degree(axis);
  if (n == 0) return Monotonicity::Both;
  const std::size_t inner = p.stride(axis);
  const auto c = p.coeffs();
  const std::size_t fiber = inner * (n + 1);
  bool nonneg = true;
  bool nonpos = true;
  for (std::size_t base = 0; base < c.size(); base += fiber) {
    for (std::size_t flat = base; flat < base + n * inner; ++flat) {
      const double diff = c[flat + inner] - c[flat];
      if (diff < 0.0) nonneg = false;
      if (diff > 0.0) nonpos = false;
    }
    if (!nonneg && !nonpos) return Monotonicity::None;
  }
  if (nonneg && nonpos) return Monotonicity::Both;
  return nonneg ? Monotonicity::Increasing : Monotonicity::Decreasing;
}

namespace {

double polish(double a, double b, double c, double d, double t) {
  for (int it = 0; it < 2; ++it) {
    const double f = ((a * t + b) * t + c) * t + d;
    const double df = (3.0 * a * t + 2.0 * b) * t + c;
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    t -= step;
  }
  return t;
}

int solve_quadratic(double a, double b, double c, std::array<double, 3>& roots) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  int n = 0;
  if (q != 0.0) {
    roots[n++] = q / a;
    roots[n++] = c / q;
  } else {
    roots[n++] = 0.0;  // b == 0 and c == 0
  }
  return n;
}

int solve_cubic(double a, double b, double c, double d, std::array<double, 3>& roots) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) return 0;
  constexpr double kSmall = 1e-12;
  if (std::abs(a) <= kSmall * scale) {
    if (std::abs(b) <= kSmall * scale) {
      if (std::abs(c) <= kSmall * scale) return 0;
      roots[0] = -d / c;
      return 1;
    }
    return solve_quadratic(b, c, d, roots);
  }
  const double B = b / a;
  const double C = c / a;
  const double D = d / a;
  const double p = C - B * B / 3.0;
  const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  const double shift = -B / 3.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    roots[0] = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) + shift;
    return 1;
  }
  if (p == 0.0) {
    roots[0] = shift;
    return 1;
  }
  const double r = std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
  const double phi = std::acos(arg);
  for (int k = 0; k < 3; ++k) {
    roots[k] = 2.0 * r * std::cos(phi / 3.0 - 2.0 * std::numbers::pi * k / 3.0) + shift;
  }
  return 3;
}

double decasteljau_1d(std::span<const double> c, double t) {
  std::array<double, 8> w{};
  const int n = static_cast<int>(c.size()) - 1;
  std::copy(c.begin(), c.end(), w.begin());
  for (int r = 1; r <= n; ++r) {
    for (int i = 0; i <= n - r; ++i) w[i] = (1.0 - t) * w[i] + t * w[i + 1];
  }
  return w[0];
}

// Exact range of a univariate Bernstein polynomial of degree <= 4: endpoint
// values plus interior stationary points of the (degree <= 3) derivative.
Interval exact_range_1d(std::span<const double> c) {
  const int n = static_cast<int>(c.size()) - 1;
  double lo = std::min(c.front(), c.back());
  double hi = std::max(c.front(), c.back());
  if (n <= 1) return {lo, hi};

  // Derivative in Bernstein form (degree m = n-1, parameter u in [0,1]),
  // then converted to monomials in u.
  std::array<double, 4> db{};
  for (int i = 0; i < n; ++i) db[i] = n * (c[i + 1] - c[i]);
  const int m = n - 1;
  std::array<double, 4> mono{};
  for (int k = 0; k <= m; ++k) {
    double s = 0.0;
    double binom_mk = 1.0;
    for (int j = 1; j <= k; ++j) binom_mk = binom_mk * (m - k + j) / j;
    for (int i = 0; i <= k; ++i) {
      double binom_ki = 1.0;
      for (int j = 1; j <= i; ++j) binom_ki = binom_ki * (k - i + j) / j;
      s += ((k - i) % 2 ? -1.0 : 1.0) * binom_ki * db[i];
    }
    mono[k] = binom_mk * s;
  }
  double roots[3];
  const int count = real_roots_in(mono[3], mono[2], mono[1], mono[0], 0.0, 1.0, roots);
  for (int r = 0; r < count; ++r) {
    const double v = decasteljau_1d(c, roots[r]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

int real_roots_in(double a, double b, double c, double d, double lo, double hi, double* out) {
  std::array<double, 3> roots{};
  const int n = solve_cubic(a, b, c, d, roots);
  const double slack = 1e-12 * (hi - lo);
  int count = 0;
  for (int i = 0; i < n; ++i) {
    double t = polish(a, b, c, d, roots[i]);
    if (!std::isfinite(t)) t = roots[i];
    if (t >= lo - slack && t <= hi + slack) out[count++] = std::clamp(t, lo, hi);
  }
  return count;
}

Interval range(const BernsteinPoly& p) {
  const int d = p.dim();
  const auto c = p.coeffs();
  if (d == 0) return {c[0], c[0]};
  if (d == 1 && p.degree(0) <= 4) {
    Interval r = exact_range_1d(c);
    r.lo = std::max(r.lo, p.min_coeff());
    r.hi = std::min(r.hi, p.max_coeff());
    return r;
  }
  Interval r{p.min_coeff(), p.max_coeff()};
  if (d > 1) {
    for (int k = 0; k < d; ++k) {
      if (!is_monotone(coeff_monotone(p, k))) continue;
      const Interval a = range(restrict_to_face(p, {k, Side::Lower}));
      const Interval b = range(restrict_to_face(p, {k, Side::Upper}));
      r.lo = std::max(r.lo, std::min(a.lo, b.lo));
      r.hi = std::min(r.hi, std::max(a.hi, b.hi));
    }
  }
  if (r.lo > r.hi) std::swap(r.lo, r.hi);
  return r;
}

SignSet sign_eval(const BernsteinPoly& p, const Tolerance& tol) {
  const Interval r = range(p);
  if (tol.eps > 0.0) {
    if (r.lo >= tol.eps) return SignSet::positive();
    if (r.hi <= -tol.eps) return SignSet::negative();
    return SignSet::all();
  }
  SignSet s;
  if (r.lo < 0.0) s = s | SignSet::negative();
  if (r.hi > 0.0) s = s | SignSet::positive();
  if (r.lo <= 0.0 && r.hi >= 0.0) s = s | SignSet::zero();
  return s;
}

bool simply_connected(const BernsteinPoly& p, const Tolerance& tol) {
  if (p.dim() == 0) return true;
  const SignSet s = sign_eval(p, tol);
  if (s == SignSet::positive() || s == SignSet::negative()) return true;
  return monotone_with_simple_faces(p, tol);
}

bool monotone_with_simple_faces(const BernsteinPoly& p, const Tolerance& tol) {
  for (int k = 0; k < p.dim(); ++k) {
    if (!is_monotone(coeff_monotone(p, k))) continue;
    if (simply_connected(restrict_to_face(p, {k, Side::Lower}), tol) &&
        simply_connected(restrict_to_face(p, {k, Side::Upper}), tol)) {
      return true;
    }
  }
  return false;
}

}  // namespace ccl
