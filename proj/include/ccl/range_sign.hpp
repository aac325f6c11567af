#pragma once

#include <cstdint>
#include <string>

#include "ccl/bernstein.hpp"

namespace ccl {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Subset of {-1, 0, +1}.
class SignSet {
 public:
  constexpr SignSet() = default;

  static constexpr SignSet negative() { return SignSet(kNeg); }
  static constexpr SignSet zero() { return SignSet(kZero); }
  static constexpr SignSet positive() { return SignSet(kPos); }
  static constexpr SignSet all() { return SignSet(kNeg | kZero | kPos); }
  static SignSet of(double v);

  constexpr bool has_negative() const { return bits_ & kNeg; }
  constexpr bool has_zero() const { return bits_ & kZero; }
  constexpr bool has_positive() const { return bits_ & kPos; }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr SignSet operator|(SignSet o) const { return SignSet(bits_ | o.bits_); }
  constexpr bool operator==(const SignSet&) const = default;

  /// Union that adds 0 when the operands jointly contain both -1 and +1.
  SignSet union_with_zero(SignSet o) const;

  std::string str() const;

 private:
  static constexpr std::uint8_t kNeg = 1;
  static constexpr std::uint8_t kZero = 2;
  static constexpr std::uint8_t kPos = 4;
  constexpr explicit SignSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

enum class Monotonicity { None, Increasing, Decreasing, Both };

inline bool is_monotone(Monotonicity m) { return m != Monotonicity::None; }

/// Absolute threshold, in units of phi, below which range bounds are treated
/// as touching zero.
struct Tolerance {
  double eps = 0.0;

  static constexpr double kDefaultScale = 1e3;

  /// eps = scale * machine epsilon * max_i |c_i| over the root coefficients.
  static Tolerance from_root(const BernsteinPoly& root, double scale = kDefaultScale);
};

/// Coefficient monotonicity along `axis`, with exact comparisons. Axes of
/// degree zero, and axes along which all forward differences vanish, report
/// Both.
Monotonicity coeff_monotone(const BernsteinPoly& p, int axis);

/// Enclosure of {phi(x) : x in box}. Exact for univariate polynomials of degree
/// at most four; otherwise the coefficient hull, tightened by the face ranges
/// along every coefficient-monotone axis.
Interval range(const BernsteinPoly& p);

/// Possible signs of phi on its box. With eps > 0: {+1} iff inf R >= eps,
/// {-1} iff sup R <= -eps, all three signs otherwise. With eps == 0 the sign
/// set of the range enclosure itself is returned.
SignSet sign_eval(const BernsteinPoly& p, const Tolerance& tol);

/// The non-uniform branch of the topology test: some axis along which p is
/// coefficient monotone and both faces are simply connected (lowest axis
/// first).
bool monotone_with_simple_faces(const BernsteinPoly& p, const Tolerance& tol);

/// Recursive topology test: uniformly signed, or coefficient monotone along
/// some axis with both faces simply connected. Scalars always pass.
bool simply_connected(const BernsteinPoly& p, const Tolerance& tol);

/// Real roots of a t^3 + b t^2 + c t + d within [lo, hi] (slightly widened and
/// clamped), for polynomials of degree <= 3. Returned unsorted; may contain
/// duplicates.
int real_roots_in(double a, double b, double c, double d, double lo, double hi, double* out);

}  // namespace ccl
