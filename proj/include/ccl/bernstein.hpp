#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ccl/geometry.hpp"

namespace ccl {

/// Tensor-product Bernstein polynomial
///
///   phi(x) = sum_i c_i b_{i_0}^{n_0}(x_0) ... b_{i_{d-1}}^{n_{d-1}}(x_{d-1})
///
/// relative to the box U. Coefficients are stored densely with axis 0 varying
/// fastest, i.e. c_i lives at sum_k i_k * stride(k) with stride(0) = 1.
///
/// A polynomial of dimension zero is a single scalar; it arises as the
/// restriction of a univariate polynomial to an endpoint.
class BernsteinPoly {
 public:
  BernsteinPoly(std::vector<int> degree, HyperRect box, std::vector<double> coeffs);

  static BernsteinPoly constant(double value, HyperRect box);
  static BernsteinPoly scalar(double value) { return constant(value, HyperRect{}); }

  int dim() const { return static_cast<int>(degree_.size()); }
  std::span<const int> degree() const { return degree_; }
  int degree(int axis) const { return degree_[axis]; }
  const HyperRect& box() const { return box_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t stride(int axis) const;
  double coeff(const MultiIndex& i) const;

  double min_coeff() const;
  double max_coeff() const;
  double max_abs_coeff() const;

 private:
  std::vector<int> degree_;
  HyperRect box_;
  std::vector<double> coeffs_;
};

/// Value at x by dimension-recursive de Casteljau. Points outside the box are
/// evaluated as the polynomial extension.
double evaluate(const BernsteinPoly& p, std::span<const double> x);

/// Splits along `axis` at parameter t in (0,1) (relative to the axis extent).
std::pair<BernsteinPoly, BernsteinPoly> subdivide(const BernsteinPoly& p, int axis,
                                                  double t = 0.5);

/// The 2^d restrictions of p onto split(p.box()), in the same order.
std::vector<BernsteinPoly> split_poly(const BernsteinPoly& p);

/// Restriction to a face: the boundary slice i_axis = 0 or i_axis = n_axis.
BernsteinPoly restrict_to_face(const BernsteinPoly& p, FaceRef face);

/// Partial derivative along `axis`, of degree n - e_axis.
BernsteinPoly derivative(const BernsteinPoly& p, int axis);

/// Re-expresses p relative to a sub-box of its domain.
BernsteinPoly restrict_to_box(const BernsteinPoly& p, const HyperRect& sub);

/// Exact conversion from the monomial basis in global coordinates:
/// phi(x) = sum_j a_j x_0^{j_0} ... x_{d-1}^{j_{d-1}}, a stored axis-0 fastest.
BernsteinPoly from_power(std::vector<int> degree, HyperRect box,
                         std::span<const double> monomials);

/// Degree (3,...,3) Bernstein form on [-1,1]^d of
///   phi(x) = sum_{i in {0..3}^d} c_i omega^{|i|} prod_l p_{i_l}(x_l)
/// with p_0..p_3 the Legendre polynomials. `coeffs` has 4^d entries, axis 0
/// fastest.
BernsteinPoly from_legendre_tensor(int dim, std::span<const double> coeffs, double omega);

/// Univariate Legendre polynomial p_j(x), j <= 3.
double legendre(int j, double x);

}  // namespace ccl
