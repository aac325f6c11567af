#pragma once

#include <vector>

#include "ccl/bernstein.hpp"

namespace ccl {

/// Dense multivariate polynomial in the monomial basis, used to write test
/// polynomials the way they are usually stated and convert them exactly.
class PowerPoly {
 public:
  explicit PowerPoly(int dim, double value = 0.0);
  static PowerPoly variable(int dim, int axis);

  int dim() const { return static_cast<int>(degree_.size()); }
  const std::vector<int>& degree() const { return degree_; }
  /// Monomial coefficients, axis 0 fastest.
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(const MultiIndex& j) const;

  double operator()(std::span<const double> x) const;

  PowerPoly& operator+=(const PowerPoly& o);
  PowerPoly& operator-=(const PowerPoly& o);
  PowerPoly& operator*=(double s);

  BernsteinPoly to_bernstein(const HyperRect& box) const;

  friend PowerPoly operator*(const PowerPoly& a, const PowerPoly& b);

 private:
  PowerPoly(std::vector<int> degree, std::vector<double> coeffs);
  PowerPoly widened(const std::vector<int>& degree) const;

  std::vector<int> degree_;
  std::vector<double> coeffs_;
};

PowerPoly operator+(PowerPoly a, const PowerPoly& b);
PowerPoly operator-(PowerPoly a, const PowerPoly& b);
PowerPoly operator-(PowerPoly a);
PowerPoly operator*(PowerPoly a, double s);
PowerPoly operator*(double s, PowerPoly a);
PowerPoly operator+(PowerPoly a, double s);
PowerPoly operator-(PowerPoly a, double s);
PowerPoly pow(const PowerPoly& a, int e);

}  // namespace ccl
