#include "ccl/power_poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccl {

PowerPoly::PowerPoly(int dim, double value) : degree_(dim, 0), coeffs_{value} {
  if (dim < 1) throw std::invalid_argument("PowerPoly: dimension must be positive");
}

PowerPoly::PowerPoly(std::vector<int> degree, std::vector<double> coeffs)
    : degree_(std::move(degree)), coeffs_(std::move(coeffs)) {}

PowerPoly PowerPoly::variable(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw std::out_of_range("PowerPoly::variable: bad axis");
  std::vector<int> degree(dim, 0);
  degree[axis] = 1;
  return PowerPoly(std::move(degree), {0.0, 1.0});
}

double PowerPoly::coeff(const MultiIndex& j) const {
  const auto strides = tensor_strides(degree_);
  std::size_t at = 0;
  for (int k = 0; k < dim(); ++k) {
    if (j[k] > degree_[k]) return 0.0;
    at += j[k] * strides[k];
  }
  return coeffs_[at];
}

double PowerPoly::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("PowerPoly: dimension mismatch");
  }
  MultiIndex j(dim(), 0);
  double sum = 0.0;
  std::size_t at = 0;
  do {
    double term = coeffs_[at++];
    for (int k = 0; k < dim(); ++k) {
      for (int e = 0; e < j[k]; ++e) term *= x[k];
    }
    sum += term;
  } while (next_multi_index(j, degree_));
  return sum;
}

PowerPoly PowerPoly::widened(const std::vector<int>& degree) const {
  if (degree == degree_) return *this;
  std::vector<double> out(tensor_size(degree), 0.0);
  const auto strides = tensor_strides(degree);
  MultiIndex j(dim(), 0);
  std::size_t at = 0;
  do {
    std::size_t dst = 0;
    for (int k = 0; k < dim(); ++k) dst += j[k] * strides[k];
    out[dst] = coeffs_[at++];
  } while (next_multi_index(j, degree_));
  return PowerPoly(degree, std::move(out));
}

PowerPoly& PowerPoly::operator+=(const PowerPoly& o) {
  if (o.dim() != dim()) throw std::invalid_argument("PowerPoly: dimension mismatch");
  std::vector<int> degree(dim());
  for (int k = 0; k < dim(); ++k) degree[k] = std::max(degree_[k], o.degree_[k]);
  *this = widened(degree);
  const PowerPoly b = o.widened(degree);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
  return *this;
}

PowerPoly& PowerPoly::operator-=(const PowerPoly& o) {
  PowerPoly neg = o;
  neg *= -1.0;
  return *this += neg;
}

PowerPoly& PowerPoly::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

PowerPoly operator*(const PowerPoly& a, const PowerPoly& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("PowerPoly: dimension mismatch");
  const int d = a.dim();
  std::vector<int> degree(d);
  for (int k = 0; k < d; ++k) degree[k] = a.degree_[k] + b.degree_[k];
  std::vector<double> out(tensor_size(degree), 0.0);
  const auto strides = tensor_strides(degree);
  MultiIndex i(d, 0);
  std::size_t ai = 0;
  do {
    MultiIndex j(d, 0);
    std::size_t bj = 0;
    do {
      std::size_t dst = 0;
      for (int k = 0; k < d; ++k) dst += (i[k] + j[k]) * strides[k];
      out[dst] += a.coeffs_[ai] * b.coeffs_[bj++];
    } while (next_multi_index(j, b.degree_));
    ++ai;
  } while (next_multi_index(i, a.degree_));
  return PowerPoly(std::move(degree), std::move(out));
}

BernsteinPoly PowerPoly::to_bernstein(const HyperRect& box) const {
  return from_power(degree_, box, coeffs_);
}

PowerPoly operator+(PowerPoly a, const PowerPoly& b) { return a += b; }
PowerPoly operator-(PowerPoly a, const PowerPoly& b) { return a -= b; }
PowerPoly operator-(PowerPoly a) { return a *= -1.0; }
PowerPoly operator*(PowerPoly a, double s) { return a *= s; }
PowerPoly operator*(double s, PowerPoly a) { return a *= s; }
PowerPoly operator+(PowerPoly a, double s) { return a += PowerPoly(a.dim(), s); }
PowerPoly operator-(PowerPoly a, double s) { return a += PowerPoly(a.dim(), -s); }

PowerPoly pow(const PowerPoly& a, int e) {
  if (e < 0) throw std::invalid_argument("PowerPoly pow: negative exponent");
  PowerPoly out(a.dim(), 1.0);
  for (int i = 0; i < e; ++i) out = out * a;
  return out;
}

}  // namespace ccl
