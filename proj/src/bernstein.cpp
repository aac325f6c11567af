#include "ccl/bernstein.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace ccl {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Applies `m` (rows x (n_axis+1), row-major) along one axis of the tensor.
std::vector<double> axis_product(std::span<const double> in, std::span<const int> degree,
                                 int axis, std::span<const double> m, int rows) {
  const int cols = degree[axis] + 1;
  std::size_t inner = 1;
  for (int k = 0; k < axis; ++k) inner *= degree[k] + 1;
  const std::size_t outer = in.size() / (inner * cols);
  std::vector<double> out(outer * rows * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = in.data() + o * cols * inner;
    double* dst = out.data() + o * rows * inner;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double w = m[r * cols + c];
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < inner; ++j) dst[r * inner + j] += w * src[c * inner + j];
      }
    }
  }
  return out;
}

// Splits along `axis` at parameter t; `at` is the coordinate of the split.
std::pair<BernsteinPoly, BernsteinPoly> split_axis(const BernsteinPoly& p, int axis, double t,
                                                   double at) {
  const int n = p.degree(axis);
  const std::size_t inner = p.stride(axis);
  const auto c = p.coeffs();
  const std::size_t fiber = inner * (n + 1);
  const std::size_t outer = c.size() / fiber;
  std::vector<double> left(c.size());
  std::vector<double> right(c.size());
  std::vector<double> work(fiber);
  const double s = 1.0 - t;
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * fiber;
    std::copy_n(c.begin() + base, fiber, work.begin());
    std::copy_n(work.begin(), inner, left.begin() + base);
    std::copy_n(work.begin() + n * inner, inner, right.begin() + base + n * inner);
    for (int r = 1; r <= n; ++r) {
      for (int i = 0; i <= n - r; ++i) {
        double* a = work.data() + i * inner;
        const double* b = a + inner;
        for (std::size_t j = 0; j < inner; ++j) a[j] = s * a[j] + t * b[j];
      }
      std::copy_n(work.begin(), inner, left.begin() + base + r * inner);
      std::copy_n(work.begin() + (n - r) * inner, inner, right.begin() + base + (n - r) * inner);
    }
  }
  const HyperRect& box = p.box();
  std::vector<double> lo(box.lo().begin(), box.lo().end());
  std::vector<double> hi(box.hi().begin(), box.hi().end());
  std::vector<double> lo2 = lo;
  std::vector<double> hi2 = hi;
  hi[axis] = at;
  lo2[axis] = at;
  std::vector<int> deg(p.degree().begin(), p.degree().end());
  return {BernsteinPoly(deg, HyperRect(std::move(lo), std::move(hi)), std::move(left)),
          BernsteinPoly(deg, HyperRect(std::move(lo2), std::move(hi2)), std::move(right))};
}

// Bernstein coefficient i (degree 3, on [-1,1]) of Legendre polynomial j.
constexpr std::array<double, 16> kLegendreToBernstein = {
    // row i, column j
    1.0, -1.0,        1.0,  -1.0,  //
    1.0, -1.0 / 3.0, -1.0,  3.0,   //
    1.0, 1.0 / 3.0,  -1.0,  -3.0,  //
    1.0, 1.0,         1.0,  1.0,
};

}  // namespace

BernsteinPoly::BernsteinPoly(std::vector<int> degree, HyperRect box, std::vector<double> coeffs)
    : degree_(std::move(degree)), box_(std::move(box)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(degree_.size()) != box_.dim()) {
    throw std::invalid_argument("BernsteinPoly: degree/box dimension mismatch");
  }
  for (int n : degree_) {
    if (n < 0) throw std::invalid_argument("BernsteinPoly: negative degree");
  }
  if (coeffs_.size() != tensor_size(degree_)) {
    throw std::invalid_argument("BernsteinPoly: coefficient count does not match degree");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("BernsteinPoly: non-finite coefficient");
  }
}

BernsteinPoly BernsteinPoly::constant(double value, HyperRect box) {
  std::vector<int> deg(box.dim(), 0);
  return BernsteinPoly(std::move(deg), std::move(box), {value});
}

std::size_t BernsteinPoly::stride(int axis) const {
  std::size_t s = 1;
  for (int k = 0; k < axis; ++k) s *= degree_[k] + 1;
  return s;
}

double BernsteinPoly::coeff(const MultiIndex& i) const {
  std::size_t flat = 0;
  std::size_t s = 1;
  for (int k = 0; k < dim(); ++k) {
    flat += i[k] * s;
    s *= degree_[k] + 1;
  }
  return coeffs_[flat];
}

double BernsteinPoly::min_coeff() const { return *std::min_element(coeffs_.begin(), coeffs_.end()); }
double BernsteinPoly::max_coeff() const { return *std::max_element(coeffs_.begin(), coeffs_.end()); }

double BernsteinPoly::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double evaluate(const BernsteinPoly& p, std::span<const double> x) {
  const int d = p.dim();
  if (static_cast<int>(x.size()) != d) {
    throw std::invalid_argument("evaluate: dimension mismatch");
  }
  const auto c = p.coeffs();
  if (d == 0) return c[0];

  std::array<double, 256> stack;
  std::vector<double> heap;
  double* buf = stack.data();
  if (c.size() > stack.size()) {
    heap.resize(c.size());
    buf = heap.data();
  }
  std::copy(c.begin(), c.end(), buf);

  std::size_t len = c.size();
  const HyperRect& box = p.box();
  for (int k = d - 1; k >= 0; --k) {
    const int n = p.degree(k);
    const std::size_t block = len / (n + 1);
    const double t = (x[k] - box.lo(k)) / box.width(k);
    const double s = 1.0 - t;
    for (int r = 1; r <= n; ++r) {
      for (int i = 0; i <= n - r; ++i) {
        double* a = buf + i * block;
        const double* b = a + block;
        for (std::size_t j = 0; j < block; ++j) a[j] = s * a[j] + t * b[j];
      }
    }
    len = block;
  }
  return buf[0];
}

std::pair<BernsteinPoly, BernsteinPoly> subdivide(const BernsteinPoly& p, int axis, double t) {
  if (axis < 0 || axis >= p.dim()) throw std::invalid_argument("subdivide: axis out of range");
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("subdivide: t must lie in (0,1)");
  const HyperRect& box = p.box();
  const double at = (t == 0.5) ? box.mid(axis) : box.lo(axis) + t * box.width(axis);
  return split_axis(p, axis, t, at);
}

std::vector<BernsteinPoly> split_poly(const BernsteinPoly& p) {
  std::vector<BernsteinPoly> cur{p};
  for (int k = 0; k < p.dim(); ++k) {
    std::vector<BernsteinPoly> next;
    next.reserve(cur.size() * 2);
    std::vector<BernsteinPoly> upper;
    upper.reserve(cur.size());
    for (const auto& q : cur) {
      auto [l, r] = split_axis(q, k, 0.5, q.box().mid(k));
      next.push_back(std::move(l));
      upper.push_back(std::move(r));
    }
    for (auto& u : upper) next.push_back(std::move(u));
    cur = std::move(next);
  }
  return cur;
}

BernsteinPoly restrict_to_face(const BernsteinPoly& p, FaceRef face) {
  const int d = p.dim();
  if (face.axis < 0 || face.axis >= d) {
    throw std::invalid_argument("restrict_to_face: axis out of range");
  }
  const int n = p.degree(face.axis);
  const int target = face.side == Side::Lower ? 0 : n;
  const std::size_t s = p.stride(face.axis);
  const auto c = p.coeffs();
  std::vector<double> out;
  out.reserve(c.size() / (n + 1));
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    if (static_cast<int>((flat / s) % (n + 1)) == target) out.push_back(c[flat]);
  }
  std::vector<int> deg;
  for (int k = 0; k < d; ++k) {
    if (k != face.axis) deg.push_back(p.degree(k));
  }
  return BernsteinPoly(std::move(deg), face_box(p.box(), face), std::move(out));
}

BernsteinPoly derivative(const BernsteinPoly& p, int axis) {
  if (axis < 0 || axis >= p.dim()) throw std::invalid_argument("derivative: axis out of range");
  const int n = p.degree(axis);
  if (n == 0) throw std::invalid_argument("derivative: degree zero along axis");
  const std::size_t inner = p.stride(axis);
  const auto c = p.coeffs();
  const std::size_t outer = c.size() / (inner * (n + 1));
  const double scale = n / p.box().width(axis);
  std::vector<double> out(outer * n * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = c.data() + o * (n + 1) * inner;
    double* dst = out.data() + o * n * inner;
    for (int i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < inner; ++j) {
        dst[i * inner + j] = scale * (src[(i + 1) * inner + j] - src[i * inner + j]);
      }
    }
  }
  std::vector<int> deg(p.degree().begin(), p.degree().end());
  deg[axis] -= 1;
  return BernsteinPoly(std::move(deg), p.box(), std::move(out));
}

BernsteinPoly restrict_to_box(const BernsteinPoly& p, const HyperRect& sub) {
  const HyperRect& box = p.box();
  if (sub.dim() != box.dim()) throw std::invalid_argument("restrict_to_box: dimension mismatch");
  for (int k = 0; k < box.dim(); ++k) {
    if (sub.lo(k) < box.lo(k) || sub.hi(k) > box.hi(k)) {
      throw std::invalid_argument("restrict_to_box: sub-box not contained in domain");
    }
  }
  BernsteinPoly cur = p;
  for (int k = 0; k < box.dim(); ++k) {
    if (sub.lo(k) > cur.box().lo(k)) {
      const double t = (sub.lo(k) - cur.box().lo(k)) / cur.box().width(k);
      cur = split_axis(cur, k, t, sub.lo(k)).second;
    }
    if (sub.hi(k) < cur.box().hi(k)) {
      const double t = (sub.hi(k) - cur.box().lo(k)) / cur.box().width(k);
      cur = split_axis(cur, k, t, sub.hi(k)).first;
    }
  }
  return cur;
}

BernsteinPoly from_power(std::vector<int> degree, HyperRect box,
                         std::span<const double> monomials) {
  if (static_cast<int>(degree.size()) != box.dim()) {
    throw std::invalid_argument("from_power: degree/box dimension mismatch");
  }
  if (monomials.size() != tensor_size(degree)) {
    throw std::invalid_argument("from_power: coefficient count does not match degree");
  }
  std::vector<double> c(monomials.begin(), monomials.end());
  for (int k = 0; k < box.dim(); ++k) {
    const int n = degree[k];
    const double a = box.lo(k);
    const double w = box.width(k);
    // x^j = sum_m C(j,m) a^(j-m) w^m u^m,   u^m = sum_{i>=m} C(i,m)/C(n,m) b_i^n(u)
    std::vector<double> m((n + 1) * (n + 1), 0.0);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        double v = 0.0;
        for (int q = 0; q <= std::min(i, j); ++q) {
          v += binomial(j, q) * std::pow(a, j - q) * std::pow(w, q) * binomial(i, q) /
               binomial(n, q);
        }
        m[i * (n + 1) + j] = v;
      }
    }
    c = axis_product(c, degree, k, m, n + 1);
  }
  return BernsteinPoly(std::move(degree), std::move(box), std::move(c));
}

double legendre(int j, double x) {
  switch (j) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 0.5 * (3.0 * x * x - 1.0);
    case 3: return 0.5 * (5.0 * x * x * x - 3.0 * x);
    default: throw std::invalid_argument("legendre: only degrees 0..3 supported");
  }
}

BernsteinPoly from_legendre_tensor(int dim, std::span<const double> coeffs, double omega) {
  if (dim < 1) throw std::invalid_argument("from_legendre_tensor: dim must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("from_legendre_tensor: omega must be > 0");
  std::vector<int> degree(dim, 3);
  if (coeffs.size() != tensor_size(degree)) {
    throw std::invalid_argument("from_legendre_tensor: expected 4^d coefficients");
  }
  std::vector<double> c(coeffs.begin(), coeffs.end());
  MultiIndex i(dim, 0);
  std::size_t flat = 0;
  do {
    int order = 0;
    for (int v : i) order += v;
    c[flat++] *= std::pow(omega, order);
  } while (next_multi_index(i, degree));
  for (int k = 0; k < dim; ++k) c = axis_product(c, degree, k, kLegendreToBernstein, 4);
  return BernsteinPoly(std::move(degree), HyperRect::cube(dim, -1.0, 1.0), std::move(c));
}

}  // namespace ccl
