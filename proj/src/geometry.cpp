#include "ccl/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace ccl {

HyperRect::HyperRect(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) {
    throw std::invalid_argument("HyperRect: lo/hi dimension mismatch");
  }
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (!(std::isfinite(lo_[k]) && std::isfinite(hi_[k]) && lo_[k] < hi_[k])) {
      throw std::invalid_argument("HyperRect: degenerate or non-finite extent");
    }
  }
}

HyperRect HyperRect::cube(int dim, double lo, double hi) {
  return HyperRect(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

Point HyperRect::center() const {
  Point c(lo_.size());
  for (int k = 0; k < dim(); ++k) c[k] = mid(k);
  return c;
}

double HyperRect::diagonal() const {
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += width(k) * width(k);
  return std::sqrt(s);
}

double HyperRect::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= width(k);
  return v;
}

HyperRect child_box(const HyperRect& box, unsigned code) {
  const int d = box.dim();
  std::vector<double> lo(box.lo().begin(), box.lo().end());
  std::vector<double> hi(box.hi().begin(), box.hi().end());
  for (int k = 0; k < d; ++k) {
    const double m = box.mid(k);
    if (code & (1u << k)) {
      lo[k] = m;
    } else {
      hi[k] = m;
    }
  }
  return HyperRect(std::move(lo), std::move(hi));
}

std::vector<HyperRect> split(const HyperRect& box) {
  const unsigned n = 1u << box.dim();
  std::vector<HyperRect> out;
  out.reserve(n);
  for (unsigned code = 0; code < n; ++code) out.push_back(child_box(box, code));
  return out;
}

HyperRect face_box(const HyperRect& box, FaceRef face) {
  if (face.axis < 0 || face.axis >= box.dim()) {
    throw std::invalid_argument("face_box: axis out of range");
  }
  std::vector<double> lo;
  std::vector<double> hi;
  for (int k = 0; k < box.dim(); ++k) {
    if (k == face.axis) continue;
    lo.push_back(box.lo(k));
    hi.push_back(box.hi(k));
  }
  if (lo.empty()) return HyperRect{};
  return HyperRect(std::move(lo), std::move(hi));
}

bool contains(const HyperRect& box, std::span<const double> x) {
  if (static_cast<int>(x.size()) != box.dim()) {
    throw std::invalid_argument("contains: dimension mismatch");
  }
  for (int k = 0; k < box.dim(); ++k) {
    if (x[k] < box.lo(k) || x[k] > box.hi(k)) return false;
  }
  return true;
}

std::vector<std::size_t> tensor_strides(std::span<const int> degree) {
  std::vector<std::size_t> s(degree.size());
  std::size_t acc = 1;
  for (std::size_t k = 0; k < degree.size(); ++k) {
    s[k] = acc;
    acc *= static_cast<std::size_t>(degree[k] + 1);
  }
  return s;
}

std::size_t tensor_size(std::span<const int> degree) {
  std::size_t acc = 1;
  for (int n : degree) acc *= static_cast<std::size_t>(n + 1);
  return acc;
}

bool next_multi_index(MultiIndex& index, std::span<const int> degree) {
  for (std::size_t k = 0; k < degree.size(); ++k) {
    if (index[k] < degree[k]) {
      ++index[k];
      return true;
    }
    index[k] = 0;
  }
  return false;
}

}  // namespace ccl
