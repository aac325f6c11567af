#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ccl {

using Point = std::vector<double>;

/// Axis-aligned box [lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}].
///
/// A default-constructed box has dimension zero; it is the marker returned for
/// the faces of a one-dimensional interval.
class HyperRect {
 public:
  HyperRect() = default;
  HyperRect(std::vector<double> lo, std::vector<double> hi);

  static HyperRect cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo_.size()); }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double width(int axis) const { return hi_[axis] - lo_[axis]; }
  double mid(int axis) const { return 0.5 * (lo_[axis] + hi_[axis]); }
  std::span<const double> lo() const { return lo_; }
  std::span<const double> hi() const { return hi_; }

  Point center() const;
  double diagonal() const;
  double volume() const;

  bool operator==(const HyperRect&) const = default;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

enum class Side { Lower = 0, Upper = 1 };

/// A face of a box: the hyperplane x_axis = lo(axis) or x_axis = hi(axis).
/// Axes are zero-based.
struct FaceRef {
  int axis = 0;
  Side side = Side::Lower;
};

/// Splits a box at its midpoints into 2^d children. Child j has bit k of j set
/// iff it is the upper half along axis k.
std::vector<HyperRect> split(const HyperRect& box);

/// Child `code` of split(box), without materializing the siblings.
HyperRect child_box(const HyperRect& box, unsigned code);

/// The (d-1)-dimensional box obtained by deleting `face.axis`.
HyperRect face_box(const HyperRect& box, FaceRef face);

/// Closed-box membership.
bool contains(const HyperRect& box, std::span<const double> x);

/// Nonnegative multi-index i with 0 <= i_k <= n_k.
using MultiIndex = std::vector<int>;

/// Strides of a dense tensor with extents n_k + 1, axis 0 fastest.
std::vector<std::size_t> tensor_strides(std::span<const int> degree);
std::size_t tensor_size(std::span<const int> degree);

/// Advances `index` to the next multi-index in storage order (axis 0 fastest).
/// Returns false after the last one, leaving `index` all zero.
bool next_multi_index(MultiIndex& index, std::span<const int> degree);

}  // namespace ccl
