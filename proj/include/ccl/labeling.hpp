#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "ccl/bernstein.hpp"
#include "ccl/range_sign.hpp"
#include "ccl/tree.hpp"

namespace ccl {

/// Query point lies on {phi = 0}, where no label is defined.
class ZeroSetError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query point lies outside the constraint box.
class OutsideDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Everything needed to answer component queries: the polynomial, its
/// subdivision tree and the label store built over it.
struct LabelingState {
  BernsteinPoly phi;
  Tolerance tol;
  SubdivTree tree;
  LabelStore store;
};

/// Builds tree and connectivity for phi on its own box.
LabelingState build_labeling(const BernsteinPoly& phi, int max_depth,
                             double tol_scale = Tolerance::kDefaultScale);
LabelingState build_labeling(const BernsteinPoly& phi, const BuildOptions& options,
                             const Tolerance& tol);

/// Component label of x. Creates a label on first use for leaf slots that the
/// connectivity phase left undefined.
std::uint32_t label_of(LabelingState& st, std::span<const double> x);

/// Exact sign of the evaluated polynomial: -1, 0 or +1.
int sign_at(const LabelingState& st, std::span<const double> x);

}  // namespace ccl
