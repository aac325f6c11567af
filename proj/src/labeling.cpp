#include "ccl/labeling.hpp"

namespace ccl {

LabelingState build_labeling(const BernsteinPoly& phi, int max_depth, double tol_scale) {
  return build_labeling(phi, BuildOptions{max_depth, 0}, Tolerance::from_root(phi, tol_scale));
}

LabelingState build_labeling(const BernsteinPoly& phi, const BuildOptions& options,
                             const Tolerance& tol) {
  SubdivTree tree = build_tree(phi, options, tol);
  LabelStore store = build_connectivity(tree, phi, tol);
  return LabelingState{phi, tol, std::move(tree), std::move(store)};
}

std::uint32_t label_of(LabelingState& st, std::span<const double> x) {
  if (static_cast<int>(x.size()) != st.tree.dim()) {
    throw std::invalid_argument("label_of: dimension mismatch");
  }
  if (!contains(st.tree.domain(), x)) throw OutsideDomainError("label_of: point outside domain");
  const double v = evaluate(st.phi, x);
  if (v == 0.0) throw ZeroSetError("label_of: point on the zero set");
  const TreeNode& leaf = st.tree.node(st.tree.locate(x));
  const Polarity pol = v < 0.0 ? Polarity::Neg : Polarity::Pos;
  return st.store.label_or_create(LabelStore::slot(leaf.leaf, pol));
}

int sign_at(const LabelingState& st, std::span<const double> x) {
  const double v = evaluate(st.phi, x);
  return (v > 0.0) - (v < 0.0);
}

}  // namespace ccl
