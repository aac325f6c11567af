#include "ccl/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ccl {

std::string_view to_string(LeafKind kind) {
  switch (kind) {
    case LeafKind::UniformNeg: return "uniform_neg";
    case LeafKind::UniformPos: return "uniform_pos";
    case LeafKind::MixedSimplyConnected: return "mixed_sc";
    case LeafKind::NotSimplyConnected: return "not_sc";
  }
  return "?";
}

LeafKind leaf_kind_from_string(std::string_view s) {
  if (s == "uniform_neg") return LeafKind::UniformNeg;
  if (s == "uniform_pos") return LeafKind::UniformPos;
  if (s == "mixed_sc") return LeafKind::MixedSimplyConnected;
  if (s == "not_sc") return LeafKind::NotSimplyConnected;
  throw std::invalid_argument("unknown leaf kind: " + std::string(s));
}

SubdivTree::SubdivTree(HyperRect domain, int max_depth, std::vector<TreeNode> nodes)
    : domain_(std::move(domain)), max_depth_(max_depth), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("SubdivTree: no nodes");
  const std::size_t fanout = std::size_t{1} << domain_.dim();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    TreeNode& n = nodes_[i];
    if (n.is_leaf()) {
      n.leaf = static_cast<std::int32_t>(leaves_.size());
      leaves_.push_back(static_cast<std::int32_t>(i));
    } else {
      n.leaf = -1;
      if (static_cast<std::size_t>(n.first_child) + fanout > nodes_.size() ||
          static_cast<std::size_t>(n.first_child) <= i) {
        throw std::invalid_argument("SubdivTree: child index out of range");
      }
    }
  }
}

std::size_t SubdivTree::leaf_count(LeafKind kind) const {
  return static_cast<std::size_t>(std::count_if(leaves_.begin(), leaves_.end(), [&](std::int32_t i) {
    return nodes_[i].kind == kind;
  }));
}

int SubdivTree::depth_used() const {
  int d = 0;
  for (std::int32_t i : leaves_) d = std::max<int>(d, nodes_[i].depth);
  return d;
}

std::int32_t SubdivTree::locate(std::span<const double> x) const {
  std::int32_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const HyperRect& b = nodes_[i].box;
    std::int32_t code = 0;
    for (int k = 0; k < b.dim(); ++k) {
      if (x[k] > b.mid(k)) code |= 1 << k;
    }
    i = nodes_[i].first_child + code;
  }
  return i;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Tolerance& tol, const BuildOptions& options, int dim)
      : tol_(tol), options_(options), fanout_(std::size_t{1} << dim) {}

  std::vector<TreeNode> run(const BernsteinPoly& p) {
    nodes_.push_back(TreeNode{p.box()});
    visit(0, p, 0);
    return std::move(nodes_);
  }

  bool exhausted() const { return exhausted_; }

 private:
  void visit(std::int32_t index, const BernsteinPoly& p, int depth) {
    const SignSet s = sign_eval(p, tol_);
    if (s == SignSet::positive()) {
      nodes_[index].kind = LeafKind::UniformPos;
      return;
    }
    if (s == SignSet::negative()) {
      nodes_[index].kind = LeafKind::UniformNeg;
      return;
    }
    if (monotone_with_simple_faces(p, tol_)) {
      nodes_[index].kind = LeafKind::MixedSimplyConnected;
      return;
    }
    if (depth >= options_.max_depth) {
      nodes_[index].kind = LeafKind::NotSimplyConnected;
      return;
    }
    if (options_.node_budget != 0 && nodes_.size() + fanout_ > options_.node_budget) {
      nodes_[index].kind = LeafKind::NotSimplyConnected;
      exhausted_ = true;
      return;
    }
    auto children = split_poly(p);
    const auto first = static_cast<std::int32_t>(nodes_.size());
    nodes_[index].first_child = first;
    for (const auto& c : children) {
      TreeNode n{c.box()};
      n.depth = static_cast<std::uint8_t>(depth + 1);
      nodes_.push_back(std::move(n));
    }
    for (std::size_t c = 0; c < children.size(); ++c) {
      visit(first + static_cast<std::int32_t>(c), children[c], depth + 1);
    }
  }

  const Tolerance& tol_;
  BuildOptions options_;
  std::size_t fanout_;
  std::vector<TreeNode> nodes_;
  bool exhausted_ = false;
};

HyperRect shared_face(const HyperRect& a, const HyperRect& b, int axis) {
  std::vector<double> lo;
  std::vector<double> hi;
  for (int k = 0; k < a.dim(); ++k) {
    if (k == axis) continue;
    lo.push_back(std::max(a.lo(k), b.lo(k)));
    hi.push_back(std::min(a.hi(k), b.hi(k)));
  }
  if (lo.empty()) return HyperRect{};
  return HyperRect(std::move(lo), std::move(hi));
}

class AdjacencyWalker {
 public:
  explicit AdjacencyWalker(const SubdivTree& tree) : tree_(tree), dim_(tree.dim()) {}

  std::vector<LeafPair> run() {
    cell(0);
    return std::move(out_);
  }

 private:
  void cell(std::int32_t i) {
    const TreeNode& n = tree_.node(i);
    if (n.is_leaf()) return;
    const std::int32_t fanout = 1 << dim_;
    for (std::int32_t c = 0; c < fanout; ++c) cell(n.first_child + c);
    for (int axis = 0; axis < dim_; ++axis) {
      const std::int32_t bit = 1 << axis;
      for (std::int32_t c = 0; c < fanout; ++c) {
        if (c & bit) continue;
        face(n.first_child + c, n.first_child + (c | bit), axis);
      }
    }
  }

  // a lies below b along axis.
  void face(std::int32_t a, std::int32_t b, int axis) {
    const TreeNode& na = tree_.node(a);
    const TreeNode& nb = tree_.node(b);
    if (na.is_leaf() && nb.is_leaf()) {
      out_.push_back(LeafPair{a, b, axis, shared_face(na.box, nb.box, axis)});
      return;
    }
    const std::int32_t fanout = 1 << dim_;
    const std::int32_t bit = 1 << axis;
    for (std::int32_t c = 0; c < fanout; ++c) {
      if (c & bit) continue;
      const std::int32_t ca = na.is_leaf() ? a : na.first_child + (c | bit);
      const std::int32_t cb = nb.is_leaf() ? b : nb.first_child + c;
      face(ca, cb, axis);
    }
  }

  const SubdivTree& tree_;
  int dim_;
  std::vector<LeafPair> out_;
};

}  // namespace

SubdivTree build_tree(const BernsteinPoly& p, int max_depth, const Tolerance& tol) {
  return build_tree(p, BuildOptions{max_depth, 0}, tol);
}

SubdivTree build_tree(const BernsteinPoly& p, const BuildOptions& options, const Tolerance& tol) {
  if (options.max_depth < 0) throw std::invalid_argument("build_tree: negative max depth");
  if (options.max_depth > 60) throw std::invalid_argument("build_tree: max depth too large");
  if (p.dim() < 1) throw std::invalid_argument("build_tree: dimension must be >= 1");
  if (p.max_abs_coeff() == 0.0) {
    throw std::invalid_argument("build_tree: degenerate input (zero polynomial)");
  }
  TreeBuilder builder(tol, options, p.dim());
  SubdivTree tree(p.box(), options.max_depth, builder.run(p));
  tree.budget_exhausted = builder.exhausted();
  return tree;
}

std::vector<LeafPair> leaf_adjacency(const SubdivTree& tree) { return AdjacencyWalker(tree).run(); }

BernsteinPoly shared_face_poly(const SubdivTree& tree, const BernsteinPoly& p,
                               const LeafPair& pair) {
  const TreeNode& a = tree.node(pair.lower);
  const TreeNode& b = tree.node(pair.upper);
  if (a.depth >= b.depth) {
    return restrict_to_face(restrict_to_box(p, a.box), {pair.axis, Side::Upper});
  }
  return restrict_to_face(restrict_to_box(p, b.box), {pair.axis, Side::Lower});
}

LabelStore::LabelStore(std::size_t leaf_count)
    : parent_(2 * leaf_count),
      size_(2 * leaf_count, 1),
      labels_(std::make_unique<std::atomic<std::uint32_t>[]>(2 * leaf_count)) {
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    parent_[i] = static_cast<std::uint32_t>(i);
    labels_[i].store(0, std::memory_order_relaxed);
  }
}

LabelStore::LabelStore(LabelStore&& other) noexcept
    : parent_(std::move(other.parent_)),
      size_(std::move(other.size_)),
      labels_(std::move(other.labels_)),
      next_(other.next_.load()) {}

LabelStore& LabelStore::operator=(LabelStore&& other) noexcept {
  parent_ = std::move(other.parent_);
  size_ = std::move(other.size_);
  labels_ = std::move(other.labels_);
  next_.store(other.next_.load());
  return *this;
}

LabelStore LabelStore::from_labels(std::span<const std::uint32_t> slot_labels,
                                   std::uint32_t next_label) {
  if (slot_labels.size() % 2 != 0) throw std::invalid_argument("LabelStore: odd slot count");
  LabelStore store(slot_labels.size() / 2);
  std::vector<std::int64_t> first_with(next_label, -1);
  for (std::size_t s = 0; s < slot_labels.size(); ++s) {
    const std::uint32_t l = slot_labels[s];
    if (l == 0) continue;
    if (l >= next_label) throw std::invalid_argument("LabelStore: label exceeds counter");
    store.labels_[s].store(l, std::memory_order_relaxed);
    if (first_with[l] < 0) {
      first_with[l] = static_cast<std::int64_t>(s);
    } else {
      store.unite(static_cast<std::size_t>(first_with[l]), s);
    }
  }
  store.next_.store(next_label);
  return store;
}

std::uint32_t LabelStore::find(std::size_t s) {
  std::uint32_t root = static_cast<std::uint32_t>(s);
  while (parent_[root] != root) root = parent_[root];
  auto cur = static_cast<std::uint32_t>(s);
  while (parent_[cur] != root) {
    const std::uint32_t next = parent_[cur];
    parent_[cur] = root;
    cur = next;
  }
  return root;
}

bool LabelStore::unite(std::size_t a, std::size_t b) {
  std::uint32_t ra = find(a);
  std::uint32_t rb = find(b);
  if (ra == rb) return false;
  if (size_[ra] < size_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  return true;
}

void LabelStore::assign_labels() {
  std::vector<std::uint32_t> root_label(parent_.size(), 0);
  for (std::size_t s = 0; s < parent_.size(); ++s) {
    const std::uint32_t r = find(s);
    if (size_[r] < 2) continue;
    if (root_label[r] == 0) root_label[r] = next_.fetch_add(1);
    labels_[s].store(root_label[r], std::memory_order_release);
  }
}

std::uint32_t LabelStore::label_or_create(std::size_t s) {
  std::uint32_t current = labels_[s].load(std::memory_order_acquire);
  if (current != 0) return current;
  const std::uint32_t fresh = next_.fetch_add(1);
  if (labels_[s].compare_exchange_strong(current, fresh, std::memory_order_acq_rel)) return fresh;
  return current;
}

std::vector<std::uint32_t> LabelStore::labels() const {
  std::vector<std::uint32_t> out(parent_.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = label(s);
  return out;
}

LabelStore build_connectivity(const SubdivTree& tree, const BernsteinPoly& p,
                              const Tolerance& tol, ConnectivityOptions options) {
  LabelStore store(tree.leaf_count());
  for (const LeafPair& pair : leaf_adjacency(tree)) {
    const TreeNode& a = tree.node(pair.lower);
    const TreeNode& b = tree.node(pair.upper);
    const std::size_t neg_a = LabelStore::slot(a.leaf, Polarity::Neg);
    const std::size_t neg_b = LabelStore::slot(b.leaf, Polarity::Neg);
    const std::size_t pos_a = LabelStore::slot(a.leaf, Polarity::Pos);
    const std::size_t pos_b = LabelStore::slot(b.leaf, Polarity::Pos);
    bool want_neg = has_slot(a.kind, Polarity::Neg) && has_slot(b.kind, Polarity::Neg);
    bool want_pos = has_slot(a.kind, Polarity::Pos) && has_slot(b.kind, Polarity::Pos);

    if (options.use_cache) {
      if (want_neg && store.connected(neg_a, neg_b)) want_neg = false;
      if (want_pos && store.connected(pos_a, pos_b)) want_pos = false;
      if (!want_neg && !want_pos) continue;
      // A uniformly signed cell certifies that sign on the whole shared face.
      const bool uniform_a = a.kind == LeafKind::UniformNeg || a.kind == LeafKind::UniformPos;
      const bool uniform_b = b.kind == LeafKind::UniformNeg || b.kind == LeafKind::UniformPos;
      if (uniform_a || uniform_b) {
        if (want_neg) store.unite(neg_a, neg_b);
        if (want_pos) store.unite(pos_a, pos_b);
        continue;
      }
    } else if (!want_neg && !want_pos) {
      continue;
    }

    const SignSet s = sign_eval(shared_face_poly(tree, p, pair), tol);
    if (want_neg && s.has_negative()) store.unite(neg_a, neg_b);
    if (want_pos && s.has_positive()) store.unite(pos_a, pos_b);
  }
  store.assign_labels();
  return store;
}

std::optional<std::uint16_t> compact_node_bits(const SubdivTree& tree, const LabelStore& store,
                                               std::int32_t node) {
  const TreeNode& n = tree.node(node);
  if (!n.is_leaf()) {
    if (n.first_child >= (1 << 15)) return std::nullopt;
    return static_cast<std::uint16_t>(n.first_child);
  }
  const std::uint32_t neg = store.label(LabelStore::slot(n.leaf, Polarity::Neg));
  const std::uint32_t pos = store.label(LabelStore::slot(n.leaf, Polarity::Pos));
  if (neg > 63 || pos > 63) return std::nullopt;
  return static_cast<std::uint16_t>((1u << 15) | (static_cast<unsigned>(n.kind) << 12) |
                                    (pos << 6) | neg);
}

}  // namespace ccl
