#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ccl/bernstein.hpp"
#include "ccl/range_sign.hpp"

namespace ccl {

enum class LeafKind : std::uint8_t {
  UniformNeg = 0,
  UniformPos = 1,
  MixedSimplyConnected = 2,
  NotSimplyConnected = 3,
};

std::string_view to_string(LeafKind kind);
LeafKind leaf_kind_from_string(std::string_view s);

enum class Polarity : std::uint8_t { Neg = 0, Pos = 1 };

/// Whether a leaf of this kind can hold points of the given sign.
constexpr bool has_slot(LeafKind kind, Polarity pol) {
  return pol == Polarity::Neg ? kind != LeafKind::UniformPos : kind != LeafKind::UniformNeg;
}

struct TreeNode {
  HyperRect box;
  std::int32_t first_child = -1;  // children are contiguous, 2^d of them
  std::int32_t leaf = -1;         // index among leaves; -1 for internal nodes
  std::uint8_t depth = 0;
  LeafKind kind = LeafKind::NotSimplyConnected;

  bool is_leaf() const { return first_child < 0; }
};

/// 2^d-ary subdivision tree over the constraint box. Nodes live in an arena in
/// creation (depth-first) order; the root is node 0.
class SubdivTree {
 public:
  SubdivTree(HyperRect domain, int max_depth, std::vector<TreeNode> nodes);

  int dim() const { return domain_.dim(); }
  const HyperRect& domain() const { return domain_; }
  int max_depth() const { return max_depth_; }
  std::span<const TreeNode> nodes() const { return nodes_; }
  const TreeNode& node(std::int32_t i) const { return nodes_[i]; }
  /// Node index of each leaf, by leaf index.
  std::span<const std::int32_t> leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t leaf_count(LeafKind kind) const;

  /// True iff no leaf is NotSimplyConnected.
  bool certified() const { return leaf_count(LeafKind::NotSimplyConnected) == 0; }
  int depth_used() const;

  /// Leaf node containing x; at an exact midpoint the lower child is taken.
  std::int32_t locate(std::span<const double> x) const;

  /// Set when a node budget stopped refinement before max_depth.
  bool budget_exhausted = false;

 private:
  HyperRect domain_;
  int max_depth_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<std::int32_t> leaves_;
};

struct BuildOptions {
  int max_depth = 8;
  /// Upper bound on the node count; 0 means unlimited. Nodes that would exceed
  /// it become NotSimplyConnected leaves.
  std::size_t node_budget = 0;
};

SubdivTree build_tree(const BernsteinPoly& p, int max_depth, const Tolerance& tol);
SubdivTree build_tree(const BernsteinPoly& p, const BuildOptions& options, const Tolerance& tol);

/// Two leaves meeting in a (d-1)-dimensional face, `lower` below `upper`
/// along `axis`. `face` is their intersection with `axis` removed.
struct LeafPair {
  std::int32_t lower = -1;
  std::int32_t upper = -1;
  int axis = 0;
  HyperRect face;
};

std::vector<LeafPair> leaf_adjacency(const SubdivTree& tree);

/// Restriction of p to the face shared by a pair, taken on the finer leaf.
BernsteinPoly shared_face_poly(const SubdivTree& tree, const BernsteinPoly& p,
                               const LeafPair& pair);

/// Disjoint sets over leaf slots (leaf x {neg, pos}) plus the label assigned
/// to each slot. Label 0 means undefined; ids come from one counter shared by
/// both polarities. Lazy creation through label_or_create is safe to call
/// concurrently; everything else requires exclusive access.
class LabelStore {
 public:
  LabelStore() = default;
  explicit LabelStore(std::size_t leaf_count);
  LabelStore(LabelStore&& other) noexcept;
  LabelStore& operator=(LabelStore&& other) noexcept;

  /// Rebuilds a store from per-slot labels; slots sharing a label are united.
  static LabelStore from_labels(std::span<const std::uint32_t> slot_labels,
                                std::uint32_t next_label);

  static std::size_t slot(std::int32_t leaf, Polarity pol) {
    return 2 * static_cast<std::size_t>(leaf) + static_cast<std::size_t>(pol);
  }
  std::size_t slot_count() const { return parent_.size(); }

  std::uint32_t find(std::size_t s);
  bool unite(std::size_t a, std::size_t b);
  bool connected(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::uint32_t set_size(std::size_t s) { return size_[find(s)]; }

  /// Gives every set with at least two slots a fresh label, in slot order.
  void assign_labels();

  std::uint32_t label(std::size_t s) const { return labels_[s].load(std::memory_order_acquire); }
  std::uint32_t label_or_create(std::size_t s);
  std::uint32_t next_label() const { return next_.load(std::memory_order_acquire); }
  std::vector<std::uint32_t> labels() const;

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> labels_;
  std::atomic<std::uint32_t> next_{1};
};

struct ConnectivityOptions {
  /// Reuse leaf kinds to skip face evaluations; results are identical.
  bool use_cache = true;
};

LabelStore build_connectivity(const SubdivTree& tree, const BernsteinPoly& p,
                              const Tolerance& tol, ConnectivityOptions options = {});

/// The 16-bit node layout: bit 15 set for leaves. Internal nodes keep the
/// first child index in bits 0-14; leaves keep the kind in bits 12-13, the
/// positive label in bits 6-11 and the negative label in bits 0-5. Returns
/// nullopt when a field does not fit (child index >= 2^15 or label > 63).
std::optional<std::uint16_t> compact_node_bits(const SubdivTree& tree, const LabelStore& store,
                                               std::int32_t node);

}  // namespace ccl
