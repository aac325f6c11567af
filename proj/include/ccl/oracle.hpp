#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ccl/labeling.hpp"

namespace ccl {

/// Ground truth by brute force: phi sampled on a res^d lattice whose outer
/// nodes lie on the boundary of the box, and same-sign face-adjacent nodes
/// flood-filled into components. Each node owns the cell of points nearest to
/// it; "cell center" below means the node. Nodes with |phi| below the guard
/// band are indeterminate (sign 0, component -1). Sampling the boundary itself
/// keeps thin components that hug a face of the box connected.
struct GridLabeling {
  HyperRect box;
  int res = 0;
  std::vector<std::int8_t> sign;
  std::vector<std::int32_t> component;
  std::vector<std::int8_t> component_sign;

  int dim() const { return box.dim(); }
  std::size_t cell_count() const { return sign.size(); }
  int component_count() const { return static_cast<int>(component_sign.size()); }
  int component_count(int s) const;
  std::size_t cell_index(std::span<const double> x) const;
  Point cell_center(std::size_t index) const;
  double cell_diagonal() const;  // node spacing times sqrt(d)
};

/// Guard band used by the oracle and by sampled comparisons: 10 eps.
double guard_band(const Tolerance& tol);

GridLabeling oracle_labels(const BernsteinPoly& p, int res, const Tolerance& tol);

/// Maps a point of Omega to a reference component id, or nullopt where the
/// reference cannot decide.
using ReferenceLabeler = std::function<std::optional<std::int64_t>(std::span<const double>)>;

/// Grid reference: the component of the cell containing x, provided the
/// cell's sign agrees with the sign of phi(x) and no face neighbor of the cell
/// has a different sign.
ReferenceLabeler grid_reference(const GridLabeling& grid, const BernsteinPoly& p);

/// Reference backed by another labeling (e.g. a reference run).
ReferenceLabeler labeling_reference(LabelingState& st);

struct ReferenceRun {
  LabelingState state;
  bool certified = false;
  bool cap_reached = false;
  int depth_used = 0;
};

/// The labeling algorithm with a very deep depth cap. Only certified runs
/// serve as ground truth; cap_reached reports non-termination.
ReferenceRun reference_run(const BernsteinPoly& p, const Tolerance& tol, int hard_cap = 24,
                           std::size_t node_budget = 0);

enum class Outcome { CertifiedExact, UncertainExact, Glued };

std::string_view to_string(Outcome o);

/// A labeling split a reference component: the never-break guarantee failed.
class BrokenComponentError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A tree without uncertain leaves disagreed with the reference.
class CertificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Label partitions of the algorithm and the reference restricted to a point
/// sample.
struct PartitionComparison {
  std::size_t points_used = 0;
  bool finer = false;    // some reference component carries two labels
  bool coarser = false;  // some label covers two reference components
  /// Reference ids sharing one algorithm label, for every label covering two
  /// or more reference components.
  std::vector<std::vector<std::int64_t>> glued_groups;
  std::map<std::int64_t, std::vector<Point>> points_by_reference;

  bool equal() const { return !finer && !coarser; }
};

PartitionComparison compare_partitions(LabelingState& st, const ReferenceLabeler& ref,
                                       std::span<const Point> points);

/// `count` uniform points in the box from a seeded generator.
std::vector<Point> sample_points(const HyperRect& box, int count, std::uint64_t seed);

/// Center plus 2^d interior points of every leaf.
std::vector<Point> leaf_witness_points(const SubdivTree& tree);

struct Classification {
  Outcome outcome = Outcome::UncertainExact;
  PartitionComparison comparison;
  int oracle_res = 0;  // resolution that decided, for grid references
};

/// CertifiedExact for trees without uncertain leaves, otherwise decided by the
/// sampled partitions. Throws BrokenComponentError on a finer partition and
/// CertificationError when a certified tree disagrees with the reference.
Classification classify_outcome(LabelingState& st, const ReferenceLabeler& ref,
                                std::span<const Point> points);

struct OracleOptions {
  int res = 256;
  int max_res = 2048;
  int samples = 1000;
  std::uint64_t seed = 0;
};

/// classify_outcome against the grid oracle, doubling the grid resolution
/// while the partitions disagree (resolution artifacts vanish under
/// refinement; genuine disagreements persist).
Classification classify_against_oracle(LabelingState& st, const OracleOptions& options);

/// Cost of gluing point-sampled components: 0 for one component, otherwise
/// the minimum spanning tree total of the pairwise set distances.
double glue_cost(std::span<const std::vector<Point>> components);

struct GapReport {
  double e = 0.0;                       // measured gap, length units
  double smallest_cell_diagonal = 0.0;  // diagonal of a depth-Lambda cell
  double g = 0.0;                       // e / smallest_cell_diagonal
  double sampling_bias = 0.0;           // e may overestimate by up to this
};

/// Diagonal of the smallest cell at the given depth.
double smallest_cell_diagonal(const HyperRect& domain, int max_depth);

/// Measures the largest glue cost among the glued groups of a comparison.
/// Component samples are the reference-labelled nodes of a res^d lattice
/// lying on component boundaries, plus the comparison's sample points.
GapReport measure_gap(const BernsteinPoly& p, const Tolerance& tol, const ReferenceLabeler& ref,
                      const PartitionComparison& cmp, int max_depth, int res);

struct GapSummary {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Order statistics of g (linear interpolation between ranks).
GapSummary gap_statistics(std::span<const GapReport> reports);

}  // namespace ccl
