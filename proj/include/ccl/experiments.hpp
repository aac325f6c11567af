#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccl/oracle.hpp"

namespace ccl {

/// Normalization of the Legendre modes in random draws.
enum class LegendreNorm {
  Orthonormal,  // p_j scaled by sqrt((2j+1)/2)
  Classical,    // p_j(1) = 1
};

struct EnsembleConfig {
  int dim = 2;
  int count = 100;
  double omega = 0.5;
  LegendreNorm norm = LegendreNorm::Orthonormal;
  int depth_min = 1;
  int depth_max = 8;
  std::uint64_t seed = 0;
  int samples = 1000;          // random points per comparison
  int witnesses_per_label = 4; // extra points per reference component
  int reference_cap = 24;
  std::size_t reference_budget = 1u << 20;
  double tol_scale = Tolerance::kDefaultScale;
  int gap_res = 512;           // grid for gap measurement on glued cases
  std::vector<int> gap_depths; // empty: every depth
  int threads = 1;             // 0: hardware concurrency

  void validate() const;
};

/// The 4^d raw coefficients of instance `index`, uniform on [-1,1].
std::vector<double> legendre_draw(const EnsembleConfig& cfg, std::uint64_t index);

BernsteinPoly random_poly(const EnsembleConfig& cfg, std::uint64_t index);

struct SweepRow {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  int max_depth = 0;
  std::optional<Outcome> outcome;  // nullopt: reference did not certify
  int depth_used = 0;
  std::optional<GapReport> gap;
};

struct OutcomeTally {
  int max_depth = 0;
  std::size_t certified = 0;
  std::size_t uncertain = 0;
  std::size_t glued = 0;
  std::size_t excluded = 0;

  std::size_t total() const { return certified + uncertain + glued; }
  double rho_eq() const;
  double rho_ok() const;
  double rho_glued() const;
};

struct SweepResult {
  EnsembleConfig config;
  std::vector<SweepRow> rows;  // ordered by index, then depth
  std::vector<OutcomeTally> tallies;
  std::map<int, GapSummary> gaps;

  const OutcomeTally& tally(int max_depth) const;
};

/// Builds, classifies against a reference run and tallies every instance at
/// every depth. Throws BrokenComponentError (with the instance in the
/// message) if any labeling splits a component.
SweepResult sweep(const EnsembleConfig& cfg,
                  const std::function<void(std::size_t done)>& progress = {});

/// One row per instance and depth.
void write_csv(std::ostream& os, const SweepResult& result);
/// Per-depth percentages and gap quartiles.
void write_summary(std::ostream& os, const SweepResult& result);

/// Up to `per_label` points for every label of a labeling, probing each
/// leaf at its center and quarter points.
std::vector<Point> label_witnesses(LabelingState& st, int per_label);

struct RegressionCase {
  std::string name;
  std::string formula;
  BernsteinPoly phi = BernsteinPoly::scalar(0.0);
  int max_depth = 6;
  Outcome expected = Outcome::UncertainExact;
  /// Expected number of distinct labels per sign, when pinned down.
  std::optional<int> expected_neg_labels;
  std::optional<int> expected_pos_labels;
  /// Analytic component id of a point; empty means use the grid oracle.
  ReferenceLabeler reference;
  std::string note;
};

std::vector<RegressionCase> regression_corpus();

struct RegressionResult {
  Outcome outcome = Outcome::UncertainExact;
  bool certified = false;
  std::size_t uncertain_leaves = 0;
  int neg_labels = 0;
  int pos_labels = 0;
  PartitionComparison comparison;

  bool matches(const RegressionCase& c) const;
};

RegressionResult run_regression(const RegressionCase& c, int samples = 20000,
                                std::uint64_t seed = 1);

}  // namespace ccl
