#pragma once

#include "json.hpp"
#include <stdexcept>

#include "ccl/experiments.hpp"
#include "ccl/labeling.hpp"

namespace ccl {

/// Malformed or unsupported input documents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDimension = 4;

/// Polynomial document:
///   {"dim": d, "degree": [n_1..n_d], "box": [[lo,hi],..],
///    "basis": "bernstein" | "power" | "legendre", "coeffs": [...]}
/// Coefficients are flat with the first axis fastest. Legendre input is the
/// classical degree-3 tensor on [-1,1]^d (optional "omega", default 1).
BernsteinPoly poly_from_json(const nlohmann::json& j);
nlohmann::json poly_to_json(const BernsteinPoly& p);

/// Tree dump: polynomial, tolerance, node arena with per-leaf labels.
nlohmann::json labeling_to_json(const LabelingState& st);
LabelingState labeling_from_json(const nlohmann::json& j);

EnsembleConfig ensemble_from_json(const nlohmann::json& j);
nlohmann::json ensemble_to_json(const EnsembleConfig& cfg);

}  // namespace ccl
