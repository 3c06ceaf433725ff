#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dforge/engine/model.hpp"
#include "dforge/image.hpp"

namespace dforge {

struct SuperResolveResult {
    Image sr;
    std::vector<double> v_hat;  // predicted (or overridden) degradation vector
    std::vector<double> a;      // expert weights
};

// Predicted normalized degradation vector for an LR image (33 entries,
// unconstrained).
std::vector<double> predict_degradation(const Image& lr, const TensorMap& predictor);

// Predict, weight, mix the experts once, run one expert forward pass.
// With override_v the predictor is skipped and that vector is used instead.
SuperResolveResult super_resolve(const Image& lr, const ExpertBank& bank, const TensorMap& predictor,
                                 const WeightingNet& weighting,
                                 std::optional<std::span<const double>> override_v = std::nullopt);

SuperResolveResult super_resolve(const Image& lr, const Model& model,
                                 std::optional<std::span<const double>> override_v = std::nullopt);

}  // namespace dforge
