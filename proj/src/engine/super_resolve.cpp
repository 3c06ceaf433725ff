#include "dforge/engine/super_resolve.hpp"

#include <cmath>
#include <string>

#include "dforge/degradation/schema.hpp"
#include "dforge/engine/forward.hpp"
#include "dforge/engine/topology.hpp"
#include "dforge/error.hpp"

namespace dforge {

std::vector<double> predict_degradation(const Image& lr, const TensorMap& predictor) {
    auto v = forward_vector(predictor_topology(), predictor, lr);
    if (v.size() != static_cast<std::size_t>(vector_size)) {
        throw Error(ErrorCode::topology_mismatch, "predictor produced " + std::to_string(v.size()) + " values");
    }
    return v;
}

SuperResolveResult super_resolve(const Image& lr, const ExpertBank& bank, const TensorMap& predictor,
                                 const WeightingNet& weighting, std::optional<std::span<const double>> override_v) {
    SuperResolveResult out;
    if (override_v) {
        if (override_v->size() != static_cast<std::size_t>(vector_size)) {
            throw Error(ErrorCode::invalid_input, "override vector must have " + std::to_string(vector_size) +
                                                      " entries, got " + std::to_string(override_v->size()));
        }
        for (double x : *override_v) {
            if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, "override vector has a non-finite entry");
        }
        out.v_hat.assign(override_v->begin(), override_v->end());
    } else {
        out.v_hat = predict_degradation(lr, predictor);
    }
    out.a = compute_weights(out.v_hat, weighting);
    if (static_cast<int>(out.a.size()) != bank.size()) {
        throw Error(ErrorCode::topology_mismatch, "weighting net emits " + std::to_string(out.a.size()) +
                                                      " weights for " + std::to_string(bank.size()) + " experts");
    }
    const TensorMap mixed = mix_params(bank, out.a);
    out.sr = forward_image(expert_topology(), mixed, lr);
    return out;
}

SuperResolveResult super_resolve(const Image& lr, const Model& model, std::optional<std::span<const double>> override_v) {
    return super_resolve(lr, model.bank, model.predictor, model.weighting, override_v);
}

}  // namespace dforge
