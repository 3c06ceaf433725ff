#include "dforge/moe/expert_bank.hpp"

#include "dforge/error.hpp"
#include "dforge/simd/kernels.hpp"
#include "dforge/util/checksum.hpp"

namespace dforge {

ExpertBank::ExpertBank(std::vector<TensorMap> experts) : experts_(std::move(experts)) {
    if (experts_.empty()) throw Error(ErrorCode::shape_mismatch, "expert bank needs at least one expert");
    for (std::size_t i = 1; i < experts_.size(); ++i) {
        if (auto name = experts_[0].first_mismatch(experts_[i])) {
            throw Error(ErrorCode::shape_mismatch,
                        "expert " + std::to_string(i) + " is incongruent with expert 0 at tensor " + *name);
        }
    }
}

std::uint64_t ExpertBank::fingerprint() const noexcept {
    util::Checksum64 h;
    for (const auto& e : experts_) {
        const auto f = e.fingerprint();
        h.update(&f, sizeof f);
    }
    return h.digest();
}

TensorMap mix_params(const ExpertBank& bank, std::span<const double> a) {
    if (static_cast<int>(a.size()) != bank.size()) {
        throw Error(ErrorCode::shape_mismatch, "weighting vector has " + std::to_string(a.size()) +
                                                   " entries for " + std::to_string(bank.size()) + " experts");
    }
    const auto& simd = simd::kernels();
    TensorMap out;
    for (const Tensor& proto : bank.expert(0).entries()) {
        Tensor mixed{proto.name, proto.shape, std::vector<float>(proto.values.size(), 0.0f)};
        for (int i = 0; i < bank.size(); ++i) {
            const Tensor& src = bank.expert(i).at(proto.name);
            simd.axpy_f32(mixed.values.data(), src.values.data(), static_cast<float>(a[i]), src.values.size());
        }
        out.add(std::move(mixed));
    }
    return out;
}

}  // namespace dforge
