#include "dforge/error.hpp"

namespace dforge {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::range_violation: return "range_violation";
        case ErrorCode::invalid_vector: return "invalid_vector";
        case ErrorCode::domain: return "domain";
        case ErrorCode::dimension: return "dimension";
        case ErrorCode::shape_mismatch: return "shape_mismatch";
        case ErrorCode::numeric_fault: return "numeric_fault";
        case ErrorCode::invalid_input: return "invalid_input";
        case ErrorCode::corrupt_weights: return "corrupt_weights";
        case ErrorCode::topology_mismatch: return "topology_mismatch";
        case ErrorCode::io: return "io";
        case ErrorCode::usage: return "usage";
        case ErrorCode::no_weights: return "no_weights";
    }
    return "unknown";
}

}  // namespace dforge
