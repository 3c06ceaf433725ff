#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dforge {

enum class ErrorCode {
    range_violation,
    invalid_vector,
    domain,
    dimension,
    shape_mismatch,
    numeric_fault,
    invalid_input,
    corrupt_weights,
    topology_mismatch,
    io,
    usage,
    no_weights,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised when a structured field lies outside its allowed range. field()
// names the offending entry (e.g. "stage1.blur.sigma1").
class RangeError : public Error {
public:
    RangeError(std::string field, const std::string& message)
        : Error(ErrorCode::range_violation, message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace dforge
