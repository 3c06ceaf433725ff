#pragma once

#include <array>

#include "dforge/degradation/params.hpp"
#include "dforge/degradation/schema.hpp"

namespace dforge {

using DegradationVector = std::array<double, vector_size>;

// Values below this in a slot group mark the group as inactive on decode.
inline constexpr double activity_threshold = 1e-6;

double normalize(double value, const Range& range) noexcept;
double denormalize(double unit, const Range& range) noexcept;

// Moves every continuous field to the nearest fixed point of
// denormalize(normalize(.)) so the encode/decode pair is exactly invertible.
void canonicalize(DegradationParams& params, const GlobalRanges& ranges);

// Throws RangeError naming the field when a value lies outside the global
// ranges. Inactive slots are written as exact zeros.
DegradationVector encode(const DegradationParams& params, const GlobalRanges& ranges);
DegradationVector encode(const DegradationParams& params);

// One-hot groups are read by argmax. Throws Error(invalid_vector) on
// non-finite or out-of-[0,1] entries. The level is not encoded: stage-two
// activity implies S3, otherwise the tightest of S1/S2 whose stage-one
// ranges admit the values, falling back to S1.
DegradationParams decode(const DegradationVector& v, const DegradationSchema& schema);
DegradationParams decode(const DegradationVector& v);

// Verifies one-hot groups and zero padding; returns false instead of throwing.
bool is_well_formed(const DegradationVector& v);

}  // namespace dforge
