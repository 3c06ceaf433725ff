#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dforge/degradation/codec.hpp"
#include "dforge/degradation/params.hpp"
#include "dforge/degradation/schema.hpp"
#include "dforge/pipeline/pipeline.hpp"

namespace dforge {

using Json = nlohmann::ordered_json;

Json params_to_json(const DegradationParams& params);
// Throws Error(invalid_input) whose message starts with the offending field.
DegradationParams params_from_json(const Json& j);

Json trace_to_json(const PipelineTrace& trace);

// Slot layout with per-slot normalization ranges, plus global ranges and
// sampling probabilities.
Json schema_to_json(const DegradationSchema& schema);

Json vector_to_json(std::span<const double> v);
// Reads an array of exactly `size` finite numbers from j; `field` names the
// source in error messages.
std::vector<double> vector_from_json(const Json& j, std::string_view field, std::size_t size = vector_size);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws Error(invalid_input) on characters outside the standard alphabet.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace dforge
