#pragma once

#include <string>
#include <vector>

#include "dforge/degradation/params.hpp"
#include "dforge/image.hpp"

namespace dforge {

struct TraceRecord {
    int stage = 0;  // 1 or 2; 0 for crop and final resize
    std::string operation;
    std::string parameters;
    int height = 0;
    int width = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct PipelineTrace {
    std::vector<TraceRecord> records;

    int stage_count() const;
};

struct PipelineResult {
    Image lr;
    PipelineTrace trace;
};

// HR -> LR at exactly 1/4 size. Inputs whose sides are not multiples of 4
// are center-cropped first. Randomness comes only from params.rng_seed.
PipelineResult run_pipeline(const Image& hr, const DegradationParams& params);

}  // namespace dforge
