#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "dforge/degradation/params.hpp"
#include "dforge/degradation/schema.hpp"

namespace dforge {

// Explicit per-call random stream. libstdc++'s engines and distributions are
// deterministic for a given seed, which every reproducibility guarantee
// here relies on.
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive
bool bernoulli(Rng& rng, double p);
// Index drawn from a categorical distribution.
int categorical(Rng& rng, std::span<const double> probs);

Level sample_level(const DegradationSchema& schema, Rng& rng);

// Draws a full parameter set for `level`. Continuous fields are snapped to
// the codec's fixed points so that decode(encode(p)) reproduces p exactly.
DegradationParams sample_params(const DegradationSchema& schema, Level level, Rng& rng);

// Checks every field against the level-specific ranges of `schema`.
void validate_for_level(const DegradationSchema& schema, const DegradationParams& params);

}  // namespace dforge
