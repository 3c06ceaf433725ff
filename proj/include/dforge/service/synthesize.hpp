#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dforge/degradation/codec.hpp"
#include "dforge/degradation/schema.hpp"

namespace dforge {

struct ManifestRecord {
    std::string hr_path;
    std::string lr_path;  // relative to the output directory
    Level level = Level::S1;
    std::uint64_t seed = 0;
    DegradationVector v{};
};

struct SynthesisSummary {
    std::vector<ManifestRecord> records;
    std::vector<std::string> warnings;  // one per skipped input
    std::filesystem::path manifest_path;
};

struct SynthesisOptions {
    int per_level_count = 1;
    std::uint64_t base_seed = 0;
    const DegradationSchema* schema = nullptr;  // default_schema() when null
};

// For every HR image (sorted by file name) x level x count, record k gets
// seed base_seed + k, samples parameters from that seed, runs the pipeline
// and writes <out>/lr/<stem>_<level>_<n>.png. The manifest is
// <out>/manifest.jsonl. Unreadable images are skipped with a warning.
// Throws Error(io) when hr_dir holds no candidate images.
SynthesisSummary synthesize_dataset(const std::filesystem::path& hr_dir, const std::filesystem::path& out_dir,
                                    const SynthesisOptions& options);

std::string manifest_line(const ManifestRecord& record);

}  // namespace dforge
