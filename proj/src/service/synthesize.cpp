#include "dforge/service/synthesize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>

#include <tbb/parallel_for.h>

#include "dforge/degradation/sampler.hpp"
#include "dforge/error.hpp"
#include "dforge/image.hpp"
#include "dforge/pipeline/pipeline.hpp"
#include "dforge/service/json_io.hpp"

namespace dforge {

namespace fs = std::filesystem;

namespace {

bool has_image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::io, "not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Job {
    std::size_t image = 0;
    Level level = Level::S1;
    int copy = 0;
    std::uint64_t seed = 0;
};

}  // namespace

std::string manifest_line(const ManifestRecord& r) {
    Json j = {{"hr_path", r.hr_path},
              {"lr_path", r.lr_path},
              {"level", to_string(r.level)},
              {"seed", r.seed},
              {"v", vector_to_json(r.v)}};
    return j.dump();
}

SynthesisSummary synthesize_dataset(const fs::path& hr_dir, const fs::path& out_dir, const SynthesisOptions& options) {
    if (options.per_level_count < 0) throw Error(ErrorCode::usage, "per-level count must be non-negative");
    const DegradationSchema& schema = options.schema ? *options.schema : default_schema();
    const auto images = list_images(hr_dir);
    if (images.empty()) throw Error(ErrorCode::io, "no PNG or JPEG images in " + hr_dir.string());

    fs::create_directories(out_dir / "lr");

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (Level level : {Level::S1, Level::S2, Level::S3}) {
            for (int k = 0; k < options.per_level_count; ++k) {
                jobs.push_back({i, level, k, options.base_seed + jobs.size()});
            }
        }
    }

    // Decode each HR image once; failures become warnings.
    std::vector<std::optional<Image>> hr(images.size());
    std::vector<std::string> load_errors(images.size());
    if (!jobs.empty()) {
        tbb::parallel_for(std::size_t{0}, images.size(), [&](std::size_t i) {
            try {
                hr[i] = read_image(images[i]);
            } catch (const std::exception& e) {
                load_errors[i] = e.what();
            }
        });
    }

    std::vector<std::optional<ManifestRecord>> results(jobs.size());
    std::vector<std::string> job_errors(jobs.size());
    tbb::parallel_for(std::size_t{0}, jobs.size(), [&](std::size_t n) {
        const Job& job = jobs[n];
        if (!hr[job.image]) return;
        try {
            Rng rng(job.seed);
            const DegradationParams params = sample_params(schema, job.level, rng);
            const PipelineResult res = run_pipeline(*hr[job.image], params);
            ManifestRecord rec;
            rec.hr_path = images[job.image].string();
            rec.lr_path = (fs::path("lr") / (images[job.image].stem().string() + "_" +
                                             std::string(to_string(job.level)) + "_" + std::to_string(job.copy) +
                                             ".png"))
                              .generic_string();
            rec.level = job.level;
            rec.seed = job.seed;
            rec.v = encode(params, schema.global_ranges());
            write_png(res.lr, out_dir / rec.lr_path);
            results[n] = std::move(rec);
        } catch (const std::exception& e) {
            job_errors[n] = e.what();
        }
    });

    SynthesisSummary summary;
    summary.manifest_path = out_dir / "manifest.jsonl";
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!load_errors[i].empty()) summary.warnings.push_back("skipped " + images[i].string() + ": " + load_errors[i]);
    }
    std::ofstream manifest(summary.manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) throw Error(ErrorCode::io, "cannot write " + summary.manifest_path.string());
    for (std::size_t n = 0; n < jobs.size(); ++n) {
        if (!job_errors[n].empty()) {
            summary.warnings.push_back("failed " + images[jobs[n].image].string() + " (" +
                                       std::string(to_string(jobs[n].level)) + "): " + job_errors[n]);
        }
        if (!results[n]) continue;
        manifest << manifest_line(*results[n]) << '\n';
        summary.records.push_back(std::move(*results[n]));
    }
    if (!manifest) throw Error(ErrorCode::io, "short write to " + summary.manifest_path.string());
    return summary;
}

}  // namespace dforge
