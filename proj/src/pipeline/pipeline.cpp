#include "dforge/pipeline/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "dforge/degradation/sampler.hpp"
#include "dforge/error.hpp"
#include "dforge/pipeline/blur_kernels.hpp"
#include "dforge/pipeline/filter.hpp"
#include "dforge/pipeline/jpeg.hpp"
#include "dforge/pipeline/noise.hpp"
#include "dforge/pipeline/resize.hpp"

namespace dforge {

int PipelineTrace::stage_count() const {
    int stages = 0;
    for (const auto& r : records) stages = std::max(stages, r.stage);
    return stages;
}

namespace {

class Runner {
public:
    Runner(Image img, std::uint64_t seed) : img_(std::move(img)), rng_(seed) {}

    void record(int stage, std::string op, const std::string& params) {
        trace_.records.push_back({stage, std::move(op), params, img_.height(), img_.width()});
    }

    void blur(int stage, const BlurSpec& b) {
        img_ = convolve(img_, gaussian_kernel(b.kernel_half, b.sigma1, b.sigma2, b.theta));
        std::ostringstream os;
        os << "size=" << 2 * b.kernel_half + 1 << " sigma1=" << b.sigma1 << " sigma2=" << b.sigma2
           << " theta=" << b.theta;
        record(stage, "blur", os.str());
    }

    void sinc(int stage, const BlurSpec& b) {
        img_ = convolve(img_, sinc_kernel(b.sinc_half, b.omega_c));
        std::ostringstream os;
        os << "size=" << 2 * b.sinc_half + 1 << " omega_c=" << b.omega_c;
        record(stage, "sinc", os.str());
    }

    void resize_by(int stage, const ResizeSpec& r) {
        img_ = resize(img_, r.scale, r.mode);
        std::ostringstream os;
        os << "scale=" << r.scale << " mode=" << to_string(r.mode);
        record(stage, "resize", os.str());
    }

    void noise(int stage, const NoiseSpec& n) {
        img_ = n.kind == NoiseKind::gaussian ? add_gaussian_noise(img_, n.level, n.gray, rng_)
                                             : add_poisson_noise(img_, n.level, n.gray, rng_);
        std::ostringstream os;
        os << "kind=" << to_string(n.kind) << " level=" << n.level << " gray=" << (n.gray ? 1 : 0);
        record(stage, "noise", os.str());
    }

    void jpeg(int stage, int quality) {
        img_ = jpeg_roundtrip(img_, quality);
        record(stage, "jpeg", "quality=" + std::to_string(quality) + " subsampling=4:2:0");
    }

    void final_resize(int stage, int height, int width, ResizeMode mode) {
        img_ = resize_to(img_, height, width, mode);
        record(stage, "final_resize", std::string("mode=") + std::string(to_string(mode)));
    }

    Image& image() { return img_; }
    PipelineResult finish() && { return {std::move(img_), std::move(trace_)}; }

private:
    Image img_;
    Rng rng_;
    PipelineTrace trace_;
};

}  // namespace

PipelineResult run_pipeline(const Image& hr, const DegradationParams& p) {
    if (p.stage2.has_value() != (p.level == Level::S3)) {
        throw Error(ErrorCode::invalid_input, "second stage must be present exactly for S3");
    }
    const int crop_h = hr.height() / 4 * 4;
    const int crop_w = hr.width() / 4 * 4;
    if (crop_h == 0 || crop_w == 0) throw Error(ErrorCode::dimension, "HR image must be at least 4x4");

    const bool crop = crop_h != hr.height() || crop_w != hr.width();
    Runner run(crop ? center_crop(hr, crop_h, crop_w) : hr, p.rng_seed);
    if (crop) {
        run.record(0, "crop", "from=" + std::to_string(hr.height()) + "x" + std::to_string(hr.width()));
    }
    const int lr_h = crop_h / 4;
    const int lr_w = crop_w / 4;

    const StageSpec& s1 = p.stage1;
    if (s1.blur.active) run.blur(1, s1.blur);
    run.resize_by(1, s1.resize);
    run.noise(1, s1.noise);
    run.jpeg(1, s1.jpeg.quality);

    if (!p.stage2) {
        run.final_resize(0, lr_h, lr_w, p.final_resize_mode());
        return std::move(run).finish();
    }

    const StageSpec& s2 = *p.stage2;
    if (s2.blur.active) run.blur(2, s2.blur);
    run.resize_by(2, s2.resize);
    run.noise(2, s2.noise);

    const ResizeMode mode = p.final_resize_mode();
    auto resize_and_sinc = [&] {
        run.final_resize(2, lr_h, lr_w, mode);
        if (s2.blur.sinc_active) run.sinc(2, s2.blur);
    };
    if (s2.jpeg.order.value_or(JpegOrder::resize_then_jpeg) == JpegOrder::resize_then_jpeg) {
        resize_and_sinc();
        run.jpeg(2, s2.jpeg.quality);
    } else {
        run.jpeg(2, s2.jpeg.quality);
        resize_and_sinc();
    }
    return std::move(run).finish();
}

}  // namespace dforge
