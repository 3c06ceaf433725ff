#include "dforge/metrics/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dforge/error.hpp"

namespace dforge {

namespace {

void require_same_size(const Image& a, const Image& b, const char* what) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw Error(ErrorCode::dimension, std::string(what) + ": image sizes differ (" + std::to_string(a.height()) +
                                              "x" + std::to_string(a.width()) + " vs " + std::to_string(b.height()) +
                                              "x" + std::to_string(b.width()) + ")");
    }
}

}  // namespace

double luma(double r, double g, double b) noexcept { return 0.299 * r + 0.587 * g + 0.114 * b; }

double psnr_y(const Image& a, const Image& b, double peak) {
    require_same_size(a, b, "psnr_y");
    if (!(peak > 0.0)) throw Error(ErrorCode::invalid_input, "psnr_y: peak must be positive");
    double sum = 0.0;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            const double d = luma(a.at(0, y, x), a.at(1, y, x), a.at(2, y, x)) -
                             luma(b.at(0, y, x), b.at(1, y, x), b.at(2, y, x));
            sum += d * d;
        }
    }
    const double mse = sum / (static_cast<double>(a.height()) * a.width());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

double regression_loss(std::span<const double> predicted, std::span<const double> target) {
    if (predicted.size() != target.size()) {
        throw Error(ErrorCode::invalid_input, "regression_loss: lengths differ (" + std::to_string(predicted.size()) +
                                                  " vs " + std::to_string(target.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (!std::isfinite(predicted[i]) || !std::isfinite(target[i])) {
            throw Error(ErrorCode::invalid_input, "regression_loss: non-finite entry at " + std::to_string(i));
        }
        sum += std::abs(predicted[i] - target[i]);
    }
    return sum;
}

double pixel_loss(const Image& output, const Image& target) {
    require_same_size(output, target, "pixel_loss");
    const auto& p = output.data();
    const auto& q = target.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return sum / static_cast<double>(p.size());
}

double total_loss(double pixel, double regression, double perceptual, double adversarial, const LossWeights& w) {
    if (w.regression < 0.0 || w.perceptual < 0.0 || w.adversarial < 0.0) {
        throw Error(ErrorCode::invalid_input, "total_loss: loss weights must be non-negative");
    }
    for (double c : {pixel, regression, perceptual, adversarial}) {
        if (!std::isfinite(c)) throw Error(ErrorCode::invalid_input, "total_loss: non-finite component");
    }
    return pixel + w.regression * regression + w.perceptual * perceptual + w.adversarial * adversarial;
}

}  // namespace dforge
