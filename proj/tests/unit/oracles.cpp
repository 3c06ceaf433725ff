#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

using dforge::FeatureMap;
using dforge::Image;

namespace oracle {

Image random_image(int height, int width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Image img(height, width);
    for (double& v : img.data()) v = u(rng);
    return img;
}

FeatureMap random_features(int channels, int height, int width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    FeatureMap f(channels, height, width);
    for (float& v : f.data) v = u(rng);
    return f;
}

dforge::Tensor random_tensor(const std::string& name, dforge::Shape shape, std::uint64_t seed, double bound) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    dforge::Tensor t{name, shape, std::vector<float>(static_cast<std::size_t>(dforge::element_count(shape)))};
    for (float& v : t.values) v = static_cast<float>(u(rng));
    return t;
}

dforge::TensorMap random_params(const dforge::TensorMap& shapes, std::uint64_t seed, double bound) {
    dforge::TensorMap out;
    std::uint64_t s = seed;
    for (const auto& t : shapes.entries()) out.add(random_tensor(t.name, t.shape, s++, bound));
    return out;
}

namespace {

void normalize(std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
}

}  // namespace

std::vector<double> gaussian_grid(int half, double sigma1, double sigma2, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    // R D R^T
    const double r[2][2] = {{c, -s}, {s, c}};
    const double d[2] = {sigma1 * sigma1, sigma2 * sigma2};
    double cov[2][2] = {};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) cov[i][j] += r[i][k] * d[k] * r[j][k];
    const double det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    const double inv[2][2] = {{cov[1][1] / det, -cov[0][1] / det}, {-cov[1][0] / det, cov[0][0] / det}};
    const int size = 2 * half + 1;
    std::vector<double> w(static_cast<std::size_t>(size * size));
    for (int row = 0; row < size; ++row) {
        for (int col = 0; col < size; ++col) {
            const double x = col - half, y = row - half;
            const double q = x * (inv[0][0] * x + inv[0][1] * y) + y * (inv[1][0] * x + inv[1][1] * y);
            w[static_cast<std::size_t>(row * size + col)] = std::exp(-0.5 * q);
        }
    }
    normalize(w);
    return w;
}

std::vector<double> sinc_grid(int half, double omega_c) {
    const int size = 2 * half + 1;
    std::vector<double> w(static_cast<std::size_t>(size * size));
    for (int row = 0; row < size; ++row) {
        for (int col = 0; col < size; ++col) {
            const double r = std::hypot(double(col - half), double(row - half));
            w[static_cast<std::size_t>(row * size + col)] =
                r == 0.0 ? omega_c * omega_c / (4.0 * std::numbers::pi)
                         : omega_c * boost::math::cyl_bessel_j(1, omega_c * r) / (2.0 * std::numbers::pi * r);
        }
    }
    normalize(w);
    return w;
}

namespace {

// Mirror about the edge sample: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
int mirror(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

Image convolve(const Image& img, const std::vector<double>& kernel, int size) {
    const int half = size / 2;
    Image out(img.height(), img.width());
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                double acc = 0.0;
                for (int ky = 0; ky < size; ++ky)
                    for (int kx = 0; kx < size; ++kx)
                        acc += kernel[static_cast<std::size_t>(ky * size + kx)] *
                               img.at(c, mirror(y + ky - half, img.height()), mirror(x + kx - half, img.width()));
                out.at(c, y, x) = clamp01(acc);
            }
    return out;
}

Image bilinear(const Image& img, int out_h, int out_w, double scale) {
    const double sy = scale > 0 ? scale : double(out_h) / img.height();
    const double sx = scale > 0 ? scale : double(out_w) / img.width();
    Image out(out_h, out_w);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < out_h; ++i)
            for (int j = 0; j < out_w; ++j) {
                const double y = std::clamp((i + 0.5) / sy - 0.5, 0.0, img.height() - 1.0);
                const double x = std::clamp((j + 0.5) / sx - 0.5, 0.0, img.width() - 1.0);
                const int y0 = int(std::floor(y)), x0 = int(std::floor(x));
                const int y1 = std::min(y0 + 1, img.height() - 1), x1 = std::min(x0 + 1, img.width() - 1);
                const double fy = y - y0, fx = x - x0;
                const double v = (1 - fy) * ((1 - fx) * img.at(c, y0, x0) + fx * img.at(c, y0, x1)) +
                                 fy * ((1 - fx) * img.at(c, y1, x0) + fx * img.at(c, y1, x1));
                out.at(c, i, j) = clamp01(v);
            }
    return out;
}

namespace {

double keys(double t) {
    const double a = -0.5;
    t = std::abs(t);
    if (t <= 1) return (a + 2) * t * t * t - (a + 3) * t * t + 1;
    if (t < 2) return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
    return 0.0;
}

}  // namespace

Image bicubic(const Image& img, int out_h, int out_w, double scale) {
    const double sy = scale > 0 ? scale : double(out_h) / img.height();
    const double sx = scale > 0 ? scale : double(out_w) / img.width();
    Image out(out_h, out_w);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < out_h; ++i)
            for (int j = 0; j < out_w; ++j) {
                const double y = (i + 0.5) / sy - 0.5, x = (j + 0.5) / sx - 0.5;
                const int y0 = int(std::floor(y)), x0 = int(std::floor(x));
                double acc = 0.0, wsum = 0.0;
                for (int m = -1; m <= 2; ++m)
                    for (int n = -1; n <= 2; ++n) {
                        const double w = keys(y - (y0 + m)) * keys(x - (x0 + n));
                        const int yy = std::clamp(y0 + m, 0, img.height() - 1);
                        const int xx = std::clamp(x0 + n, 0, img.width() - 1);
                        acc += w * img.at(c, yy, xx);
                        wsum += w;
                    }
                out.at(c, i, j) = clamp01(acc / wsum);
            }
    return out;
}

Image area(const Image& img, int out_h, int out_w, double scale) {
    // cells past the source edge simply have no overlap
    const double cy = scale > 0 ? 1.0 / scale : double(img.height()) / out_h;
    const double cx = scale > 0 ? 1.0 / scale : double(img.width()) / out_w;
    Image out(out_h, out_w);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < out_h; ++i)
            for (int j = 0; j < out_w; ++j) {
                const double y0 = i * cy, y1 = (i + 1) * cy, x0 = j * cx, x1 = (j + 1) * cx;
                double acc = 0.0, total = 0.0;
                for (int y = 0; y < img.height(); ++y)
                    for (int x = 0; x < img.width(); ++x) {
                        const double oy = std::max(0.0, std::min(y1, y + 1.0) - std::max(y0, double(y)));
                        const double ox = std::max(0.0, std::min(x1, x + 1.0) - std::max(x0, double(x)));
                        acc += oy * ox * img.at(c, y, x);
                        total += oy * ox;
                    }
                out.at(c, i, j) = clamp01(acc / total);
            }
    return out;
}

FeatureMap conv2d(const FeatureMap& in, const dforge::Tensor& weight, const dforge::Tensor* bias, int stride,
                  int padding) {
    const int oc = int(weight.shape[0]), ic = int(weight.shape[1]), k = int(weight.shape[2]);
    const int oh = (in.height + 2 * padding - k) / stride + 1;
    const int ow = (in.width + 2 * padding - k) / stride + 1;
    FeatureMap out(oc, oh, ow);
    for (int o = 0; o < oc; ++o)
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x) {
                double acc = bias ? bias->values[static_cast<std::size_t>(o)] : 0.0;
                for (int i = 0; i < ic; ++i)
                    for (int ky = 0; ky < k; ++ky)
                        for (int kx = 0; kx < k; ++kx) {
                            const int sy = y * stride + ky - padding, sx = x * stride + kx - padding;
                            if (sy < 0 || sx < 0 || sy >= in.height || sx >= in.width) continue;
                            acc += double(weight.values[static_cast<std::size_t>(((o * ic + i) * k + ky) * k + kx)]) *
                                   in.at(i, sy, sx);
                        }
                out.at(o, y, x) = static_cast<float>(acc);
            }
    return out;
}

std::vector<double> weighting(const std::vector<double>& v, const dforge::WeightingNet& net) {
    std::vector<double> hidden(static_cast<std::size_t>(net.hidden));
    for (int h = 0; h < net.hidden; ++h) {
        double s = net.b1[static_cast<std::size_t>(h)];
        for (int i = 0; i < net.inputs; ++i) s += double(net.w1[static_cast<std::size_t>(h * net.inputs + i)]) * v[i];
        hidden[static_cast<std::size_t>(h)] = s > 0 ? s : 0;
    }
    std::vector<double> a(static_cast<std::size_t>(net.outputs));
    for (int o = 0; o < net.outputs; ++o) {
        double s = net.b2[static_cast<std::size_t>(o)];
        for (int h = 0; h < net.hidden; ++h) s += double(net.w2[static_cast<std::size_t>(o * net.hidden + h)]) * hidden[h];
        a[static_cast<std::size_t>(o)] = s;
    }
    return a;
}

double psnr_y(const Image& a, const Image& b) {
    double se = 0.0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) {
            const double ya = 0.299 * a.at(0, y, x) + 0.587 * a.at(1, y, x) + 0.114 * a.at(2, y, x);
            const double yb = 0.299 * b.at(0, y, x) + 0.587 * b.at(1, y, x) + 0.114 * b.at(2, y, x);
            se += (ya - yb) * (ya - yb);
        }
    return 10.0 * std::log10(1.0 / (se / (a.height() * a.width())));
}

}  // namespace oracle
