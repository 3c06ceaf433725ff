#include "dforge/degradation/schema.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "dforge/error.hpp"

namespace dforge {

namespace pt = boost::property_tree;
using std::numbers::pi;

const DegradationSchema& default_schema() {
    static const DegradationSchema schema = [] {
        DegradationSchema s;
        s.theta = {-pi, pi};
        s.omega_c = {pi / 3, pi};

        StageSchema s1;
        s1.sigma = {0.2, 0.8};
        s1.resize_up_down_keep = {0.1, 0.2, 0.7};
        s1.scale = {0.85, 1.2};
        s1.gaussian_sigma = {1, 10};
        s1.poisson_scale = {0.05, 0.5};
        s1.jpeg_quality = {90, 95};
        s.levels[0] = {s1, std::nullopt};

        StageSchema s2;
        s2.sigma = {0.2, 1.5};
        s2.resize_up_down_keep = {0.3, 0.4, 0.3};
        s2.scale = {0.5, 1.2};
        s2.gaussian_sigma = {1, 20};
        s2.poisson_scale = {0.05, 1.5};
        s2.jpeg_quality = {50, 95};
        s.levels[1] = {s2, std::nullopt};

        StageSchema s3a;
        s3a.sigma = {0.2, 3};
        s3a.resize_up_down_keep = {0.2, 0.7, 0.1};
        s3a.scale = {0.15, 1.5};
        s3a.gaussian_sigma = {1, 30};
        s3a.poisson_scale = {0.05, 3};
        s3a.jpeg_quality = {30, 95};

        StageSchema s3b;
        s3b.sigma = {0.2, 1.5};
        s3b.resize_up_down_keep = {0.3, 0.4, 0.3};
        s3b.scale = {0.3, 1.2};
        s3b.gaussian_sigma = {1, 25};
        s3b.poisson_scale = {0.05, 2.5};
        s3b.jpeg_quality = {30, 95};
        s3b.blur_skip_prob = 0.2;
        s3b.sinc_prob = 0.8;
        s3b.resize_then_jpeg_prob = 0.5;
        s.levels[2] = {s3a, s3b};
        return s;
    }();
    return schema;
}

namespace {

Range unite(Range a, Range b) { return {std::min(a.min, b.min), std::max(a.max, b.max)}; }

template <typename F>
void for_each_stage(const DegradationSchema& s, F&& f) {
    for (const auto& level : s.levels) {
        f(level.stage1);
        if (level.stage2) f(*level.stage2);
    }
}

void check_range(const Range& r, const std::string& field) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max)) {
        throw RangeError(field, "schema range for " + field + " must satisfy min < max");
    }
}

template <std::size_t N>
void check_probs(const std::array<double, N>& p, const std::string& field) {
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw RangeError(field, "probability out of [0,1] in " + field);
    }
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) throw RangeError(field, "probabilities of " + field + " must sum to 1");
}

void check_prob(double p, const std::string& field) {
    check_probs(std::array<double, 2>{p, 1.0 - p}, field);
}

}  // namespace

GlobalRanges DegradationSchema::global_ranges() const {
    GlobalRanges g;
    g.kernel_half = unite(kernel_half, sinc_half);
    g.theta = theta;
    g.omega_c = omega_c;
    bool first = true;
    for_each_stage(*this, [&](const StageSchema& st) {
        if (first) {
            g.sigma = st.sigma;
            g.scale = st.scale;
            g.gaussian_sigma = st.gaussian_sigma;
            g.poisson_scale = st.poisson_scale;
            g.jpeg_quality = st.jpeg_quality;
            first = false;
            return;
        }
        g.sigma = unite(g.sigma, st.sigma);
        g.scale = unite(g.scale, st.scale);
        g.gaussian_sigma = unite(g.gaussian_sigma, st.gaussian_sigma);
        g.poisson_scale = unite(g.poisson_scale, st.poisson_scale);
        g.jpeg_quality = unite(g.jpeg_quality, st.jpeg_quality);
    });
    return g;
}

void DegradationSchema::validate() const {
    check_probs(level_probs, "level_probs");
    check_probs(iso_aniso_probs, "iso_aniso_probs");
    check_probs(resize_mode_probs, "resize_mode_probs");
    check_probs(final_mode_probs, "final_mode_probs");
    check_range(kernel_half, "kernel_half");
    check_range(sinc_half, "sinc_half");
    check_range(theta, "theta");
    check_range(omega_c, "omega_c");
    for (int li = 0; li < 3; ++li) {
        const std::string lname(to_string(static_cast<Level>(li)));
        const bool wants_stage2 = li == 2;
        if (levels[li].stage2.has_value() != wants_stage2) {
            throw RangeError(lname, "only S3 may define a second stage");
        }
        auto check_stage = [&](const StageSchema& st, const std::string& prefix) {
            check_range(st.sigma, prefix + ".sigma");
            check_range(st.scale, prefix + ".scale");
            check_range(st.gaussian_sigma, prefix + ".gaussian_sigma");
            check_range(st.poisson_scale, prefix + ".poisson_scale");
            check_range(st.jpeg_quality, prefix + ".jpeg_quality");
            check_probs(st.resize_up_down_keep, prefix + ".resize_up_down_keep");
            check_prob(st.gaussian_prob, prefix + ".gaussian_prob");
            check_prob(st.gray_prob, prefix + ".gray_prob");
            check_prob(st.blur_skip_prob, prefix + ".blur_skip_prob");
            check_prob(st.sinc_prob, prefix + ".sinc_prob");
            check_prob(st.resize_then_jpeg_prob, prefix + ".resize_then_jpeg_prob");
            if (st.sigma.min <= 0.0) throw RangeError(prefix + ".sigma", "sigma must be positive");
            if (st.scale.min <= 0.0) throw RangeError(prefix + ".scale", "scale must be positive");
        };
        check_stage(levels[li].stage1, lname + ".stage1");
        if (levels[li].stage2) check_stage(*levels[li].stage2, lname + ".stage2");
    }
}

// ---- serialization ----------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename Container>
std::string join(const Container& values) {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ' ';
        out += fmt(v);
    }
    return out;
}

std::vector<double> numbers(const pt::ptree& tree, const std::string& key, std::size_t count) {
    auto text = tree.get_optional<std::string>(key);
    if (!text) throw Error(ErrorCode::invalid_input, "schema: missing key '" + key + "'");
    std::vector<double> out;
    std::istringstream is(*text);
    std::string tok;
    while (is >> tok) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw Error(ErrorCode::invalid_input, "schema: bad number '" + tok + "' for '" + key + "'");
        }
        out.push_back(v);
    }
    if (out.size() != count) {
        throw Error(ErrorCode::invalid_input,
                    "schema: '" + key + "' expects " + std::to_string(count) + " values");
    }
    return out;
}

Range range_of(const pt::ptree& t, const std::string& key) {
    auto v = numbers(t, key, 2);
    return {v[0], v[1]};
}

double scalar_of(const pt::ptree& t, const std::string& key) { return numbers(t, key, 1)[0]; }

template <std::size_t N>
std::array<double, N> array_of(const pt::ptree& t, const std::string& key) {
    auto v = numbers(t, key, N);
    std::array<double, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

void put_stage(pt::ptree& t, const std::string& p, const StageSchema& st, bool second) {
    t.put(p + "sigma", join(std::array{st.sigma.min, st.sigma.max}));
    t.put(p + "resize_up_down_keep", join(st.resize_up_down_keep));
    t.put(p + "scale", join(std::array{st.scale.min, st.scale.max}));
    t.put(p + "gaussian_sigma", join(std::array{st.gaussian_sigma.min, st.gaussian_sigma.max}));
    t.put(p + "poisson_scale", join(std::array{st.poisson_scale.min, st.poisson_scale.max}));
    t.put(p + "gaussian_prob", fmt(st.gaussian_prob));
    t.put(p + "gray_prob", fmt(st.gray_prob));
    t.put(p + "jpeg_quality", join(std::array{st.jpeg_quality.min, st.jpeg_quality.max}));
    if (second) {
        t.put(p + "blur_skip_prob", fmt(st.blur_skip_prob));
        t.put(p + "sinc_prob", fmt(st.sinc_prob));
        t.put(p + "resize_then_jpeg_prob", fmt(st.resize_then_jpeg_prob));
    }
}

StageSchema get_stage(const pt::ptree& t, const std::string& p, bool second) {
    StageSchema st;
    st.sigma = range_of(t, p + "sigma");
    st.resize_up_down_keep = array_of<3>(t, p + "resize_up_down_keep");
    st.scale = range_of(t, p + "scale");
    st.gaussian_sigma = range_of(t, p + "gaussian_sigma");
    st.poisson_scale = range_of(t, p + "poisson_scale");
    st.gaussian_prob = scalar_of(t, p + "gaussian_prob");
    st.gray_prob = scalar_of(t, p + "gray_prob");
    st.jpeg_quality = range_of(t, p + "jpeg_quality");
    if (second) {
        st.blur_skip_prob = scalar_of(t, p + "blur_skip_prob");
        st.sinc_prob = scalar_of(t, p + "sinc_prob");
        st.resize_then_jpeg_prob = scalar_of(t, p + "resize_then_jpeg_prob");
    }
    return st;
}

}  // namespace

std::string dump_schema(const DegradationSchema& s) {
    pt::ptree root;
    pt::ptree global;
    global.put("level_probs", join(s.level_probs));
    global.put("iso_aniso_probs", join(s.iso_aniso_probs));
    global.put("resize_mode_probs", join(s.resize_mode_probs));
    global.put("final_mode_probs", join(s.final_mode_probs));
    global.put("kernel_half", join(std::array{s.kernel_half.min, s.kernel_half.max}));
    global.put("sinc_half", join(std::array{s.sinc_half.min, s.sinc_half.max}));
    global.put("theta", join(std::array{s.theta.min, s.theta.max}));
    global.put("omega_c", join(std::array{s.omega_c.min, s.omega_c.max}));
    root.add_child("global", global);
    for (int li = 0; li < 3; ++li) {
        pt::ptree sec;
        put_stage(sec, "stage1_", s.levels[li].stage1, false);
        if (s.levels[li].stage2) put_stage(sec, "stage2_", *s.levels[li].stage2, true);
        root.add_child(std::string(to_string(static_cast<Level>(li))), sec);
    }
    std::ostringstream os;
    os << "# degradation space: resize modes [area bilinear bicubic], noise kinds [gaussian poisson]\n";
    pt::write_ini(os, root);
    return os.str();
}

DegradationSchema parse_schema(const std::string& text) {
    pt::ptree root;
    std::istringstream is(text);
    try {
        pt::read_ini(is, root);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::invalid_input, std::string("schema: ") + e.what());
    }
    auto section = [&](const std::string& name) -> const pt::ptree& {
        auto child = root.get_child_optional(name);
        if (!child) throw Error(ErrorCode::invalid_input, "schema: missing section [" + name + "]");
        return *child;
    };
    DegradationSchema s;
    const auto& g = section("global");
    s.level_probs = array_of<3>(g, "level_probs");
    s.iso_aniso_probs = array_of<2>(g, "iso_aniso_probs");
    s.resize_mode_probs = array_of<3>(g, "resize_mode_probs");
    s.final_mode_probs = array_of<3>(g, "final_mode_probs");
    s.kernel_half = range_of(g, "kernel_half");
    s.sinc_half = range_of(g, "sinc_half");
    s.theta = range_of(g, "theta");
    s.omega_c = range_of(g, "omega_c");
    for (int li = 0; li < 3; ++li) {
        const auto& sec = section(std::string(to_string(static_cast<Level>(li))));
        s.levels[li].stage1 = get_stage(sec, "stage1_", false);
        if (sec.get_optional<std::string>("stage2_sigma")) {
            s.levels[li].stage2 = get_stage(sec, "stage2_", true);
        }
    }
    s.validate();
    return s;
}

DegradationSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open schema " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_schema(os.str());
}

// ---- slot layout --------------------------------------------------------------

const std::array<SlotDescriptor, vector_size>& slot_layout() {
    using K = SlotKind;
    using P = SlotParam;
    static constexpr std::array<SlotDescriptor, vector_size> layout{{
        {1, "blur1.kernel_half", "blur-1", K::scalar, P::kernel_half, ""},
        {2, "blur1.sigma1", "blur-1", K::scalar, P::sigma, ""},
        {3, "blur1.sigma2", "blur-1", K::scalar, P::sigma, ""},
        {4, "blur1.theta", "blur-1", K::scalar, P::theta, ""},
        {5, "blur2.kernel_half", "blur-2/sinc", K::scalar, P::kernel_half, ""},
        {6, "blur2.sigma1", "blur-2/sinc", K::scalar, P::sigma, ""},
        {7, "blur2.sigma2", "blur-2/sinc", K::scalar, P::sigma, ""},
        {8, "blur2.theta", "blur-2/sinc", K::scalar, P::theta, ""},
        {9, "sinc.kernel_half", "blur-2/sinc", K::scalar, P::kernel_half, ""},
        {10, "sinc.omega_c", "blur-2/sinc", K::scalar, P::omega_c, ""},
        {11, "resize1.scale", "resize", K::scalar, P::scale, ""},
        {12, "resize1.mode", "resize", K::onehot, P::resize_mode, "area"},
        {13, "resize1.mode", "resize", K::onehot, P::resize_mode, "bilinear"},
        {14, "resize1.mode", "resize", K::onehot, P::resize_mode, "bicubic"},
        {15, "resize2.scale", "resize", K::scalar, P::scale, ""},
        {16, "resize2.mode", "resize", K::onehot, P::resize_mode, "area"},
        {17, "resize2.mode", "resize", K::onehot, P::resize_mode, "bilinear"},
        {18, "resize2.mode", "resize", K::onehot, P::resize_mode, "bicubic"},
        {19, "noise1.level", "noise-1", K::scalar, P::noise_level, ""},
        {20, "noise1.gray", "noise-1", K::flag, P::gray, ""},
        {21, "noise1.type", "noise-1", K::onehot, P::noise_kind, "gaussian"},
        {22, "noise1.type", "noise-1", K::onehot, P::noise_kind, "poisson"},
        {23, "noise2.level", "noise-2", K::scalar, P::noise_level, ""},
        {24, "noise2.gray", "noise-2", K::flag, P::gray, ""},
        {25, "noise2.type", "noise-2", K::onehot, P::noise_kind, "gaussian"},
        {26, "noise2.type", "noise-2", K::onehot, P::noise_kind, "poisson"},
        {27, "jpeg1.quality", "jpeg/order", K::scalar, P::jpeg_quality, ""},
        {28, "jpeg2.quality", "jpeg/order", K::scalar, P::jpeg_quality, ""},
        {29, "order", "jpeg/order", K::onehot, P::jpeg_order, "R-J"},
        {30, "order", "jpeg/order", K::onehot, P::jpeg_order, "J-R"},
        {31, "final_resize.mode", "jpeg/order", K::onehot, P::resize_mode, "area"},
        {32, "final_resize.mode", "jpeg/order", K::onehot, P::resize_mode, "bilinear"},
        {33, "final_resize.mode", "jpeg/order", K::onehot, P::resize_mode, "bicubic"},
    }};
    return layout;
}

}  // namespace dforge
