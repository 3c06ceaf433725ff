#include "dforge/service/json_io.hpp"

#include <algorithm>
#include <cmath>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>

#include "dforge/error.hpp"

namespace dforge {

namespace {

Json stage_to_json(const StageSpec& s) {
    Json blur = {{"active", s.blur.active}};
    if (s.blur.active) {
        blur["kernel_half"] = s.blur.kernel_half;
        blur["sigma1"] = s.blur.sigma1;
        blur["sigma2"] = s.blur.sigma2;
        blur["theta"] = s.blur.theta;
    }
    blur["sinc_active"] = s.blur.sinc_active;
    if (s.blur.sinc_active) {
        blur["sinc_half"] = s.blur.sinc_half;
        blur["omega_c"] = s.blur.omega_c;
    }
    Json jpeg = {{"quality", s.jpeg.quality}};
    if (s.jpeg.order) jpeg["order"] = to_string(*s.jpeg.order);
    if (s.jpeg.final_resize_mode) jpeg["final_resize_mode"] = to_string(*s.jpeg.final_resize_mode);
    return {
        {"blur", blur},
        {"resize", {{"scale", s.resize.scale}, {"mode", to_string(s.resize.mode)}}},
        {"noise", {{"kind", to_string(s.noise.kind)}, {"level", s.noise.level}, {"gray", s.noise.gray}}},
        {"jpeg", jpeg},
    };
}

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::invalid_input, field + ": " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) bad_field(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad_field(path + "." + key, "missing");
    return *it;
}

double number(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = member(j, key, path);
    if (!v.is_number()) bad_field(path + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad_field(path + "." + key, "not finite");
    return d;
}

int integer(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = member(j, key, path);
    if (!v.is_number_integer()) bad_field(path + "." + key, "expected an integer");
    return v.get<int>();
}

bool boolean(const Json& j, const std::string& key, const std::string& path, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) bad_field(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

std::string text(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = member(j, key, path);
    if (!v.is_string()) bad_field(path + "." + key, "expected a string");
    return v.get<std::string>();
}

template <typename F>
auto parse_enum(F parse, const std::string& value, const std::string& field) {
    try {
        return parse(value);
    } catch (const Error& e) {
        bad_field(field, e.what());
    }
}

StageSpec stage_from_json(const Json& j, const std::string& path) {
    StageSpec s;
    const Json& blur = member(j, "blur", path);
    const std::string bp = path + ".blur";
    s.blur.active = boolean(blur, "active", bp, false);
    if (s.blur.active) {
        s.blur.kernel_half = integer(blur, "kernel_half", bp);
        s.blur.sigma1 = number(blur, "sigma1", bp);
        s.blur.sigma2 = number(blur, "sigma2", bp);
        s.blur.theta = number(blur, "theta", bp);
    }
    s.blur.sinc_active = boolean(blur, "sinc_active", bp, false);
    if (s.blur.sinc_active) {
        s.blur.sinc_half = integer(blur, "sinc_half", bp);
        s.blur.omega_c = number(blur, "omega_c", bp);
    }
    const Json& resize = member(j, "resize", path);
    s.resize.scale = number(resize, "scale", path + ".resize");
    s.resize.mode = parse_enum(parse_resize_mode, text(resize, "mode", path + ".resize"), path + ".resize.mode");
    const Json& noise = member(j, "noise", path);
    s.noise.kind = parse_enum(parse_noise_kind, text(noise, "kind", path + ".noise"), path + ".noise.kind");
    s.noise.level = number(noise, "level", path + ".noise");
    s.noise.gray = boolean(noise, "gray", path + ".noise", false);
    const Json& jpeg = member(j, "jpeg", path);
    s.jpeg.quality = integer(jpeg, "quality", path + ".jpeg");
    if (jpeg.contains("order")) {
        s.jpeg.order = parse_enum(parse_jpeg_order, text(jpeg, "order", path + ".jpeg"), path + ".jpeg.order");
    }
    if (jpeg.contains("final_resize_mode")) {
        s.jpeg.final_resize_mode = parse_enum(parse_resize_mode, text(jpeg, "final_resize_mode", path + ".jpeg"),
                                              path + ".jpeg.final_resize_mode");
    }
    return s;
}

Json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}}; }

}  // namespace

Json params_to_json(const DegradationParams& p) {
    Json j = {{"level", to_string(p.level)}, {"stage1", stage_to_json(p.stage1)}};
    if (p.stage2) j["stage2"] = stage_to_json(*p.stage2);
    j["seed"] = p.rng_seed;
    return j;
}

DegradationParams params_from_json(const Json& j) {
    if (!j.is_object()) bad_field("params", "expected an object");
    DegradationParams p;
    p.level = parse_enum(parse_level, text(j, "level", "params"), "params.level");
    p.stage1 = stage_from_json(member(j, "stage1", "params"), "params.stage1");
    if (j.contains("stage2")) p.stage2 = stage_from_json(j.at("stage2"), "params.stage2");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) bad_field("params.seed", "expected a non-negative integer");
        p.rng_seed = j.at("seed").get<std::uint64_t>();
    }
    if ((p.level == Level::S3) != p.stage2.has_value()) {
        bad_field("params.stage2", "must be present exactly when level is S3");
    }
    return p;
}

Json trace_to_json(const PipelineTrace& trace) {
    Json out = Json::array();
    for (const auto& r : trace.records) {
        out.push_back({{"stage", r.stage},
                       {"operation", r.operation},
                       {"parameters", r.parameters},
                       {"height", r.height},
                       {"width", r.width}});
    }
    return out;
}

Json schema_to_json(const DegradationSchema& schema) {
    const GlobalRanges g = schema.global_ranges();
    auto kind_name = [](SlotKind k) {
        switch (k) {
            case SlotKind::scalar: return "scalar";
            case SlotKind::flag: return "flag";
            case SlotKind::onehot: return "onehot";
        }
        return "scalar";
    };
    Json slots = Json::array();
    for (const SlotDescriptor& s : slot_layout()) {
        Json e = {{"index", s.index}, {"name", s.name}, {"group", s.group}, {"kind", kind_name(s.kind)}};
        if (!s.choice.empty()) e["choice"] = s.choice;
        switch (s.param) {
            case SlotParam::kernel_half: e["range"] = range_json(g.kernel_half); break;
            case SlotParam::sigma: e["range"] = range_json(g.sigma); break;
            case SlotParam::theta: e["range"] = range_json(g.theta); break;
            case SlotParam::omega_c: e["range"] = range_json(g.omega_c); break;
            case SlotParam::scale: e["range"] = range_json(g.scale); break;
            case SlotParam::jpeg_quality: e["range"] = range_json(g.jpeg_quality); break;
            case SlotParam::noise_level:
                // The unit depends on the noise type selected in the same group.
                e["ranges"] = {{"gaussian", range_json(g.gaussian_sigma)}, {"poisson", range_json(g.poisson_scale)}};
                break;
            default: break;
        }
        slots.push_back(std::move(e));
    }
    return {
        {"vector_size", vector_size},
        {"slots", slots},
        {"global_ranges",
         {{"kernel_half", range_json(g.kernel_half)},
          {"sigma", range_json(g.sigma)},
          {"theta", range_json(g.theta)},
          {"omega_c", range_json(g.omega_c)},
          {"scale", range_json(g.scale)},
          {"gaussian_sigma", range_json(g.gaussian_sigma)},
          {"poisson_scale", range_json(g.poisson_scale)},
          {"jpeg_quality", range_json(g.jpeg_quality)}}},
        {"level_probs", schema.level_probs},
    };
}

Json vector_to_json(std::span<const double> v) {
    Json out = Json::array();
    for (double x : v) out.push_back(x);
    return out;
}

std::vector<double> vector_from_json(const Json& j, std::string_view field, std::size_t size) {
    const std::string name(field);
    if (!j.is_array()) bad_field(name, "expected an array");
    if (j.size() != size) {
        bad_field(name, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
    }
    std::vector<double> out;
    out.reserve(size);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) bad_field(name + "[" + std::to_string(i) + "]", "expected a number");
        const double d = j[i].get<double>();
        if (!std::isfinite(d)) bad_field(name + "[" + std::to_string(i) + "]", "not finite");
        out.push_back(d);
    }
    return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    using namespace boost::archive::iterators;
    using It = base64_from_binary<transform_width<const std::uint8_t*, 6, 8>>;
    std::string out(It(bytes.data()), It(bytes.data() + bytes.size()));
    out.append((3 - bytes.size() % 3) % 3, '=');
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    using namespace boost::archive::iterators;
    using It = transform_width<binary_from_base64<const char*>, 8, 6>;
    std::string clean;
    clean.reserve(text.size());
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == ' ') continue;
        clean.push_back(c);
    }
    std::size_t pad = 0;
    while (!clean.empty() && clean.back() == '=' && pad < 2) {
        clean.pop_back();
        ++pad;
    }
    const bool valid = std::all_of(clean.begin(), clean.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' || c == '/';
    });
    if (!valid || clean.size() % 4 == 1) throw Error(ErrorCode::invalid_input, "invalid base64 payload");
    const std::size_t out_size = clean.size() * 6 / 8;
    std::vector<std::uint8_t> out;
    out.reserve(out_size);
    It it(clean.data());
    for (std::size_t i = 0; i < out_size; ++i, ++it) out.push_back(static_cast<std::uint8_t>(*it));
    return out;
}

}  // namespace dforge
