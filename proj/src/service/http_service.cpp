#include "dforge/service/http_service.hpp"

#include <httplib.h>

#include "dforge/degradation/codec.hpp"
#include "dforge/degradation/sampler.hpp"
#include "dforge/engine/super_resolve.hpp"
#include "dforge/error.hpp"
#include "dforge/image.hpp"
#include "dforge/pipeline/pipeline.hpp"
#include "dforge/service/json_io.hpp"

namespace dforge {

namespace {

constexpr std::size_t max_payload = 64u << 20;

HttpReply json_reply(int status, const Json& j) { return {status, j.dump(), "application/json"}; }

HttpReply error_reply(int status, std::string_view code, const std::string& message, const std::string& field = "") {
    Json j = {{"error", code}};
    if (!field.empty()) j["field"] = field;
    j["message"] = message;
    return json_reply(status, j);
}

// Field name is the text before the first ": " of our own messages.
std::string field_of(const std::string& message) {
    const auto pos = message.find(": ");
    if (pos == std::string::npos || message.find(' ') < pos) return "";
    return message.substr(0, pos);
}

Json parse_body(std::string_view body) {
    Json j = Json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::invalid_input, "body: expected a JSON object");
    return j;
}

Image image_field(const Json& j) {
    auto it = j.find("image");
    if (it == j.end()) throw Error(ErrorCode::invalid_input, "image: missing");
    if (!it->is_string()) throw Error(ErrorCode::invalid_input, "image: expected a base64 string");
    try {
        return decode_image(base64_decode(it->get_ref<const std::string&>()));
    } catch (const Error& e) {
        throw Error(ErrorCode::invalid_input, std::string("image: ") + e.what());
    }
}

std::string image_payload(const Image& img) { return base64_encode(encode_png(img)); }

std::uint64_t seed_field(const Json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return 0;
    if (!it->is_number_unsigned()) throw Error(ErrorCode::invalid_input, path + ": expected a non-negative integer");
    return it->get<std::uint64_t>();
}

}  // namespace

DegradationService::DegradationService(std::shared_ptr<const Model> model, const DegradationSchema& schema)
    : model_(std::move(model)), schema_(schema), schema_body_(schema_to_json(schema).dump()) {}

HttpReply DegradationService::handle(std::string_view method, std::string_view path, std::string_view body) const {
    try {
        if (path == "/schema") {
            if (method != "GET") return error_reply(405, "method_not_allowed", "use GET");
            return schema();
        }
        const bool known = path == "/degrade" || path == "/predict" || path == "/superresolve";
        if (!known) return error_reply(404, "not_found", "no route " + std::string(path));
        if (method != "POST") return error_reply(405, "method_not_allowed", "use POST");
        if (body.size() > max_payload) return error_reply(413, "too_large", "payload exceeds limit");
        if (path == "/degrade") return degrade(body);
        if (path == "/predict") return predict(body);
        return superresolve(body);
    } catch (const RangeError& e) {
        return error_reply(400, to_string(e.code()), e.what(), e.field());
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::no_weights: return error_reply(409, to_string(e.code()), e.what());
            case ErrorCode::numeric_fault:
            case ErrorCode::corrupt_weights:
            case ErrorCode::topology_mismatch:
            case ErrorCode::io: return error_reply(500, to_string(e.code()), e.what());
            default: return error_reply(400, to_string(e.code()), e.what(), field_of(e.what()));
        }
    } catch (const std::exception& e) {
        return error_reply(500, "internal", e.what());
    }
}

HttpReply DegradationService::schema() const { return {200, schema_body_, "application/json"}; }

HttpReply DegradationService::degrade(std::string_view body) const {
    const Json req = parse_body(body);
    const int sources = static_cast<int>(req.contains("params")) + static_cast<int>(req.contains("vector")) +
                        static_cast<int>(req.contains("sample"));
    if (sources != 1) {
        throw Error(ErrorCode::invalid_input, "params: give exactly one of params, vector or sample");
    }
    const Image hr = image_field(req);
    DegradationParams params;
    if (req.contains("params")) {
        params = params_from_json(req.at("params"));
        validate_for_level(schema_, params);
        if (req.contains("seed")) params.rng_seed = seed_field(req, "seed", "seed");
    } else if (req.contains("vector")) {
        const auto values = vector_from_json(req.at("vector"), "vector");
        DegradationVector v{};
        std::copy(values.begin(), values.end(), v.begin());
        params = decode(v, schema_);
        params.rng_seed = seed_field(req, "seed", "seed");
    } else {
        const Json& s = req.at("sample");
        if (!s.is_object() || !s.contains("level") || !s.at("level").is_string()) {
            throw Error(ErrorCode::invalid_input, "sample.level: expected S1, S2 or S3");
        }
        Level level;
        try {
            level = parse_level(s.at("level").get<std::string>());
        } catch (const Error& e) {
            throw Error(ErrorCode::invalid_input, std::string("sample.level: ") + e.what());
        }
        Rng rng(seed_field(s, "seed", "sample.seed"));
        params = sample_params(schema_, level, rng);
    }
    const PipelineResult res = run_pipeline(hr, params);
    Json out = {{"image", image_payload(res.lr)},
                {"height", res.lr.height()},
                {"width", res.lr.width()},
                {"params", params_to_json(params)},
                {"v", vector_to_json(encode(params, schema_.global_ranges()))},
                {"trace", trace_to_json(res.trace)}};
    return json_reply(200, out);
}

HttpReply DegradationService::predict(std::string_view body) const {
    if (!model_) throw Error(ErrorCode::no_weights, "no weights loaded; start the service with --weights");
    const Json req = parse_body(body);
    const Image lr = image_field(req);
    const auto v_hat = predict_degradation(lr, model_->predictor);
    return json_reply(200, {{"v_hat", vector_to_json(v_hat)}});
}

HttpReply DegradationService::superresolve(std::string_view body) const {
    if (!model_) throw Error(ErrorCode::no_weights, "no weights loaded; start the service with --weights");
    const Json req = parse_body(body);
    const Image lr = image_field(req);
    std::optional<std::vector<double>> override_v;
    if (auto it = req.find("override_v"); it != req.end() && !it->is_null()) {
        override_v = vector_from_json(*it, "override_v");
    }
    const auto res = override_v ? super_resolve(lr, *model_, std::span<const double>(*override_v))
                                : super_resolve(lr, *model_);
    Json out = {{"image", image_payload(res.sr)},
                {"height", res.sr.height()},
                {"width", res.sr.width()},
                {"v_hat", vector_to_json(res.v_hat)},
                {"a", vector_to_json(res.a)}};
    return json_reply(200, out);
}

void DegradationService::mount(httplib::Server& server) const {
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        const HttpReply reply = handle(req.method, req.path, req.body);
        res.status = reply.status;
        res.set_content(reply.body, reply.content_type);
    };
    server.Get("/schema", route);
    server.Post("/degrade", route);
    server.Post("/predict", route);
    server.Post("/superresolve", route);
    server.set_payload_max_length(max_payload);
}

void run_server(const DegradationService& service, const std::string& host, int port) {
    httplib::Server server;
    service.mount(server);
    if (!server.bind_to_port(host, port)) {
        throw Error(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
    }
    server.listen_after_bind();
}

}  // namespace dforge
