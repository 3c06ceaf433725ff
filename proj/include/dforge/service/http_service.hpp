#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "dforge/degradation/schema.hpp"
#include "dforge/engine/model.hpp"

namespace httplib {
class Server;
}

namespace dforge {

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// JSON API over the degradation pipeline and the SR model:
//   GET  /schema        slot layout and global ranges
//   POST /degrade       {image, params | vector | sample:{level, seed}, seed?}
//   POST /predict       {image}
//   POST /superresolve  {image, override_v?}
// Images travel as base64 PNG (JPEG accepted on input). Errors come back as
// {"error": code, "field": ..., "message": ...}; 400 for bad requests, 409
// for inference routes without weights.
class DegradationService {
public:
    explicit DegradationService(std::shared_ptr<const Model> model = nullptr,
                                const DegradationSchema& schema = default_schema());

    HttpReply handle(std::string_view method, std::string_view path, std::string_view body) const;

    // Registers every route on `server`.
    void mount(httplib::Server& server) const;

    const Model* model() const noexcept { return model_.get(); }

private:
    HttpReply schema() const;
    HttpReply degrade(std::string_view body) const;
    HttpReply predict(std::string_view body) const;
    HttpReply superresolve(std::string_view body) const;

    std::shared_ptr<const Model> model_;
    DegradationSchema schema_;
    std::string schema_body_;
};

// Blocks until the server stops. Throws Error(io) when the port is taken.
void run_server(const DegradationService& service, const std::string& host, int port);

}  // namespace dforge
