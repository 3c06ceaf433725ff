// degrade-forge: dataset synthesis, degradation vectors, inference, counters.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dforge/degradation/codec.hpp"
#include "dforge/degradation/sampler.hpp"
#include "dforge/degradation/schema.hpp"
#include "dforge/engine/counters.hpp"
#include "dforge/engine/model.hpp"
#include "dforge/engine/super_resolve.hpp"
#include "dforge/engine/topology.hpp"
#include "dforge/error.hpp"
#include "dforge/image.hpp"
#include "dforge/metrics/metrics.hpp"
#include "dforge/pipeline/pipeline.hpp"
#include "dforge/service/http_service.hpp"
#include "dforge/service/json_io.hpp"
#include "dforge/service/synthesize.hpp"

namespace fs = std::filesystem;
using namespace dforge;

namespace {

constexpr int exit_other = 1;
constexpr int exit_io = 2;
constexpr int exit_corrupt = 3;
constexpr int exit_topology = 4;
constexpr int exit_partial = 5;
constexpr int exit_usage = 64;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::io: return exit_io;
        case ErrorCode::corrupt_weights: return exit_corrupt;
        case ErrorCode::topology_mismatch: return exit_topology;
        case ErrorCode::usage: return exit_usage;
        default: return exit_other;
    }
}

void print_error(std::string_view code, const std::string& message) {
    std::string flat = message;
    for (char& c : flat) {
        if (c == '\n') c = ' ';
    }
    std::cerr << "error[" << code << "]: " << flat << '\n';
}

std::string read_text(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string& path) {
    Json j = Json::parse(read_text(path), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::invalid_input, path + ": not valid JSON");
    return j;
}

Image read_input_image(const std::string& path) {
    if (!fs::exists(path)) throw Error(ErrorCode::io, "no such file: " + path);
    return read_image(path);
}

std::string join(std::span<const double> v, char sep = '\t') {
    std::ostringstream os;
    os.precision(9);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        os << v[i];
    }
    return os.str();
}

std::string resolve_weights(const std::string& flag, const CLI::App& sub) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("DASR_WEIGHTS"); env && *env) return env;
    throw Error(ErrorCode::usage, "no weights given (use --weights or DASR_WEIGHTS)\n" + sub.help());
}

// "vK=X" with K in 1..33 and X in [0,1].
std::pair<int, double> parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (text.size() < 4 || text[0] != 'v' || eq == std::string::npos) {
        throw Error(ErrorCode::usage, "override '" + text + "' must look like vK=X");
    }
    int index = 0;
    double value = 0.0;
    try {
        std::size_t used = 0;
        index = std::stoi(text.substr(1, eq - 1), &used);
        if (used != eq - 1) throw std::invalid_argument("index");
        value = std::stod(text.substr(eq + 1), &used);
        if (used != text.size() - eq - 1) throw std::invalid_argument("value");
    } catch (const std::exception&) {
        throw Error(ErrorCode::usage, "override '" + text + "' must look like vK=X");
    }
    if (index < 1 || index > vector_size) {
        throw Error(ErrorCode::usage, "override index " + std::to_string(index) + " outside 1-33");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::usage, "override value for v" + std::to_string(index) + " outside [0,1]");
    }
    return {index, value};
}

DegradationVector to_vector(const std::vector<double>& values) {
    DegradationVector v{};
    std::copy(values.begin(), values.end(), v.begin());
    return v;
}

// Human-readable view of an unconstrained predictor output.
std::string interpret(std::span<const double> v_hat) {
    DegradationVector v{};
    for (int i = 0; i < vector_size; ++i) {
        double x = v_hat[static_cast<std::size_t>(i)];
        v[static_cast<std::size_t>(i)] = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    }
    return describe(decode(v));
}

struct Options {
    std::string weights;
    std::uint64_t seed = 0;
    std::string level;
    bool json = false;
};

int cmd_synthesize(const std::string& hr_dir, const std::string& out_dir, int count, std::uint64_t seed) {
    SynthesisOptions opt;
    opt.per_level_count = count;
    opt.base_seed = seed;
    const auto summary = synthesize_dataset(hr_dir, out_dir, opt);
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
    std::map<Level, int> per_level;
    for (const auto& r : summary.records) ++per_level[r.level];
    std::cout << "records\t" << summary.records.size() << '\n';
    for (Level l : {Level::S1, Level::S2, Level::S3}) std::cout << to_string(l) << '\t' << per_level[l] << '\n';
    std::cout << "manifest\t" << summary.manifest_path.string() << '\n';
    if (!summary.warnings.empty()) {
        print_error("partial", std::to_string(summary.warnings.size()) + " input(s) skipped");
        return exit_partial;
    }
    return 0;
}

int cmd_encode(const std::string& params_path, const Options& o) {
    DegradationParams params;
    if (!params_path.empty()) {
        params = params_from_json(read_json(params_path));
    } else {
        if (o.level.empty()) throw Error(ErrorCode::usage, "encode needs a params file or --level");
        Rng rng(o.seed);
        params = sample_params(default_schema(), parse_level(o.level), rng);
    }
    const auto v = encode(params);
    if (o.json) {
        std::cout << Json{{"params", params_to_json(params)}, {"v", vector_to_json(v)}}.dump() << '\n';
    } else {
        std::cout << join(v) << '\n';
    }
    return 0;
}

int cmd_decode(const std::vector<std::string>& args, const Options& o) {
    std::vector<double> values;
    if (args.size() == 1) {
        values = vector_from_json(read_json(args[0]), args[0]);
    } else if (args.size() == static_cast<std::size_t>(vector_size)) {
        for (const auto& a : args) {
            try {
                values.push_back(std::stod(a));
            } catch (const std::exception&) {
                throw Error(ErrorCode::usage, "not a number: " + a);
            }
        }
    } else {
        throw Error(ErrorCode::usage, "decode takes 33 numbers or one JSON file");
    }
    const auto params = decode(to_vector(values));
    if (o.json) {
        std::cout << params_to_json(params).dump() << '\n';
    } else {
        std::cout << describe(params);
    }
    return 0;
}

int cmd_degrade(const std::string& in, const std::string& out, const std::string& params_path, const Options& o) {
    const Image hr = read_input_image(in);
    DegradationParams params;
    if (!params_path.empty()) {
        params = params_from_json(read_json(params_path));
        validate_for_level(default_schema(), params);
    } else {
        Rng rng(o.seed);
        params = sample_params(default_schema(), parse_level(o.level.empty() ? "S1" : o.level), rng);
    }
    const auto res = run_pipeline(hr, params);
    write_png(res.lr, out);
    for (const auto& r : res.trace.records) {
        std::cout << r.stage << '\t' << r.operation << '\t' << r.height << 'x' << r.width << '\t' << r.parameters
                  << '\n';
    }
    std::cout << "v\t" << join(encode(params)) << '\n';
    return 0;
}

int cmd_predict(const std::string& image, const Options& o, const CLI::App& sub) {
    const std::string weights = resolve_weights(o.weights, sub);
    const Image lr = read_input_image(image);
    const Model model = load_model(weights);
    const auto v_hat = predict_degradation(lr, model.predictor);
    if (o.json) {
        std::cout << Json{{"v_hat", vector_to_json(v_hat)}}.dump() << '\n';
        return 0;
    }
    std::cout << "v_hat\t" << join(v_hat) << '\n';
    std::cout << interpret(v_hat);
    return 0;
}

int cmd_sr(const std::string& image, const std::string& out, const std::vector<std::string>& overrides,
           const Options& o, const CLI::App& sub) {
    std::vector<std::pair<int, double>> edits;
    for (const auto& text : overrides) edits.push_back(parse_override(text));
    const std::string weights = resolve_weights(o.weights, sub);
    const Image lr = read_input_image(image);
    const Model model = load_model(weights);
    SuperResolveResult res;
    if (edits.empty()) {
        res = super_resolve(lr, model);
    } else {
        std::vector<double> v = predict_degradation(lr, model.predictor);
        for (auto [index, value] : edits) v[static_cast<std::size_t>(index - 1)] = value;
        res = super_resolve(lr, model, std::span<const double>(v));
    }
    write_png(res.sr, out);
    if (o.json) {
        std::cout << Json{{"output", out},
                          {"height", res.sr.height()},
                          {"width", res.sr.width()},
                          {"v_hat", vector_to_json(res.v_hat)},
                          {"a", vector_to_json(res.a)}}
                         .dump()
                  << '\n';
        return 0;
    }
    std::cout << "output\t" << out << '\t' << res.sr.height() << 'x' << res.sr.width() << '\n';
    std::cout << "v_hat\t" << join(res.v_hat) << '\n';
    std::cout << "a\t" << join(res.a) << '\n';
    return 0;
}

int cmd_counters(const std::string& which, int height, int width, int experts) {
    if (which != "params" && which != "flops") throw Error(ErrorCode::usage, "counters takes 'params' or 'flops'");
    if (height < 1 || width < 1) throw Error(ErrorCode::usage, "height and width must be positive");
    const CostReport r = cost_report(height, width, experts);
    std::printf("component\t%s\n", which == "params" ? "params" : "gmac");
    if (which == "params") {
        std::printf("expert\t%lld\n", static_cast<long long>(r.expert_params));
        std::printf("experts_x%d\t%lld\n", r.experts, static_cast<long long>(r.experts * r.expert_params));
        std::printf("predictor\t%lld\n", static_cast<long long>(r.predictor_params));
        std::printf("weighting\t%lld\n", static_cast<long long>(r.weighting_params));
        std::printf("predictor+weighting\t%lld\n", static_cast<long long>(r.predictor_params + r.weighting_params));
        std::printf("total\t%lld\n", static_cast<long long>(r.total_params()));
    } else {
        std::printf("expert\t%.4f\n", r.expert_gmac);
        std::printf("predictor\t%.4f\n", r.predictor_gmac);
        std::printf("weighting\t%.9f\n", r.weighting_gmac);
        std::printf("predictor+weighting\t%.4f\n", r.predictor_gmac + r.weighting_gmac);
        std::printf("mixing\t%.6f\n", r.mixing_gmac);
        std::printf("total\t%.4f\n", r.total_gmac());
    }
    return 0;
}

std::vector<std::pair<fs::path, fs::path>> metric_pairs(const fs::path& ref, const fs::path& test) {
    if (fs::is_directory(ref) != fs::is_directory(test)) {
        throw Error(ErrorCode::usage, "metrics compares two files or two directories");
    }
    if (!fs::is_directory(ref)) {
        for (const auto& p : {ref, test}) {
            if (!fs::exists(p)) throw Error(ErrorCode::io, "no such file: " + p.string());
        }
        return {{ref, test}};
    }
    std::vector<std::pair<fs::path, fs::path>> out;
    for (const auto& e : fs::directory_iterator(ref)) {
        if (!e.is_regular_file()) continue;
        const fs::path other = test / e.path().filename();
        if (fs::exists(other)) out.emplace_back(e.path(), other);
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw Error(ErrorCode::io, "no matching file names in " + ref.string() + " and " + test.string());
    return out;
}

int cmd_metrics(const std::string& ref, const std::string& test) {
    const auto pairs = metric_pairs(ref, test);
    std::cout << "image\tpsnr_y\tl1\n";
    double psnr_sum = 0.0;
    double l1_sum = 0.0;
    for (const auto& [a, b] : pairs) {
        const Image x = read_image(a);
        const Image y = read_image(b);
        const double p = psnr_y(y, x);
        const double l = pixel_loss(y, x);
        psnr_sum += p;
        l1_sum += l;
        std::printf("%s\t%s\t%.6f\n", a.filename().string().c_str(),
                    std::isinf(p) ? "inf" : std::to_string(p).c_str(), l);
    }
    const double n = static_cast<double>(pairs.size());
    std::printf("mean\t%s\t%.6f\n", std::isinf(psnr_sum) ? "inf" : std::to_string(psnr_sum / n).c_str(), l1_sum / n);
    return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& weights_flag) {
    std::string weights = weights_flag;
    if (weights.empty()) {
        if (const char* env = std::getenv("DASR_WEIGHTS"); env && *env) weights = env;
    }
    std::shared_ptr<const Model> model;
    if (!weights.empty()) model = std::make_shared<const Model>(load_model(weights));
    const DegradationService service(model);
    std::cerr << "listening on " << host << ':' << port << (model ? "" : " (no weights; inference routes return 409)")
              << '\n';
    run_server(service, host, port);
    return 0;
}

int cmd_schema(bool ini) {
    if (ini) {
        std::cout << dump_schema(default_schema());
    } else {
        std::cout << schema_to_json(default_schema()).dump(2) << '\n';
    }
    return 0;
}

int cmd_fixture(const std::string& out, std::uint64_t seed, int experts, bool zero) {
    const Model model = make_fixture_model(seed, experts, zero);
    save_weights(model.to_tensors(), out);
    std::printf("wrote\t%s\nfingerprint\t%016llx\n", out.c_str(), static_cast<unsigned long long>(model.fingerprint()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degradation synthesis and degradation-adaptive super-resolution"};
    app.require_subcommand(1);
    Options o;

    auto add_json = [&](CLI::App* s) { s->add_flag("--json", o.json, "Machine-readable JSON output"); };

    std::string hr_dir, out_dir;
    int count = 1;
    auto* synth = app.add_subcommand("synthesize", "Build an LR/HR dataset with a JSONL manifest");
    synth->add_option("hr_dir", hr_dir, "Directory of HR images")->required();
    synth->add_option("out_dir", out_dir, "Output directory")->required();
    synth->add_option("--count", count, "Pairs per level per image")->capture_default_str();
    synth->add_option("--seed", o.seed, "Base seed")->capture_default_str();

    std::string params_path;
    auto* enc = app.add_subcommand("encode", "Parameters (JSON file or sampled) to a 33-slot vector");
    enc->add_option("params", params_path, "Parameter JSON file, '-' for stdin");
    enc->add_option("--level", o.level, "Sample at this level instead (S1, S2, S3)");
    enc->add_option("--seed", o.seed, "Sampling seed");
    add_json(enc);

    std::vector<std::string> decode_args;
    auto* dec = app.add_subcommand("decode", "33-slot vector to parameters");
    dec->add_option("vector", decode_args, "33 numbers, or one JSON array file")->required();
    add_json(dec);

    std::string in_path, out_path;
    auto* deg = app.add_subcommand("degrade", "Run the degradation pipeline on one image");
    deg->add_option("input", in_path)->required();
    deg->add_option("output", out_path, "LR PNG")->required();
    deg->add_option("--params", params_path, "Parameter JSON file");
    deg->add_option("--level", o.level, "Sample at this level (default S1)");
    deg->add_option("--seed", o.seed, "Sampling seed");

    auto* pred = app.add_subcommand("predict", "Predict the degradation vector of an LR image");
    pred->add_option("image", in_path)->required();
    pred->add_option("--weights", o.weights, "Weight file (default $DASR_WEIGHTS)");
    add_json(pred);

    std::vector<std::string> overrides;
    auto* sr = app.add_subcommand("sr", "Super-resolve an LR image by 4x");
    sr->add_option("image", in_path)->required();
    sr->add_option("output", out_path, "SR PNG")->required();
    sr->add_option("--weights", o.weights, "Weight file (default $DASR_WEIGHTS)");
    sr->add_option("--override", overrides, "Replace a predicted slot, e.g. v2=0.8 (repeatable)");
    add_json(sr);

    std::string which;
    int height = 256, width = 256, experts = default_expert_count;
    auto* cnt = app.add_subcommand("counters", "Analytic parameter and FLOP counts");
    cnt->add_option("which", which, "params or flops")->required();
    cnt->add_option("height", height)->capture_default_str();
    cnt->add_option("width", width)->capture_default_str();
    cnt->add_option("--experts", experts)->capture_default_str();

    std::string ref, test;
    auto* met = app.add_subcommand("metrics", "PSNR-Y and L1 between reference and test images");
    met->add_option("reference", ref, "File or directory")->required();
    met->add_option("test", test, "File or directory")->required();

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* srv = app.add_subcommand("serve", "HTTP JSON service");
    srv->add_option("--host", host)->capture_default_str();
    srv->add_option("--port", port)->capture_default_str();
    srv->add_option("--weights", o.weights, "Weight file (default $DASR_WEIGHTS); optional");

    bool ini = false;
    auto* sch = app.add_subcommand("schema", "Print the degradation schema");
    sch->add_flag("--ini", ini, "INI form instead of JSON");

    int fixture_experts = default_expert_count;
    bool zero = false;
    auto* fix = app.add_subcommand("fixture-weights", "Write seeded random weights for testing");
    fix->add_option("output", out_path)->required();
    fix->add_option("--seed", o.seed)->capture_default_str();
    fix->add_option("--experts", fixture_experts)->capture_default_str();
    fix->add_flag("--zero", zero, "All-zero weights");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        std::cerr << app.help();
        return exit_usage;
    }

    try {
        if (*synth) return cmd_synthesize(hr_dir, out_dir, count, o.seed);
        if (*enc) return cmd_encode(params_path, o);
        if (*dec) return cmd_decode(decode_args, o);
        if (*deg) return cmd_degrade(in_path, out_path, params_path, o);
        if (*pred) return cmd_predict(in_path, o, *pred);
        if (*sr) return cmd_sr(in_path, out_path, overrides, o, *sr);
        if (*cnt) return cmd_counters(which, height, width, experts);
        if (*met) return cmd_metrics(ref, test);
        if (*srv) return cmd_serve(host, port, o.weights);
        if (*sch) return cmd_schema(ini);
        if (*fix) return cmd_fixture(out_path, o.seed, fixture_experts, zero);
    } catch (const Error& e) {
        const std::string msg = e.what();
        if (e.code() == ErrorCode::usage && msg.find('\n') != std::string::npos) {
            // Usage errors carry the subcommand help after the first line.
            print_error("usage", msg.substr(0, msg.find('\n')));
            std::cerr << msg.substr(msg.find('\n') + 1);
        } else {
            print_error(to_string(e.code()), msg);
        }
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return exit_other;
    }
    return exit_usage;
}
