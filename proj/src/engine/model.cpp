#include "dforge/engine/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <random>

#include "dforge/degradation/schema.hpp"
#include "dforge/engine/forward.hpp"
#include "dforge/engine/topology.hpp"
#include "dforge/error.hpp"
#include "dforge/util/checksum.hpp"

namespace dforge {

static_assert(std::endian::native == std::endian::little, "weight I/O assumes a little-endian host");

namespace {

class Writer {
public:
    template <typename T>
    void put(T v) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
        bytes_.insert(bytes_.end(), p, p + sizeof(T));
    }
    void put_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        T v;
        std::memcpy(&v, take(sizeof(T)), sizeof(T));
        return v;
    }
    const std::uint8_t* take(std::size_t n) {
        if (n > bytes_.size() - pos_) throw Error(ErrorCode::corrupt_weights, "weight file truncated");
        const auto* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_weights(const TensorMap& tensors) {
    Writer w;
    w.put_bytes(weight_magic, sizeof weight_magic);
    w.put<std::uint32_t>(weight_format_version);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(tensors.size()));
    for (const Tensor& t : tensors.entries()) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(t.name.size()));
        w.put_bytes(t.name.data(), t.name.size());
        w.put<std::uint8_t>(weight_dtype_f32);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(t.shape.size()));
        for (auto d : t.shape) w.put<std::uint64_t>(static_cast<std::uint64_t>(d));
        w.put_bytes(t.values.data(), t.values.size() * sizeof(float));
    }
    w.put<std::uint64_t>(util::checksum64(w.bytes().data(), w.bytes().size()));
    return std::move(w.bytes());
}

TensorMap deserialize_weights(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof weight_magic + 8 + 8 ||
        std::memcmp(bytes.data(), weight_magic, sizeof weight_magic) != 0) {
        throw Error(ErrorCode::corrupt_weights, "not a weight file (bad magic)");
    }
    const std::size_t body = bytes.size() - sizeof(std::uint64_t);
    std::uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + body, sizeof stored);
    if (stored != util::checksum64(bytes.data(), body)) {
        throw Error(ErrorCode::corrupt_weights, "weight file checksum mismatch");
    }
    Reader r(bytes.first(body));
    r.take(sizeof weight_magic);
    const auto version = r.get<std::uint32_t>();
    if (version != weight_format_version) {
        throw Error(ErrorCode::corrupt_weights, "unsupported weight format version " + std::to_string(version));
    }
    const auto count = r.get<std::uint32_t>();
    TensorMap out;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto name_len = r.get<std::uint32_t>();
        const auto* name = reinterpret_cast<const char*>(r.take(name_len));
        Tensor t;
        t.name.assign(name, name_len);
        if (r.get<std::uint8_t>() != weight_dtype_f32) {
            throw Error(ErrorCode::corrupt_weights, t.name + ": unsupported element type");
        }
        const auto rank = r.get<std::uint32_t>();
        std::uint64_t elements = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            const auto dim = r.get<std::uint64_t>();
            if (dim == 0 || dim > (1ULL << 32)) throw Error(ErrorCode::corrupt_weights, t.name + ": bad dimension");
            elements *= dim;
            if (elements > r.remaining()) throw Error(ErrorCode::corrupt_weights, "weight file truncated");
            t.shape.push_back(static_cast<std::int64_t>(dim));
        }
        t.values.resize(elements);
        std::memcpy(t.values.data(), r.take(elements * sizeof(float)), elements * sizeof(float));
        if (out.find(t.name)) throw Error(ErrorCode::corrupt_weights, "duplicate tensor " + t.name);
        out.add(std::move(t));
    }
    if (r.remaining() != 0) throw Error(ErrorCode::corrupt_weights, "trailing bytes before checksum");
    return out;
}

void save_weights(const TensorMap& tensors, const std::filesystem::path& path) {
    const auto bytes = serialize_weights(tensors);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "short write to " + path.string());
}

TensorMap load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open weights " + path.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return deserialize_weights(bytes);
}

// ---- model --------------------------------------------------------------------

namespace {

constexpr std::string_view expert_prefix = "expert.";
constexpr std::string_view predictor_prefix = "predictor.";
constexpr std::string_view weighting_prefix = "weighting.";

std::vector<TensorMap> placeholder(int n) { return std::vector<TensorMap>(n, expert_topology().parameter_shapes()); }

}  // namespace

Model Model::from_tensors(const TensorMap& tensors) {
    std::map<int, TensorMap> experts;
    TensorMap predictor;
    TensorMap weighting;
    for (const Tensor& t : tensors.entries()) {
        const std::string_view name = t.name;
        if (name.starts_with(expert_prefix)) {
            const auto rest = name.substr(expert_prefix.size());
            const auto dot = rest.find('.');
            int index = -1;
            if (dot != std::string_view::npos) {
                try {
                    index = std::stoi(std::string(rest.substr(0, dot)));
                } catch (const std::exception&) {
                    index = -1;
                }
            }
            if (index < 0) throw Error(ErrorCode::topology_mismatch, "malformed expert tensor name " + t.name);
            experts[index].add(std::string(rest.substr(dot + 1)), t.shape, t.values);
        } else if (name.starts_with(predictor_prefix)) {
            predictor.add(std::string(name.substr(predictor_prefix.size())), t.shape, t.values);
        } else if (name.starts_with(weighting_prefix)) {
            weighting.add(std::string(name.substr(weighting_prefix.size())), t.shape, t.values);
        } else {
            throw Error(ErrorCode::topology_mismatch, "unexpected tensor " + t.name);
        }
    }
    if (experts.empty()) throw Error(ErrorCode::topology_mismatch, "weight file contains no experts");
    std::vector<TensorMap> bank;
    int expected = 0;
    for (auto& [index, map] : experts) {
        if (index != expected++) {
            throw Error(ErrorCode::topology_mismatch, "expert indices must be contiguous from 0");
        }
        check_parameters(expert_topology(), map);
        bank.push_back(std::move(map));
    }
    check_parameters(predictor_topology(), predictor);
    const Tensor* hidden_bias = weighting.find("fc1.bias");
    const int hidden = hidden_bias && hidden_bias->shape.size() == 1 ? static_cast<int>(hidden_bias->shape[0]) : 0;
    if (hidden <= 0) throw Error(ErrorCode::topology_mismatch, "weighting: tensor fc1.bias missing or misshaped");
    const TensorMap want = WeightingNet::shapes(vector_size, hidden, static_cast<int>(bank.size()));
    if (auto bad = want.first_mismatch(weighting)) {
        throw Error(ErrorCode::topology_mismatch, "weighting: tensor " + *bad + " missing or misshaped");
    }
    return Model{ExpertBank(std::move(bank)), std::move(predictor), WeightingNet::from_tensors(weighting)};
}

TensorMap Model::to_tensors() const {
    TensorMap out;
    for (int i = 0; i < bank.size(); ++i) {
        for (const Tensor& t : bank.expert(i).entries()) {
            out.add("expert." + std::to_string(i) + "." + t.name, t.shape, t.values);
        }
    }
    for (const Tensor& t : predictor.entries()) out.add("predictor." + t.name, t.shape, t.values);
    const TensorMap head = weighting.to_tensors();
    for (const Tensor& t : head.entries()) out.add("weighting." + t.name, t.shape, t.values);
    return out;
}

std::uint64_t Model::fingerprint() const { return to_tensors().fingerprint(); }

Model load_model(const std::filesystem::path& path) { return Model::from_tensors(load_weights(path)); }

namespace {

using Engine = std::mt19937_64;

void fill_uniform(std::vector<float>& v, Engine& rng, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    for (float& x : v) x = static_cast<float>(u(rng));
}

void init_network(TensorMap& params, Engine& rng, bool zero) {
    for (Tensor& t : params.entries()) {
        if (zero) continue;
        const bool is_bias = t.shape.size() == 1;
        if (is_bias) {
            fill_uniform(t.values, rng, 0.01);
            continue;
        }
        std::int64_t fan_in = 1;
        for (std::size_t d = 1; d < t.shape.size(); ++d) fan_in *= t.shape[d];
        double gain = 1.0;
        // Residual branches start small so 16 stacked blocks stay well scaled.
        if (t.name.find(".conv2.") != std::string::npos) gain = 0.1;
        fill_uniform(t.values, rng, gain * std::sqrt(3.0 / static_cast<double>(fan_in)));
    }
}

}  // namespace

Model make_fixture_model(std::uint64_t seed, int experts, bool zero) {
    if (experts < 1) throw Error(ErrorCode::invalid_input, "fixture needs at least one expert");
    Engine rng(seed);
    std::vector<TensorMap> bank = placeholder(experts);
    for (auto& e : bank) init_network(e, rng, zero);
    TensorMap predictor = predictor_topology().parameter_shapes();
    init_network(predictor, rng, zero);
    TensorMap weighting = WeightingNet::shapes(vector_size, weighting_hidden, experts);
    init_network(weighting, rng, zero);
    // Start near a uniform blend so the fixture's experts all contribute.
    if (!zero) {
        for (float& b : weighting.find("fc2.bias")->values) b = 1.0f / static_cast<float>(experts);
    }
    return Model{ExpertBank(std::move(bank)), std::move(predictor), WeightingNet::from_tensors(weighting)};
}

}  // namespace dforge
