#include "dforge/moe/tensor_map.hpp"

#include <cstring>

#include "dforge/error.hpp"
#include "dforge/util/checksum.hpp"

namespace dforge {

std::int64_t element_count(const Shape& shape) noexcept {
    std::int64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

void TensorMap::add(Tensor tensor) {
    for (auto d : tensor.shape) {
        if (d <= 0) throw Error(ErrorCode::shape_mismatch, tensor.name + ": non-positive dimension");
    }
    if (static_cast<std::int64_t>(tensor.values.size()) != element_count(tensor.shape)) {
        throw Error(ErrorCode::shape_mismatch, tensor.name + ": " + std::to_string(tensor.values.size()) +
                                                   " values for shape " + shape_string(tensor.shape));
    }
    if (index_.contains(tensor.name)) {
        throw Error(ErrorCode::shape_mismatch, "duplicate tensor name " + tensor.name);
    }
    index_.emplace(tensor.name, entries_.size());
    entries_.push_back(std::move(tensor));
}

void TensorMap::add(std::string name, Shape shape, std::vector<float> values) {
    add(Tensor{std::move(name), std::move(shape), std::move(values)});
}

const Tensor* TensorMap::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

Tensor* TensorMap::find(const std::string& name) {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

const Tensor& TensorMap::at(const std::string& name) const {
    if (const Tensor* t = find(name)) return *t;
    throw Error(ErrorCode::shape_mismatch, "missing tensor " + name);
}

std::int64_t TensorMap::parameter_count() const noexcept {
    std::int64_t n = 0;
    for (const auto& t : entries_) n += static_cast<std::int64_t>(t.values.size());
    return n;
}

std::optional<std::string> TensorMap::first_mismatch(const TensorMap& other) const {
    for (const auto& t : entries_) {
        const Tensor* o = other.find(t.name);
        if (!o || o->shape != t.shape) return t.name;
    }
    for (const auto& t : other.entries_) {
        if (!find(t.name)) return t.name;
    }
    return std::nullopt;
}

std::uint64_t TensorMap::fingerprint() const noexcept {
    util::Checksum64 h;
    for (const auto& t : entries_) {
        h.update(t.name.data(), t.name.size());
        h.update(t.shape.data(), t.shape.size() * sizeof(std::int64_t));
        h.update(t.values.data(), t.values.size() * sizeof(float));
    }
    return h.digest();
}

}  // namespace dforge
