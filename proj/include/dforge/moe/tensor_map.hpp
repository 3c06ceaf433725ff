#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>
#include <utility>

namespace dforge {

using Shape = std::vector<std::int64_t>;

std::int64_t element_count(const Shape& shape) noexcept;
std::string shape_string(const Shape& shape);

struct Tensor {
    std::string name;
    Shape shape;
    std::vector<float> values;

    friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Insertion-ordered collection of uniquely named tensors.
class TensorMap {
public:
    TensorMap() = default;

    // Throws Error(shape_mismatch) on duplicate names or value/shape disagreement.
    void add(Tensor tensor);
    void add(std::string name, Shape shape, std::vector<float> values);

    const Tensor* find(const std::string& name) const;
    Tensor* find(const std::string& name);
    const Tensor& at(const std::string& name) const;

    const std::vector<Tensor>& entries() const& noexcept { return entries_; }
    std::vector<Tensor>& entries() & noexcept { return entries_; }
    // Temporaries hand over their storage so range-for over f().entries() stays valid.
    std::vector<Tensor> entries() && noexcept { return std::move(entries_); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::int64_t parameter_count() const noexcept;

    // First name whose presence or shape differs between the two maps, if any.
    std::optional<std::string> first_mismatch(const TensorMap& other) const;

    // CRC-64 over names, shapes and raw values.
    std::uint64_t fingerprint() const noexcept;

    friend bool operator==(const TensorMap& a, const TensorMap& b) { return a.entries_ == b.entries_; }

private:
    std::vector<Tensor> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace dforge
