#pragma once

#include <cstddef>
#include <vector>

#include "tokenprune/errors.hpp"

namespace tokenprune {

// On-disk element precision. In memory everything is float64; every float32
// is exactly representable as a double, so f32 files round-trip bit-exactly.
enum class Dtype { Float32, Float64 };

inline std::size_t dtype_size(Dtype d) { return d == Dtype::Float32 ? 4 : 8; }

// Dense C-order tensor of rank 1..3.
class Tensor {
public:
    Tensor() = default;

    Tensor(std::vector<std::size_t> shape, Dtype dtype = Dtype::Float32)
        : shape_(std::move(shape)), dtype_(dtype) {
        if (shape_.empty() || shape_.size() > 3) {
            throw InvalidArgumentError("Tensor: rank must be 1, 2 or 3");
        }
        std::size_t n = 1;
        for (std::size_t d : shape_) n *= d;
        data_.assign(n, 0.0);
    }

    std::size_t rank() const { return shape_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const { return data_.size(); }

    Dtype dtype() const { return dtype_; }
    void set_dtype(Dtype d) { dtype_ = d; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& at(std::size_t i) { return data_[i]; }
    double at(std::size_t i) const { return data_[i]; }

    double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

    double& at(std::size_t h, std::size_t i, std::size_t j) {
        return data_[(h * shape_[1] + i) * shape_[2] + j];
    }
    double at(std::size_t h, std::size_t i, std::size_t j) const {
        return data_[(h * shape_[1] + i) * shape_[2] + j];
    }

    bool all_finite() const;

    bool operator==(const Tensor&) const = default;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
    Dtype dtype_ = Dtype::Float32;
};

}  // namespace tokenprune
