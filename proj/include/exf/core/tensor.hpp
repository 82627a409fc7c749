#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "exf/errors.hpp"

namespace exf::core {

// Dense row-major 64-bit float array, rank 1..3. NaN is the transport encoding
// for masked cells; everything else must be finite.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0)
        : shape_(std::move(shape)) {
        std::size_t n = 1;
        for (std::size_t d : shape_) n *= d;
        data_.assign(n, fill);
    }

    Tensor(std::initializer_list<std::size_t> shape, double fill = 0.0)
        : Tensor(std::vector<std::size_t>(shape), fill) {}

    static Tensor zeros(std::initializer_list<std::size_t> shape) { return Tensor(shape, 0.0); }

    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t dim(std::size_t i) const { return shape_[i]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t i) { return data_[i]; }
    double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double at(std::size_t i) const { return data_[i]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    void require_shape(std::initializer_list<std::size_t> expect, const char* what) const {
        if (shape_ != std::vector<std::size_t>(expect)) {
            std::string msg = std::string(what) + ": expected shape (";
            for (std::size_t d : expect) msg += std::to_string(d) + ",";
            msg += ") actual (";
            for (std::size_t d : shape_) msg += std::to_string(d) + ",";
            msg += ")";
            throw DataError(msg);
        }
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

}  // namespace exf::core
