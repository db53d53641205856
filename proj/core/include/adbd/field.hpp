#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "adbd/errors.hpp"

namespace adbd {

// An n-dimensional grid of doubles in row-major order. Points use shape {d},
// grayscale images use shape {H, W}.
class Field {
public:
    Field() = default;
    explicit Field(std::vector<std::size_t> shape);
    Field(std::vector<std::size_t> shape, std::vector<double> values);

    static Field point(std::initializer_list<double> coords);
    static Field filled(std::vector<std::size_t> shape, double value);

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& storage() noexcept { return values_; }
    const std::vector<double>& storage() const noexcept { return values_; }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    // Image accessors; valid only for rank-2 fields.
    std::size_t height() const { return shape_.at(0); }
    std::size_t width() const { return shape_.at(1); }
    double& at(std::size_t row, std::size_t col) { return values_[row * shape_[1] + col]; }
    double at(std::size_t row, std::size_t col) const { return values_[row * shape_[1] + col]; }

    bool same_shape(const Field& other) const noexcept { return shape_ == other.shape_; }
    bool all_finite() const noexcept;

    bool operator==(const Field&) const = default;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

std::size_t shape_volume(std::span<const std::size_t> shape);
std::string shape_string(std::span<const std::size_t> shape);

// Throws ConfigError naming `what` when shapes differ.
void require_same_shape(const Field& a, const Field& b, const char* what);

double max_abs_diff(const Field& a, const Field& b);

}  // namespace adbd
