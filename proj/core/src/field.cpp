#include "adbd/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adbd {

std::size_t shape_volume(std::span<const std::size_t> shape) {
    std::size_t n = 1;
    for (auto d : shape) {
        if (d == 0) throw ConfigError("field shape has a zero extent");
        if (n > static_cast<std::size_t>(-1) / d) throw ConfigError("field shape overflows");
        n *= d;
    }
    return n;
}

std::string shape_string(std::span<const std::size_t> shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

Field::Field(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), values_(shape_volume(shape_), 0.0) {
    if (shape_.empty()) throw ConfigError("field needs at least one dimension");
}

Field::Field(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (shape_.empty()) throw ConfigError("field needs at least one dimension");
    if (shape_volume(shape_) != values_.size()) {
        throw ConfigError("field values length " + std::to_string(values_.size()) +
                          " does not match shape " + shape_string(shape_));
    }
}

Field Field::point(std::initializer_list<double> coords) {
    return Field({coords.size()}, std::vector<double>(coords));
}

Field Field::filled(std::vector<std::size_t> shape, double value) {
    Field f(std::move(shape));
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Field& a, const Field& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ConfigError(std::string(what) + ": shape mismatch " + shape_string(a.shape()) +
                          " vs " + shape_string(b.shape()));
    }
}

double max_abs_diff(const Field& a, const Field& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace adbd
