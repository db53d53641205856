#include "adbd/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adbd/fft.hpp"
#include "adbd/rng.hpp"

namespace adbd {
namespace {

void require_image(const SpectralField& f, const Field& x) {
    if (x.rank() != 2 || x.height() != f.height || x.width() != f.width) {
        throw ConfigError("spectral field " + shape_string(f.shape()) + " cannot score field of shape " +
                          shape_string(x.shape()));
    }
}

// Apply diag(factor) in the unitary DFT basis to a real grid.
std::vector<double> apply_spectral(const SpectralField& f, std::span<const double> grid,
                                   const std::vector<double>& factor) {
    auto spec = fft::forward_2d(grid, f.height, f.width);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= factor[i];
    return fft::inverse_2d_real(spec, f.height, f.width);
}

}  // namespace

void SpectralField::validate() const {
    if (height < 2 || width < 2) throw ConfigError("spectral field needs H, W >= 2");
    const std::size_t n = height * width;
    if (mean.size() != n || spectrum.size() != n) throw ConfigError("spectral field arrays do not match H x W");
    for (std::size_t u = 0; u < height; ++u) {
        for (std::size_t v = 0; v < width; ++v) {
            const double s = spectrum[u * width + v];
            if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("spectral field variance must be positive");
            const double m = spectrum[fft::mirror_bin(u, height) * width + fft::mirror_bin(v, width)];
            if (m != s) throw ConfigError("spectral field spectrum is not conjugate-symmetric");
        }
    }
    for (double m : mean) {
        if (!std::isfinite(m)) throw ConfigError("spectral field mean is not finite");
    }
}

double SpectralField::pixel_variance() const {
    double s = 0.0;
    for (double v : spectrum) s += v;
    return s / static_cast<double>(spectrum.size());
}

std::vector<Field> spectral_field_sample(const SpectralField& field, std::size_t count, std::uint64_t seed,
                                         double clamp_lo, double clamp_hi) {
    field.validate();
    if (count == 0) throw ConfigError("spectral_field_sample: count must be at least 1");
    std::vector<double> root(field.spectrum.size());
    std::transform(field.spectrum.begin(), field.spectrum.end(), root.begin(),
                   [](double s) { return std::sqrt(s); });
    std::vector<Field> out;
    out.reserve(count);
    const std::size_t n = field.height * field.width;
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(seed, i, 0x737066ull);
        std::vector<double> white(n);
        for (auto& w : white) w = rng.normal();
        auto values = apply_spectral(field, white, root);
        for (std::size_t j = 0; j < n; ++j) {
            values[j] = std::clamp(values[j] + field.mean[j], clamp_lo, clamp_hi);
        }
        out.emplace_back(field.shape(), std::move(values));
    }
    return out;
}

double spectral_log_density(const SpectralField& field, const Field& x) {
    require_image(field, x);
    const std::size_t n = field.height * field.width;
    std::vector<double> centered(n);
    for (std::size_t j = 0; j < n; ++j) centered[j] = x[j] - field.mean[j];
    const auto spec = fft::forward_2d(centered, field.height, field.width);
    double quad = 0.0;
    double log_det = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        quad += std::norm(spec[i]) / field.spectrum[i];
        log_det += std::log(field.spectrum[i]);
    }
    quad /= static_cast<double>(n);
    return -0.5 * quad - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

Field spectral_score(const SpectralField& field, const Field& x) {
    require_image(field, x);
    const std::size_t n = field.height * field.width;
    std::vector<double> centered(n);
    for (std::size_t j = 0; j < n; ++j) centered[j] = x[j] - field.mean[j];
    std::vector<double> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[i] = -1.0 / field.spectrum[i];
    return Field(field.shape(), apply_spectral(field, centered, inv));
}

SpectralField noised_spectral_field_at(const SpectralField& field, const NoiseSchedule& schedule, double t) {
    const double ab = schedule.alpha_bar_at(t);
    const double scale = std::sqrt(ab);
    SpectralField out = field;
    for (auto& m : out.mean) m *= scale;
    for (auto& s : out.spectrum) s = ab * s + (1.0 - ab);
    return out;
}

}  // namespace adbd
