#include "adbd/domains.hpp"

#include <cmath>
#include <numbers>

#include "adbd/fft.hpp"
#include "adbd/rng.hpp"

namespace adbd {
namespace {

constexpr double kSourcePixelStd = 0.25;
constexpr double kTargetPixelStd = 0.35;
constexpr double kSpectrumFloor = 5e-5;
constexpr double kBlobRadius = 0.08;    // fraction of Nyquist
constexpr double kBandWidth = 0.035;    // cycles per pixel

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double bump(double fy, double fx, double cy, double cx) {
    const double dy = fy - cy;
    const double dx = fx - cx;
    return std::exp(-(dy * dy + dx * dx) / (2.0 * kBandWidth * kBandWidth));
}

// Builds a zero-mean field whose bin variances follow `profile(fy, fx)`,
// rescaled to per-pixel standard deviation `pixel_std`.
template <class Profile>
SpectralField field_from_profile(std::size_t size, double pixel_std, Profile&& profile) {
    SpectralField f;
    f.height = size;
    f.width = size;
    f.mean.assign(size * size, 0.0);
    f.spectrum.resize(size * size);
    double total = 0.0;
    for (std::size_t u = 0; u < size; ++u) {
        for (std::size_t v = 0; v < size; ++v) {
            const double p = profile(fft::bin_frequency(u, size), fft::bin_frequency(v, size));
            f.spectrum[u * size + v] = p;
            total += p;
        }
    }
    // Nyquist rows/columns map to themselves under negation, so symmetrize
    // explicitly instead of relying on the profile being even.
    std::vector<double> sym(f.spectrum.size());
    for (std::size_t u = 0; u < size; ++u) {
        for (std::size_t v = 0; v < size; ++v) {
            const double a = f.spectrum[u * size + v];
            const double b = f.spectrum[fft::mirror_bin(u, size) * size + fft::mirror_bin(v, size)];
            sym[u * size + v] = 0.5 * (a + b);
        }
    }
    f.spectrum = std::move(sym);
    const double target = pixel_std * pixel_std * static_cast<double>(size * size);
    const double scale = target / total;
    for (auto& s : f.spectrum) s = s * scale + kSpectrumFloor;
    return f;
}

}  // namespace

void DomainPair::validate() const {
    std::visit([](const auto& d) { d.validate(); }, source);
    std::visit([](const auto& d) { d.validate(); }, target);
    if (domain_shape(source) != shape || domain_shape(target) != shape) {
        throw ConfigError("domain pair '" + name + "': source and target shapes differ");
    }
}

std::vector<std::size_t> domain_shape(const DomainSpec& spec) {
    if (const auto* m = std::get_if<GaussianMixture>(&spec)) return {m->dimension()};
    return std::get<SpectralField>(spec).shape();
}

bool is_image_domain(const DomainSpec& spec) { return std::holds_alternative<SpectralField>(spec); }

std::vector<Field> sample_domain(const DomainSpec& spec, std::size_t count, std::uint64_t seed) {
    if (const auto* m = std::get_if<GaussianMixture>(&spec)) return gmm_sample(*m, count, seed);
    return spectral_field_sample(std::get<SpectralField>(spec), count, seed);
}

double domain_log_density(const DomainSpec& spec, const Field& x) {
    if (const auto* m = std::get_if<GaussianMixture>(&spec)) return gmm_log_density(*m, x);
    return spectral_log_density(std::get<SpectralField>(spec), x);
}

DomainPair default_gmm_pair() {
    GaussianMixture a;
    a.weights = {0.4, 0.3, 0.3};
    a.means = {{-2.0, 0.0}, {-1.2, 1.6}, {-1.2, -1.6}};
    a.variances = {0.2, 0.2, 0.2};
    GaussianMixture b;
    b.weights = {0.4, 0.3, 0.3};
    b.means = {{2.0, 0.0}, {1.2, 1.6}, {1.2, -1.6}};
    b.variances = {0.2, 0.2, 0.2};
    DomainPair pair{"gmm", a, b, {2}};
    pair.validate();
    return pair;
}

const std::vector<std::string>& texture_kinds() {
    static const std::vector<std::string> kinds{"stripes", "checker", "speckle"};
    return kinds;
}

DomainPair make_texture_pair(const std::string& kind, std::size_t size, std::uint64_t seed) {
    if (size < 16 || !is_power_of_two(size)) {
        throw ConfigError("texture size must be a power of two >= 16");
    }
    CounterRng rng(seed, 0x747870ull);
    const double angle = std::numbers::pi * rng.uniform();
    const double radius = 0.55 + 0.15 * rng.uniform();  // fraction of Nyquist
    const double centre = 0.5 * radius;                 // cycles per pixel

    const auto blobs = field_from_profile(size, kSourcePixelStd, [](double fy, double fx) {
        const double r = std::sqrt(fy * fy + fx * fx) / 0.5;
        return std::exp(-(r * r) / (kBlobRadius * kBlobRadius));
    });

    SpectralField texture;
    if (kind == "stripes") {
        const double cy = centre * std::sin(angle);
        const double cx = centre * std::cos(angle);
        texture = field_from_profile(size, kTargetPixelStd, [=](double fy, double fx) {
            return bump(fy, fx, cy, cx) + bump(fy, fx, -cy, -cx);
        });
    } else if (kind == "checker") {
        const double a = centre / std::numbers::sqrt2;
        texture = field_from_profile(size, kTargetPixelStd, [=](double fy, double fx) {
            return bump(fy, fx, a, a) + bump(fy, fx, -a, -a) + bump(fy, fx, a, -a) + bump(fy, fx, -a, a);
        });
    } else if (kind == "speckle") {
        texture = field_from_profile(size, kTargetPixelStd, [=](double fy, double fx) {
            const double dr = std::sqrt(fy * fy + fx * fx) - centre;
            return std::exp(-(dr * dr) / (2.0 * kBandWidth * kBandWidth));
        });
    } else {
        throw ConfigError("unsupported texture kind '" + kind + "'");
    }

    DomainPair pair{"texture-" + kind, blobs, texture, {size, size}};
    pair.validate();
    return pair;
}

}  // namespace adbd
