#include "adbd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "adbd/errors.hpp"

namespace adbd::fft {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    std::size_t n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;

    Plan(std::size_t h, std::size_t w, int sign) : n(h * w) {
        std::lock_guard lock(planner_mutex());
        in = fftw_alloc_complex(n);
        out = fftw_alloc_complex(n);
        plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), in, out, sign, FFTW_ESTIMATE);
        if (!plan || !in || !out) throw NumericalError("FFTW failed to create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }
};

Plan& cached_plan(std::size_t h, std::size_t w, int sign) {
    thread_local std::map<std::tuple<std::size_t, std::size_t, int>, std::unique_ptr<Plan>> cache;
    auto& slot = cache[{h, w, sign}];
    if (!slot) slot = std::make_unique<Plan>(h, w, sign);
    return *slot;
}

void check_dims(std::size_t h, std::size_t w, std::size_t n) {
    if (h == 0 || w == 0 || h * w != n) throw ConfigError("fft: grid size does not match dimensions");
}

}  // namespace

Spectrum forward_2d(std::span<const double> grid, std::size_t height, std::size_t width) {
    check_dims(height, width, grid.size());
    Plan& p = cached_plan(height, width, FFTW_FORWARD);
    for (std::size_t i = 0; i < p.n; ++i) {
        p.in[i][0] = grid[i];
        p.in[i][1] = 0.0;
    }
    fftw_execute(p.plan);
    Spectrum out(p.n);
    for (std::size_t i = 0; i < p.n; ++i) out[i] = {p.out[i][0], p.out[i][1]};
    return out;
}

std::vector<double> inverse_2d_real(const Spectrum& spectrum, std::size_t height, std::size_t width) {
    check_dims(height, width, spectrum.size());
    Plan& p = cached_plan(height, width, FFTW_BACKWARD);
    for (std::size_t i = 0; i < p.n; ++i) {
        p.in[i][0] = spectrum[i].real();
        p.in[i][1] = spectrum[i].imag();
    }
    fftw_execute(p.plan);
    const double scale = 1.0 / static_cast<double>(p.n);
    std::vector<double> out(p.n);
    for (std::size_t i = 0; i < p.n; ++i) out[i] = p.out[i][0] * scale;
    return out;
}

double bin_frequency(std::size_t k, std::size_t n) noexcept {
    const auto kk = static_cast<double>(k);
    const auto nn = static_cast<double>(n);
    return (2 * k <= n) ? kk / nn : (kk - nn) / nn;
}

}  // namespace adbd::fft
