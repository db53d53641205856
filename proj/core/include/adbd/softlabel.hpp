#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adbd/bridge.hpp"
#include "adbd/field.hpp"

namespace adbd {

// Binary radial high-pass mask on the DFT grid: a bin passes when its
// radial frequency, as a fraction of Nyquist, is >= cutoff_fraction.
struct HighpassSpec {
    double cutoff_fraction = 0.25;

    void validate() const;
};

// Row-major H x W mask (1 = passed), in unshifted FFT bin order.
std::vector<std::uint8_t> highpass_mask(std::size_t height, std::size_t width, const HighpassSpec& spec);

// Mean of |FFT(x)| over passed bins; unnormalized forward transform.
double highpass_magnitude(const Field& image, const HighpassSpec& spec);

struct SoftLabel {
    double value = 0.0;  // clamped to [0, 1]
    double raw = 0.0;    // (A_s - A_i) / (A_s - A_t) before clamping
};

// Throws NumericalError ("indistinguishable endpoints") when
// |A_s - A_t| <= 1e-9 * max(A_s, A_t, 1).
SoftLabel soft_label(double a_source, double a_intermediate, double a_target);

struct LabelMeasurement {
    SoftLabel label;
    double a_source = 0.0;
    double a_intermediate = 0.0;
    double a_target = 0.0;
};

LabelMeasurement label_intermediate(const Field& x_intermediate, const Field& x_source, const Field& x_target,
                                    const HighpassSpec& spec);

struct SweepPoint {
    double depth = 0.0;  // snapped
    Field frame;
    LabelMeasurement measurement;
};

struct Calibration {
    double depth = 0.0;
    double target_label = 0.0;
    LabelMeasurement measurement;
    Field frame;
    std::vector<SweepPoint> sweep;
};

// Evenly spaced grid of `points` depths covering [0, 1].
std::vector<double> uniform_depth_grid(std::size_t points);

// Runs depth_migrate at every grid depth and labels each intermediate
// against the endpoint magnitudes (a_source, a_target).
std::vector<SweepPoint> depth_sweep(const Field& x_source, double a_source, double a_target,
                                    const EpsilonModel& model_src, const EpsilonModel& model_tgt,
                                    const BridgeConfig& cfg, const std::vector<double>& depth_grid,
                                    const HighpassSpec& spec);

// Per-sample endpoints: a_source from x_source, a_target from x_target_ref.
std::vector<SweepPoint> depth_sweep(const Field& x_source, const Field& x_target_ref, const EpsilonModel& model_src,
                                    const EpsilonModel& model_tgt, const BridgeConfig& cfg,
                                    const std::vector<double>& depth_grid, const HighpassSpec& spec);

// Exhaustive sweep; returns the depth whose label is closest to the target,
// ties going to the smaller depth. Degenerate endpoints propagate as
// NumericalError.
Calibration calibrate_depth(double target_label, const Field& x_source, const Field& x_target_ref,
                            const EpsilonModel& model_src, const EpsilonModel& model_tgt, const BridgeConfig& cfg,
                            const std::vector<double>& depth_grid, const HighpassSpec& spec);

// Picks the best entry from an existing sweep with the same rule.
Calibration select_depth(double target_label, const std::vector<SweepPoint>& sweep);

}  // namespace adbd
