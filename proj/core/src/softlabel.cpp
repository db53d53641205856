#include "adbd/softlabel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "adbd/errors.hpp"
#include "adbd/fft.hpp"

namespace adbd {

void HighpassSpec::validate() const {
    if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0)) {
        throw ConfigError("highpass: cutoff_fraction must lie in (0, 1)");
    }
}

std::vector<std::uint8_t> highpass_mask(std::size_t height, std::size_t width, const HighpassSpec& spec) {
    spec.validate();
    std::vector<std::uint8_t> mask(height * width, 0);
    for (std::size_t u = 0; u < height; ++u) {
        const double fy = fft::bin_frequency(u, height);
        for (std::size_t v = 0; v < width; ++v) {
            const double fx = fft::bin_frequency(v, width);
            const double radial = std::sqrt(fy * fy + fx * fx) / 0.5;
            mask[u * width + v] = radial >= spec.cutoff_fraction ? 1 : 0;
        }
    }
    return mask;
}

double highpass_magnitude(const Field& image, const HighpassSpec& spec) {
    if (image.rank() != 2 || image.height() < 2 || image.width() < 2) {
        throw ConfigError("highpass_magnitude: need a 2-D field with H, W >= 2, got " + shape_string(image.shape()));
    }
    const auto mask = highpass_mask(image.height(), image.width(), spec);
    const auto spectrum = fft::forward_2d(image.values(), image.height(), image.width());
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (mask[i]) {
            sum += std::abs(spectrum[i]);
            ++count;
        }
    }
    if (count == 0) throw ConfigError("highpass_magnitude: cutoff leaves no frequency bins");
    return sum / static_cast<double>(count);
}

SoftLabel soft_label(double a_source, double a_intermediate, double a_target) {
    if (!std::isfinite(a_source) || !std::isfinite(a_intermediate) || !std::isfinite(a_target)) {
        throw NumericalError("soft_label: non-finite magnitude");
    }
    const double denom = a_source - a_target;
    const double floor = 1e-9 * std::max({a_source, a_target, 1.0});
    if (std::abs(denom) <= floor) {
        throw NumericalError("soft_label: indistinguishable endpoints (|A_s - A_t| <= delta)");
    }
    SoftLabel out;
    out.raw = (a_source - a_intermediate) / denom + 0.0;  // no negative zero
    out.value = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

LabelMeasurement label_intermediate(const Field& x_intermediate, const Field& x_source, const Field& x_target,
                                    const HighpassSpec& spec) {
    require_same_shape(x_intermediate, x_source, "label_intermediate");
    require_same_shape(x_intermediate, x_target, "label_intermediate");
    LabelMeasurement m;
    m.a_source = highpass_magnitude(x_source, spec);
    m.a_intermediate = highpass_magnitude(x_intermediate, spec);
    m.a_target = highpass_magnitude(x_target, spec);
    m.label = soft_label(m.a_source, m.a_intermediate, m.a_target);
    return m;
}

std::vector<double> uniform_depth_grid(std::size_t points) {
    if (points < 2) throw ConfigError("depth grid needs at least two points");
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

std::vector<SweepPoint> depth_sweep(const Field& x_source, double a_source, double a_target,
                                    const EpsilonModel& model_src, const EpsilonModel& model_tgt,
                                    const BridgeConfig& cfg, const std::vector<double>& depth_grid,
                                    const HighpassSpec& spec) {
    if (depth_grid.empty()) throw ConfigError("depth sweep: empty depth grid");
    std::vector<SweepPoint> sweep;
    sweep.reserve(depth_grid.size());
    for (double depth : depth_grid) {
        BridgeConfig c = cfg;
        c.depth = depth;
        auto traj = depth_migrate(x_source, model_src, model_tgt, c);
        SweepPoint p;
        p.depth = traj.depth;
        p.measurement.a_source = a_source;
        p.measurement.a_target = a_target;
        p.measurement.a_intermediate = highpass_magnitude(traj.migrated, spec);
        p.measurement.label = soft_label(a_source, p.measurement.a_intermediate, a_target);
        p.frame = std::move(traj.migrated);
        sweep.push_back(std::move(p));
    }
    return sweep;
}

std::vector<SweepPoint> depth_sweep(const Field& x_source, const Field& x_target_ref, const EpsilonModel& model_src,
                                    const EpsilonModel& model_tgt, const BridgeConfig& cfg,
                                    const std::vector<double>& depth_grid, const HighpassSpec& spec) {
    require_same_shape(x_source, x_target_ref, "depth_sweep");
    return depth_sweep(x_source, highpass_magnitude(x_source, spec), highpass_magnitude(x_target_ref, spec),
                       model_src, model_tgt, cfg, depth_grid, spec);
}

Calibration select_depth(double target_label, const std::vector<SweepPoint>& sweep) {
    if (!(target_label >= 0.0 && target_label <= 1.0)) throw ConfigError("calibrate_depth: target outside [0, 1]");
    if (sweep.empty()) throw ConfigError("calibrate_depth: empty sweep");
    const SweepPoint* best = nullptr;
    double best_gap = 0.0;
    for (const auto& p : sweep) {
        const double gap = std::abs(p.measurement.label.value - target_label);
        if (!best || gap < best_gap || (gap == best_gap && p.depth < best->depth)) {
            best = &p;
            best_gap = gap;
        }
    }
    Calibration c;
    c.depth = best->depth;
    c.target_label = target_label;
    c.measurement = best->measurement;
    c.frame = best->frame;
    c.sweep = sweep;
    return c;
}

Calibration calibrate_depth(double target_label, const Field& x_source, const Field& x_target_ref,
                            const EpsilonModel& model_src, const EpsilonModel& model_tgt, const BridgeConfig& cfg,
                            const std::vector<double>& depth_grid, const HighpassSpec& spec) {
    if (!(target_label >= 0.0 && target_label <= 1.0)) throw ConfigError("calibrate_depth: target outside [0, 1]");
    return select_depth(target_label,
                        depth_sweep(x_source, x_target_ref, model_src, model_tgt, cfg, depth_grid, spec));
}

}  // namespace adbd
