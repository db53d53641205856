#include "adbd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adbd {
namespace {

double euclid(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double mean_pairwise(std::span<const Field> xs, std::span<const Field> ys) {
    double s = 0.0;
    for (const auto& x : xs) {
        for (const auto& y : ys) s += euclid(x, y);
    }
    return s / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

}  // namespace

double energy_distance(std::span<const Field> xs, std::span<const Field> ys) {
    if (xs.empty() || ys.empty()) throw ConfigError("energy_distance: empty sample set");
    for (const auto& f : xs) require_same_shape(f, xs.front(), "energy_distance");
    for (const auto& f : ys) require_same_shape(f, xs.front(), "energy_distance");
    return 2.0 * mean_pairwise(xs, ys) - mean_pairwise(xs, xs) - mean_pairwise(ys, ys);
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw ConfigError("spearman: need two equal-length series");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double ma = mean(ra);
    const double mb = mean(rb);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace adbd
