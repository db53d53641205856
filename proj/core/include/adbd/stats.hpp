#pragma once

#include <span>
#include <vector>

#include "adbd/field.hpp"

namespace adbd {

// V-statistic energy distance 2 E|X - Y| - E|X - X'| - E|Y - Y'| with
// Euclidean norms. Zero when the two sets coincide.
double energy_distance(std::span<const Field> xs, std::span<const Field> ys);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

std::vector<double> average_ranks(std::span<const double> v);

double mean(std::span<const double> v);

}  // namespace adbd
