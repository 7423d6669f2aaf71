#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "deaos/core.hpp"

namespace deaos {

/// Population reference statistics the offspring metrics are measured against.
/// For a minimisation population: f_bsf <= f_best <= f_median.
struct PopulationRefs {
    double f_best = 0.0;   // best parent fitness in the current population
    double f_bsf = 0.0;    // best fitness seen so far, any generation
    double f_median = 0.0; // median parent fitness
};

/// Computes the references from the parent population at the start of a
/// generation. An even count takes the mean of the two central values.
inline PopulationRefs population_refs(std::span<const double> parent_fitnesses,
                                      double bsf_so_far) {
    if (parent_fitnesses.empty())
        throw std::invalid_argument("population_refs: empty fitness list");
    std::vector<double> sorted(parent_fitnesses.begin(), parent_fitnesses.end());
    std::sort(sorted.begin(), sorted.end());
    PopulationRefs refs;
    refs.f_best = sorted.front();
    const std::size_t n = sorted.size();
    refs.f_median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    refs.f_bsf = std::min(bsf_so_far, refs.f_best);
    return refs;
}

/// Division guard for the relative-improvement metric.
inline constexpr double kRelativeImprovementEps = 1e-12;

/// The six offspring metrics, all designed to be maximised for a minimisation
/// objective:
///   [0] negated offspring fitness
///   [1] improvement over the parent, clamped at 0
///   [2] improvement over the best current parent, clamped at 0
///   [3] improvement over the best fitness seen so far, clamped at 0
///   [4] improvement over the median parent fitness, clamped at 0
///   [5] relative improvement: (f_bsf / f_offspring) * metric[1]
///
/// Metric [5] assumes positive fitness values; when the offspring fitness is
/// not safely positive or the two values differ in sign, the ratio degrades
/// to 1 and the metric falls back to the plain parent improvement.
inline std::array<double, kNumMetrics> compute_om(double parent_f, double offspring_f,
                                                  const PopulationRefs& refs) {
    std::array<double, kNumMetrics> m{};
    m[0] = -offspring_f;
    m[1] = std::max(0.0, parent_f - offspring_f);
    m[2] = std::max(0.0, refs.f_best - offspring_f);
    m[3] = std::max(0.0, refs.f_bsf - offspring_f);
    m[4] = std::max(0.0, refs.f_median - offspring_f);
    const bool ratio_ok = offspring_f > kRelativeImprovementEps && refs.f_bsf > 0.0;
    const double ratio = ratio_ok ? refs.f_bsf / offspring_f : 1.0;
    m[5] = ratio * m[1];
    return m;
}

} // namespace deaos
