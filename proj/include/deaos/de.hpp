#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "deaos/config.hpp"
#include "deaos/core.hpp"
#include "deaos/random.hpp"

namespace deaos {

/// Store of replaced parents feeding the archived pbest strategy. Bounded by
/// the population size; a full archive evicts a uniformly random entry.
class Archive {
  public:
    explicit Archive(std::size_t capacity) : capacity_(capacity) {}

    void push(std::vector<double> position, RandomStream& rng) {
        if (capacity_ == 0)
            return;
        if (entries_.size() < capacity_) {
            entries_.push_back(std::move(position));
        } else {
            entries_[rng.uniform_index(entries_.size())] = std::move(position);
        }
    }

    const std::vector<std::vector<double>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::size_t capacity_;
    std::vector<std::vector<double>> entries_;
};

/// Parent population with a fitness-sorted index cache (refreshed once per
/// generation) used by the best/pbest strategies.
struct Population {
    std::vector<Solution> members;
    std::vector<std::size_t> order; // indices sorted by ascending fitness, ties by index

    void refresh_order() {
        order.resize(members.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return members[a].fitness < members[b].fitness;
        });
    }

    std::size_t best_index() const { return order.front(); }
    std::size_t size() const { return members.size(); }
};

namespace mutation {

// Donor formulas with all parent vectors resolved. Kept separate from index
// drawing so they can be exercised directly.

inline std::vector<double> lin3(std::span<const double> a, std::span<const double> b,
                                std::span<const double> c, double f) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + f * (b[i] - c[i]);
    return out;
}

inline std::vector<double> rand1(std::span<const double> x1, std::span<const double> x2,
                                 std::span<const double> x3, double f) {
    return lin3(x1, x2, x3, f);
}

inline std::vector<double> rand2(std::span<const double> x1, std::span<const double> x2,
                                 std::span<const double> x3, std::span<const double> x4,
                                 std::span<const double> x5, double f) {
    std::vector<double> out(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i)
        out[i] = x1[i] + f * (x2[i] - x3[i] + x4[i] - x5[i]);
    return out;
}

inline std::vector<double> rand_to_best2(std::span<const double> x1, std::span<const double> best,
                                         std::span<const double> x2, std::span<const double> x3,
                                         std::span<const double> x4, std::span<const double> x5,
                                         double f) {
    std::vector<double> out(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i)
        out[i] = x1[i] + f * (best[i] - x1[i] + x2[i] - x3[i] + x4[i] - x5[i]);
    return out;
}

inline std::vector<double> curr_to_rand1(std::span<const double> xi, std::span<const double> x1,
                                         std::span<const double> x2, std::span<const double> x3,
                                         double f) {
    std::vector<double> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        out[i] = xi[i] + f * (x1[i] - xi[i] + x2[i] - x3[i]);
    return out;
}

inline std::vector<double> curr_to_pbest1(std::span<const double> xi,
                                          std::span<const double> pbest,
                                          std::span<const double> x1, std::span<const double> x2,
                                          double f) {
    std::vector<double> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        out[i] = xi[i] + f * (pbest[i] - xi[i] + x1[i] - x2[i]);
    return out;
}

inline std::vector<double> best1(std::span<const double> best, std::span<const double> x1,
                                 std::span<const double> x2, double f) {
    return lin3(best, x1, x2, f);
}

inline std::vector<double> best2(std::span<const double> best, std::span<const double> x1,
                                 std::span<const double> x2, std::span<const double> x3,
                                 std::span<const double> x4, double f) {
    std::vector<double> out(best.size());
    for (std::size_t i = 0; i < best.size(); ++i)
        out[i] = best[i] + f * (x1[i] - x2[i] + x3[i] - x4[i]);
    return out;
}

inline std::vector<double> curr_to_best1(std::span<const double> xi, std::span<const double> best,
                                         std::span<const double> x1, std::span<const double> x2,
                                         double f) {
    return curr_to_pbest1(xi, best, x1, x2, f);
}

} // namespace mutation

namespace detail {

/// Index of a uniformly chosen member of the top ceil(top_np * NP) parents.
inline std::size_t pick_pbest(const Population& pop, double top_np, RandomStream& rng) {
    const auto np = static_cast<double>(pop.size());
    auto count = static_cast<std::size_t>(std::ceil(top_np * np));
    count = std::clamp<std::size_t>(count, 1, pop.size());
    return pop.order[rng.uniform_index(count)];
}

} // namespace detail

/// Builds the donor vector for parent `i` under the given strategy. The
/// random indices are drawn mutually distinct and different from `i`; the
/// archived variant draws the final difference term from the union of the
/// population and the archive.
inline std::vector<double> mutate(MutationStrategy strategy, const Population& pop,
                                  std::size_t i, const DEParams& params, const Archive& archive,
                                  RandomStream& rng) {
    const std::size_t np = pop.size();
    const double f = params.f_scale;
    const auto x = [&](std::size_t idx) -> std::span<const double> {
        return pop.members[idx].position;
    };
    std::array<std::size_t, 5> r{};
    switch (strategy) {
    case MutationStrategy::Rand1:
        rng.distinct_indices(std::span(r.data(), 3), np, i);
        return mutation::rand1(x(r[0]), x(r[1]), x(r[2]), f);
    case MutationStrategy::Rand2:
        rng.distinct_indices(std::span(r.data(), 5), np, i);
        return mutation::rand2(x(r[0]), x(r[1]), x(r[2]), x(r[3]), x(r[4]), f);
    case MutationStrategy::RandToBest2:
        rng.distinct_indices(std::span(r.data(), 5), np, i);
        return mutation::rand_to_best2(x(r[0]), x(pop.best_index()), x(r[1]), x(r[2]), x(r[3]),
                                       x(r[4]), f);
    case MutationStrategy::CurrToRand1:
        rng.distinct_indices(std::span(r.data(), 3), np, i);
        return mutation::curr_to_rand1(x(i), x(r[0]), x(r[1]), x(r[2]), f);
    case MutationStrategy::CurrToPbest1: {
        const std::size_t pbest = detail::pick_pbest(pop, params.top_np, rng);
        rng.distinct_indices(std::span(r.data(), 2), np, i);
        return mutation::curr_to_pbest1(x(i), x(pbest), x(r[0]), x(r[1]), f);
    }
    case MutationStrategy::CurrToPbest1Archived: {
        const std::size_t pbest = detail::pick_pbest(pop, params.top_np, rng);
        rng.distinct_indices(std::span(r.data(), 1), np, i);
        // Subtrahend of the second difference comes from population + archive.
        const std::size_t pool = np + archive.size();
        std::size_t second;
        do {
            second = rng.uniform_index(pool);
        } while (second == i || second == r[0]);
        std::span<const double> x2 = second < np
                                         ? x(second)
                                         : std::span<const double>(archive.entries()[second - np]);
        return mutation::curr_to_pbest1(x(i), x(pbest), x(r[0]), x2, f);
    }
    case MutationStrategy::Best1:
        rng.distinct_indices(std::span(r.data(), 2), np, i);
        return mutation::best1(x(pop.best_index()), x(r[0]), x(r[1]), f);
    case MutationStrategy::Best2:
        rng.distinct_indices(std::span(r.data(), 4), np, i);
        return mutation::best2(x(pop.best_index()), x(r[0]), x(r[1]), x(r[2]), x(r[3]), f);
    case MutationStrategy::CurrToBest1:
        rng.distinct_indices(std::span(r.data(), 2), np, i);
        return mutation::curr_to_best1(x(i), x(pop.best_index()), x(r[0]), x(r[1]), f);
    }
    throw std::invalid_argument("mutate: unknown strategy");
}

/// Binomial crossover: every dimension takes the donor value with probability
/// cr, and one pre-chosen dimension takes it unconditionally.
inline std::vector<double> crossover(std::span<const double> parent,
                                     std::span<const double> donor, double cr,
                                     RandomStream& rng) {
    if (parent.size() != donor.size())
        throw std::invalid_argument("crossover: length mismatch");
    const std::size_t d = parent.size();
    const std::size_t j_rand = rng.uniform_index(d);
    std::vector<double> trial(d);
    for (std::size_t j = 0; j < d; ++j)
        trial[j] = (j == j_rand || rng.uniform01() < cr) ? donor[j] : parent[j];
    return trial;
}

/// Elitist survival; a fitness tie goes to the offspring.
inline bool offspring_survives(double parent_fitness, double offspring_fitness) {
    return offspring_fitness <= parent_fitness;
}

inline Solution survival_select(const Solution& parent, const Solution& offspring) {
    return offspring_survives(parent.fitness, offspring.fitness) ? offspring : parent;
}

/// Folds a coordinate back into [lo, hi] by reflection; handles points that
/// are many box widths outside.
inline double reflect_into(double v, double lo, double hi) {
    if (v >= lo && v <= hi)
        return v;
    const double width = hi - lo;
    double t = std::fmod(v - lo, 2.0 * width);
    if (t < 0.0)
        t += 2.0 * width;
    return t <= width ? lo + t : hi - (t - width);
}

} // namespace deaos
