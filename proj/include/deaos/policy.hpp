#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "deaos/core.hpp"
#include "deaos/random.hpp"

namespace deaos {

enum class QualityKind { WeightedSum, Ucb, Identity, WeightedNormalisedSum, Bellman };
inline constexpr std::size_t kNumQualityKinds = 5;

enum class ProbabilityKind { NormalisedQuality, BiasedRule, Identity };
inline constexpr std::size_t kNumProbabilityKinds = 3;

enum class SelectionKind { Proportional, Greedy, EpsilonGreedy, LinearAnnealed, ProportionalGreedy };
inline constexpr std::size_t kNumSelectionKinds = 5;

struct QualityParams {
    double delta = 0.5;   // weight of the current reward in the running sums
    double c_ucb = 0.5;   // exploration strength of the confidence bonus
    double q_min = 0.5;   // floor on the normalised reward share
    double c1 = 0.5;      // weight of the current reward (Bellman input)
    double c2 = 0.5;      // weight of the previous reward (Bellman input)
    double gamma_b = 0.5; // discount rate of expected future reward
};

struct QualityChoice {
    QualityKind kind = QualityKind::Identity;
    QualityParams params;
};

struct ProbabilityParams {
    double p_min = 0.05; // minimum selection probability; K * p_min must stay below 1
    double eps_p = 0.5;  // noise keeping zero-quality operators selectable
    double mu = 0.5;     // learning rate of the winner-take-most update
    double p_max = 0.5;  // probability the best operator is pushed towards
};

struct ProbabilityChoice {
    ProbabilityKind kind = ProbabilityKind::NormalisedQuality;
    ProbabilityParams params;
};

struct SelectionParams {
    double eps = 0.5; // exploration probability of the mixed selection rules
};

struct SelectionChoice {
    SelectionKind kind = SelectionKind::Proportional;
    SelectionParams params;
};

/// Per-operator learning state carried across generations.
struct AosState {
    std::vector<double> reward;      // newest reward vector
    std::vector<double> prev_reward; // reward of the generation before
    std::vector<double> quality;
    std::vector<double> probability; // valid simplex at all times
    std::vector<long long> total_applications;

    explicit AosState(std::size_t k)
        : reward(k, 0.0), prev_reward(k, 0.0), quality(k, 0.0),
          probability(k, 1.0 / static_cast<double>(k)), total_applications(k, 0) {
        if (k == 0)
            throw std::invalid_argument("AosState: need at least one operator");
    }

    std::size_t num_operators() const { return probability.size(); }
};

/// Solves (I - gamma * P) q = q_in by Gaussian elimination with partial
/// pivoting. P is row-major K x K and row-stochastic, so the system is
/// non-singular for any gamma in [0, 1).
inline std::vector<double> solve_discounted(double gamma, std::span<const double> p_matrix,
                                            std::span<const double> q_in) {
    const std::size_t k = q_in.size();
    if (p_matrix.size() != k * k)
        throw std::invalid_argument("solve_discounted: matrix/vector size mismatch");
    std::vector<double> a(k * k, 0.0);
    std::vector<double> x(q_in.begin(), q_in.end());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a[i * k + j] = (i == j ? 1.0 : 0.0) - gamma * p_matrix[i * k + j];
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < k; ++row)
            if (std::abs(a[row * k + col]) > std::abs(a[pivot * k + col]))
                pivot = row;
        if (a[pivot * k + col] == 0.0)
            throw std::runtime_error("solve_discounted: singular system");
        if (pivot != col) {
            for (std::size_t j = 0; j < k; ++j)
                std::swap(a[col * k + j], a[pivot * k + j]);
            std::swap(x[col], x[pivot]);
        }
        for (std::size_t row = col + 1; row < k; ++row) {
            const double factor = a[row * k + col] / a[col * k + col];
            if (factor == 0.0)
                continue;
            for (std::size_t j = col; j < k; ++j)
                a[row * k + j] -= factor * a[col * k + j];
            x[row] -= factor * x[col];
        }
    }
    for (std::size_t i = k; i-- > 0;) {
        double acc = x[i];
        for (std::size_t j = i + 1; j < k; ++j)
            acc -= a[i * k + j] * x[j];
        x[i] = acc / a[i * k + i];
    }
    return x;
}

/// Discounted expected quality: solves (I - gamma * P)^-1 q' where every row
/// of P is the current probability vector.
inline std::vector<double> bellman_solve(double gamma, std::span<const double> probability,
                                         std::span<const double> q_in) {
    const std::size_t k = q_in.size();
    std::vector<double> p(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            p[i * k + j] = probability[j];
    return solve_discounted(gamma, p, q_in);
}

/// Sentinel quality forcing an operator with no applications in scope to be
/// preferred until it has been tried.
inline constexpr double kUnplayedQuality = std::numeric_limits<double>::infinity();

/// Maps the latest rewards to operator qualities.
///
/// counts_in_scope are the per-operator application counts within the active
/// credit scope (window entry counts for window-based rewards, summed success
/// counts over the generation horizon otherwise); only the confidence-bound
/// update reads them. An operator with a zero count gets the kUnplayedQuality
/// sentinel. The Bellman result is shifted to be non-negative (minimum maps
/// to 1e-6) before it reaches the probability update.
inline std::vector<double> update_quality(const QualityChoice& choice, const AosState& state,
                                          std::span<const long long> counts_in_scope) {
    const std::size_t k = state.num_operators();
    std::vector<double> q(k, 0.0);
    switch (choice.kind) {
    case QualityKind::WeightedSum:
        for (std::size_t i = 0; i < k; ++i)
            q[i] = choice.params.delta * state.reward[i] +
                   (1.0 - choice.params.delta) * state.quality[i];
        return q;
    case QualityKind::Ucb: {
        if (counts_in_scope.size() != k)
            throw std::invalid_argument("update_quality: counts size mismatch");
        double total = 0.0;
        for (long long n : counts_in_scope)
            total += static_cast<double>(n);
        for (std::size_t i = 0; i < k; ++i) {
            if (counts_in_scope[i] <= 0) {
                q[i] = kUnplayedQuality;
                continue;
            }
            q[i] = state.reward[i] +
                   choice.params.c_ucb *
                       std::sqrt(std::log(total) / static_cast<double>(counts_in_scope[i]));
        }
        return q;
    }
    case QualityKind::Identity:
        return state.reward;
    case QualityKind::WeightedNormalisedSum: {
        double total = 0.0;
        for (double r : state.reward)
            total += r;
        for (std::size_t i = 0; i < k; ++i) {
            const double share =
                total != 0.0 ? std::max(choice.params.q_min, state.reward[i] / total)
                             : choice.params.q_min;
            q[i] = choice.params.delta * share + (1.0 - choice.params.delta) * state.quality[i];
        }
        return q;
    }
    case QualityKind::Bellman: {
        std::vector<double> weighted(k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            weighted[i] = choice.params.c1 * state.reward[i] +
                          choice.params.c2 * state.prev_reward[i];
        q = bellman_solve(choice.params.gamma_b, state.probability, weighted);
        const double lowest = *std::min_element(q.begin(), q.end());
        for (double& v : q)
            v = v - lowest + 1e-6;
        return q;
    }
    }
    throw std::invalid_argument("update_quality: unknown quality kind");
}

namespace detail {

/// Lowest-index argmax; the sentinel makes unplayed operators win.
inline std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best])
            best = i;
    return best;
}

inline std::vector<double> uniform_simplex(std::size_t k) {
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

} // namespace detail

/// Maps qualities to the next generation's selection probabilities; every
/// branch ends with a normalisation, so the result is always a simplex.
///
/// Negative qualities are clamped to 0 before the share-based rules (the
/// shares break down on negative sums). Unplayed-operator sentinels collapse
/// the quality vector to an indicator of the unplayed set, which hands those
/// operators the whole share mass until each has been tried.
inline std::vector<double> update_probability(const ProbabilityChoice& choice,
                                              std::span<const double> quality,
                                              std::span<const double> prev_prob) {
    const std::size_t k = quality.size();
    if (k == 0 || prev_prob.size() != k)
        throw std::invalid_argument("update_probability: bad vector sizes");
    std::vector<double> clamped(quality.begin(), quality.end());
    bool any_sentinel = false;
    for (double v : clamped)
        any_sentinel = any_sentinel || v == kUnplayedQuality;
    if (any_sentinel)
        for (std::size_t i = 0; i < k; ++i)
            clamped[i] = quality[i] == kUnplayedQuality ? 1.0 : 0.0;
    std::vector<double> p(k, 0.0);
    switch (choice.kind) {
    case ProbabilityKind::NormalisedQuality: {
        for (double& v : clamped)
            v = std::max(0.0, v);
        double total = 0.0;
        for (double v : clamped)
            total += v;
        const double denom = total + choice.params.eps_p;
        if (denom <= 0.0) {
            p = detail::uniform_simplex(k);
            break;
        }
        const double span_left = 1.0 - static_cast<double>(k) * choice.params.p_min;
        for (std::size_t i = 0; i < k; ++i)
            p[i] = choice.params.p_min + span_left * (clamped[i] + choice.params.eps_p) / denom;
        break;
    }
    case ProbabilityKind::BiasedRule: {
        const std::size_t best = detail::argmax(clamped);
        for (std::size_t i = 0; i < k; ++i) {
            const double target = i == best ? choice.params.p_max : choice.params.p_min;
            p[i] = choice.params.mu * target + (1.0 - choice.params.mu) * prev_prob[i];
        }
        break;
    }
    case ProbabilityKind::Identity:
        for (std::size_t i = 0; i < k; ++i)
            p[i] = std::max(0.0, clamped[i]);
        break;
    }
    double total = 0.0;
    for (double v : p)
        total += v;
    if (total <= 0.0)
        return detail::uniform_simplex(k);
    for (double& v : p)
        v /= total;
    return p;
}

/// Draws the operator for one parent.
///
/// Proportional samples from the probability vector; Greedy takes the argmax
/// (ties to the lowest index) without consuming randomness; EpsilonGreedy
/// explores uniformly with probability eps; LinearAnnealed is EpsilonGreedy
/// with eps = 1 - budget_consumed_fraction, so it starts uniform and ends
/// greedy; ProportionalGreedy replaces the uniform exploration branch with a
/// proportional draw.
inline OperatorId select_operator(const SelectionChoice& choice, std::span<const double> prob,
                                  double budget_consumed_fraction, RandomStream& rng) {
    const std::size_t k = prob.size();
    if (k == 0)
        throw std::invalid_argument("select_operator: empty probability vector");
    const auto proportional = [&]() -> OperatorId {
        const double u = rng.uniform01();
        double cumulative = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            cumulative += prob[i];
            if (u < cumulative)
                return i;
        }
        return k - 1;
    };
    switch (choice.kind) {
    case SelectionKind::Proportional:
        return proportional();
    case SelectionKind::Greedy:
        return detail::argmax(prob);
    case SelectionKind::EpsilonGreedy:
        return rng.uniform01() < choice.params.eps ? rng.uniform_index(k)
                                                   : detail::argmax(prob);
    case SelectionKind::LinearAnnealed: {
        const double eps = std::clamp(1.0 - budget_consumed_fraction, 0.0, 1.0);
        return rng.uniform01() < eps ? rng.uniform_index(k) : detail::argmax(prob);
    }
    case SelectionKind::ProportionalGreedy:
        return rng.uniform01() < choice.params.eps ? proportional() : detail::argmax(prob);
    }
    throw std::invalid_argument("select_operator: unknown selection kind");
}

} // namespace deaos
