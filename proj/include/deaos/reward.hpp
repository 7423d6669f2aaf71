#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deaos/core.hpp"

namespace deaos {

/// The twelve reward definitions, grouped as: diversity/quality of recent
/// applications (ParetoDominance, ParetoRank, CompassProjection), rank-based
/// over the window (Auc, SumOfRank), success counting (SuccessRate,
/// ImmediateSuccess), metric sums (SuccessSum, NormSuccessSumWindow,
/// NormSuccessSumGen) and best-offspring tracking (Best2Gen, NormBestSum).
enum class RewardKind {
    ParetoDominance,
    ParetoRank,
    CompassProjection,
    Auc,
    SumOfRank,
    SuccessRate,
    ImmediateSuccess,
    SuccessSum,
    NormSuccessSumWindow,
    NormSuccessSumGen,
    Best2Gen,
    NormBestSum,
};

inline constexpr std::size_t kNumRewardKinds = 12;

/// Hyper-parameters of the reward definitions; each kind reads only the
/// fields relevant to it.
struct RewardParams {
    int fix_appl = 30;       // recent applications for diversity/quality coordinates
    int max_gen = 25;        // generation horizon for generation-based rewards
    double theta_deg = 45.0; // projection angle, degrees
    int window_w = 85;       // window capacity
    double decay_d = 0.5;    // rank decay factor
    int gamma_sr = 1;        // success-count exponent (1 linear, 2 quadratic)
    double frac = 0.5;       // fraction of the population-wide success total
    double eps_noise = 0.5;  // additive noise on the success-rate reward
    int omega = 0;           // 1 normalises window means by the best operator mean
    double c_scale = 0.5;    // scaling constant for the two-generation difference
    int alpha = 0;           // toggles the normalising denominator
    int beta = 0;            // toggles the application-count denominator
    int rho = 1;             // intensity exponent on the per-generation best
};

/// Diversity/quality summary of an operator's recent applications: sample mean
/// and population standard deviation of the configured metric over the last
/// fix_appl applications, failures (zeros) included.
struct OperatorCoordinate {
    double diversity = 0.0;
    double quality = 0.0;
};

inline OperatorCoordinate operator_coordinate(const GenerationMemory& mem, OperatorId op,
                                              int fix_appl) {
    if (fix_appl < 1)
        throw std::invalid_argument("operator_coordinate: fix_appl must be >= 1");
    const auto& recent = mem.recent(op);
    const std::size_t take = std::min<std::size_t>(recent.size(),
                                                   static_cast<std::size_t>(fix_appl));
    if (take == 0)
        return {};
    double mean = 0.0;
    for (std::size_t i = recent.size() - take; i < recent.size(); ++i)
        mean += recent[i];
    mean /= static_cast<double>(take);
    double var = 0.0;
    for (std::size_t i = recent.size() - take; i < recent.size(); ++i) {
        const double d = recent[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(take);
    return {std::sqrt(var), mean};
}

namespace detail {

/// Strict Pareto dominance with both axes maximised.
inline bool dominates(const OperatorCoordinate& a, const OperatorCoordinate& b) {
    return a.diversity >= b.diversity && a.quality >= b.quality &&
           (a.diversity > b.diversity || a.quality > b.quality);
}

inline std::vector<double> normalised_or_zero(std::vector<double> counts) {
    double total = 0.0;
    for (double c : counts)
        total += c;
    if (total <= 0.0)
        return std::vector<double>(counts.size(), 0.0);
    for (double& c : counts)
        c /= total;
    return counts;
}

} // namespace detail

/// Rewards driven by the diversity/quality coordinates of all operators.
///
/// ParetoDominance credits each operator with the number of operators it
/// strictly dominates; ParetoRank with the number of operators dominating it;
/// both normalised by the total count (all-zero totals give an all-zero
/// vector). CompassProjection projects each coordinate onto the direction at
/// angle theta and shifts by the minimum projection, so the worst operator
/// lands exactly at 0.
inline std::vector<double> diversity_quality_reward(RewardKind kind,
                                                    std::span<const OperatorCoordinate> coords,
                                                    double theta_deg) {
    const std::size_t k = coords.size();
    if (k == 0)
        throw std::invalid_argument("diversity_quality_reward: need at least one operator");
    std::vector<double> out(k, 0.0);
    switch (kind) {
    case RewardKind::ParetoDominance:
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j && detail::dominates(coords[i], coords[j]))
                    out[i] += 1.0;
        return detail::normalised_or_zero(std::move(out));
    case RewardKind::ParetoRank:
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j && detail::dominates(coords[j], coords[i]))
                    out[i] += 1.0;
        return detail::normalised_or_zero(std::move(out));
    case RewardKind::CompassProjection: {
        const double theta = theta_deg * (3.141592653589793238462643 / 180.0);
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            const double norm = std::hypot(coords[i].diversity, coords[i].quality);
            // atan2 covers the div = 0 limit (angle pi/2 for positive quality).
            const double angle = std::atan2(coords[i].quality, coords[i].diversity) - theta;
            out[i] = norm * std::cos(angle);
            lowest = std::min(lowest, out[i]);
        }
        for (double& v : out)
            v -= lowest;
        return out;
    }
    default:
        throw std::invalid_argument("diversity_quality_reward: wrong reward kind");
    }
}

namespace detail {

/// One window entry with its global rank and decayed weight. Rank 1 is the
/// best (largest) metric value; equal values get consecutive ranks in
/// insertion order. Weight is decay^rank * (capacity - rank).
struct RankedEntry {
    OperatorId op = 0;
    double value = 0.0;
    std::uint64_t seq = 0;
    double weight = 0.0;
};

inline std::vector<RankedEntry> ranked_window(const WindowMemory& win, double decay) {
    std::vector<RankedEntry> ranked;
    ranked.reserve(win.size());
    for (const auto& e : win.entries())
        ranked.push_back({e.record.op, win.value_of(e), e.seq, 0.0});
    std::sort(ranked.begin(), ranked.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.value != b.value)
            return a.value > b.value;
        return a.seq < b.seq;
    });
    const double w = static_cast<double>(win.capacity());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const double rank = static_cast<double>(i + 1);
        ranked[i].weight = std::pow(decay, rank) * (w - rank);
    }
    return ranked;
}

} // namespace detail

/// Rank-based rewards over the window. Both depend only on the ranking of the
/// metric values, never on the values themselves, so they are invariant under
/// positive linear scaling of the fitness function.
///
/// SumOfRank is the decayed-weight share of the operator's entries. Auc scans
/// entries in rank order drawing a curve: a vertical step when the entry was
/// produced by the operator, horizontal otherwise; tied values pool their
/// weights into one diagonal segment with per-entry averaged credit, which
/// makes the area independent of insertion order within the tie. The area is
/// normalised by the bounding box (total vertical x total horizontal extent);
/// a window containing only this operator's entries saturates at 1.
inline double rank_reward(RewardKind kind, const WindowMemory& win, OperatorId op,
                          double decay_d) {
    if (win.size() == 0)
        return 0.0;
    const auto ranked = detail::ranked_window(win, decay_d);
    if (kind == RewardKind::SumOfRank) {
        double mine = 0.0;
        double total = 0.0;
        for (const auto& e : ranked) {
            total += e.weight;
            if (e.op == op)
                mine += e.weight;
        }
        return total > 0.0 ? mine / total : 0.0;
    }
    if (kind != RewardKind::Auc)
        throw std::invalid_argument("rank_reward: wrong reward kind");

    double area = 0.0;
    double y = 0.0;
    double x_total = 0.0;
    double y_total = 0.0;
    std::size_t i = 0;
    while (i < ranked.size()) {
        std::size_t j = i;
        double group_weight = 0.0;
        std::size_t group_mine = 0;
        while (j < ranked.size() && ranked[j].value == ranked[i].value) {
            group_weight += ranked[j].weight;
            group_mine += ranked[j].op == op ? 1 : 0;
            ++j;
        }
        const double avg = group_weight / static_cast<double>(j - i);
        const double dy = avg * static_cast<double>(group_mine);
        const double dx = avg * static_cast<double>(j - i - group_mine);
        area += dx * (y + 0.5 * dy);
        y += dy;
        y_total += dy;
        x_total += dx;
        i = j;
    }
    if (y_total <= 0.0)
        return 0.0;
    if (x_total <= 0.0)
        return 1.0;
    return area / (x_total * y_total);
}

/// Success-count rewards over the generation memory.
///
/// SuccessRate accumulates, over the last max_gen generations, the operator's
/// success count raised to gamma plus a fraction of everyone's successes,
/// divided by the operator's application count that generation; generations
/// without an application of the operator contribute nothing. The noise term
/// is added once, after the sum. ImmediateSuccess is the latest generation's
/// success count over the population size.
inline double success_reward(RewardKind kind, const GenerationMemory& mem, OperatorId op,
                             const RewardParams& params, int np) {
    if (np < 1)
        throw std::invalid_argument("success_reward: population size must be >= 1");
    const auto& history = mem.history();
    if (kind == RewardKind::ImmediateSuccess) {
        if (history.empty())
            return 0.0;
        return static_cast<double>(history.back().n_succ[op]) / static_cast<double>(np);
    }
    if (kind != RewardKind::SuccessRate)
        throw std::invalid_argument("success_reward: wrong reward kind");
    const std::size_t span = std::min<std::size_t>(history.size(),
                                                   static_cast<std::size_t>(params.max_gen));
    double sum = 0.0;
    for (std::size_t g = history.size() - span; g < history.size(); ++g) {
        const auto& stats = history[g];
        const double applications =
            static_cast<double>(stats.n_succ[op] + stats.n_fail[op]);
        if (applications <= 0.0)
            continue;
        double everyone = 0.0;
        for (long long s : stats.n_succ)
            everyone += static_cast<double>(s);
        const double mine = static_cast<double>(stats.n_succ[op]);
        sum += (std::pow(mine, params.gamma_sr) + params.frac * everyone) / applications;
    }
    return sum + params.eps_noise;
}

/// Metric-sum rewards.
///
/// SuccessSum divides the total metric improvement over the horizon by the
/// total application count; NormSuccessSumGen performs that division per
/// generation before summing, so the two agree exactly when the horizon is
/// one generation. NormSuccessSumWindow is the mean metric value of the
/// operator's window entries, divided by the best per-operator window mean
/// when omega is 1. Empty scopes yield 0.
inline double fitness_sum_reward(RewardKind kind, const GenerationMemory& mem,
                                 const WindowMemory& win, OperatorId op,
                                 const RewardParams& params) {
    const auto& history = mem.history();
    const std::size_t span = std::min<std::size_t>(history.size(),
                                                   static_cast<std::size_t>(params.max_gen));
    switch (kind) {
    case RewardKind::SuccessSum: {
        double improvements = 0.0;
        double applications = 0.0;
        for (std::size_t g = history.size() - span; g < history.size(); ++g) {
            const auto& stats = history[g];
            applications += static_cast<double>(stats.n_succ[op] + stats.n_fail[op]);
            for (const OMRecord& rec : stats.records) {
                const double v = rec.metrics[mem.metric()];
                if (rec.op == op && v > 0.0)
                    improvements += v;
            }
        }
        return applications > 0.0 ? improvements / applications : 0.0;
    }
    case RewardKind::NormSuccessSumGen: {
        double sum = 0.0;
        for (std::size_t g = history.size() - span; g < history.size(); ++g) {
            const auto& stats = history[g];
            const double applications =
                static_cast<double>(stats.n_succ[op] + stats.n_fail[op]);
            if (applications <= 0.0)
                continue;
            double improvements = 0.0;
            for (const OMRecord& rec : stats.records) {
                const double v = rec.metrics[mem.metric()];
                if (rec.op == op && v > 0.0)
                    improvements += v;
            }
            sum += improvements / applications;
        }
        return sum;
    }
    case RewardKind::NormSuccessSumWindow: {
        const std::size_t k = mem.num_operators();
        std::vector<double> sums(k, 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (const auto& e : win.entries()) {
            sums[e.record.op] += win.value_of(e);
            ++counts[e.record.op];
        }
        if (counts[op] == 0)
            return 0.0;
        const double mine = sums[op] / static_cast<double>(counts[op]);
        if (params.omega == 0)
            return mine;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j)
            if (counts[j] > 0)
                best = std::max(best, sums[j] / static_cast<double>(counts[j]));
        if (best == 0.0 || !std::isfinite(best))
            return 0.0;
        return mine / best;
    }
    default:
        throw std::invalid_argument("fitness_sum_reward: wrong reward kind");
    }
}

namespace detail {

/// Best configured-metric value among the successful applications of `op` in
/// generation `g`; 0 when the operator had no success that generation.
inline double best_success_value(const GenerationMemory& mem, OperatorId op, std::size_t g) {
    double best = 0.0;
    for (const OMRecord& rec : mem.history()[g].records) {
        const double v = rec.metrics[mem.metric()];
        if (rec.op == op && v > best)
            best = v;
    }
    return best;
}

} // namespace detail

/// Best-offspring rewards.
///
/// Best2Gen scales the difference between the operator's best metric values in
/// the two latest generations, optionally divided by the previous best (alpha)
/// and by the absolute change in application count (beta); zero-valued bases
/// of those optional factors are replaced by 1 so the reward stays total, and
/// the result may be negative when performance declines. NormBestSum averages
/// the per-generation bests raised to rho over the horizon, optionally
/// normalised by the best per-operator sum of bests.
inline double best_offspring_reward(RewardKind kind, const GenerationMemory& mem, OperatorId op,
                                    const RewardParams& params) {
    const auto& history = mem.history();
    if (history.empty())
        return 0.0;
    if (kind == RewardKind::Best2Gen) {
        const std::size_t g = history.size() - 1;
        const double best_now = detail::best_success_value(mem, op, g);
        const double best_prev = g > 0 ? detail::best_success_value(mem, op, g - 1) : 0.0;
        const double apps_now =
            static_cast<double>(history[g].n_succ[op] + history[g].n_fail[op]);
        const double apps_prev =
            g > 0 ? static_cast<double>(history[g - 1].n_succ[op] + history[g - 1].n_fail[op])
                  : 0.0;
        double denom = 1.0;
        if (params.alpha == 1 && best_prev != 0.0)
            denom *= best_prev;
        if (params.beta == 1) {
            const double delta = std::abs(apps_now - apps_prev);
            if (delta != 0.0)
                denom *= delta;
        }
        return params.c_scale * (best_now - best_prev) / denom;
    }
    if (kind != RewardKind::NormBestSum)
        throw std::invalid_argument("best_offspring_reward: wrong reward kind");
    const std::size_t span = std::min<std::size_t>(history.size(),
                                                   static_cast<std::size_t>(params.max_gen));
    double numerator = 0.0;
    for (std::size_t g = history.size() - span; g < history.size(); ++g)
        numerator += std::pow(detail::best_success_value(mem, op, g), params.rho);
    numerator /= static_cast<double>(params.max_gen);
    if (params.alpha == 0)
        return numerator;
    double best_sum = 0.0;
    for (OperatorId j = 0; j < mem.num_operators(); ++j) {
        double sum = 0.0;
        for (std::size_t g = history.size() - span; g < history.size(); ++g)
            sum += detail::best_success_value(mem, j, g);
        best_sum = std::max(best_sum, sum);
    }
    return best_sum > 0.0 ? numerator / best_sum : 0.0;
}

/// One reward definition with its hyper-parameters.
struct RewardChoice {
    RewardKind kind = RewardKind::ImmediateSuccess;
    RewardParams params;
};

/// Dispatches the configured reward over all operators.
inline std::vector<double> compute_rewards(const RewardChoice& choice,
                                           const GenerationMemory& mem, const WindowMemory& win,
                                           int np) {
    const std::size_t k = mem.num_operators();
    switch (choice.kind) {
    case RewardKind::ParetoDominance:
    case RewardKind::ParetoRank:
    case RewardKind::CompassProjection: {
        std::vector<OperatorCoordinate> coords(k);
        for (OperatorId op = 0; op < k; ++op)
            coords[op] = operator_coordinate(mem, op, choice.params.fix_appl);
        return diversity_quality_reward(choice.kind, coords, choice.params.theta_deg);
    }
    case RewardKind::Auc:
    case RewardKind::SumOfRank: {
        std::vector<double> out(k, 0.0);
        for (OperatorId op = 0; op < k; ++op)
            out[op] = rank_reward(choice.kind, win, op, choice.params.decay_d);
        return out;
    }
    case RewardKind::SuccessRate:
    case RewardKind::ImmediateSuccess: {
        std::vector<double> out(k, 0.0);
        for (OperatorId op = 0; op < k; ++op)
            out[op] = success_reward(choice.kind, mem, op, choice.params, np);
        return out;
    }
    case RewardKind::SuccessSum:
    case RewardKind::NormSuccessSumWindow:
    case RewardKind::NormSuccessSumGen: {
        std::vector<double> out(k, 0.0);
        for (OperatorId op = 0; op < k; ++op)
            out[op] = fitness_sum_reward(choice.kind, mem, win, op, choice.params);
        return out;
    }
    case RewardKind::Best2Gen:
    case RewardKind::NormBestSum: {
        std::vector<double> out(k, 0.0);
        for (OperatorId op = 0; op < k; ++op)
            out[op] = best_offspring_reward(choice.kind, mem, op, choice.params);
        return out;
    }
    }
    throw std::invalid_argument("compute_rewards: unknown reward kind");
}

} // namespace deaos
