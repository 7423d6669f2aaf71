#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deaos/config.hpp"
#include "deaos/core.hpp"
#include "deaos/de.hpp"
#include "deaos/metrics.hpp"
#include "deaos/policy.hpp"
#include "deaos/random.hpp"
#include "deaos/reward.hpp"

namespace deaos {

/// Smallest precision of interest; a run stops once the best fitness is
/// within this distance of the optimum.
inline constexpr double kTargetPrecision = 1e-8;

/// Ties the two credit memories and the per-operator learning state together
/// and runs the end-of-generation update chain reward -> quality ->
/// probability. One controller per run; mutation happens on one thread.
class AosController {
  public:
    AosController(const AosConfig& config, int np)
        : config_(config), np_(np), state_(config.num_operators()),
          memory_(config.num_operators(), config.om_choice, recent_capacity(config)),
          window_(static_cast<std::size_t>(config.reward.params.window_w), config.om_choice) {}

    /// Operator for the next parent: uniform among never-applied operators
    /// while any exist, then the configured selection rule.
    OperatorId select(RandomStream& rng, double budget_consumed_fraction) {
        std::vector<OperatorId> unplayed;
        for (OperatorId op = 0; op < state_.num_operators(); ++op)
            if (state_.total_applications[op] == 0)
                unplayed.push_back(op);
        OperatorId op;
        if (!unplayed.empty())
            op = unplayed[rng.uniform_index(unplayed.size())];
        else
            op = select_operator(config_.selection, state_.probability,
                                 budget_consumed_fraction, rng);
        ++state_.total_applications[op];
        return op;
    }

    /// Commits one generation of records into both memories.
    void observe_generation(std::vector<OMRecord> records) {
        for (const OMRecord& rec : records)
            if (rec.improved)
                window_.insert(rec);
        memory_.commit_generation(std::move(records));
    }

    /// Reward, quality and probability update for the next generation.
    void update_policy() {
        state_.prev_reward = std::move(state_.reward);
        state_.reward = compute_rewards(config_.reward, memory_, window_, np_);
        const auto counts = counts_in_scope();
        auto quality = update_quality(config_.quality, state_, counts);
        auto probability = update_probability(config_.probability, quality, state_.probability);
        state_.quality = std::move(quality);
        state_.probability = std::move(probability);
    }

    const AosState& state() const { return state_; }
    const GenerationMemory& memory() const { return memory_; }
    const WindowMemory& window() const { return window_; }
    std::size_t num_operators() const { return state_.num_operators(); }

    /// Per-operator application counts within the credit scope of the active
    /// reward: window entry counts for window-based rewards, considered
    /// recent applications for the coordinate rewards, summed success counts
    /// over the generation horizon otherwise.
    std::vector<long long> counts_in_scope() const {
        const std::size_t k = state_.num_operators();
        std::vector<long long> counts(k, 0);
        switch (config_.reward.kind) {
        case RewardKind::Auc:
        case RewardKind::SumOfRank:
        case RewardKind::NormSuccessSumWindow:
            for (OperatorId op = 0; op < k; ++op)
                counts[op] = static_cast<long long>(window_.count_of(op));
            return counts;
        case RewardKind::ParetoDominance:
        case RewardKind::ParetoRank:
        case RewardKind::CompassProjection:
            for (OperatorId op = 0; op < k; ++op)
                counts[op] = static_cast<long long>(
                    std::min<std::size_t>(memory_.recent(op).size(),
                                          static_cast<std::size_t>(config_.reward.params.fix_appl)));
            return counts;
        default:
            for (OperatorId op = 0; op < k; ++op)
                counts[op] = memory_
                                 .applications_in_horizon(
                                     op, static_cast<std::size_t>(config_.reward.params.max_gen))
                                 .succ;
            return counts;
        }
    }

  private:
    static std::size_t recent_capacity(const AosConfig& config) {
        return std::max<std::size_t>(50, static_cast<std::size_t>(config.reward.params.fix_appl));
    }

    AosConfig config_;
    int np_;
    AosState state_;
    GenerationMemory memory_;
    WindowMemory window_;
};

/// One generation of a run: cumulative evaluations, best fitness after
/// survival, and the per-operator application counts, probabilities and
/// rewards of that generation.
struct RunTraceRow {
    std::size_t generation = 0;
    long long evals = 0;
    double best_fitness = 0.0;
    std::vector<long long> app_counts;
    std::vector<double> probabilities;
    std::vector<double> rewards;
};

struct RunResult {
    double best_fitness = 0.0;
    long long evaluations_used = 0;
    bool target_reached = false;
    std::vector<RunTraceRow> trace;
    /// Every strict improvement of the best-so-far fitness with the exact
    /// evaluation count at which it happened; source for target-hit times.
    std::vector<std::pair<long long, double>> improvements;
};

/// Differential evolution with per-parent adaptive strategy selection.
///
/// Initialises uniformly in the domain box, gives every operator probability
/// 1/K, forces unapplied operators to be tried first, computes the offspring
/// metrics against the parent population of the current generation, commits
/// both memories, applies elitist survival and then updates the policy, once
/// per generation. Stops on budget exhaustion or when the optimum is reached
/// to the target precision. Every generation costs exactly NP evaluations.
template <class ProblemT>
RunResult run(const ProblemT& problem, const DEParams& de, const AosConfig& aos,
              long long budget_evals, std::uint64_t seed) {
    {
        const auto errors = validate(aos, de);
        if (!errors.empty()) {
            std::string msg = "run: invalid configuration:";
            for (const auto& e : errors)
                msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
    }
    if (budget_evals < de.np)
        throw std::invalid_argument("run: budget below the initial population size");

    const auto np = static_cast<std::size_t>(de.np);
    const std::size_t dim = problem.dim();
    RandomStream rng(seed);
    AosController controller(aos, de.np);
    Archive archive(np);
    const bool keep_archive =
        std::find(aos.enabled_strategies.begin(), aos.enabled_strategies.end(),
                  MutationStrategy::CurrToPbest1Archived) != aos.enabled_strategies.end();

    RunResult result;
    Population pop;
    pop.members.resize(np);
    long long evals = 0;
    double bsf = std::numeric_limits<double>::infinity();
    const auto note_eval = [&](double f) {
        ++evals;
        if (!std::isfinite(f))
            throw std::runtime_error("run: non-finite fitness from problem evaluation");
        if (f < bsf) {
            bsf = f;
            result.improvements.emplace_back(evals, bsf);
        }
    };

    for (auto& sol : pop.members) {
        sol.position.resize(dim);
        for (double& v : sol.position)
            v = rng.uniform_real(problem.lower(), problem.upper());
        sol.fitness = problem.evaluate(sol.position);
        note_eval(sol.fitness);
    }

    std::vector<double> parent_fitness(np);
    std::size_t g = 0;
    while (evals < budget_evals && bsf - problem.f_opt() > kTargetPrecision) {
        pop.refresh_order();
        for (std::size_t i = 0; i < np; ++i)
            parent_fitness[i] = pop.members[i].fitness;
        const PopulationRefs refs = population_refs(parent_fitness, bsf);

        std::vector<OMRecord> records;
        records.reserve(np);
        std::vector<Solution> offspring(np);
        for (std::size_t i = 0; i < np; ++i) {
            const double fraction = std::clamp(
                static_cast<double>(evals) / static_cast<double>(budget_evals), 0.0, 1.0);
            const OperatorId op = controller.select(rng, fraction);
            auto donor = mutate(aos.enabled_strategies[op], pop, i, de, archive, rng);
            auto trial = crossover(pop.members[i].position, donor, de.cr, rng);
            for (double& v : trial)
                v = reflect_into(v, problem.lower(), problem.upper());
            const double f = problem.evaluate(trial);
            note_eval(f);
            OMRecord rec;
            rec.op = op;
            rec.generation = g;
            rec.metrics = compute_om(pop.members[i].fitness, f, refs);
            rec.improved = rec.metrics[1] > 0.0;
            records.push_back(rec);
            offspring[i].position = std::move(trial);
            offspring[i].fitness = f;
        }

        controller.observe_generation(std::move(records));

        for (std::size_t i = 0; i < np; ++i) {
            if (offspring_survives(pop.members[i].fitness, offspring[i].fitness)) {
                if (keep_archive)
                    archive.push(std::move(pop.members[i].position), rng);
                pop.members[i] = std::move(offspring[i]);
            }
        }

        controller.update_policy();

        RunTraceRow row;
        row.generation = g;
        row.evals = evals;
        row.best_fitness = bsf;
        const GenerationStats& stats = controller.memory().history().back();
        row.app_counts.resize(controller.num_operators());
        for (OperatorId op = 0; op < controller.num_operators(); ++op)
            row.app_counts[op] = stats.n_succ[op] + stats.n_fail[op];
        row.probabilities = controller.state().probability;
        row.rewards = controller.state().reward;
        result.trace.push_back(std::move(row));
        ++g;
    }

    result.best_fitness = bsf;
    result.evaluations_used = evals;
    result.target_reached = bsf - problem.f_opt() <= kTargetPrecision;
    return result;
}

} // namespace deaos
