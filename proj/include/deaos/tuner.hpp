#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "deaos/bench.hpp"
#include "deaos/config.hpp"
#include "deaos/random.hpp"

namespace deaos::tuner {

enum class ParamKind { Real, Integer, Categorical };

/// One tunable parameter. Conditional parameters are only sampled when the
/// parent parameter (an earlier categorical) takes one of the activating
/// values.
struct ParameterDef {
    std::string name;
    ParamKind kind = ParamKind::Real;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::string> values; // categorical choices
    std::string parent;              // empty = unconditional
    std::vector<std::string> parent_values;
};

struct ParameterSpace {
    std::vector<ParameterDef> parameters;

    const ParameterDef* find(const std::string& name) const {
        for (const auto& p : parameters)
            if (p.name == name)
                return &p;
        return nullptr;
    }
};

/// The full joint space: DE parameters, the five component choices and every
/// conditional hyper-parameter with its tuning range.
inline ParameterSpace default_space() {
    ParameterSpace s;
    auto real = [&](std::string name, double lo, double hi, std::string parent = "",
                    std::vector<std::string> pv = {}) {
        s.parameters.push_back(
            {std::move(name), ParamKind::Real, lo, hi, {}, std::move(parent), std::move(pv)});
    };
    auto integer = [&](std::string name, double lo, double hi, std::string parent = "",
                       std::vector<std::string> pv = {}) {
        s.parameters.push_back(
            {std::move(name), ParamKind::Integer, lo, hi, {}, std::move(parent), std::move(pv)});
    };
    auto categorical = [&](std::string name, std::vector<std::string> values,
                           std::string parent = "", std::vector<std::string> pv = {}) {
        s.parameters.push_back({std::move(name), ParamKind::Categorical, 0.0, 0.0,
                                std::move(values), std::move(parent), std::move(pv)});
    };

    real("F", 0.1, 2.0);
    real("CR", 0.1, 1.0);
    integer("NP", 50, 400);
    real("top_NP", 0.02, 1.0);

    categorical("OM_choice", om_names());
    categorical("reward_choice", reward_names());
    categorical("quality_choice", quality_names());
    categorical("probability_choice", probability_names());
    categorical("selection_choice", selection_names());

    integer("fix_appl", 10, 50, "reward_choice",
            {"ParetoDominance", "ParetoRank", "CompassProjection"});
    integer("max_gen", 1, 50, "reward_choice",
            {"SuccessRate", "SuccessSum", "NormSuccessSumGen", "NormBestSum"});
    categorical("theta", {"36", "45", "54", "90"}, "reward_choice", {"CompassProjection"});
    integer("window", 20, 150, "reward_choice", {"AUC", "SumOfRank", "NormSuccessSumWindow"});
    real("decay", 0.0, 1.0, "reward_choice", {"AUC", "SumOfRank"});
    categorical("succ_lin_quad", {"1", "2"}, "reward_choice", {"SuccessRate"});
    real("frac", 0.0, 1.0, "reward_choice", {"SuccessRate"});
    real("noise", 0.0, 1.0, "reward_choice", {"SuccessRate"});
    categorical("normal_factor", {"0", "1"}, "reward_choice", {"NormSuccessSumWindow"});
    real("scaling_constant", 0.001, 1.0, "reward_choice", {"Best2Gen"});
    categorical("alpha", {"0", "1"}, "reward_choice", {"Best2Gen", "NormBestSum"});
    categorical("beta", {"0", "1"}, "reward_choice", {"Best2Gen"});
    categorical("intensity", {"1", "2", "3"}, "reward_choice", {"NormBestSum"});

    real("decay_rate", 0.0, 1.0, "quality_choice", {"WeightedSum", "WeightedNormalisedSum"});
    real("scaling_factor", 0.0, 1.0, "quality_choice", {"UCB"});
    real("q_min", 0.01, 1.0, "quality_choice", {"WeightedNormalisedSum"});
    real("weight_reward", 0.0, 1.0, "quality_choice", {"Bellman"});
    real("weight_old_reward", 0.0, 1.0, "quality_choice", {"Bellman"});
    real("discount_rate", 0.01, 1.0, "quality_choice", {"Bellman"});

    real("p_min", 0.0, 1.0, "probability_choice", {"NormalisedQuality", "BiasedRule"});
    real("error_prob", 0.0, 1.0, "probability_choice", {"NormalisedQuality"});
    real("learning_rate", 0.0, 1.0, "probability_choice", {"BiasedRule"});
    real("p_max", 0.0, 1.0, "probability_choice", {"BiasedRule"});

    real("sel_eps", 0.0, 1.0, "selection_choice", {"EpsilonGreedy", "ProportionalGreedy"});
    return s;
}

// ---------------------------------------------------------------------------
// Space files

inline nlohmann::ordered_json space_to_json(const ParameterSpace& space) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : space.parameters) {
        nlohmann::ordered_json j;
        j["name"] = p.name;
        j["kind"] = p.kind == ParamKind::Real      ? "real"
                    : p.kind == ParamKind::Integer ? "integer"
                                                   : "categorical";
        if (p.kind == ParamKind::Categorical)
            j["values"] = p.values;
        else
            j["range"] = {p.lo, p.hi};
        if (!p.parent.empty())
            j["condition"] = {{"parent", p.parent}, {"values", p.parent_values}};
        arr.push_back(j);
    }
    return arr;
}

inline ParameterSpace space_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array())
        throw std::invalid_argument("parameter space: expected a JSON array");
    ParameterSpace space;
    for (const auto& item : j) {
        for (const auto& kv : item.items())
            if (kv.key() != "name" && kv.key() != "kind" && kv.key() != "values" &&
                kv.key() != "range" && kv.key() != "condition")
                throw std::invalid_argument("parameter space: unknown key '" + kv.key() + "'");
        ParameterDef p;
        p.name = item.at("name").get<std::string>();
        const auto kind = item.at("kind").get<std::string>();
        if (kind == "real")
            p.kind = ParamKind::Real;
        else if (kind == "integer")
            p.kind = ParamKind::Integer;
        else if (kind == "categorical")
            p.kind = ParamKind::Categorical;
        else
            throw std::invalid_argument("parameter space: unknown kind '" + kind + "'");
        if (p.kind == ParamKind::Categorical)
            p.values = item.at("values").get<std::vector<std::string>>();
        else {
            p.lo = item.at("range").at(0).get<double>();
            p.hi = item.at("range").at(1).get<double>();
        }
        if (item.contains("condition")) {
            p.parent = item.at("condition").at("parent").get<std::string>();
            p.parent_values =
                item.at("condition").at("values").get<std::vector<std::string>>();
        }
        space.parameters.push_back(std::move(p));
    }
    return space;
}

// ---------------------------------------------------------------------------
// Candidates

/// A sampled point of the joint space plus its racing record.
struct Candidate {
    std::map<std::string, double> numeric;
    std::map<std::string, std::string> categorical;
    AosConfig aos;
    DEParams de;
    std::vector<double> costs; // one per instance raced, in race order
    bool alive = true;
    int id = 0;

    double mean_cost() const {
        if (costs.empty())
            return std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (double c : costs)
            sum += c;
        return sum / static_cast<double>(costs.size());
    }
};

namespace detail {

inline bool condition_active(const ParameterDef& def, const Candidate& c) {
    if (def.parent.empty())
        return true;
    const auto it = c.categorical.find(def.parent);
    if (it == c.categorical.end())
        throw std::invalid_argument("parameter space: '" + def.name +
                                    "' depends on '" + def.parent +
                                    "' which is not defined earlier in the space");
    return std::find(def.parent_values.begin(), def.parent_values.end(), it->second) !=
           def.parent_values.end();
}

/// Materialises the configuration a parameter assignment describes. Fields
/// without an assigned value keep their defaults.
inline void apply_assignment(Candidate& c) {
    c.aos = AosConfig{};
    c.de = DEParams{};
    for (const auto& [name, value] : c.categorical) {
        if (name == "OM_choice")
            c.aos.om_choice = deaos::detail::name_index(om_names(), value, "offspring metric");
        else if (name == "reward_choice")
            c.aos.reward.kind = reward_from_name(value);
        else if (name == "quality_choice")
            c.aos.quality.kind = quality_from_name(value);
        else if (name == "probability_choice")
            c.aos.probability.kind = probability_from_name(value);
        else if (name == "selection_choice")
            c.aos.selection.kind = selection_from_name(value);
        else if (name == "theta")
            c.aos.reward.params.theta_deg = std::stod(value);
        else if (name == "succ_lin_quad")
            c.aos.reward.params.gamma_sr = std::stoi(value);
        else if (name == "normal_factor")
            c.aos.reward.params.omega = std::stoi(value);
        else if (name == "alpha")
            c.aos.reward.params.alpha = std::stoi(value);
        else if (name == "beta")
            c.aos.reward.params.beta = std::stoi(value);
        else if (name == "intensity")
            c.aos.reward.params.rho = std::stoi(value);
        else
            throw std::invalid_argument("unknown categorical parameter '" + name + "'");
    }
    for (const auto& [name, value] : c.numeric) {
        if (name == "F")
            c.de.f_scale = value;
        else if (name == "CR")
            c.de.cr = value;
        else if (name == "NP")
            c.de.np = static_cast<int>(std::llround(value));
        else if (name == "top_NP")
            c.de.top_np = value;
        else if (name == "fix_appl")
            c.aos.reward.params.fix_appl = static_cast<int>(std::llround(value));
        else if (name == "max_gen")
            c.aos.reward.params.max_gen = static_cast<int>(std::llround(value));
        else if (name == "window")
            c.aos.reward.params.window_w = static_cast<int>(std::llround(value));
        else if (name == "decay")
            c.aos.reward.params.decay_d = value;
        else if (name == "frac")
            c.aos.reward.params.frac = value;
        else if (name == "noise")
            c.aos.reward.params.eps_noise = value;
        else if (name == "scaling_constant")
            c.aos.reward.params.c_scale = value;
        else if (name == "decay_rate")
            c.aos.quality.params.delta = value;
        else if (name == "scaling_factor")
            c.aos.quality.params.c_ucb = value;
        else if (name == "q_min")
            c.aos.quality.params.q_min = value;
        else if (name == "weight_reward")
            c.aos.quality.params.c1 = value;
        else if (name == "weight_old_reward")
            c.aos.quality.params.c2 = value;
        else if (name == "discount_rate")
            c.aos.quality.params.gamma_b = value;
        else if (name == "p_min")
            c.aos.probability.params.p_min = value;
        else if (name == "error_prob")
            c.aos.probability.params.eps_p = value;
        else if (name == "learning_rate")
            c.aos.probability.params.mu = value;
        else if (name == "p_max")
            c.aos.probability.params.p_max = value;
        else if (name == "sel_eps")
            c.aos.selection.params.eps = value;
        else
            throw std::invalid_argument("unknown numeric parameter '" + name + "'");
    }
    // The selection-probability floor and ceiling must leave a feasible
    // simplex for the fixed strategy count.
    const double k = static_cast<double>(c.aos.num_operators());
    auto& pp = c.aos.probability.params;
    pp.p_min = std::min(pp.p_min, 0.99 / k);
    if (c.aos.probability.kind == ProbabilityKind::BiasedRule && pp.p_max <= pp.p_min)
        pp.p_max = std::min(1.0, pp.p_min + 0.01);
}

inline double truncated_normal(double centre, double sigma, double lo, double hi,
                               RandomStream& rng) {
    for (int tries = 0; tries < 100; ++tries) {
        const double v = centre + sigma * rng.gaussian();
        if (v >= lo && v <= hi)
            return v;
    }
    return rng.uniform_real(lo, hi);
}

} // namespace detail

/// Draws `n` candidates. With no elites every marginal is uniform; with
/// elites, numeric parameters follow a truncated normal centred on a random
/// elite's value (sigma = a tenth of the range) and categoricals re-use the
/// elite's value half of the time. Conditional parameters are sampled only
/// when their component choice is active.
inline std::vector<Candidate> sample_candidates(const ParameterSpace& space, int n,
                                                std::span<const Candidate> elites,
                                                RandomStream& rng) {
    if (n < 1)
        throw std::invalid_argument("sample_candidates: n must be >= 1");
    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        Candidate cand;
        const Candidate* elite =
            elites.empty() ? nullptr : &elites[rng.uniform_index(elites.size())];
        for (const auto& def : space.parameters) {
            if (!detail::condition_active(def, cand))
                continue;
            if (def.kind == ParamKind::Categorical) {
                std::string value;
                const bool from_elite = elite != nullptr &&
                                        elite->categorical.count(def.name) > 0 &&
                                        rng.uniform01() < 0.5;
                if (from_elite)
                    value = elite->categorical.at(def.name);
                else
                    value = def.values[rng.uniform_index(def.values.size())];
                cand.categorical[def.name] = value;
            } else {
                double value;
                const bool from_elite =
                    elite != nullptr && elite->numeric.count(def.name) > 0;
                if (from_elite)
                    value = detail::truncated_normal(elite->numeric.at(def.name),
                                                     (def.hi - def.lo) / 10.0, def.lo, def.hi,
                                                     rng);
                else
                    value = rng.uniform_real(def.lo, def.hi);
                if (def.kind == ParamKind::Integer)
                    value = std::clamp(std::round(value), def.lo, def.hi);
                cand.numeric[def.name] = value;
            }
        }
        detail::apply_assignment(cand);
        out.push_back(std::move(cand));
    }
    return out;
}

/// Wraps a preset as a starting candidate with a full assignment, so later
/// iterations can sample around it.
inline Candidate candidate_from_config(const AosConfig& aos, const DEParams& de) {
    Candidate c;
    c.numeric["F"] = de.f_scale;
    c.numeric["CR"] = de.cr;
    c.numeric["NP"] = de.np;
    c.numeric["top_NP"] = de.top_np;
    c.categorical["OM_choice"] = om_names()[aos.om_choice];
    c.categorical["reward_choice"] = to_name(aos.reward.kind);
    c.categorical["quality_choice"] = to_name(aos.quality.kind);
    c.categorical["probability_choice"] = to_name(aos.probability.kind);
    c.categorical["selection_choice"] = to_name(aos.selection.kind);
    c.numeric["fix_appl"] = aos.reward.params.fix_appl;
    c.numeric["max_gen"] = aos.reward.params.max_gen;
    c.categorical["theta"] = std::to_string(static_cast<int>(aos.reward.params.theta_deg));
    c.numeric["window"] = aos.reward.params.window_w;
    c.numeric["decay"] = aos.reward.params.decay_d;
    c.categorical["succ_lin_quad"] = std::to_string(aos.reward.params.gamma_sr);
    c.numeric["frac"] = aos.reward.params.frac;
    c.numeric["noise"] = aos.reward.params.eps_noise;
    c.categorical["normal_factor"] = std::to_string(aos.reward.params.omega);
    c.numeric["scaling_constant"] = aos.reward.params.c_scale;
    c.categorical["alpha"] = std::to_string(aos.reward.params.alpha);
    c.categorical["beta"] = std::to_string(aos.reward.params.beta);
    c.categorical["intensity"] = std::to_string(aos.reward.params.rho);
    c.numeric["decay_rate"] = aos.quality.params.delta;
    c.numeric["scaling_factor"] = aos.quality.params.c_ucb;
    c.numeric["q_min"] = aos.quality.params.q_min;
    c.numeric["weight_reward"] = aos.quality.params.c1;
    c.numeric["weight_old_reward"] = aos.quality.params.c2;
    c.numeric["discount_rate"] = aos.quality.params.gamma_b;
    c.numeric["p_min"] = aos.probability.params.p_min;
    c.numeric["error_prob"] = aos.probability.params.eps_p;
    c.numeric["learning_rate"] = aos.probability.params.mu;
    c.numeric["p_max"] = aos.probability.params.p_max;
    c.numeric["sel_eps"] = aos.selection.params.eps;
    c.aos = aos;
    c.de = de;
    return c;
}

// ---------------------------------------------------------------------------
// Racing

struct RaceBudget {
    long long total_runs = 1000;
    int min_instances_before_elimination = 3;
    int survivors_floor = 2;
};

/// Cost of one configuration on one problem instance; lower is better.
using EvalFn = std::function<double(const AosConfig&, const DEParams&, const bench::ProblemSpec&,
                                    std::uint64_t seed)>;

struct TuneLogRow {
    int iteration = 0;
    int candidate_id = 0;
    int instance_index = 0;
    double cost = 0.0;
    bool alive = true;
};

struct RaceOptions {
    double rank_margin = 1.0; // mean-rank gap to the leader that eliminates
    std::uint64_t seed = 0;
    int iteration = 0;
    std::vector<TuneLogRow>* log = nullptr;
};

namespace detail {

/// Mean rank of every alive candidate across the instances raced so far;
/// tied costs share the average of their rank positions.
inline std::map<int, double> mean_ranks(const std::vector<Candidate>& candidates,
                                        std::size_t instances_done) {
    std::map<int, double> total;
    std::map<int, int> counted;
    for (std::size_t s = 0; s < instances_done; ++s) {
        std::vector<const Candidate*> alive;
        for (const auto& c : candidates)
            if (c.alive && s < c.costs.size())
                alive.push_back(&c);
        std::sort(alive.begin(), alive.end(), [s](const Candidate* a, const Candidate* b) {
            return a->costs[s] < b->costs[s];
        });
        std::size_t i = 0;
        while (i < alive.size()) {
            std::size_t j = i;
            while (j < alive.size() && alive[j]->costs[s] == alive[i]->costs[s])
                ++j;
            const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // 1-based average
            for (std::size_t m = i; m < j; ++m) {
                total[alive[m]->id] += avg_rank;
                counted[alive[m]->id] += 1;
            }
            i = j;
        }
    }
    std::map<int, double> mean;
    for (const auto& [id, sum] : total)
        mean[id] = sum / static_cast<double>(counted[id]);
    return mean;
}

} // namespace detail

struct RaceResult {
    std::vector<Candidate> candidates;
    long long runs_used = 0;
};

/// Races candidates instance by instance, eliminating any candidate whose
/// mean rank trails the leader by more than the margin once enough instances
/// have been seen, but never below the survivors floor. Stops at budget
/// exhaustion, at the floor, or when the instance list is done. A candidate
/// eliminated at instance t is never evaluated again.
inline RaceResult race(std::vector<Candidate> candidates,
                       std::span<const bench::ProblemSpec> instances, const RaceBudget& budget,
                       const EvalFn& eval, const RaceOptions& options = {}) {
    if (candidates.size() < 2)
        throw std::invalid_argument("race: need at least two candidates");
    if (budget.total_runs <
        static_cast<long long>(candidates.size()) * budget.min_instances_before_elimination)
        throw std::invalid_argument(
            "race: budget below candidates x min_instances_before_elimination");
    RaceResult result;
    long long runs = 0;
    auto alive_count = [&]() {
        std::size_t n = 0;
        for (const auto& c : candidates)
            n += c.alive ? 1 : 0;
        return n;
    };
    for (std::size_t s = 0; s < instances.size(); ++s) {
        bool out_of_budget = false;
        for (auto& c : candidates) {
            if (!c.alive)
                continue;
            if (runs >= budget.total_runs) {
                out_of_budget = true;
                break;
            }
            const std::uint64_t run_seed =
                mix_seed(options.seed, static_cast<std::uint64_t>(c.id),
                         static_cast<std::uint64_t>(s));
            const double cost = eval(c.aos, c.de, instances[s], run_seed);
            c.costs.push_back(cost);
            ++runs;
            if (options.log != nullptr)
                options.log->push_back({options.iteration, c.id, static_cast<int>(s), cost,
                                        true});
        }
        if (out_of_budget)
            break;
        if (static_cast<int>(s) + 1 >= budget.min_instances_before_elimination) {
            const auto ranks = detail::mean_ranks(candidates, s + 1);
            double leader = std::numeric_limits<double>::infinity();
            for (const auto& [id, r] : ranks)
                leader = std::min(leader, r);
            // Worst first, so the floor keeps the strongest survivors.
            std::vector<Candidate*> alive;
            for (auto& c : candidates)
                if (c.alive)
                    alive.push_back(&c);
            std::sort(alive.begin(), alive.end(), [&](Candidate* a, Candidate* b) {
                return ranks.at(a->id) > ranks.at(b->id);
            });
            for (Candidate* c : alive) {
                if (alive_count() <= static_cast<std::size_t>(budget.survivors_floor))
                    break;
                if (ranks.at(c->id) > leader + options.rank_margin) {
                    c->alive = false;
                    if (options.log != nullptr)
                        options.log->push_back({options.iteration, c->id, static_cast<int>(s),
                                                c->costs.back(), false});
                }
            }
        }
        if (alive_count() <= static_cast<std::size_t>(budget.survivors_floor))
            break;
    }
    result.candidates = std::move(candidates);
    result.runs_used = runs;
    return result;
}

// ---------------------------------------------------------------------------
// The iterated sample -> race -> update loop

struct TuneOptions {
    int candidates_per_iteration = 8;
    int elite_count = 4;
    double rank_margin = 1.0;
};

struct TuneResult {
    Candidate winner;
    long long runs_used = 0;
    int iterations = 0;
    std::vector<TuneLogRow> log;
};

/// Iterates sampling and racing until the run budget cannot support another
/// race, carrying the best survivors as elites; returns the final survivor
/// with the best mean rank (mean cost, then id, break ties). Deterministic
/// given the seed.
inline TuneResult tune(const ParameterSpace& space, std::span<const bench::ProblemSpec> train,
                       const RaceBudget& budget, std::vector<Candidate> starting,
                       std::uint64_t seed, const EvalFn& eval, const TuneOptions& options = {}) {
    if (train.empty())
        throw std::invalid_argument("tune: training set is empty");
    RandomStream rng(mix_seed(seed, 0x74e5ull));
    TuneResult result;
    int next_id = 0;
    for (auto& c : starting)
        c.id = next_id++;
    std::vector<Candidate> elites = std::move(starting);
    std::optional<Candidate> winner;
    long long remaining = budget.total_runs;
    int iteration = 0;

    for (;;) {
        std::vector<Candidate> candidates;
        for (auto& e : elites) {
            Candidate c = e;
            c.costs.clear();
            c.alive = true;
            candidates.push_back(std::move(c));
        }
        const int n_new =
            std::max(0, options.candidates_per_iteration - static_cast<int>(candidates.size()));
        if (n_new > 0) {
            auto sampled = sample_candidates(space, n_new, elites, rng);
            for (auto& c : sampled) {
                c.id = next_id++;
                candidates.push_back(std::move(c));
            }
        }
        // Collapse duplicates; a fully fixed space produces identical points.
        {
            std::vector<Candidate> unique;
            std::vector<std::string> seen;
            for (auto& c : candidates) {
                const std::string key = config_to_json(c.aos, c.de).dump();
                if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                    seen.push_back(key);
                    unique.push_back(std::move(c));
                }
            }
            candidates = std::move(unique);
        }
        if (candidates.size() == 1) {
            if (!winner.has_value())
                winner = candidates.front();
            break;
        }
        const long long race_cost_floor = static_cast<long long>(candidates.size()) *
                                          budget.min_instances_before_elimination;
        if (remaining < race_cost_floor)
            break;

        // Instance order is reshuffled per iteration from the master stream.
        std::vector<bench::ProblemSpec> shuffled(train.begin(), train.end());
        for (std::size_t i = shuffled.size(); i-- > 1;)
            std::swap(shuffled[i], shuffled[rng.uniform_index(i + 1)]);

        RaceBudget race_budget = budget;
        race_budget.total_runs = remaining;
        RaceOptions race_options;
        race_options.rank_margin = options.rank_margin;
        race_options.seed = mix_seed(seed, static_cast<std::uint64_t>(iteration));
        race_options.iteration = iteration;
        race_options.log = &result.log;
        auto raced = race(std::move(candidates), shuffled, race_budget, eval, race_options);
        remaining -= raced.runs_used;
        result.runs_used += raced.runs_used;
        ++iteration;

        std::vector<Candidate> survivors;
        for (auto& c : raced.candidates)
            if (c.alive)
                survivors.push_back(std::move(c));
        const auto ranks = detail::mean_ranks(raced.candidates, train.size());
        std::sort(survivors.begin(), survivors.end(), [&](const Candidate& a, const Candidate& b) {
            const double ra = ranks.count(a.id) ? ranks.at(a.id) : 1e18;
            const double rb = ranks.count(b.id) ? ranks.at(b.id) : 1e18;
            if (ra != rb)
                return ra < rb;
            if (a.mean_cost() != b.mean_cost())
                return a.mean_cost() < b.mean_cost();
            return a.id < b.id;
        });
        winner = survivors.front();
        elites.assign(survivors.begin(),
                      survivors.begin() + std::min<std::size_t>(survivors.size(),
                                                                static_cast<std::size_t>(
                                                                    options.elite_count)));
        if (remaining < race_cost_floor)
            break;
    }
    if (!winner.has_value())
        throw std::runtime_error("tune: budget too small to race any candidates");
    result.winner = *winner;
    result.iterations = iteration;
    return result;
}

inline void write_tuning_log_csv(std::ostream& out, std::span<const TuneLogRow> log) {
    out << "iteration,candidate,instance,cost,alive\n";
    for (const auto& row : log) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", row.cost);
        out << row.iteration << "," << row.candidate_id << "," << row.instance_index << ","
            << buf << "," << (row.alive ? 1 : 0) << "\n";
    }
}

} // namespace deaos::tuner
