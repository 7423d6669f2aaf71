#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "deaos/policy.hpp"
#include "deaos/reward.hpp"

namespace deaos {

/// The nine adaptable donor-vector strategies. The enabled subset defines the
/// operator count K; operator ids index into the enabled list.
enum class MutationStrategy {
    Rand1,
    Rand2,
    RandToBest2,
    CurrToRand1,
    CurrToPbest1,
    CurrToPbest1Archived,
    Best1,
    Best2,
    CurrToBest1,
};

inline constexpr std::size_t kNumStrategies = 9;

inline std::vector<MutationStrategy> all_strategies() {
    return {MutationStrategy::Rand1,        MutationStrategy::Rand2,
            MutationStrategy::RandToBest2,  MutationStrategy::CurrToRand1,
            MutationStrategy::CurrToPbest1, MutationStrategy::CurrToPbest1Archived,
            MutationStrategy::Best1,        MutationStrategy::Best2,
            MutationStrategy::CurrToBest1};
}

/// Four-strategy subset used by the earlier four-operator studies.
inline std::vector<MutationStrategy> four_strategies() {
    return {MutationStrategy::Rand1, MutationStrategy::Rand2, MutationStrategy::RandToBest2,
            MutationStrategy::CurrToRand1};
}

/// Static parameters of the hosting differential evolution.
struct DEParams {
    double f_scale = 0.5; // donor scaling factor
    double cr = 0.9;      // per-dimension crossover rate
    int np = 200;         // population size
    double top_np = 0.1;  // fraction of the population eligible as pbest
};

/// One point in the component space: an offspring-metric index plus one choice
/// per decision stage, each with its hyper-parameters, and the enabled
/// strategy set. Fully determines an adaptive operator selection method.
struct AosConfig {
    std::size_t om_choice = 1; // improvement w.r.t. parent by default
    RewardChoice reward;
    QualityChoice quality;
    ProbabilityChoice probability;
    SelectionChoice selection;
    std::vector<MutationStrategy> enabled_strategies = all_strategies();

    std::size_t num_operators() const { return enabled_strategies.size(); }
};

// ---------------------------------------------------------------------------
// Canonical names (JSON, CLI and log files all use these spellings)

inline const std::vector<std::string>& om_names() {
    static const std::vector<std::string> names = {
        "OffspringFitness",        "ImprovementWrtParent", "ImprovementWrtBestParent",
        "ImprovementWrtBestSoFar", "ImprovementWrtMedian", "RelativeImprovement"};
    return names;
}

inline const std::vector<std::string>& reward_names() {
    static const std::vector<std::string> names = {
        "ParetoDominance", "ParetoRank", "CompassProjection",    "AUC",
        "SumOfRank",       "SuccessRate", "ImmediateSuccess",    "SuccessSum",
        "NormSuccessSumWindow", "NormSuccessSumGen", "Best2Gen", "NormBestSum"};
    return names;
}

inline const std::vector<std::string>& quality_names() {
    static const std::vector<std::string> names = {"WeightedSum", "UCB", "Identity",
                                                   "WeightedNormalisedSum", "Bellman"};
    return names;
}

inline const std::vector<std::string>& probability_names() {
    static const std::vector<std::string> names = {"NormalisedQuality", "BiasedRule", "Identity"};
    return names;
}

inline const std::vector<std::string>& selection_names() {
    static const std::vector<std::string> names = {"Proportional", "Greedy", "EpsilonGreedy",
                                                   "LinearAnnealed", "ProportionalGreedy"};
    return names;
}

inline const std::vector<std::string>& strategy_names() {
    static const std::vector<std::string> names = {
        "rand/1",         "rand/2", "rand-to-best/2", "curr-to-rand/1", "curr-to-pbest/1",
        "curr-to-pbest/1-archived", "best/1", "best/2", "curr-to-best/1"};
    return names;
}

namespace detail {

inline std::size_t name_index(const std::vector<std::string>& names, const std::string& name,
                              const char* what) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        std::string msg = std::string("unknown ") + what + " '" + name + "'; expected one of:";
        for (const auto& n : names)
            msg += " " + n;
        throw std::invalid_argument(msg);
    }
    return static_cast<std::size_t>(it - names.begin());
}

inline void require_keys(const nlohmann::ordered_json& j, std::vector<std::string> allowed,
                         const char* where) {
    if (!j.is_object())
        throw std::invalid_argument(std::string(where) + ": expected a JSON object");
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw std::invalid_argument(std::string(where) + ": unknown key '" + item.key() +
                                        "'");
    }
}

inline double get_num(const nlohmann::ordered_json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

inline int get_int(const nlohmann::ordered_json& j, const char* key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}

} // namespace detail

inline const char* to_name(RewardKind k) {
    return reward_names()[static_cast<std::size_t>(k)].c_str();
}
inline const char* to_name(QualityKind k) {
    return quality_names()[static_cast<std::size_t>(k)].c_str();
}
inline const char* to_name(ProbabilityKind k) {
    return probability_names()[static_cast<std::size_t>(k)].c_str();
}
inline const char* to_name(SelectionKind k) {
    return selection_names()[static_cast<std::size_t>(k)].c_str();
}
inline const char* to_name(MutationStrategy s) {
    return strategy_names()[static_cast<std::size_t>(s)].c_str();
}

inline RewardKind reward_from_name(const std::string& name) {
    return static_cast<RewardKind>(detail::name_index(reward_names(), name, "reward choice"));
}
inline QualityKind quality_from_name(const std::string& name) {
    return static_cast<QualityKind>(detail::name_index(quality_names(), name, "quality choice"));
}
inline ProbabilityKind probability_from_name(const std::string& name) {
    return static_cast<ProbabilityKind>(
        detail::name_index(probability_names(), name, "probability choice"));
}
inline SelectionKind selection_from_name(const std::string& name) {
    return static_cast<SelectionKind>(
        detail::name_index(selection_names(), name, "selection choice"));
}
inline MutationStrategy strategy_from_name(const std::string& name) {
    return static_cast<MutationStrategy>(
        detail::name_index(strategy_names(), name, "mutation strategy"));
}

// ---------------------------------------------------------------------------
// JSON serialisation. Every field is written by name; parsing rejects unknown
// keys so that typos in hand-written configs fail loudly.

inline nlohmann::ordered_json to_json(const DEParams& de) {
    return {{"F", de.f_scale}, {"CR", de.cr}, {"NP", de.np}, {"top_np", de.top_np}};
}

inline nlohmann::ordered_json to_json(const AosConfig& aos) {
    nlohmann::ordered_json j;
    j["om"] = om_names()[aos.om_choice];
    j["reward"] = {{"choice", to_name(aos.reward.kind)},
                   {"fix_appl", aos.reward.params.fix_appl},
                   {"max_gen", aos.reward.params.max_gen},
                   {"theta", aos.reward.params.theta_deg},
                   {"window", aos.reward.params.window_w},
                   {"decay", aos.reward.params.decay_d},
                   {"succ_lin_quad", aos.reward.params.gamma_sr},
                   {"frac", aos.reward.params.frac},
                   {"noise", aos.reward.params.eps_noise},
                   {"normal_factor", aos.reward.params.omega},
                   {"scaling_constant", aos.reward.params.c_scale},
                   {"alpha", aos.reward.params.alpha},
                   {"beta", aos.reward.params.beta},
                   {"intensity", aos.reward.params.rho}};
    j["quality"] = {{"choice", to_name(aos.quality.kind)},
                    {"decay_rate", aos.quality.params.delta},
                    {"scaling_factor", aos.quality.params.c_ucb},
                    {"q_min", aos.quality.params.q_min},
                    {"weight_reward", aos.quality.params.c1},
                    {"weight_old_reward", aos.quality.params.c2},
                    {"discount_rate", aos.quality.params.gamma_b}};
    j["probability"] = {{"choice", to_name(aos.probability.kind)},
                        {"p_min", aos.probability.params.p_min},
                        {"error_prob", aos.probability.params.eps_p},
                        {"learning_rate", aos.probability.params.mu},
                        {"p_max", aos.probability.params.p_max}};
    j["selection"] = {{"choice", to_name(aos.selection.kind)},
                      {"sel_eps", aos.selection.params.eps}};
    auto strategies = nlohmann::ordered_json::array();
    for (MutationStrategy s : aos.enabled_strategies)
        strategies.push_back(to_name(s));
    j["strategies"] = strategies;
    return j;
}

/// Full run configuration: the DE parameters plus the assembled method.
inline nlohmann::ordered_json config_to_json(const AosConfig& aos, const DEParams& de) {
    nlohmann::ordered_json j;
    j["de"] = to_json(de);
    j["aos"] = to_json(aos);
    return j;
}

inline DEParams de_from_json(const nlohmann::ordered_json& j) {
    detail::require_keys(j, {"F", "CR", "NP", "top_np"}, "de");
    DEParams de;
    de.f_scale = detail::get_num(j, "F", de.f_scale);
    de.cr = detail::get_num(j, "CR", de.cr);
    de.np = detail::get_int(j, "NP", de.np);
    de.top_np = detail::get_num(j, "top_np", de.top_np);
    return de;
}

inline AosConfig aos_from_json(const nlohmann::ordered_json& j) {
    detail::require_keys(j, {"om", "reward", "quality", "probability", "selection", "strategies"},
                         "aos");
    AosConfig aos;
    if (j.contains("om"))
        aos.om_choice = detail::name_index(om_names(), j.at("om").get<std::string>(),
                                           "offspring metric");
    if (j.contains("reward")) {
        const auto& r = j.at("reward");
        detail::require_keys(r,
                             {"choice", "fix_appl", "max_gen", "theta", "window", "decay",
                              "succ_lin_quad", "frac", "noise", "normal_factor",
                              "scaling_constant", "alpha", "beta", "intensity"},
                             "aos.reward");
        if (r.contains("choice"))
            aos.reward.kind = reward_from_name(r.at("choice").get<std::string>());
        auto& p = aos.reward.params;
        p.fix_appl = detail::get_int(r, "fix_appl", p.fix_appl);
        p.max_gen = detail::get_int(r, "max_gen", p.max_gen);
        p.theta_deg = detail::get_num(r, "theta", p.theta_deg);
        p.window_w = detail::get_int(r, "window", p.window_w);
        p.decay_d = detail::get_num(r, "decay", p.decay_d);
        p.gamma_sr = detail::get_int(r, "succ_lin_quad", p.gamma_sr);
        p.frac = detail::get_num(r, "frac", p.frac);
        p.eps_noise = detail::get_num(r, "noise", p.eps_noise);
        p.omega = detail::get_int(r, "normal_factor", p.omega);
        p.c_scale = detail::get_num(r, "scaling_constant", p.c_scale);
        p.alpha = detail::get_int(r, "alpha", p.alpha);
        p.beta = detail::get_int(r, "beta", p.beta);
        p.rho = detail::get_int(r, "intensity", p.rho);
    }
    if (j.contains("quality")) {
        const auto& q = j.at("quality");
        detail::require_keys(q,
                             {"choice", "decay_rate", "scaling_factor", "q_min", "weight_reward",
                              "weight_old_reward", "discount_rate"},
                             "aos.quality");
        if (q.contains("choice"))
            aos.quality.kind = quality_from_name(q.at("choice").get<std::string>());
        auto& p = aos.quality.params;
        p.delta = detail::get_num(q, "decay_rate", p.delta);
        p.c_ucb = detail::get_num(q, "scaling_factor", p.c_ucb);
        p.q_min = detail::get_num(q, "q_min", p.q_min);
        p.c1 = detail::get_num(q, "weight_reward", p.c1);
        p.c2 = detail::get_num(q, "weight_old_reward", p.c2);
        p.gamma_b = detail::get_num(q, "discount_rate", p.gamma_b);
    }
    if (j.contains("probability")) {
        const auto& pj = j.at("probability");
        detail::require_keys(pj, {"choice", "p_min", "error_prob", "learning_rate", "p_max"},
                             "aos.probability");
        if (pj.contains("choice"))
            aos.probability.kind = probability_from_name(pj.at("choice").get<std::string>());
        auto& p = aos.probability.params;
        p.p_min = detail::get_num(pj, "p_min", p.p_min);
        p.eps_p = detail::get_num(pj, "error_prob", p.eps_p);
        p.mu = detail::get_num(pj, "learning_rate", p.mu);
        p.p_max = detail::get_num(pj, "p_max", p.p_max);
    }
    if (j.contains("selection")) {
        const auto& s = j.at("selection");
        detail::require_keys(s, {"choice", "sel_eps"}, "aos.selection");
        if (s.contains("choice"))
            aos.selection.kind = selection_from_name(s.at("choice").get<std::string>());
        aos.selection.params.eps = detail::get_num(s, "sel_eps", aos.selection.params.eps);
    }
    if (j.contains("strategies")) {
        aos.enabled_strategies.clear();
        for (const auto& name : j.at("strategies"))
            aos.enabled_strategies.push_back(strategy_from_name(name.get<std::string>()));
    }
    return aos;
}

inline void config_from_json(const nlohmann::ordered_json& j, AosConfig& aos, DEParams& de) {
    detail::require_keys(j, {"de", "aos"}, "config");
    if (j.contains("de"))
        de = de_from_json(j.at("de"));
    if (j.contains("aos"))
        aos = aos_from_json(j.at("aos"));
}

// ---------------------------------------------------------------------------
// Validation

/// Minimum population size a strategy needs: its distinct random indices plus
/// the current parent.
inline int min_population_for(MutationStrategy s) {
    switch (s) {
    case MutationStrategy::Rand1:
    case MutationStrategy::CurrToRand1:
        return 4;
    case MutationStrategy::Rand2:
    case MutationStrategy::RandToBest2:
        return 6;
    case MutationStrategy::Best2:
        return 5;
    case MutationStrategy::CurrToPbest1:
    case MutationStrategy::Best1:
    case MutationStrategy::CurrToBest1:
        return 3;
    case MutationStrategy::CurrToPbest1Archived:
        return 3;
    }
    return 6;
}

/// Hard configuration errors: conditions under which a run cannot start.
/// Returns human-readable diagnostics naming the offending field; empty means
/// the configuration is runnable.
inline std::vector<std::string> validate(const AosConfig& aos, const DEParams& de) {
    std::vector<std::string> errors;
    if (aos.om_choice >= kNumMetrics)
        errors.push_back("aos.om: metric index out of range");
    if (aos.enabled_strategies.empty())
        errors.push_back("aos.strategies: at least one strategy must be enabled");
    {
        auto sorted = aos.enabled_strategies;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            errors.push_back("aos.strategies: duplicate strategy");
    }
    const double k = static_cast<double>(aos.num_operators());
    if (aos.probability.kind == ProbabilityKind::NormalisedQuality ||
        aos.probability.kind == ProbabilityKind::BiasedRule) {
        if (k * aos.probability.params.p_min >= 1.0)
            errors.push_back("aos.probability.p_min: K * p_min must be below 1");
    }
    if (aos.probability.kind == ProbabilityKind::BiasedRule &&
        aos.probability.params.p_min >= aos.probability.params.p_max)
        errors.push_back("aos.probability.p_max: must exceed p_min");
    if (aos.reward.params.fix_appl < 1)
        errors.push_back("aos.reward.fix_appl: must be >= 1");
    if (aos.reward.params.max_gen < 1)
        errors.push_back("aos.reward.max_gen: must be >= 1");
    if (aos.reward.params.window_w < 1)
        errors.push_back("aos.reward.window: must be >= 1");
    if (de.np < 2)
        errors.push_back("de.NP: population size must be >= 2");
    for (MutationStrategy s : aos.enabled_strategies)
        if (de.np < min_population_for(s))
            errors.push_back(std::string("de.NP: ") + to_name(s) + " needs NP >= " +
                             std::to_string(min_population_for(s)));
    if (de.top_np <= 0.0 || de.top_np > 1.0)
        errors.push_back("de.top_np: must be in (0, 1]");
    if (de.cr < 0.0 || de.cr > 1.0)
        errors.push_back("de.CR: must be in [0, 1]");
    if (de.f_scale <= 0.0)
        errors.push_back("de.F: must be positive");
    return errors;
}

} // namespace deaos
