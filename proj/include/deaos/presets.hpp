#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "deaos/config.hpp"

namespace deaos {

/// A named method from the literature: its component tuple and parameters.
struct Preset {
    AosConfig aos;
    DEParams de;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "Hybrid",    "Op-adapt",  "PDP",          "ADOPP",        "ADOPP-ext", "Adapt-NN",
        "Dyn-GEPv1", "Dyn-GEPv2", "SaDE",         "MMRDE",        "Compass",   "PD-PM",
        "PR-PM",     "Proj-PM",   "F-AUC-MAB",    "F-SR-MAB",     "F-AUC-AP",  "F-SR-AP",
        "F-AUC-PM",  "F-SR-PM",   "RecPM-AOS",    "MAENSm",       "PM-AdapSS-AA",
        "PM-AdapSS-N", "Ex-PM",   "Ex-AP",        "Ex-MAB",       "U-AOS-FW"};
    return names;
}

/// Builds the named method. Hyper-parameters the source methods pin are set
/// exactly; values their descriptions leave open fall back to the defaults
/// documented in config.hpp (mid-range of the tuning space, with a 0.05
/// selection-probability floor). The four tuned starting configurations and
/// U-AOS-FW carry their tuned hyper-parameters and DE parameters verbatim.
inline Preset preset(const std::string& name) {
    Preset p;
    auto& aos = p.aos;
    auto& de = p.de;
    auto& rw = aos.reward.params;
    auto& qu = aos.quality.params;
    auto& pr = aos.probability.params;
    const double k = static_cast<double>(aos.num_operators());

    if (name == "Hybrid") {
        aos.om_choice = 0;
        aos.reward.kind = RewardKind::Best2Gen;
        rw.alpha = 0;
        rw.beta = 0;
        rw.c_scale = 1.0;
        aos.quality.kind = QualityKind::Bellman;
        qu.c1 = 0.5;
        qu.c2 = 0.5; // weights constrained to sum to 1
        qu.gamma_b = 0.0;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.0;
        pr.eps_p = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "Op-adapt") {
        aos.om_choice = 2;
        aos.reward.kind = RewardKind::NormSuccessSumGen;
        aos.quality.kind = QualityKind::WeightedNormalisedSum;
        aos.probability.kind = ProbabilityKind::Identity;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "PDP") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::SuccessRate;
        rw.gamma_sr = 2;
        rw.max_gen = 1;
        rw.frac = 0.0;
        rw.eps_noise = 0.0;
        aos.quality.kind = QualityKind::Identity;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.eps_p = 0.0;
        pr.p_min = std::floor(20.0 / k) / 100.0; // percentage floor scaled by K
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "ADOPP" || name == "ADOPP-ext") {
        aos.om_choice = 4;
        aos.reward.kind = RewardKind::SuccessRate;
        rw.eps_noise = 0.0;
        rw.gamma_sr = 1;
        rw.max_gen = 1;
        rw.frac = name == "ADOPP" ? 0.0 : 0.5; // the extension shares everyone's successes
        aos.quality.kind = QualityKind::Identity;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.0;
        pr.eps_p = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "Adapt-NN") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::SuccessSum;
        aos.quality.kind = QualityKind::WeightedNormalisedSum;
        qu.q_min = 0.0;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.eps_p = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "Dyn-GEPv1" || name == "Dyn-GEPv2") {
        aos.om_choice = 1;
        if (name == "Dyn-GEPv1") {
            aos.reward.kind = RewardKind::SuccessSum;
            rw.max_gen = 1;
        } else {
            aos.reward.kind = RewardKind::NormBestSum;
            rw.rho = 3;
            rw.alpha = 0;
            rw.max_gen = 1;
        }
        aos.quality.kind = QualityKind::Bellman;
        qu.c1 = 1.0;
        qu.gamma_b = 0.0;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "SaDE") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::SuccessRate;
        rw.gamma_sr = 1;
        rw.frac = 0.0;
        aos.quality.kind = QualityKind::Identity;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.0;
        pr.eps_p = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "MMRDE") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::SuccessRate;
        rw.max_gen = 1;
        rw.gamma_sr = 1;
        rw.frac = 0.0;
        rw.eps_noise = 0.0;
        aos.quality.kind = QualityKind::Identity;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.eps_p = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "Compass") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::CompassProjection;
        rw.fix_appl = 66;
        rw.theta_deg = 90.0;
        aos.quality.kind = QualityKind::Identity;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.08;
        pr.eps_p = 0.55;
        aos.selection.kind = SelectionKind::Proportional;
        de = DEParams{0.51, 0.95, 163, 0.64};
    } else if (name == "PD-PM" || name == "PR-PM" || name == "Proj-PM") {
        aos.om_choice = 1;
        aos.reward.kind = name == "PD-PM"   ? RewardKind::ParetoDominance
                          : name == "PR-PM" ? RewardKind::ParetoRank
                                            : RewardKind::CompassProjection;
        aos.quality.kind = QualityKind::WeightedSum;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.eps_p = 0.0;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "F-AUC-MAB") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::Auc;
        rw.window_w = 138;
        rw.decay_d = 0.47;
        aos.quality.kind = QualityKind::Ucb;
        qu.c_ucb = 0.04;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.02;
        pr.eps_p = 0.72;
        aos.selection.kind = SelectionKind::Greedy;
        de = DEParams{0.45, 0.21, 57, 0.73};
    } else if (name == "F-SR-MAB") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::SumOfRank;
        rw.window_w = 138;
        rw.decay_d = 0.47;
        aos.quality.kind = QualityKind::Ucb;
        qu.c_ucb = 0.04;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.eps_p = 0.0;
        pr.p_min = 0.0;
        aos.selection.kind = SelectionKind::Greedy;
    } else if (name == "F-AUC-AP" || name == "F-SR-AP") {
        aos.om_choice = 1;
        aos.reward.kind = name == "F-AUC-AP" ? RewardKind::Auc : RewardKind::SumOfRank;
        rw.window_w = 138;
        rw.decay_d = 0.47;
        aos.quality.kind = QualityKind::WeightedSum;
        aos.probability.kind = ProbabilityKind::BiasedRule;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "F-AUC-PM" || name == "F-SR-PM") {
        aos.om_choice = 1;
        aos.reward.kind = name == "F-AUC-PM" ? RewardKind::Auc : RewardKind::SumOfRank;
        rw.window_w = 138;
        rw.decay_d = 0.47;
        aos.quality.kind = QualityKind::WeightedSum;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "RecPM-AOS") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::ImmediateSuccess;
        aos.quality.kind = QualityKind::Bellman;
        qu.c1 = 0.57;
        qu.c2 = 0.96;
        qu.gamma_b = 0.43;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.08;
        pr.eps_p = 0.26;
        aos.selection.kind = SelectionKind::Proportional;
        de = DEParams{0.57, 0.93, 154, 0.05};
    } else if (name == "MAENSm") {
        aos.om_choice = 0;
        aos.reward.kind = RewardKind::SuccessRate;
        rw.max_gen = 1;
        rw.gamma_sr = 1;
        rw.frac = 0.0;
        rw.eps_noise = 0.0;
        aos.quality.kind = QualityKind::Ucb;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        aos.selection.kind = SelectionKind::Proportional;
    } else if (name == "PM-AdapSS-AA" || name == "PM-AdapSS-N") {
        aos.om_choice = 5;
        aos.reward.kind = RewardKind::NormSuccessSumWindow;
        rw.omega = name == "PM-AdapSS-AA" ? 0 : 1;
        rw.window_w = 73;
        aos.quality.kind = QualityKind::WeightedSum;
        qu.delta = 0.07;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.06;
        pr.eps_p = name == "PM-AdapSS-AA" ? 0.0 : 0.53;
        aos.selection.kind = SelectionKind::Proportional;
        if (name == "PM-AdapSS-N")
            de = DEParams{0.47, 0.96, 329, 0.07};
    } else if (name == "Ex-PM" || name == "Ex-AP" || name == "Ex-MAB") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::NormBestSum;
        rw.rho = 1;
        rw.alpha = 0;
        if (name == "Ex-PM") {
            aos.quality.kind = QualityKind::WeightedSum;
            aos.probability.kind = ProbabilityKind::NormalisedQuality;
            aos.selection.kind = SelectionKind::Proportional;
        } else if (name == "Ex-AP") {
            aos.quality.kind = QualityKind::WeightedSum;
            aos.probability.kind = ProbabilityKind::BiasedRule;
            aos.selection.kind = SelectionKind::Proportional;
        } else {
            aos.quality.kind = QualityKind::Ucb;
            aos.probability.kind = ProbabilityKind::NormalisedQuality;
            pr.eps_p = 0.0;
            pr.p_min = 0.0;
            aos.selection.kind = SelectionKind::Greedy;
        }
    } else if (name == "U-AOS-FW") {
        aos.om_choice = 1;
        aos.reward.kind = RewardKind::ImmediateSuccess;
        aos.quality.kind = QualityKind::Bellman;
        qu.c1 = 0.66;
        qu.c2 = 0.45;
        qu.gamma_b = 0.54;
        aos.probability.kind = ProbabilityKind::NormalisedQuality;
        pr.p_min = 0.04;
        pr.eps_p = 0.22;
        aos.selection.kind = SelectionKind::Proportional;
        de = DEParams{0.41, 0.91, 262, 0.02};
    } else {
        std::string msg = "unknown preset '" + name + "'; catalog:";
        for (const auto& n : preset_names())
            msg += " " + n;
        throw std::invalid_argument(msg);
    }
    return p;
}

} // namespace deaos
