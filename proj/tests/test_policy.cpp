#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deaos/policy.hpp>
#include <deaos/random.hpp>

#include <cmath>
#include <vector>

using namespace deaos;

namespace {

AosState state_with_rewards(std::vector<double> reward, std::vector<double> prev = {},
                            std::vector<double> quality = {}) {
    AosState s(reward.size());
    if (prev.empty())
        prev.assign(reward.size(), 0.0);
    if (quality.empty())
        quality.assign(reward.size(), 0.0);
    s.reward = std::move(reward);
    s.prev_reward = std::move(prev);
    s.quality = std::move(quality);
    return s;
}

} // namespace

// --------------------------------------------------------------------------
// Quality

TEST_CASE("weighted sum of reward and previous quality") {
    auto s = state_with_rewards({2.0}, {}, {1.0});
    QualityChoice choice;
    choice.kind = QualityKind::WeightedSum;
    choice.params.delta = 0.3;
    const auto q = update_quality(choice, s, std::vector<long long>{1});
    CHECK(q[0] == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("confidence bound value against the scalar oracle") {
    auto s = state_with_rewards({0.5, 0.0});
    QualityChoice choice;
    choice.kind = QualityKind::Ucb;
    choice.params.c_ucb = 1.0;
    const std::vector<long long> counts{10, 90};
    const auto q = update_quality(choice, s, counts);
    // 0.5 + sqrt(ln(100) / 10), evaluated independently.
    const double expected = 0.5 + std::sqrt(std::log(100.0) / 10.0);
    CHECK(q[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(q[0] == doctest::Approx(1.1786).epsilon(1e-4));
}

TEST_CASE("unplayed operators get the optimistic sentinel") {
    auto s = state_with_rewards({0.5, 0.2});
    QualityChoice choice;
    choice.kind = QualityKind::Ucb;
    const auto q = update_quality(choice, s, std::vector<long long>{5, 0});
    CHECK(q[1] == kUnplayedQuality);
    CHECK(std::isfinite(q[0]));
}

TEST_CASE("identity quality returns the reward") {
    auto s = state_with_rewards({0.1, -0.7, 3.0});
    QualityChoice choice;
    choice.kind = QualityKind::Identity;
    CHECK(update_quality(choice, s, std::vector<long long>{1, 1, 1}) == s.reward);
}

TEST_CASE("weighted normalised sum floors the share at q_min") {
    auto s = state_with_rewards({3.0, 1.0}, {}, {0.5, 0.5});
    QualityChoice choice;
    choice.kind = QualityKind::WeightedNormalisedSum;
    choice.params.delta = 0.4;
    choice.params.q_min = 0.3;
    const auto q = update_quality(choice, s, std::vector<long long>{1, 1});
    CHECK(q[0] == doctest::Approx(0.4 * 0.75 + 0.6 * 0.5));
    CHECK(q[1] == doctest::Approx(0.4 * 0.3 + 0.6 * 0.5)); // 0.25 floored to 0.3
    // All-zero rewards fall back to the floor entirely.
    auto s2 = state_with_rewards({0.0, 0.0}, {}, {0.5, 0.5});
    const auto q2 = update_quality(choice, s2, std::vector<long long>{1, 1});
    CHECK(q2[0] == doctest::Approx(0.4 * 0.3 + 0.6 * 0.5));
}

TEST_CASE("discounted solve with zero discount is the weighted reward sum") {
    auto s = state_with_rewards({1.0, 0.0}, {0.5, 0.0});
    s.probability = {0.5, 0.5};
    const std::vector<double> weighted{0.6 * 1.0 + 0.2 * 0.5, 0.0};
    const auto q = bellman_solve(0.0, s.probability, weighted);
    CHECK(q[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("discounted solve satisfies its linear system") {
    RandomStream rng(41);
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 2 + rng.uniform_index(8);
        std::vector<double> p(k * k);
        for (std::size_t i = 0; i < k; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                p[i * k + j] = rng.uniform01() + 1e-9;
                total += p[i * k + j];
            }
            for (std::size_t j = 0; j < k; ++j)
                p[i * k + j] /= total;
        }
        std::vector<double> q_in(k);
        for (double& v : q_in)
            v = rng.uniform_real(-2.0, 2.0);
        const double gamma = rng.uniform_real(0.1, 0.9);
        const auto q = solve_discounted(gamma, p, q_in);
        for (std::size_t i = 0; i < k; ++i) {
            double lhs = q[i];
            for (std::size_t j = 0; j < k; ++j)
                lhs -= gamma * p[i * k + j] * q[j];
            CHECK(std::abs(lhs - q_in[i]) < 1e-9);
        }
    }
}

TEST_CASE("bellman quality is shifted to be non-negative") {
    auto s = state_with_rewards({-1.0, 2.0}, {0.0, 0.0});
    QualityChoice choice;
    choice.kind = QualityKind::Bellman;
    choice.params.c1 = 1.0;
    choice.params.c2 = 0.0;
    choice.params.gamma_b = 0.4;
    const auto q = update_quality(choice, s, std::vector<long long>{1, 1});
    CHECK(q[0] >= 0.0);
    CHECK(q[1] >= 0.0);
    CHECK(std::min(q[0], q[1]) == doctest::Approx(1e-6));
}

// --------------------------------------------------------------------------
// Probability

TEST_CASE("normalised quality with a zero noise term") {
    ProbabilityChoice choice;
    choice.params.p_min = 0.1;
    choice.params.eps_p = 0.0;
    const auto p = update_probability(choice, std::vector<double>{3.0, 1.0},
                                      std::vector<double>{0.5, 0.5});
    CHECK(p[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("winner-take-most update with normalisation") {
    ProbabilityChoice choice;
    choice.kind = ProbabilityKind::BiasedRule;
    choice.params.mu = 0.5;
    choice.params.p_max = 0.9;
    choice.params.p_min = 0.05;
    const auto p = update_probability(choice, std::vector<double>{2.0, 1.0},
                                      std::vector<double>{0.5, 0.5});
    // Raw values 0.70 and 0.275 normalised by their sum.
    CHECK(p[0] == doctest::Approx(0.70 / 0.975).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.275 / 0.975).epsilon(1e-12));
}

TEST_CASE("identity probability is plain normalisation") {
    ProbabilityChoice choice;
    choice.kind = ProbabilityKind::Identity;
    const auto p = update_probability(choice, std::vector<double>{2.0, 2.0, 4.0},
                                      std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.25));
    CHECK(p[2] == doctest::Approx(0.5));
}

TEST_CASE("all-zero quality with zero noise gives the uniform simplex") {
    ProbabilityChoice choice;
    choice.params.p_min = 0.0;
    choice.params.eps_p = 0.0;
    const auto p = update_probability(choice, std::vector<double>{0.0, 0.0, 0.0},
                                      std::vector<double>{0.2, 0.3, 0.5});
    for (double v : p)
        CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("probability update always yields a simplex") {
    RandomStream rng(42);
    for (int round = 0; round < 2000; ++round) {
        const std::size_t k = 1 + rng.uniform_index(9);
        std::vector<double> quality(k);
        for (double& v : quality)
            v = rng.uniform_real(-3.0, 5.0);
        if (rng.uniform01() < 0.1)
            quality[rng.uniform_index(k)] = kUnplayedQuality;
        std::vector<double> prev(k, 1.0 / static_cast<double>(k));
        ProbabilityChoice choice;
        const double kinds = rng.uniform01();
        choice.kind = kinds < 0.34   ? ProbabilityKind::NormalisedQuality
                      : kinds < 0.67 ? ProbabilityKind::BiasedRule
                                     : ProbabilityKind::Identity;
        choice.params.p_min = rng.uniform_real(0.0, 0.09);
        choice.params.eps_p = rng.uniform_real(0.0, 1.0);
        choice.params.mu = rng.uniform_real(0.0, 1.0);
        choice.params.p_max = rng.uniform_real(0.2, 1.0);
        const auto p = update_probability(choice, quality, prev);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("the p_min floor survives normalisation when the noise is zero") {
    RandomStream rng(43);
    for (int round = 0; round < 500; ++round) {
        const std::size_t k = 2 + rng.uniform_index(8);
        std::vector<double> quality(k);
        for (double& v : quality)
            v = rng.uniform_real(0.0, 4.0);
        ProbabilityChoice choice;
        choice.params.p_min = rng.uniform_real(0.0, 0.9 / static_cast<double>(k));
        choice.params.eps_p = 0.0;
        const auto p = update_probability(choice, quality,
                                          std::vector<double>(k, 1.0 / static_cast<double>(k)));
        for (double v : p)
            CHECK(v >= choice.params.p_min - 1e-12);
    }
}

TEST_CASE("the floor also holds for the winner-take-most rule") {
    // Inductive step: previous probabilities at or above the floor and a
    // feasible p_max keep every operator at or above the floor.
    RandomStream rng(44);
    for (int round = 0; round < 500; ++round) {
        const std::size_t k = 2 + rng.uniform_index(6);
        ProbabilityChoice choice;
        choice.kind = ProbabilityKind::BiasedRule;
        choice.params.p_min = rng.uniform_real(0.01, 0.9 / static_cast<double>(k));
        choice.params.p_max =
            1.0 - (static_cast<double>(k) - 1.0) * choice.params.p_min; // classic pursuit ceiling
        choice.params.mu = rng.uniform_real(0.0, 1.0);
        std::vector<double> quality(k);
        for (double& v : quality)
            v = rng.uniform_real(0.0, 4.0);
        std::vector<double> prev(k, 1.0 / static_cast<double>(k));
        for (int step = 0; step < 10; ++step) {
            prev = update_probability(choice, quality, prev);
            for (double v : prev)
                CHECK(v >= choice.params.p_min - 1e-12);
        }
    }
}

TEST_CASE("a sentinel hands the whole share to the unplayed operator") {
    ProbabilityChoice choice;
    choice.params.p_min = 0.05;
    choice.params.eps_p = 0.0;
    const auto p = update_probability(
        choice, std::vector<double>{2.0, kUnplayedQuality, 1.0},
        std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(p[1] > p[0]);
    CHECK(p[1] > p[2]);
    CHECK(p[0] == doctest::Approx(p[2]));
}

// --------------------------------------------------------------------------
// Selection

TEST_CASE("greedy takes the argmax with ties to the lowest index") {
    RandomStream rng(45);
    SelectionChoice greedy;
    greedy.kind = SelectionKind::Greedy;
    CHECK(select_operator(greedy, std::vector<double>{0.2, 0.5, 0.3}, 0.0, rng) == 1);
    CHECK(select_operator(greedy, std::vector<double>{0.4, 0.4, 0.2}, 0.0, rng) == 0);
}

TEST_CASE("zero-epsilon greedy collapses to greedy") {
    RandomStream rng(46);
    SelectionChoice eps_greedy;
    eps_greedy.kind = SelectionKind::EpsilonGreedy;
    eps_greedy.params.eps = 0.0;
    const std::vector<double> prob{0.1, 0.2, 0.7};
    for (int i = 0; i < 1000; ++i)
        CHECK(select_operator(eps_greedy, prob, 0.0, rng) == 2);
}

TEST_CASE("greedy is invariant under strictly monotone transforms") {
    RandomStream rng(47);
    SelectionChoice greedy;
    greedy.kind = SelectionKind::Greedy;
    for (int round = 0; round < 300; ++round) {
        const std::size_t k = 2 + rng.uniform_index(8);
        std::vector<double> prob(k);
        double total = 0.0;
        for (double& v : prob) {
            v = rng.uniform_real(0.01, 1.0);
            total += v;
        }
        for (double& v : prob)
            v /= total;
        std::vector<double> transformed(k);
        for (std::size_t i = 0; i < k; ++i)
            transformed[i] = std::exp(3.0 * prob[i]) + 1.0; // strictly increasing
        CHECK(select_operator(greedy, prob, 0.0, rng) ==
              select_operator(greedy, transformed, 0.0, rng));
    }
}

TEST_CASE("proportional frequencies match the probabilities") {
    RandomStream rng(48);
    SelectionChoice prop;
    prop.kind = SelectionKind::Proportional;
    const std::vector<double> prob{0.7, 0.3};
    const int draws = 100000;
    std::vector<int> counts(2, 0);
    for (int i = 0; i < draws; ++i)
        ++counts[select_operator(prop, prob, 0.0, rng)];
    const double freq = static_cast<double>(counts[0]) / draws;
    CHECK(freq == doctest::Approx(0.7).epsilon(0.015));
    // Pearson statistic against the exact multinomial, 1 degree of freedom,
    // 0.01 significance threshold 6.635.
    double chi2 = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double expected = prob[i] * draws;
        const double d = counts[i] - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 6.635);
}

TEST_CASE("linear annealing is uniform at the start and greedy at the end") {
    SelectionChoice annealed;
    annealed.kind = SelectionKind::LinearAnnealed;
    const std::vector<double> prob{0.05, 0.9, 0.05};
    {
        // Fraction 1: epsilon is 0, so every draw is the argmax.
        RandomStream rng(49);
        for (int i = 0; i < 500; ++i)
            CHECK(select_operator(annealed, prob, 1.0, rng) == 1);
    }
    {
        // Fraction 0: epsilon is 1, so draws replay the uniform stream.
        RandomStream rng(50);
        RandomStream replay(50);
        for (int i = 0; i < 500; ++i) {
            const OperatorId got = select_operator(annealed, prob, 0.0, rng);
            replay.uniform01(); // the branch coin
            CHECK(got == replay.uniform_index(prob.size()));
        }
    }
}

TEST_CASE("proportional-greedy mixes the two rules") {
    SelectionChoice pg;
    pg.kind = SelectionKind::ProportionalGreedy;
    const std::vector<double> prob{0.5, 0.5};
    pg.params.eps = 0.0; // never proportional
    RandomStream rng(51);
    for (int i = 0; i < 100; ++i)
        CHECK(select_operator(pg, prob, 0.0, rng) == 0);
    pg.params.eps = 1.0; // always proportional: both operators appear
    std::vector<int> counts(2, 0);
    for (int i = 0; i < 2000; ++i)
        ++counts[select_operator(pg, prob, 0.0, rng)];
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
}
