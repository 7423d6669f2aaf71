#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deaos/de.hpp>

#include <set>
#include <vector>

using namespace deaos;

namespace {

Population population_of(std::vector<std::vector<double>> positions,
                         std::vector<double> fitness) {
    Population pop;
    for (std::size_t i = 0; i < positions.size(); ++i)
        pop.members.push_back({std::move(positions[i]), fitness[i]});
    pop.refresh_order();
    return pop;
}

} // namespace

TEST_CASE("donor formulas on resolved vectors") {
    const std::vector<double> x1{1.0, 1.0}, x2{3.0, 0.0}, x3{1.0, 0.0};
    CHECK(mutation::rand1(x1, x2, x3, 0.5) == std::vector<double>{2.0, 1.0});

    const std::vector<double> best{0.0, 0.0}, a{2.0, 2.0}, b{2.0, 0.0};
    CHECK(mutation::best1(best, a, b, 1.0) == std::vector<double>{0.0, 2.0});

    const std::vector<double> xi{1.0, 2.0};
    const auto c2r = mutation::curr_to_rand1(xi, x1, x2, x3, 0.5);
    CHECK(c2r == std::vector<double>{1.0 + 0.5 * (1.0 - 1.0 + 3.0 - 1.0),
                                     2.0 + 0.5 * (1.0 - 2.0 + 0.0 - 0.0)});
}

TEST_CASE("mutate draws distinct indices away from the parent") {
    RandomStream rng(11);
    Population pop;
    for (int i = 0; i < 8; ++i)
        pop.members.push_back({{double(i), double(i)}, double(i)});
    pop.refresh_order();
    DEParams de;
    de.np = 8;
    de.f_scale = 0.0; // donor collapses to the base vector
    Archive archive(8);
    for (int round = 0; round < 200; ++round) {
        const auto donor = mutate(MutationStrategy::Rand1, pop, 2, de, archive, rng);
        // With F = 0 the donor equals x_{r1}; never the parent itself.
        CHECK(donor != pop.members[2].position);
    }
}

TEST_CASE("a tiny pbest fraction collapses to the best parent") {
    // With top_np * NP below 1 the pbest pool is exactly the best member.
    // Here F = 1 and the parent is index 2, so the donor reduces to
    // x_best + (x_r1 - x_r2) with {r1, r2} = {0, 1}.
    RandomStream rng(12);
    auto pop = population_of({{5.0, 5.0}, {0.0, 0.0}, {2.0, 2.0}}, {5.0, 0.0, 2.0});
    DEParams de;
    de.np = 3;
    de.top_np = 0.02; // ceil(0.06) = 1 candidate
    de.f_scale = 1.0;
    Archive archive(3);
    for (int round = 0; round < 200; ++round) {
        const auto donor = mutate(MutationStrategy::CurrToPbest1, pop, 2, de, archive, rng);
        const bool plus = donor == std::vector<double>{5.0, 5.0};
        const bool minus = donor == std::vector<double>{-5.0, -5.0};
        CHECK((plus || minus));
    }
}

TEST_CASE("archived variant reads from the archive pool") {
    RandomStream rng(13);
    auto pop = population_of({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}, {1.0, 2.0, 3.0});
    DEParams de;
    de.np = 3;
    de.top_np = 1.0;
    Archive archive(3);
    archive.push({9.0, 9.0}, rng);
    bool saw_archive_influence = false;
    for (int round = 0; round < 500; ++round) {
        const auto donor = mutate(MutationStrategy::CurrToPbest1Archived, pop, 0, de, archive,
                                  rng);
        for (double v : donor)
            if (std::abs(v) > 4.0)
                saw_archive_influence = true;
    }
    CHECK(saw_archive_influence); // the 9-vector shows up in some donors
}

TEST_CASE("archive evicts uniformly at random once full") {
    RandomStream rng(14);
    Archive archive(2);
    archive.push({1.0}, rng);
    archive.push({2.0}, rng);
    archive.push({3.0}, rng);
    CHECK(archive.size() == 2);
}

TEST_CASE("crossover with rate one copies the donor") {
    RandomStream rng(15);
    const std::vector<double> parent{1.0, 2.0, 3.0}, donor{9.0, 8.0, 7.0};
    CHECK(crossover(parent, donor, 1.0, rng) == donor);
}

TEST_CASE("crossover with rate zero changes exactly one dimension") {
    RandomStream rng(16);
    const std::vector<double> parent{1.0, 2.0, 3.0, 4.0}, donor{9.0, 8.0, 7.0, 6.0};
    for (int round = 0; round < 200; ++round) {
        const auto trial = crossover(parent, donor, 0.0, rng);
        int changed = 0;
        for (std::size_t j = 0; j < parent.size(); ++j)
            changed += trial[j] != parent[j] ? 1 : 0;
        CHECK(changed == 1);
    }
}

TEST_CASE("one-dimensional crossover always takes the donor") {
    RandomStream rng(17);
    const std::vector<double> parent{1.0}, donor{5.0};
    for (int round = 0; round < 50; ++round)
        CHECK(crossover(parent, donor, 0.1, rng) == donor);
}

TEST_CASE("survival keeps the better solution and offspring win ties") {
    const Solution parent{{0.0}, 5.0}, offspring{{1.0}, 3.0};
    CHECK(survival_select(parent, offspring).fitness == 3.0);
    const Solution parent2{{0.0}, 3.0}, offspring2{{1.0}, 5.0};
    CHECK(survival_select(parent2, offspring2).fitness == 3.0);
    CHECK(survival_select(parent2, offspring2).position == parent2.position);
    const Solution parent3{{0.0}, 4.0}, offspring3{{1.0}, 4.0};
    CHECK(survival_select(parent3, offspring3).position == offspring3.position);
}

TEST_CASE("reflection folds any point back into the box") {
    CHECK(reflect_into(3.0, -5.0, 5.0) == 3.0);
    CHECK(reflect_into(6.0, -5.0, 5.0) == 4.0);
    CHECK(reflect_into(-7.5, -5.0, 5.0) == -2.5);
    CHECK(reflect_into(27.0, -5.0, 5.0) == doctest::Approx(3.0)); // several widths out
    RandomStream rng(18);
    for (int i = 0; i < 5000; ++i) {
        const double v = reflect_into(rng.uniform_real(-1000.0, 1000.0), -5.0, 5.0);
        CHECK(v >= -5.0);
        CHECK(v <= 5.0);
    }
}
