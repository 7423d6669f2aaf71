#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deaos/metrics.hpp>
#include <deaos/random.hpp>

#include <vector>

using namespace deaos;

TEST_CASE("population_refs order statistics") {
    const std::vector<double> f{5.0, 1.0, 3.0};
    const auto refs = population_refs(f, 2.0);
    CHECK(refs.f_best == 1.0);
    CHECK(refs.f_median == 3.0);
    CHECK(refs.f_bsf == 1.0); // best-so-far can never trail the current best
}

TEST_CASE("population_refs even-count median") {
    const std::vector<double> f{4.0, 2.0};
    const auto refs = population_refs(f, 0.0);
    CHECK(refs.f_median == 3.0);
    CHECK(refs.f_bsf == 0.0);
}

TEST_CASE("population_refs singleton") {
    const std::vector<double> f{7.0};
    const auto refs = population_refs(f, 7.0);
    CHECK(refs.f_best == 7.0);
    CHECK(refs.f_median == 7.0);
    CHECK(refs.f_bsf == 7.0);
}

TEST_CASE("population_refs rejects an empty list") {
    CHECK_THROWS_AS(population_refs(std::vector<double>{}, 0.0), std::invalid_argument);
}

TEST_CASE("compute_om direct evaluation") {
    const PopulationRefs refs{8.0, 6.0, 9.0};
    const auto m = compute_om(10.0, 7.0, refs);
    CHECK(m[0] == -7.0);
    CHECK(m[1] == 3.0);
    CHECK(m[2] == 1.0);
    CHECK(m[3] == 0.0);
    CHECK(m[4] == 2.0);
    CHECK(m[5] == doctest::Approx((6.0 / 7.0) * 3.0).epsilon(1e-12));
}

TEST_CASE("compute_om all clamps fire for a bad offspring") {
    const PopulationRefs refs{4.0, 4.0, 6.0};
    const auto m = compute_om(5.0, 9.0, refs);
    CHECK(m[0] == -9.0);
    for (std::size_t i = 1; i < kNumMetrics; ++i)
        CHECK(m[i] == 0.0);
}

TEST_CASE("compute_om tie with the parent earns nothing") {
    const PopulationRefs refs{5.0, 5.0, 5.0};
    const auto m = compute_om(5.0, 5.0, refs);
    CHECK(m[1] == 0.0);
}

TEST_CASE("relative improvement guards non-positive fitness") {
    // Offspring fitness at or below zero would blow up the ratio; it falls
    // back to the plain parent improvement.
    const PopulationRefs refs{-2.0, -3.0, 1.0};
    const auto m = compute_om(1.0, -1.0, refs);
    CHECK(m[5] == m[1]);
    const auto m2 = compute_om(1.0, 0.0, refs);
    CHECK(m2[5] == m2[1]);
    // Positive offspring but negative best-so-far: signs differ, same guard.
    const PopulationRefs refs3{0.5, -1.0, 2.0};
    const auto m3 = compute_om(1.0, 0.5, refs3);
    CHECK(m3[5] == m3[1]);
}

TEST_CASE("clamped metrics stay non-negative and track improvement") {
    RandomStream rng(31);
    for (int i = 0; i < 5000; ++i) {
        const double parent = rng.uniform_real(-50.0, 50.0);
        const double offspring = rng.uniform_real(-50.0, 50.0);
        std::vector<double> pop{parent, rng.uniform_real(-50.0, 50.0),
                                rng.uniform_real(-50.0, 50.0)};
        const auto refs = population_refs(pop, rng.uniform_real(-60.0, 50.0));
        const auto m = compute_om(parent, offspring, refs);
        for (std::size_t j = 1; j < kNumMetrics; ++j)
            CHECK(m[j] >= 0.0);
        CHECK((m[1] > 0.0) == (offspring < parent));
    }
}

TEST_CASE("parent improvement is shift covariant") {
    RandomStream rng(32);
    for (int i = 0; i < 2000; ++i) {
        const double parent = rng.uniform_real(-10.0, 10.0);
        const double offspring = rng.uniform_real(-10.0, 10.0);
        const double shift = rng.uniform_real(-100.0, 100.0);
        std::vector<double> pop{parent, rng.uniform_real(-10.0, 10.0)};
        const auto refs = population_refs(pop, parent);
        std::vector<double> shifted{pop[0] + shift, pop[1] + shift};
        const auto refs2 = population_refs(shifted, parent + shift);
        const auto a = compute_om(parent, offspring, refs);
        const auto b = compute_om(parent + shift, offspring + shift, refs2);
        CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-9));
    }
}

TEST_CASE("reference-point metrics are ordered when no clamp fires") {
    // With f_bsf <= f_best <= f_median and an offspring better than all
    // three, the improvements are ordered the same way.
    const PopulationRefs refs{3.0, 2.0, 4.0};
    const auto m = compute_om(10.0, 1.0, refs);
    CHECK(m[3] <= m[2]);
    CHECK(m[2] <= m[4]);
}
