#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deaos/core.hpp>
#include <deaos/random.hpp>

#include "reference_models.hpp"

using namespace deaos;

namespace {

OMRecord make_record(OperatorId op, std::size_t gen, double improvement) {
    OMRecord rec;
    rec.op = op;
    rec.generation = gen;
    rec.metrics = {-1.0, improvement, 0.0, 0.0, 0.0, improvement};
    rec.improved = improvement > 0.0;
    return rec;
}

} // namespace

TEST_CASE("commit_generation counts successes and failures per operator") {
    GenerationMemory mem(2, 1, 50);
    std::vector<OMRecord> records;
    for (double v : {3.0, 0.0, 1.0, 0.0})
        records.push_back(make_record(0, 0, v));
    mem.commit_generation(records);
    CHECK(mem.history().size() == 1);
    CHECK(mem.history()[0].n_succ[0] == 2);
    CHECK(mem.history()[0].n_fail[0] == 2);
    CHECK(mem.history()[0].n_succ[1] == 0);
    CHECK(mem.history()[0].n_fail[1] == 0);
}

TEST_CASE("commit_generation accepts an empty record list") {
    GenerationMemory mem(3, 1, 50);
    mem.commit_generation({});
    REQUIRE(mem.history().size() == 1);
    for (OperatorId op = 0; op < 3; ++op) {
        CHECK(mem.history()[0].n_succ[op] == 0);
        CHECK(mem.history()[0].n_fail[op] == 0);
    }
}

TEST_CASE("commit_generation splits improved applications across operators") {
    GenerationMemory mem(2, 1, 50);
    std::vector<OMRecord> records;
    for (int i = 0; i < 7; ++i)
        records.push_back(make_record(0, 0, 1.0));
    for (int i = 0; i < 3; ++i)
        records.push_back(make_record(1, 0, 2.0));
    mem.commit_generation(records);
    CHECK(mem.history()[0].n_succ == std::vector<long long>{7, 3});
    CHECK(mem.history()[0].n_fail == std::vector<long long>{0, 0});
}

TEST_CASE("commit_generation rejects mixed generation indices") {
    GenerationMemory mem(2, 1, 50);
    std::vector<OMRecord> records{make_record(0, 0, 1.0), make_record(0, 1, 1.0)};
    CHECK_THROWS_AS(mem.commit_generation(records), std::invalid_argument);
}

TEST_CASE("commit_generation is append-only") {
    GenerationMemory mem(2, 1, 50);
    mem.commit_generation({make_record(0, 0, 1.0)});
    const auto first = mem.history()[0].n_succ;
    mem.commit_generation({make_record(1, 1, 0.0)});
    CHECK(mem.history().size() == 2);
    CHECK(mem.history()[0].n_succ == first);
}

TEST_CASE("recent deques hold the chosen metric, failures included, bounded") {
    GenerationMemory mem(1, 1, 3);
    mem.commit_generation({make_record(0, 0, 5.0), make_record(0, 0, 0.0)});
    mem.commit_generation({make_record(0, 1, 2.0), make_record(0, 1, 7.0)});
    const auto& recent = mem.recent(0);
    REQUIRE(recent.size() == 3); // capacity bound, oldest dropped
    CHECK(recent[0] == 0.0);
    CHECK(recent[1] == 2.0);
    CHECK(recent[2] == 7.0);
}

TEST_CASE("applications_in_horizon aggregates the most recent generations") {
    GenerationMemory mem(1, 1, 50);
    std::vector<OMRecord> g0, g1;
    for (int i = 0; i < 2; ++i)
        g0.push_back(make_record(0, 0, 1.0));
    mem.commit_generation(g0);
    for (int i = 0; i < 3; ++i)
        g1.push_back(make_record(0, 1, 1.0));
    mem.commit_generation(g1);

    CHECK(mem.applications_in_horizon(0, 2).succ == 5);
    CHECK(mem.applications_in_horizon(0, 1).succ == 3); // latest generation only
    CHECK(mem.applications_in_horizon(0, 10).succ == 5); // fewer completed than asked

    GenerationMemory empty(1, 1, 50);
    const auto view = empty.applications_in_horizon(0, 5);
    CHECK(view.succ == 0);
    CHECK(view.fail == 0);
    CHECK(view.values.empty());
}

TEST_CASE("window keeps FIFO-per-operator eviction") {
    // Three entries, newest first: (op1, g5), (op0, g4), (op1, g3).
    // Inserting (op1, g6) removes the oldest op1 entry (g3).
    WindowMemory win(3, 1);
    auto rec_g3 = make_record(1, 3, 1.0);
    auto rec_g4 = make_record(0, 4, 2.0);
    auto rec_g5 = make_record(1, 5, 3.0);
    auto rec_g6 = make_record(1, 6, 4.0);
    win.insert(rec_g3);
    win.insert(rec_g4);
    win.insert(rec_g5);
    win.insert(rec_g6);
    REQUIRE(win.size() == 3);
    CHECK(win.entries()[0].record.generation == 6);
    CHECK(win.entries()[1].record.generation == 5);
    CHECK(win.entries()[2].record.generation == 4);
    CHECK(win.entries()[0].record.op == 1);
    CHECK(win.entries()[2].record.op == 0);
}

TEST_CASE("window evicts the worst entry when the operator is absent") {
    WindowMemory win(3, 1);
    win.insert(make_record(1, 3, 5.0));
    win.insert(make_record(0, 4, 0.5)); // worst value, by op0
    win.insert(make_record(1, 5, 3.0));
    win.insert(make_record(2, 6, 4.0)); // no op2 entry in the window
    REQUIRE(win.size() == 3);
    for (const auto& e : win.entries())
        CHECK(e.record.op != 0);
}

TEST_CASE("window below capacity never evicts") {
    WindowMemory win(3, 1);
    win.insert(make_record(0, 0, 1.0));
    win.insert(make_record(1, 1, 2.0));
    CHECK(win.size() == 2);
    win.insert(make_record(2, 2, 3.0));
    CHECK(win.size() == 3);
}

TEST_CASE("window rejects non-improving offspring") {
    WindowMemory win(3, 1);
    auto rec = make_record(0, 0, 0.0);
    CHECK_FALSE(win.insert(rec));
    CHECK(win.size() == 0);
}

TEST_CASE("window against the reference model over random sequences") {
    // Randomised check of the full eviction semantics against a direct
    // restatement of the rules.
    RandomStream rng(20240517);
    for (int round = 0; round < 300; ++round) {
        const std::size_t capacity = 1 + rng.uniform_index(8);
        const std::size_t k = 1 + rng.uniform_index(4);
        WindowMemory win(capacity, 1);
        testsupport::ReferenceWindow ref(capacity, 1, k);
        for (int step = 0; step < 60; ++step) {
            OMRecord rec;
            rec.op = rng.uniform_index(k);
            rec.generation = static_cast<std::size_t>(step);
            const double value = rng.uniform01() < 0.2 ? 0.0 : rng.uniform_real(0.0, 10.0);
            rec.metrics = {0.0, value, 0.0, 0.0, 0.0, 0.0};
            rec.improved = value > 0.0;
            win.insert(rec);
            ref.insert(rec);
            REQUIRE(win.size() <= capacity);
            REQUIRE(win.size() == ref.entries.size());
            for (std::size_t i = 0; i < win.size(); ++i) {
                REQUIRE(win.entries()[i].record.op == ref.entries[i].op);
                REQUIRE(win.entries()[i].record.metrics[1] == ref.entries[i].metrics[1]);
                REQUIRE(win.entries()[i].record.metrics[1] > 0.0);
            }
        }
    }
}

TEST_CASE("identical seeds reproduce identical streams") {
    RandomStream a(99), b(99);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.uniform01() == b.uniform01());
}

TEST_CASE("distinct_indices excludes the parent and repeats") {
    RandomStream rng(7);
    std::array<std::size_t, 5> out{};
    for (int round = 0; round < 200; ++round) {
        rng.distinct_indices(out, 8, 3);
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i] != 3);
            CHECK(out[i] < 8);
            for (std::size_t j = i + 1; j < out.size(); ++j)
                CHECK(out[i] != out[j]);
        }
    }
}
