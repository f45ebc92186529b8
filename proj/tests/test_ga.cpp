#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "schedlab/ga/nsga2.hpp"
#include "schedlab/genie/replay.hpp"
#include "schedlab/sched/policies.hpp"
#include "schedlab/sim/env.hpp"
#include "schedlab/util/rng.hpp"

using namespace schedlab;
using namespace schedlab::ga;

namespace {

// Small warmed-up replay window shared by the behavioral tests.
genie::ReplayContext make_ctx(uint32_t k, uint32_t window, uint64_t seed) {
    sim::SimConfig cfg;
    cfg.num_ues = k;
    cfg.num_rbgs = 1;
    cfg.arrival_rate = 0.6;
    cfg.mean_snr_per_ue.assign(k, 10.0);
    for (uint32_t i = 0; i < k; ++i) cfg.mean_snr_per_ue[i] = 6.0 + 3.0 * i;
    cfg.rng_seed = seed;
    sim::Environment env(cfg);
    sched::PfScheduler pf;
    for (uint32_t t = 0; t < 100; ++t)
        env.step(pf.decide(sched::make_observation(env)));
    return genie::ReplayContext::from_env(env, window);
}

}  // namespace

TEST_CASE("decode rounds genes to ue indices") {
    Genome g{{1.0, 1.49, 1.5, 2.0, 2.51}};
    auto a = decode(g, 3);
    CHECK(a == std::vector<int32_t>{1, 1, 2, 2, 3});  // 1-based ue actions
}

TEST_CASE("ga config validates") {
    GaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.population = 3;  // must be even and >= 2
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GaConfig{};
    cfg.p_c = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("sbx crossover honors p_c and clamps") {
    std::mt19937_64 rng(5);
    Genome p1{{1.0, 2.0, 3.0}};
    Genome p2{{3.0, 2.0, 1.0}};

    SUBCASE("p_c = 0 copies the parents") {
        auto [c1, c2] = sbx_crossover(p1, p2, 5.0, 0.0, 3, rng);
        CHECK(c1.genes == p1.genes);
        CHECK(c2.genes == p2.genes);
    }
    SUBCASE("identical parents reproduce themselves") {
        auto [c1, c2] = sbx_crossover(p1, p1, 5.0, 1.0, 3, rng);
        for (size_t i = 0; i < 3; ++i) {
            CHECK(c1.genes[i] == doctest::Approx(p1.genes[i]));
            CHECK(c2.genes[i] == doctest::Approx(p1.genes[i]));
        }
    }
    SUBCASE("children stay inside [1, K]") {
        for (int rep = 0; rep < 500; ++rep) {
            auto [c1, c2] = sbx_crossover(p1, p2, 2.0, 1.0, 3, rng);
            for (double g : c1.genes) {
                REQUIRE(g >= 1.0);
                REQUIRE(g <= 3.0);
            }
            for (double g : c2.genes) {
                REQUIRE(g >= 1.0);
                REQUIRE(g <= 3.0);
            }
        }
    }
}

TEST_CASE("polynomial mutation honors p_m, clamps, and is symmetric") {
    std::mt19937_64 rng(6);
    Genome g{{2.0, 2.0, 2.0, 2.0}};

    SUBCASE("p_m = 0 is the identity") {
        auto m = polynomial_mutation(g, 20.0, 0.0, 3, rng);
        CHECK(m.genes == g.genes);
    }
    SUBCASE("mutants stay inside [1, K]") {
        for (int rep = 0; rep < 500; ++rep) {
            auto m = polynomial_mutation(g, 20.0, 1.0, 3, rng);
            for (double x : m.genes) {
                REQUIRE(x >= 1.0);
                REQUIRE(x <= 3.0);
            }
        }
    }
    SUBCASE("perturbation of a mid-range gene is symmetric") {
        Genome mid{{1.5}};
        uint32_t up = 0, down = 0;
        for (int rep = 0; rep < 100000; ++rep) {
            auto m = polynomial_mutation(mid, 20.0, 1.0, 2, rng);
            if (m.genes[0] > 1.5) ++up;
            if (m.genes[0] < 1.5) ++down;
        }
        const double skew = std::abs(double(up) - double(down)) / (up + down);
        CHECK(skew < 0.02);
    }
}

TEST_CASE("evaluate_genome is the windowed replay of the decoded actions") {
    auto ctx = make_ctx(3, 12, 19);
    std::mt19937_64 rng(1);
    Genome g;
    for (int i = 0; i < 12; ++i) g.genes.push_back(1.0 + 2.0 * uniform01(rng));

    auto a = evaluate_genome(g, ctx);
    auto b = ctx.replay(decode(g, 3));
    CHECK(a == b);
    CHECK(evaluate_genome(g, ctx) == a);  // deterministic
}

TEST_CASE("nsga2 run behavior on a small window") {
    auto ctx = make_ctx(3, 10, 23);
    GaConfig cfg;
    cfg.population = 16;
    cfg.generations = 25;
    cfg.rng_seed = 99;

    auto res = nsga2_run(ctx, cfg);
    REQUIRE(!res.front.empty());
    CHECK(res.front.size() <= cfg.population);
    REQUIRE(res.hypervolume_history.size() == cfg.generations + 1);

    SUBCASE("hypervolume never decreases under elitism") {
        for (size_t i = 1; i < res.hypervolume_history.size(); ++i)
            REQUIRE(res.hypervolume_history[i] >= res.hypervolume_history[i - 1] - 1e-12);
    }
    SUBCASE("front members are mutually nondominated") {
        for (const auto& a : res.front)
            for (const auto& b : res.front)
                REQUIRE_FALSE(moo::dominates(a.obj, b.obj));
    }
    SUBCASE("the whole run is seed-deterministic") {
        auto again = nsga2_run(ctx, cfg);
        REQUIRE(again.front.size() == res.front.size());
        for (size_t i = 0; i < res.front.size(); ++i) {
            REQUIRE(again.front[i].obj == res.front[i].obj);
            REQUIRE(again.front[i].genome.genes == res.front[i].genome.genes);
        }
        REQUIRE(again.hypervolume_history == res.hypervolume_history);
    }
    SUBCASE("a different seed explores differently") {
        GaConfig other = cfg;
        other.rng_seed = 100;
        auto again = nsga2_run(ctx, other);
        // Fronts may coincide in objectives, but genomes almost surely differ.
        bool same = again.front.size() == res.front.size();
        if (same)
            for (size_t i = 0; i < res.front.size(); ++i)
                if (again.front[i].genome.genes != res.front[i].genome.genes) same = false;
        CHECK_FALSE(same);
    }
}

TEST_CASE("zero generations returns the front of the random initial population") {
    auto ctx = make_ctx(2, 8, 31);
    GaConfig cfg;
    cfg.population = 12;
    cfg.generations = 0;
    auto res = nsga2_run(ctx, cfg);
    CHECK(!res.front.empty());
    CHECK(res.hypervolume_history.size() == 1);
    // Genome lengths match the window.
    for (const auto& m : res.front) CHECK(m.genome.genes.size() == 8);
}

TEST_CASE("select_final maximizes the weighted preference") {
    std::vector<EvaluatedGenome> front(3);
    front[0].obj = {10.0, 0.2, 0.0};  // weighted: 1 + 0.2 = 1.2
    front[1].obj = {5.0, 0.9, 0.0};   // 0.5 + 0.9 = 1.4
    front[2].obj = {5.0, 0.9, 0.0};   // tie with 1
    front[0].genome.genes = {1.0};
    front[1].genome.genes = {2.0};
    front[2].genome.genes = {3.0};

    const auto& best = select_final(front, moo::Weights{1.0, 1.0, 1.0});
    CHECK(best.genome.genes == std::vector<double>{2.0});  // tie broke to index 1

    const auto& thp_lover = select_final(front, moo::Weights{10.0, 0.1, 0.0});
    CHECK(thp_lover.genome.genes == std::vector<double>{1.0});
}
