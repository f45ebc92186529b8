#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "schedlab/moo/pareto.hpp"
#include "schedlab/pla/pla.hpp"
#include "schedlab/sched/policies.hpp"
#include "schedlab/sim/env.hpp"

using namespace schedlab;
using namespace schedlab::pla;

namespace {

genie::ReplayContext make_ctx(uint32_t k, uint32_t window, uint64_t seed,
                              double arrival = 0.6) {
    sim::SimConfig cfg;
    cfg.num_ues = k;
    cfg.num_rbgs = 1;
    cfg.arrival_rate = arrival;
    cfg.mean_snr_per_ue.assign(k, 10.0);
    for (uint32_t i = 0; i < k; ++i) cfg.mean_snr_per_ue[i] = 7.0 + 2.5 * i;
    cfg.rng_seed = seed;
    sim::Environment env(cfg);
    sched::PfScheduler pf;
    for (uint32_t t = 0; t < 150; ++t)
        env.step(pf.decide(sched::make_observation(env)));
    return genie::ReplayContext::from_env(env, window);
}

SearchPath root_of(const genie::ReplayContext& ctx) {
    SearchPath p{{}, ctx.make_env(), sim::KpiWindow(ctx.cfg.num_ues), {}, 0};
    return p;
}

// Canonical multiset of objective triples for set comparison.
std::multiset<std::vector<double>> triples(const std::vector<Objectives>& objs) {
    std::multiset<std::vector<double>> out;
    for (const auto& o : objs) out.insert({o.thp, o.jfi, o.pdr});
    return out;
}

}  // namespace

TEST_CASE("expand branches once per active ue") {
    auto ctx = make_ctx(3, 10, 41);
    auto root = root_of(ctx);
    uint32_t active = 0;
    for (uint32_t k = 0; k < 3; ++k)
        if (root.env.active(k)) ++active;
    REQUIRE(active > 0);  // warmup at this load leaves backlog

    auto children = expand({root_of(ctx)});
    CHECK(children.size() == active);
    for (const auto& c : children) {
        CHECK(c.env.tti() == root.env.tti() + 1);
        REQUIRE(c.actions.size() == 1);
        CHECK(c.actions[0] >= 1);
        CHECK(c.actions[0] <= 3);
        CHECK(root.env.active(static_cast<uint32_t>(c.actions[0] - 1)));
        CHECK(c.window.ttis() == 1);
    }

    SUBCASE("a forced-idle state spawns exactly one idle child") {
        // Zero-arrival context whose warmup drained every buffer.
        sim::SimConfig cfg;
        cfg.num_ues = 2;
        cfg.num_rbgs = 1;
        cfg.arrival_rate = 0.0;
        cfg.mean_snr_per_ue = {10.0, 10.0};
        sim::Environment env(cfg);
        for (int t = 0; t < 5; ++t) env.step(sim::Decision::idle(1));
        auto idle_ctx = genie::ReplayContext::from_env(env, 4);
        auto kids = expand({SearchPath{{}, idle_ctx.make_env(),
                                       sim::KpiWindow(2), {}, 0}});
        REQUIRE(kids.size() == 1);
        CHECK(kids[0].actions == std::vector<int32_t>{0});
    }
}

TEST_CASE("dedupe keeps the lexicographically smallest witness") {
    auto ctx = make_ctx(2, 6, 43);
    auto kids = expand({root_of(ctx)});
    REQUIRE(!kids.empty());

    // Duplicate one child under two action spellings.
    std::vector<SearchPath> paths;
    paths.push_back(kids[0]);
    paths.push_back(kids[0]);
    paths[0].actions = {2, 1};
    paths[1].actions = {1, 2};
    dedupe(paths);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].actions == std::vector<int32_t>{1, 2});

    SUBCASE("distinct fingerprints both survive") {
        auto two = expand({root_of(ctx)});
        if (two.size() >= 2) {
            std::vector<SearchPath> p{two[0], two[1]};
            dedupe(p);
            CHECK(p.size() == 2);
        }
    }
    SUBCASE("same fingerprint but different objectives both survive") {
        std::vector<SearchPath> p;
        p.push_back(kids[0]);
        p.push_back(kids[0]);
        p[1].obj.thp += 1.0;
        dedupe(p);
        CHECK(p.size() == 2);
    }
}

TEST_CASE("prune mirrors crowded truncation on the path objectives") {
    auto ctx = make_ctx(3, 8, 47);
    auto paths = expand(expand(expand({root_of(ctx)})));
    REQUIRE(paths.size() > 4);

    std::vector<Objectives> objs;
    for (const auto& p : paths) objs.push_back(p.obj);
    auto keep = moo::crowded_truncate(objs, 4);

    auto pruned = paths;
    prune(pruned, 4);
    REQUIRE(pruned.size() == 4);
    for (size_t i = 0; i < 4; ++i) REQUIRE(pruned[i].obj == paths[keep[i]].obj);

    SUBCASE("a generous limit keeps everything") {
        auto all = paths;
        prune(all, paths.size() + 10);
        CHECK(all.size() == paths.size());
    }
}

TEST_CASE("pla config validates") {
    PlaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.list_size = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("single-ue search is the forced schedule") {
    auto ctx = make_ctx(1, 10, 53, 0.9);
    PlaConfig cfg;
    cfg.list_size = 8;
    auto res = pla_run(ctx, cfg);
    REQUIRE(res.final_list.size() == 1);
    CHECK(res.selected == 0);
    CHECK(res.final_list[0].actions.size() == 10);
    for (int32_t a : res.final_list[0].actions) CHECK((a == 0 || a == 1));
}

TEST_CASE("saturated list search recovers the exhaustive pareto set") {
    auto ctx = make_ctx(3, 5, 59);
    PlaConfig cfg;
    cfg.list_size = 2000;  // >= 3^5 leaves: nothing is ever pruned away
    auto res = pla_run(ctx, cfg);

    auto exact = exhaustive_search(ctx, 5);
    REQUIRE(!exact.empty());

    // Front 0 of the final list, unique by objective triple.
    std::vector<Objectives> list_objs;
    for (const auto& p : res.final_list) list_objs.push_back(p.obj);
    auto fronts = moo::fast_nondominated_sort(list_objs);
    std::set<std::vector<double>> front0;
    for (size_t i : fronts[0])
        front0.insert({list_objs[i].thp, list_objs[i].jfi, list_objs[i].pdr});

    std::set<std::vector<double>> oracle;
    for (const auto& [seq, obj] : exact) oracle.insert({obj.thp, obj.jfi, obj.pdr});

    CHECK(front0 == oracle);

    SUBCASE("witness sequences replay to their reported objectives") {
        for (const auto& [seq, obj] : exact) REQUIRE(ctx.replay(seq) == obj);
        for (const auto& p : res.final_list) {
            if (p.actions.size() == 5) REQUIRE(ctx.replay(p.actions) == p.obj);
        }
    }
}

TEST_CASE("selected member maximizes the weighted preference") {
    auto ctx = make_ctx(3, 6, 61);
    PlaConfig cfg;
    cfg.list_size = 50;
    cfg.weights = {1.0, 1.0, 1.0};
    auto res = pla_run(ctx, cfg);
    REQUIRE(res.selected < res.final_list.size());

    std::vector<Objectives> objs;
    for (const auto& p : res.final_list) objs.push_back(p.obj);
    CHECK(res.selected == moo::weighted_select(objs, cfg.weights));
}

TEST_CASE("exhaustive search refuses oversized instances") {
    auto ctx = make_ctx(3, 13, 67);
    CHECK_THROWS_AS(exhaustive_search(ctx, 13), std::invalid_argument);  // 3^13 > 1e6
}

TEST_CASE("horizon zero means the full trace") {
    auto ctx = make_ctx(2, 7, 71);
    PlaConfig cfg;
    cfg.list_size = 20;
    cfg.horizon = 0;
    auto res = pla_run(ctx, cfg);
    for (const auto& p : res.final_list) CHECK(p.actions.size() == 7);
}
