#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>
#include <vector>

#include "doctest.h"
#include "schedlab/moo/pareto.hpp"
#include "schedlab/util/rng.hpp"

using namespace schedlab;
using namespace schedlab::moo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// O(n^2) reference: rank by repeated removal of the pairwise-nondominated set.
std::vector<std::vector<size_t>> brute_fronts(const std::vector<Objectives>& objs) {
    std::vector<std::vector<size_t>> fronts;
    std::vector<size_t> remaining(objs.size());
    for (size_t i = 0; i < objs.size(); ++i) remaining[i] = i;
    while (!remaining.empty()) {
        std::vector<size_t> front, rest;
        for (size_t i : remaining) {
            bool dominated = false;
            for (size_t j : remaining)
                if (j != i && dominates(objs[j], objs[i])) {
                    dominated = true;
                    break;
                }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(std::move(front));
        remaining = std::move(rest);
    }
    return fronts;
}

std::vector<Objectives> random_objs(size_t n, std::mt19937_64& rng, bool discrete) {
    std::vector<Objectives> v(n);
    for (auto& o : v) {
        if (discrete) {
            // Coarse grid forces duplicates and heavy tie structure.
            o.thp = std::floor(uniform01(rng) * 4.0);
            o.jfi = std::floor(uniform01(rng) * 4.0) / 4.0;
            o.pdr = std::floor(uniform01(rng) * 4.0) / 4.0;
        } else {
            o.thp = uniform01(rng) * 100.0;
            o.jfi = uniform01(rng);
            o.pdr = uniform01(rng);
        }
    }
    return v;
}

}  // namespace

TEST_CASE("dominance is a strict partial order on the kpi orientation") {
    const Objectives a{2.0, 1.0, 0.0};
    const Objectives b{1.0, 1.0, 0.5};
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    CHECK_FALSE(dominates(a, a));  // equality dominates nothing

    // One objective each way: incomparable.
    const Objectives c{3.0, 0.5, 0.0};
    const Objectives d{1.0, 0.9, 0.0};
    CHECK_FALSE(dominates(c, d));
    CHECK_FALSE(dominates(d, c));

    // pdr is minimized.
    const Objectives e{1.0, 1.0, 0.1};
    const Objectives f{1.0, 1.0, 0.2};
    CHECK(dominates(e, f));
}

TEST_CASE("nondominated sort equals the brute-force oracle") {
    std::mt19937_64 rng(2024);
    for (int inst = 0; inst < 150; ++inst) {
        const size_t n = 1 + static_cast<size_t>(uniform01(rng) * 64);
        auto objs = random_objs(n, rng, inst % 3 == 0);
        auto fast = fast_nondominated_sort(objs);
        auto brute = brute_fronts(objs);
        REQUIRE(fast.size() == brute.size());
        size_t seen = 0;
        for (size_t f = 0; f < fast.size(); ++f) {
            auto a = fast[f];
            auto b = brute[f];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            REQUIRE(a == b);
            seen += a.size();
        }
        REQUIRE(seen == n);  // every index exactly once
    }
}

TEST_CASE("nondominated sort degenerate shapes") {
    SUBCASE("all identical points form one front") {
        std::vector<Objectives> objs(5, Objectives{1.0, 0.5, 0.2});
        auto fronts = fast_nondominated_sort(objs);
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0].size() == 5);
    }
    SUBCASE("a strict chain gives singleton fronts") {
        std::vector<Objectives> objs;
        for (int i = 0; i < 5; ++i)
            objs.push_back({double(5 - i), double(5 - i), double(i)});
        auto fronts = fast_nondominated_sort(objs);
        REQUIRE(fronts.size() == 5);
        for (size_t f = 0; f < 5; ++f) {
            REQUIRE(fronts[f].size() == 1);
            CHECK(fronts[f][0] == f);
        }
    }
    SUBCASE("empty input is refused") {
        CHECK_THROWS_AS(fast_nondominated_sort({}), std::invalid_argument);
    }
}

TEST_CASE("crowding distance closed forms") {
    SUBCASE("two or fewer members are all boundary") {
        std::vector<Objectives> front{{1.0, 0.5, 0.1}, {2.0, 0.4, 0.2}};
        auto d = crowding_distance(front);
        CHECK(d[0] == kInf);
        CHECK(d[1] == kInf);
    }
    SUBCASE("equally spaced collinear points") {
        std::vector<Objectives> front{{0.0, 0.0, 1.0}, {0.5, 0.5, 0.5}, {1.0, 1.0, 0.0}};
        auto d = crowding_distance(front);
        CHECK(d[0] == kInf);
        CHECK(d[2] == kInf);
        CHECK(d[1] == doctest::Approx(3.0));  // full normalized gap per objective
    }
    SUBCASE("zero-range objectives contribute nothing") {
        std::vector<Objectives> front{{0.0, 1.0, 0.5}, {0.5, 1.0, 0.5}, {1.0, 1.0, 0.5}};
        auto d = crowding_distance(front);
        CHECK(d[1] == doctest::Approx(1.0));  // only thp varies
    }
}

TEST_CASE("crowded truncation keeps whole fronts then splits by crowding") {
    // Front 0: three mutually nondominated points; front 1: two dominated ones.
    std::vector<Objectives> objs{
        {10.0, 0.2, 0.5}, {5.0, 0.9, 0.5}, {8.0, 0.6, 0.5},   // front 0
        {4.0, 0.1, 0.6}, {3.0, 0.5, 0.9},                      // front 1
    };
    auto keep_all = crowded_truncate(objs, 10);
    CHECK(keep_all.size() == 5);

    auto keep4 = crowded_truncate(objs, 4);
    REQUIRE(keep4.size() == 4);
    // Whole front 0 survives, then one member of front 1.
    std::vector<size_t> head(keep4.begin(), keep4.begin() + 3);
    std::sort(head.begin(), head.end());
    CHECK(head == std::vector<size_t>{0, 1, 2});
    CHECK((keep4[3] == 3 || keep4[3] == 4));

    auto keep2 = crowded_truncate(objs, 2);
    REQUIRE(keep2.size() == 2);
    // Both survivors are boundary members of front 0 (infinite crowding).
    for (size_t i : keep2) CHECK(i < 3);
}

TEST_CASE("hypervolume against hand-computed boxes") {
    const std::vector<Objectives> one{{2.0, 0.5, 0.2}};
    CHECK(hypervolume3(one) == doctest::Approx(0.8));
    const std::vector<Objectives> corner{{1.0, 1.0, 0.0}};
    CHECK(hypervolume3(corner) == doctest::Approx(1.0));

    SUBCASE("a dominated point adds nothing") {
        std::vector<Objectives> pts{{1.0, 1.0, 0.0}, {0.5, 0.5, 0.5}};
        CHECK(hypervolume3(pts) == doctest::Approx(1.0));
    }
    SUBCASE("staircase union") {
        std::vector<Objectives> pts{{1.0, 0.5, 0.0}, {0.5, 1.0, 0.0}};
        CHECK(hypervolume3(pts) == doctest::Approx(0.75));
    }
    SUBCASE("points below the reference are clamped") {
        std::vector<Objectives> pts{{1.0, 0.5, 1.0}};  // pdr at the reference corner
        CHECK(hypervolume3(pts) == doctest::Approx(0.0));
    }
    SUBCASE("adding a point never shrinks the volume") {
        std::mt19937_64 rng(9);
        auto pts = random_objs(1, rng, false);
        double prev = hypervolume3(pts);
        for (int i = 0; i < 40; ++i) {
            pts.push_back(random_objs(1, rng, false)[0]);
            const double hv = hypervolume3(pts);
            REQUIRE(hv >= prev - 1e-12);
            prev = hv;
        }
    }
}

TEST_CASE("weighted score and selection") {
    const Weights w{1.0, 1.0, 1.0};
    CHECK(weighted_score({5.0, 0.8, 0.1}, 10.0, w) == doctest::Approx(0.5 + 0.8 - 0.1));
    CHECK(weighted_score({5.0, 0.8, 0.1}, 0.0, w) == doctest::Approx(0.8 - 0.1));

    const Weights skewed{2.0, 0.5, 3.0};
    CHECK(weighted_score({10.0, 1.0, 0.2}, 10.0, skewed) == doctest::Approx(2.0 + 0.5 - 0.6));

    SUBCASE("selection normalizes by the best thp in the set") {
        std::vector<Objectives> objs{{10.0, 0.1, 0.0}, {5.0, 0.7, 0.0}};
        // Scores: 1 + 0.1 = 1.1 vs 0.5 + 0.7 = 1.2.
        CHECK(weighted_select(objs, w) == 1);
    }
    SUBCASE("ties go to the lowest index") {
        std::vector<Objectives> objs{{4.0, 0.5, 0.1}, {4.0, 0.5, 0.1}};
        CHECK(weighted_select(objs, w) == 0);
    }
}
