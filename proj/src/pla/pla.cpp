#include "schedlab/pla/pla.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "schedlab/util/rng.hpp"

namespace schedlab::pla {

namespace {

uint64_t path_fingerprint(const sim::Environment& env) {
    const auto blob = env.snapshot();
    return fnv1a(blob.data(), blob.size());
}

Objectives running_objectives(const sim::KpiWindow& window, double tti_duration) {
    if (window.ttis() == 0) return {};
    return sim::compute_kpis(window, tti_duration);
}

// Step a copy of the parent one TTI and finish the child's bookkeeping.
SearchPath make_child(const SearchPath& parent, int32_t ue_or_idle) {
    SearchPath child = parent;
    child.actions.push_back(ue_or_idle == 0 ? 0 : ue_or_idle);
    sim::Decision d = sim::Decision::idle(1);
    if (ue_or_idle > 0) d.rbg_to_ue[0] = ue_or_idle - 1;
    child.window.add(child.env.step(d));
    child.obj = running_objectives(child.window, child.env.config().tti_duration);
    child.fingerprint = path_fingerprint(child.env);
    return child;
}

using DedupeKey = std::tuple<uint64_t, uint64_t, uint64_t, uint64_t>;

DedupeKey dedupe_key(const SearchPath& p) {
    return {p.fingerprint, std::bit_cast<uint64_t>(p.obj.thp), std::bit_cast<uint64_t>(p.obj.jfi),
            std::bit_cast<uint64_t>(p.obj.pdr)};
}

}  // namespace

void PlaConfig::validate() const {
    if (list_size < 1) throw std::invalid_argument("PlaConfig: list_size must be >= 1");
}

std::vector<SearchPath> expand(const std::vector<SearchPath>& paths) {
    std::vector<SearchPath> children;
    for (const auto& path : paths) {
        const uint32_t K = path.env.num_ues();
        bool any_active = false;
        for (uint32_t k = 0; k < K; ++k) {
            if (!path.env.active(k)) continue;
            any_active = true;
            children.push_back(make_child(path, static_cast<int32_t>(k) + 1));
        }
        if (!any_active) children.push_back(make_child(path, 0));
    }
    return children;
}

void dedupe(std::vector<SearchPath>& paths) {
    std::map<DedupeKey, size_t> best;  // key -> index of lex-smallest prefix so far
    for (size_t i = 0; i < paths.size(); ++i) {
        const auto key = dedupe_key(paths[i]);
        auto [it, inserted] = best.try_emplace(key, i);
        if (!inserted && paths[i].actions < paths[it->second].actions) it->second = i;
    }
    if (best.size() == paths.size()) return;
    std::vector<bool> keep(paths.size(), false);
    for (const auto& [key, idx] : best) keep[idx] = true;
    std::vector<SearchPath> survivors;
    survivors.reserve(best.size());
    for (size_t i = 0; i < paths.size(); ++i) {
        if (keep[i]) survivors.push_back(std::move(paths[i]));
    }
    paths.swap(survivors);
}

void prune(std::vector<SearchPath>& paths, size_t limit) {
    if (paths.size() <= limit) return;
    std::vector<Objectives> objs;
    objs.reserve(paths.size());
    for (const auto& p : paths) objs.push_back(p.obj);
    const auto survivors = moo::crowded_truncate(objs, limit);
    std::vector<SearchPath> kept;
    kept.reserve(survivors.size());
    for (size_t idx : survivors) kept.push_back(std::move(paths[idx]));
    paths.swap(kept);
}

PlaResult pla_run(const genie::ReplayContext& ctx, const PlaConfig& cfg) {
    cfg.validate();
    if (ctx.cfg.num_rbgs != 1) throw std::invalid_argument("pla_run: single-RBG only");
    const uint32_t horizon = cfg.horizon == 0 ? ctx.trace.num_ttis : cfg.horizon;
    if (horizon > ctx.trace.num_ttis) {
        throw std::invalid_argument("pla_run: horizon exceeds trace length");
    }

    SearchPath root{{}, ctx.make_env(), sim::KpiWindow(ctx.cfg.num_ues), {}, 0};
    root.fingerprint = path_fingerprint(root.env);
    std::vector<SearchPath> paths;
    paths.push_back(std::move(root));

    for (uint32_t t = 0; t < horizon; ++t) {
        paths = expand(paths);
        dedupe(paths);
        prune(paths, cfg.list_size);
    }

    std::vector<Objectives> objs;
    objs.reserve(paths.size());
    for (const auto& p : paths) objs.push_back(p.obj);
    PlaResult result;
    result.selected = moo::weighted_select(objs, cfg.weights);
    result.final_list = std::move(paths);
    return result;
}

std::vector<std::pair<std::vector<int32_t>, Objectives>> exhaustive_search(
    const genie::ReplayContext& ctx, uint32_t horizon) {
    if (ctx.cfg.num_rbgs != 1) throw std::invalid_argument("exhaustive_search: single-RBG only");
    if (horizon == 0 || horizon > ctx.trace.num_ttis) {
        throw std::invalid_argument("exhaustive_search: horizon must be in [1, trace length]");
    }
    const uint32_t K = ctx.cfg.num_ues;
    if (std::pow(static_cast<double>(K), static_cast<double>(horizon)) > 1e6) {
        throw std::invalid_argument("exhaustive_search: K^horizon exceeds 10^6");
    }

    std::vector<std::pair<std::vector<int32_t>, Objectives>> leaves;
    std::vector<int32_t> prefix;
    auto dfs = [&](auto&& self, const sim::Environment& env, const sim::KpiWindow& window,
                   uint32_t depth) -> void {
        if (depth == horizon) {
            leaves.emplace_back(prefix, running_objectives(window, ctx.cfg.tti_duration));
            return;
        }
        bool any_active = false;
        for (uint32_t k = 0; k < K; ++k) {
            if (!env.active(k)) continue;
            any_active = true;
            sim::Environment child_env = env;
            sim::KpiWindow child_window = window;
            sim::Decision d = sim::Decision::idle(1);
            d.rbg_to_ue[0] = static_cast<int32_t>(k);
            child_window.add(child_env.step(d));
            prefix.push_back(static_cast<int32_t>(k) + 1);
            self(self, child_env, child_window, depth + 1);
            prefix.pop_back();
        }
        if (!any_active) {
            sim::Environment child_env = env;
            sim::KpiWindow child_window = window;
            child_window.add(child_env.step(sim::Decision::idle(1)));
            prefix.push_back(0);
            self(self, child_env, child_window, depth + 1);
            prefix.pop_back();
        }
    };
    dfs(dfs, ctx.make_env(), sim::KpiWindow(ctx.cfg.num_ues), 0);

    // Unique triples first (DFS enumerates prefixes in lexicographic order, so
    // the first witness of a triple is the lex-smallest), then the dominance
    // filter runs on the much smaller unique set.
    std::map<std::tuple<uint64_t, uint64_t, uint64_t>, size_t> witness;
    std::vector<std::pair<std::vector<int32_t>, Objectives>> unique;
    for (auto& leaf : leaves) {
        const auto key = std::make_tuple(std::bit_cast<uint64_t>(leaf.second.thp),
                                         std::bit_cast<uint64_t>(leaf.second.jfi),
                                         std::bit_cast<uint64_t>(leaf.second.pdr));
        if (witness.try_emplace(key, unique.size()).second) unique.push_back(std::move(leaf));
    }
    std::vector<std::pair<std::vector<int32_t>, Objectives>> front;
    for (auto& cand : unique) {
        bool dominated = false;
        for (const auto& other : unique) {
            if (moo::dominates(other.second, cand.second)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.push_back(std::move(cand));
    }
    return front;
}

}  // namespace schedlab::pla
