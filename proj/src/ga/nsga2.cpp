#include "schedlab/ga/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schedlab/util/rng.hpp"

namespace schedlab::ga {

namespace {

double clamp_gene(double v, uint32_t num_ues) {
    return std::clamp(v, 1.0, static_cast<double>(num_ues));
}

// Uniform integer in [0, n) from the shared 53-bit uniform.
size_t pick_index(size_t n, std::mt19937_64& rng) {
    auto i = static_cast<size_t>(uniform01(rng) * static_cast<double>(n));
    return std::min(i, n - 1);
}

}  // namespace

void GaConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("GaConfig: " + msg); };
    if (population < 2 || population % 2 != 0) fail("population must be even and >= 2");
    if (!(p_c >= 0.0 && p_c <= 1.0)) fail("p_c must be in [0, 1]");
    if (!(p_m >= 0.0 && p_m <= 1.0)) fail("p_m must be in [0, 1]");
    if (!(eta_c > 0.0)) fail("eta_c must be > 0");
    if (!(eta_m > 0.0)) fail("eta_m must be > 0");
}

std::vector<int32_t> decode(const Genome& g, uint32_t num_ues) {
    std::vector<int32_t> actions(g.genes.size());
    for (size_t i = 0; i < g.genes.size(); ++i) {
        auto a = static_cast<int32_t>(std::llround(clamp_gene(g.genes[i], num_ues)));
        actions[i] = std::clamp(a, 1, static_cast<int32_t>(num_ues));
    }
    return actions;
}

std::pair<Genome, Genome> sbx_crossover(const Genome& p1, const Genome& p2, double eta_c,
                                        double p_c, uint32_t num_ues, std::mt19937_64& rng) {
    if (p1.genes.size() != p2.genes.size()) {
        throw std::invalid_argument("sbx_crossover: parents differ in length");
    }
    Genome c1 = p1, c2 = p2;
    if (uniform01(rng) > p_c) return {c1, c2};
    for (size_t i = 0; i < p1.genes.size(); ++i) {
        const double u = uniform01(rng);
        const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta_c + 1.0))
                                     : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
        const double x1 = p1.genes[i], x2 = p2.genes[i];
        c1.genes[i] = clamp_gene(0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2), num_ues);
        c2.genes[i] = clamp_gene(0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2), num_ues);
    }
    return {c1, c2};
}

Genome polynomial_mutation(const Genome& g, double eta_m, double p_m, uint32_t num_ues,
                           std::mt19937_64& rng) {
    Genome out = g;
    const double range = static_cast<double>(num_ues) - 1.0;
    for (double& gene : out.genes) {
        if (uniform01(rng) > p_m) continue;
        const double u = uniform01(rng);
        const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta_m + 1.0)) - 1.0
                                     : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta_m + 1.0));
        gene = clamp_gene(gene + delta * range, num_ues);
    }
    return out;
}

Objectives evaluate_genome(const Genome& g, const genie::ReplayContext& ctx) {
    return ctx.replay(decode(g, ctx.cfg.num_ues));
}

GaResult nsga2_run(const genie::ReplayContext& ctx, const GaConfig& cfg) {
    cfg.validate();
    const uint32_t K = ctx.cfg.num_ues;
    const size_t Q = size_t(ctx.trace.num_ttis) * ctx.trace.num_rbgs;
    const size_t P = cfg.population;
    std::mt19937_64 rng(cfg.rng_seed);

    std::vector<Genome> pop(P);
    std::vector<Objectives> objs(P);
    for (auto& g : pop) {
        g.genes.resize(Q);
        for (double& gene : g.genes) gene = 1.0 + uniform01(rng) * (K - 1.0);
    }
    for (size_t i = 0; i < P; ++i) objs[i] = evaluate_genome(pop[i], ctx);

    // Rank and crowding of the current population, for tournament selection.
    std::vector<size_t> rank(P);
    std::vector<double> crowd(P);
    const auto rank_population = [&]() {
        const auto fronts = moo::fast_nondominated_sort(objs);
        for (size_t f = 0; f < fronts.size(); ++f) {
            std::vector<Objectives> fobjs;
            fobjs.reserve(fronts[f].size());
            for (size_t idx : fronts[f]) fobjs.push_back(objs[idx]);
            const auto dist = moo::crowding_distance(fobjs);
            for (size_t j = 0; j < fronts[f].size(); ++j) {
                rank[fronts[f][j]] = f;
                crowd[fronts[f][j]] = dist[j];
            }
        }
        return fronts;
    };
    auto fronts = rank_population();

    const auto front_hypervolume = [&](const std::vector<size_t>& front0) {
        std::vector<Objectives> fobjs;
        fobjs.reserve(front0.size());
        for (size_t idx : front0) fobjs.push_back(objs[idx]);
        return moo::hypervolume3(fobjs);
    };

    GaResult result;
    result.hypervolume_history.reserve(cfg.generations + 1);
    result.hypervolume_history.push_back(front_hypervolume(fronts[0]));

    // Crowded-comparison tournament; exact ties resolved by the lower index.
    const auto tournament = [&]() -> size_t {
        const size_t a = pick_index(P, rng);
        const size_t b = pick_index(P, rng);
        if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
        if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
        return std::min(a, b);
    };

    std::vector<Genome> next_pop;
    std::vector<Objectives> next_objs;
    for (uint32_t gen = 0; gen < cfg.generations; ++gen) {
        std::vector<Genome> offspring;
        offspring.reserve(P);
        while (offspring.size() < P) {
            const Genome& pa = pop[tournament()];
            const Genome& pb = pop[tournament()];
            auto [c1, c2] = sbx_crossover(pa, pb, cfg.eta_c, cfg.p_c, K, rng);
            offspring.push_back(polynomial_mutation(c1, cfg.eta_m, cfg.p_m, K, rng));
            if (offspring.size() < P)
                offspring.push_back(polynomial_mutation(c2, cfg.eta_m, cfg.p_m, K, rng));
        }

        std::vector<Objectives> combined_objs = objs;
        combined_objs.reserve(2 * P);
        for (const auto& child : offspring) combined_objs.push_back(evaluate_genome(child, ctx));

        const auto survivors = moo::crowded_truncate(combined_objs, P);
        next_pop.clear();
        next_objs.clear();
        for (size_t idx : survivors) {
            next_pop.push_back(idx < P ? pop[idx] : offspring[idx - P]);
            next_objs.push_back(combined_objs[idx]);
        }
        pop.swap(next_pop);
        objs.swap(next_objs);

        fronts = rank_population();
        result.hypervolume_history.push_back(front_hypervolume(fronts[0]));
    }

    result.front.reserve(fronts[0].size());
    for (size_t idx : fronts[0]) result.front.push_back({pop[idx], objs[idx]});
    return result;
}

const EvaluatedGenome& select_final(const std::vector<EvaluatedGenome>& front,
                                    const moo::Weights& weights) {
    if (front.empty()) throw std::invalid_argument("select_final: empty front");
    std::vector<Objectives> objs;
    objs.reserve(front.size());
    for (const auto& m : front) objs.push_back(m.obj);
    return front[moo::weighted_select(objs, weights)];
}

}  // namespace schedlab::ga
