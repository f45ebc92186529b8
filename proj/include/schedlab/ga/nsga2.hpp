#ifndef SCHEDLAB_GA_NSGA2_HPP
#define SCHEDLAB_GA_NSGA2_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "schedlab/genie/replay.hpp"
#include "schedlab/moo/pareto.hpp"
#include "schedlab/objectives.hpp"

namespace schedlab::ga {

// Real-coded chromosome over one scheduling window: one gene per (TTI, RBG),
// each in [1, K], decoded to a UE index by rounding.
struct Genome {
    std::vector<double> genes;
};

struct GaConfig {
    uint32_t population = 200;  // even
    uint32_t generations = 500;
    double p_c = 0.95;     // crossover probability per mating
    double p_m = 0.1;      // mutation probability per gene
    double eta_c = 5.0;    // SBX distribution index
    double eta_m = 20.0;   // polynomial-mutation distribution index
    uint64_t rng_seed = 1;

    void validate() const;
};

std::vector<int32_t> decode(const Genome& g, uint32_t num_ues);

// Children are copies of the parents when the crossover coin (p_c) fails;
// otherwise gene-wise SBX with index eta_c, clamped to [1, K].
std::pair<Genome, Genome> sbx_crossover(const Genome& p1, const Genome& p2, double eta_c,
                                        double p_c, uint32_t num_ues, std::mt19937_64& rng);

// Gene-wise polynomial mutation with probability p_m, perturbation scaled by
// the gene range (K - 1), clamped to [1, K].
Genome polynomial_mutation(const Genome& g, double eta_m, double p_m, uint32_t num_ues,
                           std::mt19937_64& rng);

Objectives evaluate_genome(const Genome& g, const genie::ReplayContext& ctx);

struct EvaluatedGenome {
    Genome genome;
    Objectives obj;
};

struct GaResult {
    std::vector<EvaluatedGenome> front;       // front 0 of the final population
    std::vector<double> hypervolume_history;  // front-0 hypervolume per generation
};

// NSGA-II: binary tournament on (rank, crowding), SBX + polynomial mutation,
// mu+lambda elitist survival of P from the 2P combined pool.
GaResult nsga2_run(const genie::ReplayContext& ctx, const GaConfig& cfg);

// Best weighted member of a front (THP normalized by the front's best);
// ties to the lowest index.
const EvaluatedGenome& select_final(const std::vector<EvaluatedGenome>& front,
                                    const moo::Weights& weights);

}  // namespace schedlab::ga

#endif
