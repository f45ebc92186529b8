#ifndef SCHEDLAB_RL_A2C_HPP
#define SCHEDLAB_RL_A2C_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "schedlab/nn/mlp.hpp"
#include "schedlab/objectives.hpp"
#include "schedlab/rl/obs.hpp"
#include "schedlab/sim/env.hpp"

namespace schedlab::rl {

struct A2cConfig {
    double gamma = 0.9;
    uint32_t nstep = 8;  // rollout length per env per iteration = n-step horizon
    double alpha = 1.0, beta = 1.0, delta = 1.0;  // reward weights
    double lambda_e = 0.01;                       // entropy weight
    double lambda_v = 0.5;                        // value-loss weight
    uint32_t num_envs = 8;
    uint32_t iterations = 4000;
    double lr = 3e-4;
    uint64_t lr_decay_point = 0;  // 0 = half the iteration budget
    double lr_decay_factor = 0.1;
    std::vector<uint32_t> hidden_dims{640, 640};
    uint32_t reward_window = 500;  // sliding window of the JFI reward term
    uint32_t eval_every = 50;      // periodic in-training evaluation cadence
    uint32_t eval_seeds = 3;
    uint32_t eval_warmup = 200;  // PF TTIs before the shared snapshot
    uint32_t eval_window = 500;  // TTIs per evaluation leg
    bool greedy_eval = true;     // argmax policy at evaluation time
    uint64_t rng_seed = 1;

    void validate() const;
    uint64_t resolved_decay_point() const {
        return lr_decay_point > 0 ? lr_decay_point : iterations / 2;
    }
};

// One environment step as seen by the learner. action < 0 marks a TTI where
// every UE was masked (no policy invocation); such steps still carry reward
// and a value target. `target` and `advantage` are frozen at batch-assembly
// time and treated as constants by the gradients.
struct Experience {
    Eigen::VectorXd obs;
    std::vector<uint8_t> mask;
    int32_t action = -1;
    double reward = 0.0;
    double target = 0.0;
    double advantage = 0.0;
};

struct Batch {
    std::vector<Experience> items;
};

// Spec form of the n-step return: sum_{l<n} gamma^l r_l + gamma^n * bootstrap.
double nstep_target(std::span<const double> rewards, double bootstrap_value, double gamma);

// Inverse-CDF draw over the allowed entries only. Masked entries are skipped
// outright, so they cannot be emitted even in the tail rounding gap, which is
// absorbed by the last allowed index. Returns -1 iff nothing is allowed.
int32_t sample_categorical(const Eigen::VectorXd& probs, const std::vector<uint8_t>& allowed,
                           std::mt19937_64& rng);

// One TTI's decision by iterative policy reuse across RBGs with the D23
// intra-TTI queue adjustment. Greedy mode takes the argmax (ties to the
// lowest index) and never touches the rng.
struct DecideOutcome {
    sim::Decision decision;
    std::vector<Eigen::VectorXd> obs;           // one entry per policy invocation
    std::vector<std::vector<uint8_t>> masks;
    std::vector<int32_t> actions;               // sampled UE per invocation
};
DecideOutcome decide_multi_rbg(const nn::MlpParams& policy, const sim::Environment& env,
                               bool greedy, std::mt19937_64& rng);

struct UpdateStats {
    double policy_objective = 0.0;  // J
    double entropy = 0.0;           // H
    double value_loss = 0.0;        // L
    bool applied = true;
};

// Scalar training objective F = -(J + lambda_e*H) + lambda_v*L with the
// batch's frozen advantages/targets; the analytic gradients below are dF/d*.
double a2c_objective(const nn::MlpParams& policy, const nn::MlpParams& value, const Batch& batch,
                     const A2cConfig& cfg);

UpdateStats a2c_gradients(const nn::MlpParams& policy, const nn::MlpParams& value,
                          const Batch& batch, const A2cConfig& cfg, nn::MlpGrads& gpolicy,
                          nn::MlpGrads& gvalue);

// Gradients + one SGD step on both networks. A non-finite batch aborts the
// step (params untouched), dumps a diagnostic to stderr, and clears `applied`.
UpdateStats a2c_update(nn::MlpParams& policy, nn::MlpParams& value, const Batch& batch,
                       const A2cConfig& cfg, double lr);

struct EvalLeg {
    Objectives kpis;
    double mean_reward = 0.0;
};

struct SeedEval {
    uint32_t seed_index = 0;
    EvalLeg drl, pf;
    double weighted_drl = 0.0;  // THP normalized by the better leg's THP
    double weighted_pf = 0.0;
};

struct EvalSummary {
    std::vector<SeedEval> seeds;
    double mean_drl_reward = 0.0, mean_pf_reward = 0.0;
    double mean_weighted_drl = 0.0, mean_weighted_pf = 0.0;
    Objectives mean_drl, mean_pf;
};

// Same-snapshot evaluation: per seeded deployment, PF warmup, snapshot, a
// greedy DRL leg, restore, a PF leg; both legs must consume identical
// exogenous randomness (checked via the environments' exogenous hashes).
// override_rbgs > 0 re-deploys the config with that many RBGs (transfer mode).
EvalSummary evaluate(const nn::MlpParams& policy, const sim::SimConfig& base_cfg,
                     const A2cConfig& cfg, uint32_t num_seeds, uint32_t warmup, uint32_t window,
                     uint64_t master_seed, uint32_t override_rbgs = 0);

struct LearningPoint {
    uint64_t iteration = 0;
    double mean_reward = 0.0;  // batch mean this iteration
    double pf_ref = 0.0;       // PF mean reward from the latest periodic eval
};

struct TrainResult {
    nn::MlpParams policy, value;
    std::vector<LearningPoint> curve;
    std::vector<std::pair<uint64_t, EvalSummary>> evals;
};

// Synchronized A2C over num_envs single-RBG environments with distinct
// deployments and seeds. Multi-RBG operation comes from policy reuse at
// evaluation time, so training itself requires num_rbgs == 1.
TrainResult train(const sim::SimConfig& base_cfg, const A2cConfig& cfg);

struct Checkpoint {
    nn::MlpParams policy, value;
    uint32_t num_ues = 0;
};

void save_checkpoint(const std::string& path, const nn::MlpParams& policy,
                     const nn::MlpParams& value, uint32_t num_ues);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace schedlab::rl

#endif
