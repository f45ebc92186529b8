#include "schedlab/rl/a2c.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "schedlab/moo/pareto.hpp"
#include "schedlab/sched/observation.hpp"
#include "schedlab/sched/policies.hpp"
#include "schedlab/sim/link_adapt.hpp"
#include "schedlab/util/rng.hpp"

namespace schedlab::rl {

namespace {

constexpr char kCheckpointMagic[4] = {'S', 'L', 'C', 'K'};
constexpr uint32_t kCheckpointVersion = 1;

// Floor under log(pi[a]) only. pi[a] can underflow to exactly 0 when another
// allowed logit dominates by > ~745; the floored log keeps the objective and
// the finite-difference surface finite and identical.
constexpr double kLogFloor = 1e-300;

// Highest-probability allowed entry; ties to the lowest index.
int32_t greedy_argmax(const Eigen::VectorXd& probs, const std::vector<uint8_t>& allowed) {
    int32_t best = -1;
    double best_p = -1.0;
    for (int32_t k = 0; k < probs.size(); ++k) {
        if (!allowed[static_cast<size_t>(k)]) continue;
        if (probs[k] > best_p) {
            best_p = probs[k];
            best = k;
        }
    }
    return best;
}

// Shared core of a2c_objective / a2c_gradients: one value pass over the whole
// batch, one policy pass over the acting items. The upstream of a masked
// logit is exactly 0 — the 1e9 penalty drives its probability to exact 0 in
// double arithmetic, so the realized function is constant in that logit.
UpdateStats batch_stats(const nn::MlpParams& policy, const nn::MlpParams& value,
                        const Batch& batch, const A2cConfig& cfg, nn::MlpGrads* gpolicy,
                        nn::MlpGrads* gvalue) {
    if (batch.items.empty()) throw std::invalid_argument("a2c: empty batch");
    const auto in_dim = static_cast<Eigen::Index>(value.dims.front());
    const auto m = static_cast<Eigen::Index>(batch.items.size());

    Eigen::MatrixXd xv(in_dim, m);
    for (Eigen::Index i = 0; i < m; ++i) xv.col(i) = batch.items[static_cast<size_t>(i)].obs;
    nn::ForwardCache cache_v;
    const Eigen::MatrixXd v = nn::mlp_forward(value, xv, gvalue ? &cache_v : nullptr);

    double value_loss = 0.0;
    Eigen::MatrixXd up_v(1, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double d = v(0, i) - batch.items[static_cast<size_t>(i)].target;
        value_loss += d * d;
        up_v(0, i) = cfg.lambda_v * 2.0 * d;
    }
    if (gvalue) *gvalue = nn::mlp_backward(value, cache_v, up_v);

    std::vector<size_t> acting;
    acting.reserve(batch.items.size());
    for (size_t i = 0; i < batch.items.size(); ++i)
        if (batch.items[i].action >= 0) acting.push_back(i);

    double j_obj = 0.0, entropy = 0.0;
    if (!acting.empty()) {
        const auto ma = static_cast<Eigen::Index>(acting.size());
        Eigen::MatrixXd xp(in_dim, ma);
        for (Eigen::Index c = 0; c < ma; ++c) xp.col(c) = batch.items[acting[static_cast<size_t>(c)]].obs;
        nn::ForwardCache cache_p;
        const Eigen::MatrixXd z = nn::mlp_forward(policy, xp, gpolicy ? &cache_p : nullptr);

        Eigen::MatrixXd up_p = Eigen::MatrixXd::Zero(z.rows(), z.cols());
        for (Eigen::Index c = 0; c < ma; ++c) {
            const Experience& e = batch.items[acting[static_cast<size_t>(c)]];
            const Eigen::VectorXd pi = nn::masked_softmax(z.col(c), e.mask);
            double h_i = 0.0;
            for (Eigen::Index k = 0; k < pi.size(); ++k)
                if (e.mask[static_cast<size_t>(k)] && pi[k] > 0.0) h_i -= pi[k] * std::log(pi[k]);
            j_obj += e.advantage * std::log(std::max(pi[e.action], kLogFloor));
            entropy += h_i;
            if (gpolicy) {
                for (Eigen::Index k = 0; k < pi.size(); ++k) {
                    if (!e.mask[static_cast<size_t>(k)]) continue;
                    const double ind = (k == e.action) ? 1.0 : 0.0;
                    double g = -e.advantage * (ind - pi[k]);
                    if (pi[k] > 0.0) g += cfg.lambda_e * pi[k] * (std::log(pi[k]) + h_i);
                    up_p(k, c) = g;
                }
            }
        }
        if (gpolicy) *gpolicy = nn::mlp_backward(policy, cache_p, up_p);
    } else if (gpolicy) {
        *gpolicy = nn::zero_grads(policy);
    }
    return {j_obj, entropy, value_loss, true};
}

struct LegResult {
    EvalLeg leg;
    uint64_t exog_hash = 0;
};

}  // namespace

int32_t sample_categorical(const Eigen::VectorXd& probs, const std::vector<uint8_t>& allowed,
                           std::mt19937_64& rng) {
    const double u = uniform01(rng);
    double cum = 0.0;
    int32_t last_allowed = -1;
    for (int32_t k = 0; k < probs.size(); ++k) {
        if (!allowed[static_cast<size_t>(k)]) continue;
        last_allowed = k;
        cum += probs[k];
        if (u < cum) return k;
    }
    return last_allowed;
}

void A2cConfig::validate() const {
    auto fail = [](const char* msg) { throw std::invalid_argument(std::string("A2cConfig: ") + msg); };
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must be in [0, 1]");
    if (nstep == 0) fail("nstep must be positive");
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(delta))
        fail("reward weights must be finite");
    if (!(lambda_e >= 0.0) || !(lambda_v >= 0.0)) fail("loss weights must be non-negative");
    if (num_envs == 0) fail("num_envs must be positive");
    if (!(lr > 0.0)) fail("lr must be positive");
    if (!(lr_decay_factor > 0.0)) fail("lr_decay_factor must be positive");
    if (hidden_dims.empty()) fail("hidden_dims must be non-empty");
    for (uint32_t h : hidden_dims)
        if (h == 0) fail("hidden_dims entries must be positive");
    if (reward_window == 0) fail("reward_window must be positive");
    if (eval_window == 0) fail("eval_window must be positive");
}

double nstep_target(std::span<const double> rewards, double bootstrap_value, double gamma) {
    double acc = 0.0, g = 1.0;
    for (double r : rewards) {
        acc += g * r;
        g *= gamma;
    }
    return acc + g * bootstrap_value;
}

DecideOutcome decide_multi_rbg(const nn::MlpParams& policy, const sim::Environment& env,
                               bool greedy, std::mt19937_64& rng) {
    const sim::SimConfig& cfg = env.config();
    DecideOutcome out;
    out.decision = sim::Decision::idle(cfg.num_rbgs);
    TtiView view(env);
    for (uint32_t b = 0; b < cfg.num_rbgs; ++b) {
        const std::vector<uint8_t> mask = view.active_mask();
        // A view can only lose packets across RBGs, so once everything is
        // drained the remaining RBGs stay idle too.
        if (!view.any_active()) break;
        const Eigen::VectorXd obs = build_obs(env, view, b);
        const Eigen::MatrixXd z = nn::mlp_forward(policy, obs);
        const Eigen::VectorXd pi = nn::masked_softmax(z.col(0), mask);
        const int32_t a = greedy ? greedy_argmax(pi, mask) : sample_categorical(pi, mask, rng);
        out.decision.rbg_to_ue[b] = a;
        const auto ue = static_cast<uint32_t>(a);
        const sim::LinkAdaptResult la =
            sim::link_adapt(env.snr_db(ue, b), env.olla_offset(ue), cfg.mcs_table,
                            cfg.rbg_symbols, cfg.bler_slope, cfg.target_bler);
        view.allocate(ue, la.rate * (1.0 - la.bler));
        out.obs.push_back(obs);
        out.masks.push_back(mask);
        out.actions.push_back(a);
    }
    return out;
}

double a2c_objective(const nn::MlpParams& policy, const nn::MlpParams& value, const Batch& batch,
                     const A2cConfig& cfg) {
    const UpdateStats st = batch_stats(policy, value, batch, cfg, nullptr, nullptr);
    return -(st.policy_objective + cfg.lambda_e * st.entropy) + cfg.lambda_v * st.value_loss;
}

UpdateStats a2c_gradients(const nn::MlpParams& policy, const nn::MlpParams& value,
                          const Batch& batch, const A2cConfig& cfg, nn::MlpGrads& gpolicy,
                          nn::MlpGrads& gvalue) {
    return batch_stats(policy, value, batch, cfg, &gpolicy, &gvalue);
}

UpdateStats a2c_update(nn::MlpParams& policy, nn::MlpParams& value, const Batch& batch,
                       const A2cConfig& cfg, double lr) {
    nn::MlpGrads gp, gv;
    UpdateStats st = a2c_gradients(policy, value, batch, cfg, gp, gv);
    const bool finite = gp.finite() && gv.finite() && std::isfinite(st.policy_objective) &&
                        std::isfinite(st.entropy) && std::isfinite(st.value_loss);
    if (!finite) {
        std::fprintf(stderr,
                     "a2c_update: non-finite batch aborted (J=%g H=%g L=%g items=%zu)\n",
                     st.policy_objective, st.entropy, st.value_loss, batch.items.size());
        st.applied = false;
        return st;
    }
    nn::sgd_step(policy, gp, lr);
    nn::sgd_step(value, gv, lr);
    st.applied = true;
    return st;
}

namespace {

LegResult run_drl_leg(const nn::MlpParams& policy, const sim::SimConfig& c,
                      const std::vector<uint8_t>& blob, const A2cConfig& cfg, uint32_t window,
                      std::mt19937_64& rng_eval) {
    sim::Environment env = sim::Environment::restore(c, blob);
    RewardTracker tracker(c, cfg.reward_window, cfg.alpha, cfg.beta, cfg.delta);
    sim::KpiWindow win(c.num_ues);
    double rsum = 0.0;
    for (uint32_t t = 0; t < window; ++t) {
        const DecideOutcome out = decide_multi_rbg(policy, env, cfg.greedy_eval, rng_eval);
        const sim::KpiRecord rec = env.step(out.decision);
        rsum += tracker.add(rec);
        win.add(rec);
    }
    LegResult res;
    res.leg.kpis = sim::compute_kpis(win, c.tti_duration);
    res.leg.mean_reward = rsum / window;
    res.exog_hash = env.exog_hash();
    return res;
}

LegResult run_pf_leg(const sim::SimConfig& c, const std::vector<uint8_t>& blob,
                     const A2cConfig& cfg, uint32_t window) {
    sim::Environment env = sim::Environment::restore(c, blob);
    sched::PfScheduler pf;
    RewardTracker tracker(c, cfg.reward_window, cfg.alpha, cfg.beta, cfg.delta);
    sim::KpiWindow win(c.num_ues);
    double rsum = 0.0;
    for (uint32_t t = 0; t < window; ++t) {
        const sim::KpiRecord rec = env.step(pf.decide(sched::make_observation(env)));
        rsum += tracker.add(rec);
        win.add(rec);
    }
    LegResult res;
    res.leg.kpis = sim::compute_kpis(win, c.tti_duration);
    res.leg.mean_reward = rsum / window;
    res.exog_hash = env.exog_hash();
    return res;
}

}  // namespace

EvalSummary evaluate(const nn::MlpParams& policy, const sim::SimConfig& base_cfg,
                     const A2cConfig& cfg, uint32_t num_seeds, uint32_t warmup, uint32_t window,
                     uint64_t master_seed, uint32_t override_rbgs) {
    if (num_seeds == 0) throw std::invalid_argument("evaluate: num_seeds must be positive");
    if (window == 0) throw std::invalid_argument("evaluate: window must be positive");
    EvalSummary sum;
    sum.seeds.reserve(num_seeds);
    for (uint32_t i = 0; i < num_seeds; ++i) {
        const sim::SimConfig c =
            sim::materialize_deployment(base_cfg, derive_seed(master_seed, "deploy", i),
                                   derive_seed(master_seed, "env", i), override_rbgs);
        sim::Environment env(c);
        sched::PfScheduler pf_warm;
        for (uint32_t t = 0; t < warmup; ++t)
            env.step(pf_warm.decide(sched::make_observation(env)));
        const std::vector<uint8_t> blob = env.snapshot();

        std::mt19937_64 rng_eval(derive_seed(master_seed, "eval-sample", i));
        const LegResult drl = run_drl_leg(policy, c, blob, cfg, window, rng_eval);
        const LegResult pf = run_pf_leg(c, blob, cfg, window);
        if (drl.exog_hash != pf.exog_hash)
            throw std::logic_error("evaluate: legs consumed different exogenous randomness");

        SeedEval se;
        se.seed_index = i;
        se.drl = drl.leg;
        se.pf = pf.leg;
        const double thp_ref = std::max(se.drl.kpis.thp, se.pf.kpis.thp);
        const moo::Weights w{cfg.alpha, cfg.beta, cfg.delta};
        se.weighted_drl = moo::weighted_score(se.drl.kpis, thp_ref, w);
        se.weighted_pf = moo::weighted_score(se.pf.kpis, thp_ref, w);
        sum.seeds.push_back(std::move(se));
    }
    const double inv = 1.0 / num_seeds;
    for (const SeedEval& se : sum.seeds) {
        sum.mean_drl_reward += inv * se.drl.mean_reward;
        sum.mean_pf_reward += inv * se.pf.mean_reward;
        sum.mean_weighted_drl += inv * se.weighted_drl;
        sum.mean_weighted_pf += inv * se.weighted_pf;
        sum.mean_drl.thp += inv * se.drl.kpis.thp;
        sum.mean_drl.jfi += inv * se.drl.kpis.jfi;
        sum.mean_drl.pdr += inv * se.drl.kpis.pdr;
        sum.mean_pf.thp += inv * se.pf.kpis.thp;
        sum.mean_pf.jfi += inv * se.pf.kpis.jfi;
        sum.mean_pf.pdr += inv * se.pf.kpis.pdr;
    }
    return sum;
}

TrainResult train(const sim::SimConfig& base_cfg, const A2cConfig& cfg) {
    cfg.validate();
    if (base_cfg.num_rbgs != 1)
        throw std::invalid_argument(
            "train: training runs on a single RBG; wider grids reuse the policy at evaluation");
    const uint32_t num_ues = base_cfg.num_ues;
    const auto in_dim = static_cast<Eigen::Index>(4 * num_ues);

    std::vector<uint32_t> pdims{4 * num_ues};
    pdims.insert(pdims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    pdims.push_back(num_ues);
    std::vector<uint32_t> vdims{4 * num_ues};
    vdims.insert(vdims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    vdims.push_back(1);

    std::mt19937_64 rng_p(derive_seed(cfg.rng_seed, "policy-init", 0));
    std::mt19937_64 rng_v(derive_seed(cfg.rng_seed, "value-init", 0));
    TrainResult res;
    res.policy = nn::mlp_init(pdims, rng_p);
    res.value = nn::mlp_init(vdims, rng_v);

    const uint32_t num_envs = cfg.num_envs;
    const uint32_t n = cfg.nstep;
    std::vector<sim::Environment> envs;
    std::vector<RewardTracker> trackers;
    envs.reserve(num_envs);
    trackers.reserve(num_envs);
    for (uint32_t e = 0; e < num_envs; ++e) {
        const sim::SimConfig c =
            sim::materialize_deployment(base_cfg, derive_seed(cfg.rng_seed, "train-deploy", e),
                                   derive_seed(cfg.rng_seed, "train-env", e), 0);
        envs.emplace_back(c);
        trackers.emplace_back(c, cfg.reward_window, cfg.alpha, cfg.beta, cfg.delta);
    }
    std::mt19937_64 rng_sample(derive_seed(cfg.rng_seed, "sample", 0));

    // Evaluation deployments are derived from a separate master seed, so the
    // policy is always scored on cells it never trained in.
    const bool do_evals = cfg.eval_seeds > 0 && cfg.eval_every > 0;
    const uint64_t eval_master = derive_seed(cfg.rng_seed, "eval", 0);
    double pf_ref = 0.0;
    auto run_eval = [&](uint64_t label) {
        EvalSummary s = evaluate(res.policy, base_cfg, cfg, cfg.eval_seeds, cfg.eval_warmup,
                                 cfg.eval_window, eval_master);
        pf_ref = s.mean_pf_reward;
        res.evals.emplace_back(label, std::move(s));
    };
    if (do_evals) run_eval(0);

    Eigen::MatrixXd x(in_dim, num_envs);
    Eigen::MatrixXd x_roll(in_dim, static_cast<Eigen::Index>(num_envs) * n);
    Eigen::MatrixXd x_boot(in_dim, num_envs);
    std::vector<std::vector<Experience>> roll(num_envs, std::vector<Experience>(n));

    for (uint64_t iter = 0; iter < cfg.iterations; ++iter) {
        // Synchronized rollout: one batched policy forward per sub-step.
        for (uint32_t j = 0; j < n; ++j) {
            std::vector<std::vector<uint8_t>> masks(num_envs);
            for (uint32_t e = 0; e < num_envs; ++e) {
                const TtiView view(envs[e]);
                masks[e] = view.active_mask();
                x.col(e) = build_obs(envs[e], view, 0);
            }
            const Eigen::MatrixXd z = nn::mlp_forward(res.policy, x);
            for (uint32_t e = 0; e < num_envs; ++e) {
                Experience& ex = roll[e][j];
                ex.obs = x.col(e);
                ex.mask = masks[e];
                ex.action = -1;
                sim::Decision d = sim::Decision::idle(1);
                if (std::any_of(masks[e].begin(), masks[e].end(), [](uint8_t m) { return m != 0; })) {
                    const Eigen::VectorXd pi = nn::masked_softmax(z.col(e), masks[e]);
                    ex.action = sample_categorical(pi, masks[e], rng_sample);
                    d = sim::Decision::single(1, ex.action);
                }
                ex.reward = trackers[e].add(envs[e].step(d));
                x_roll.col(static_cast<Eigen::Index>(e) * n + j) = ex.obs;
            }
        }
        for (uint32_t e = 0; e < num_envs; ++e) {
            const TtiView view(envs[e]);
            x_boot.col(e) = build_obs(envs[e], view, 0);
        }
        const Eigen::MatrixXd v_roll = nn::mlp_forward(res.value, x_roll);
        const Eigen::MatrixXd v_boot = nn::mlp_forward(res.value, x_boot);

        Batch batch;
        batch.items.reserve(static_cast<size_t>(num_envs) * n);
        double mean_reward = 0.0;
        for (uint32_t e = 0; e < num_envs; ++e) {
            // Shrinking-horizon targets: item j looks ahead to the shared
            // bootstrap state, so t_j = r_j + gamma * t_{j+1}, t_n = V(s_n).
            double t = v_boot(0, e);
            for (int32_t j = static_cast<int32_t>(n) - 1; j >= 0; --j) {
                Experience& ex = roll[e][j];
                t = ex.reward + cfg.gamma * t;
                ex.target = t;
                ex.advantage = t - v_roll(0, static_cast<Eigen::Index>(e) * n + j);
            }
            for (uint32_t j = 0; j < n; ++j) {
                mean_reward += roll[e][j].reward;
                batch.items.push_back(roll[e][j]);
            }
        }
        mean_reward /= static_cast<double>(num_envs) * n;

        const double lr =
            nn::lr_at(iter, cfg.lr, cfg.resolved_decay_point(), cfg.lr_decay_factor);
        a2c_update(res.policy, res.value, batch, cfg, lr);
        res.curve.push_back({iter, mean_reward, pf_ref});
        if (do_evals && ((iter + 1) % cfg.eval_every == 0 || iter + 1 == cfg.iterations))
            run_eval(iter + 1);
    }
    return res;
}

void save_checkpoint(const std::string& path, const nn::MlpParams& policy,
                     const nn::MlpParams& value, uint32_t num_ues) {
    BinWriter w;
    w.put_u8(kCheckpointMagic[0]);
    w.put_u8(kCheckpointMagic[1]);
    w.put_u8(kCheckpointMagic[2]);
    w.put_u8(kCheckpointMagic[3]);
    w.put_u32(kCheckpointVersion);
    w.put_u32(num_ues);
    nn::serialize_params(policy, w);
    nn::serialize_params(value, w);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    const std::vector<uint8_t>& bytes = w.bytes();
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    BinReader r(bytes);
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.get_u8());
    if (magic[0] != kCheckpointMagic[0] || magic[1] != kCheckpointMagic[1] ||
        magic[2] != kCheckpointMagic[2] || magic[3] != kCheckpointMagic[3])
        throw std::runtime_error("not a checkpoint file: " + path);
    if (r.get_u32() != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version in " + path);
    Checkpoint ck;
    ck.num_ues = r.get_u32();
    ck.policy = nn::deserialize_params(r);
    ck.value = nn::deserialize_params(r);
    if (!r.at_end()) throw std::runtime_error("trailing bytes in checkpoint: " + path);
    return ck;
}

}  // namespace schedlab::rl
