#include "schedlab/harness/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "schedlab/genie/replay.hpp"
#include "schedlab/sched/observation.hpp"
#include "schedlab/sched/policies.hpp"
#include "schedlab/util/csv.hpp"
#include "schedlab/util/rng.hpp"

namespace schedlab::harness {
namespace {

using nlohmann::json;

[[noreturn]] void cfg_fail(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

std::string join_path(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        cfg_fail("section \"" + (section.empty() ? std::string("<top>") : section) +
                 "\" must be an object");
    for (const auto& item : obj.items()) {
        const std::string& key = item.key();
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }))
            cfg_fail("unknown key \"" + join_path(section, key) + "\"");
    }
}

// Typed optional-field readers over one config section; absent keys keep the
// caller's default, wrong types fail with the dotted field path.
class Section {
public:
    Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {}

    void u32(const char* key, uint32_t& out) const {
        if (const json* f = find(key)) out = static_cast<uint32_t>(read_uint(*f, key));
    }
    void u64(const char* key, uint64_t& out) const {
        if (const json* f = find(key)) out = read_uint(*f, key);
    }
    void f64(const char* key, double& out) const {
        if (const json* f = find(key)) {
            if (!f->is_number()) fail(key, "must be a number");
            out = f->get<double>();
        }
    }
    void boolean(const char* key, bool& out) const {
        if (const json* f = find(key)) {
            if (!f->is_boolean()) fail(key, "must be a boolean");
            out = f->get<bool>();
        }
    }
    void str(const char* key, std::string& out) const {
        if (const json* f = find(key)) {
            if (!f->is_string()) fail(key, "must be a string");
            out = f->get<std::string>();
        }
    }
    void f64_vec(const char* key, std::vector<double>& out) const {
        if (const json* f = find(key)) {
            if (!f->is_array()) fail(key, "must be an array of numbers");
            out.clear();
            for (const json& v : *f) {
                if (!v.is_number()) fail(key, "must be an array of numbers");
                out.push_back(v.get<double>());
            }
        }
    }
    void u32_vec(const char* key, std::vector<uint32_t>& out) const {
        if (const json* f = find(key)) {
            if (!f->is_array()) fail(key, "must be an array of non-negative integers");
            out.clear();
            for (const json& v : *f) out.push_back(static_cast<uint32_t>(read_uint(v, key)));
        }
    }
    void mcs(const char* key, std::vector<sim::McsEntry>& out) const {
        if (const json* f = find(key)) {
            if (!f->is_array()) fail(key, "must be an array of [min_snr_db, spectral_efficiency]");
            out.clear();
            for (const json& v : *f) {
                if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                    fail(key, "must be an array of [min_snr_db, spectral_efficiency]");
                out.push_back({v[0].get<double>(), v[1].get<double>()});
            }
        }
    }

private:
    const json* find(const char* key) const {
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }
    [[noreturn]] void fail(const char* key, const char* what) const {
        cfg_fail("\"" + join_path(name_, key) + "\" " + what);
    }
    uint64_t read_uint(const json& f, const char* key) const {
        if (f.is_number_unsigned()) return f.get<uint64_t>();
        if (f.is_number_integer()) {
            const int64_t v = f.get<int64_t>();
            if (v < 0) fail(key, "must be a non-negative integer");
            return static_cast<uint64_t>(v);
        }
        fail(key, "must be a non-negative integer");
    }

    const json& obj_;
    std::string name_;
};

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

const char* section_name(SolverSection s) {
    switch (s) {
        case SolverSection::kScheduler: return "scheduler";
        case SolverSection::kA2c: return "a2c";
        case SolverSection::kGa: return "ga";
        case SolverSection::kPla: return "pla";
    }
    return "?";
}

}  // namespace

Mode parse_mode(const std::string& name) {
    if (name == "train") return Mode::kTrain;
    if (name == "eval") return Mode::kEval;
    if (name == "genie-ga") return Mode::kGenieGa;
    if (name == "genie-pla") return Mode::kGeniePla;
    if (name == "baseline") return Mode::kBaseline;
    throw std::invalid_argument("unknown mode \"" + name +
                                "\" (expected train|eval|genie-ga|genie-pla|baseline)");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::kTrain: return "train";
        case Mode::kEval: return "eval";
        case Mode::kGenieGa: return "genie-ga";
        case Mode::kGeniePla: return "genie-pla";
        case Mode::kBaseline: return "baseline";
    }
    return "?";
}

ExperimentConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        cfg_fail(std::string("not valid JSON: ") + e.what());
    }
    check_keys(root, "", {"sim", "run", "scheduler", "a2c", "ga", "pla"});

    ExperimentConfig cfg;

    if (auto it = root.find("sim"); it != root.end()) {
        check_keys(*it, "sim",
                   {"num_ues", "num_rbgs", "arrival_rate", "packet_size", "buffer_capacity",
                    "max_delay", "target_bler", "olla_step_up", "olla_step_down",
                    "ema_time_constant", "tti_duration", "mcs_table", "rbg_symbols",
                    "mean_snr_per_ue", "deploy_snr_min", "deploy_snr_max", "doppler_block_len",
                    "bler_slope"});
        Section s(*it, "sim");
        s.u32("num_ues", cfg.sim.num_ues);
        s.u32("num_rbgs", cfg.sim.num_rbgs);
        s.f64("arrival_rate", cfg.sim.arrival_rate);
        s.u64("packet_size", cfg.sim.packet_size);
        s.u32("buffer_capacity", cfg.sim.buffer_capacity);
        s.u32("max_delay", cfg.sim.max_delay);
        s.f64("target_bler", cfg.sim.target_bler);
        s.f64("olla_step_up", cfg.sim.olla_step_up);
        s.f64("olla_step_down", cfg.sim.olla_step_down);
        s.f64("ema_time_constant", cfg.sim.ema_time_constant);
        s.f64("tti_duration", cfg.sim.tti_duration);
        s.mcs("mcs_table", cfg.sim.mcs_table);
        s.u32("rbg_symbols", cfg.sim.rbg_symbols);
        s.f64_vec("mean_snr_per_ue", cfg.sim.mean_snr_per_ue);
        s.f64("deploy_snr_min", cfg.sim.deploy_snr_min);
        s.f64("deploy_snr_max", cfg.sim.deploy_snr_max);
        s.u32("doppler_block_len", cfg.sim.doppler_block_len);
        s.f64("bler_slope", cfg.sim.bler_slope);
    }

    if (auto it = root.find("run"); it != root.end()) {
        check_keys(*it, "run", {"master_seed", "num_deployments", "window", "warmup", "out_dir"});
        Section s(*it, "run");
        s.u64("master_seed", cfg.run.master_seed);
        s.u32("num_deployments", cfg.run.num_deployments);
        s.u32("window", cfg.run.window);
        s.u32("warmup", cfg.run.warmup);
        s.str("out_dir", cfg.run.out_dir);
    }
    if (cfg.run.num_deployments == 0) cfg_fail("\"run.num_deployments\" must be positive");
    if (cfg.run.window == 0) cfg_fail("\"run.window\" must be positive");

    int solver_count = 0;
    if (auto it = root.find("scheduler"); it != root.end()) {
        check_keys(*it, "scheduler", {"name"});
        Section s(*it, "scheduler");
        s.str("name", cfg.scheduler_name);
        cfg.solver = SolverSection::kScheduler;
        ++solver_count;
    }
    if (auto it = root.find("a2c"); it != root.end()) {
        check_keys(*it, "a2c",
                   {"gamma", "nstep", "alpha", "beta", "delta", "lambda_e", "lambda_v",
                    "num_envs", "iterations", "lr", "lr_decay_point", "lr_decay_factor",
                    "hidden_dims", "reward_window", "eval_every", "eval_seeds", "eval_warmup",
                    "eval_window", "greedy_eval"});
        Section s(*it, "a2c");
        s.f64("gamma", cfg.a2c.gamma);
        s.u32("nstep", cfg.a2c.nstep);
        s.f64("alpha", cfg.a2c.alpha);
        s.f64("beta", cfg.a2c.beta);
        s.f64("delta", cfg.a2c.delta);
        s.f64("lambda_e", cfg.a2c.lambda_e);
        s.f64("lambda_v", cfg.a2c.lambda_v);
        s.u32("num_envs", cfg.a2c.num_envs);
        s.u32("iterations", cfg.a2c.iterations);
        s.f64("lr", cfg.a2c.lr);
        s.u64("lr_decay_point", cfg.a2c.lr_decay_point);
        s.f64("lr_decay_factor", cfg.a2c.lr_decay_factor);
        s.u32_vec("hidden_dims", cfg.a2c.hidden_dims);
        s.u32("reward_window", cfg.a2c.reward_window);
        s.u32("eval_every", cfg.a2c.eval_every);
        s.u32("eval_seeds", cfg.a2c.eval_seeds);
        s.u32("eval_warmup", cfg.a2c.eval_warmup);
        s.u32("eval_window", cfg.a2c.eval_window);
        s.boolean("greedy_eval", cfg.a2c.greedy_eval);
        cfg.solver = SolverSection::kA2c;
        ++solver_count;
    }
    if (auto it = root.find("ga"); it != root.end()) {
        check_keys(*it, "ga",
                   {"population", "generations", "p_c", "p_m", "eta_c", "eta_m", "alpha", "beta",
                    "delta"});
        Section s(*it, "ga");
        s.u32("population", cfg.ga.population);
        s.u32("generations", cfg.ga.generations);
        s.f64("p_c", cfg.ga.p_c);
        s.f64("p_m", cfg.ga.p_m);
        s.f64("eta_c", cfg.ga.eta_c);
        s.f64("eta_m", cfg.ga.eta_m);
        s.f64("alpha", cfg.ga_weights.alpha);
        s.f64("beta", cfg.ga_weights.beta);
        s.f64("delta", cfg.ga_weights.delta);
        cfg.solver = SolverSection::kGa;
        ++solver_count;
    }
    if (auto it = root.find("pla"); it != root.end()) {
        check_keys(*it, "pla", {"list_size", "horizon", "alpha", "beta", "delta"});
        Section s(*it, "pla");
        s.u32("list_size", cfg.pla.list_size);
        s.u32("horizon", cfg.pla.horizon);
        s.f64("alpha", cfg.pla.weights.alpha);
        s.f64("beta", cfg.pla.weights.beta);
        s.f64("delta", cfg.pla.weights.delta);
        cfg.solver = SolverSection::kPla;
        ++solver_count;
    }
    if (solver_count != 1)
        cfg_fail("exactly one solver section (scheduler | a2c | ga | pla) required, found " +
                 std::to_string(solver_count));

    cfg.sim.validate();
    switch (cfg.solver) {
        case SolverSection::kScheduler:
            sched::make_scheduler(cfg.scheduler_name);  // rejects unknown names
            break;
        case SolverSection::kA2c: cfg.a2c.validate(); break;
        case SolverSection::kGa: cfg.ga.validate(); break;
        case SolverSection::kPla: cfg.pla.validate(); break;
    }

    cfg.canonical_json = root.dump(2);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

struct Deployment {
    uint32_t index = 0;
    uint64_t deploy_seed = 0, env_seed = 0;
    sim::SimConfig cfg;
};

// Same tags rl::evaluate derives internally, so eval-mode rows, baseline rows,
// and genie windows for one master seed all land on identical deployments.
std::vector<Deployment> fan_out(const ExperimentConfig& cfg, uint32_t override_rbgs) {
    std::vector<Deployment> out;
    out.reserve(cfg.run.num_deployments);
    for (uint32_t i = 0; i < cfg.run.num_deployments; ++i) {
        Deployment d;
        d.index = i;
        d.deploy_seed = derive_seed(cfg.run.master_seed, "deploy", i);
        d.env_seed = derive_seed(cfg.run.master_seed, "env", i);
        d.cfg = sim::materialize_deployment(cfg.sim, d.deploy_seed, d.env_seed, override_rbgs);
        out.push_back(std::move(d));
    }
    return out;
}

struct ResultRow {
    std::string method;
    std::string seed;  // deployment index, or "mean"
    Objectives obj;
};

// One mean row per method, in first-appearance order.
void append_mean_rows(std::vector<ResultRow>& rows) {
    std::vector<std::string> order;
    std::map<std::string, std::pair<Objectives, uint32_t>> acc;
    for (const ResultRow& r : rows) {
        auto [it, fresh] = acc.try_emplace(r.method);
        if (fresh) order.push_back(r.method);
        it->second.first.thp += r.obj.thp;
        it->second.first.jfi += r.obj.jfi;
        it->second.first.pdr += r.obj.pdr;
        it->second.second += 1;
    }
    for (const std::string& m : order) {
        const auto& [sum, n] = acc[m];
        rows.push_back({m, "mean", {sum.thp / n, sum.jfi / n, sum.pdr / n}});
    }
}

void write_results_csv(const std::string& path, uint64_t config_hash, Mode mode,
                       const std::vector<ResultRow>& rows) {
    CsvDoc doc;
    doc.comments = {"schema: results v1", "mode: " + mode_name(mode),
                    "config_hash: " + hex64(config_hash)};
    doc.header = {"method", "seed", "thp", "jfi", "pdr"};
    for (const ResultRow& r : rows)
        doc.rows.push_back(
            {r.method, r.seed, csv_double(r.obj.thp), csv_double(r.obj.jfi), csv_double(r.obj.pdr)});
    write_csv(path, doc);
}

std::string out_path(const ExperimentConfig& cfg, const char* file) {
    return (std::filesystem::path(cfg.run.out_dir) / file).string();
}

void write_manifest(const ExperimentConfig& cfg, Mode mode, const RunOverrides& ov,
                    const json& deployments, const std::vector<std::string>& artifacts) {
    json m;
    m["code_version"] = kCodeVersion;
    m["mode"] = mode_name(mode);
    m["master_seed"] = cfg.run.master_seed;
    m["config"] = json::parse(cfg.canonical_json);
    m["config_hash"] = hex64(cfg.sim.hash());
    json ovj = json::object();
    if (!ov.checkpoint.empty()) ovj["checkpoint"] = ov.checkpoint;
    if (ov.transfer_rbgs > 0) ovj["transfer_rbgs"] = ov.transfer_rbgs;
    if (ov.master_seed) ovj["seed"] = *ov.master_seed;
    if (!ov.out_dir.empty()) ovj["out"] = ov.out_dir;
    m["overrides"] = ovj;
    m["deployments"] = deployments;
    m["artifacts"] = artifacts;
    std::ofstream f(out_path(cfg, "manifest.json"), std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + out_path(cfg, "manifest.json"));
    f << m.dump(2) << "\n";
}

json deployments_json(const std::vector<Deployment>& deps) {
    json arr = json::array();
    for (const Deployment& d : deps) {
        arr.push_back({{"index", d.index},
                       {"deploy_seed", d.deploy_seed},
                       {"env_seed", d.env_seed},
                       {"mean_snr_per_ue", d.cfg.mean_snr_per_ue}});
    }
    return arr;
}

void run_baseline(const ExperimentConfig& cfg, const RunOverrides& ov) {
    const std::vector<Deployment> deps = fan_out(cfg, 0);
    std::vector<ResultRow> rows;
    for (const Deployment& d : deps) {
        auto scheduler = sched::make_scheduler(cfg.scheduler_name,
                                               derive_seed(cfg.run.master_seed, "sched", d.index));
        sim::Environment env(d.cfg);
        for (uint32_t t = 0; t < cfg.run.warmup; ++t)
            env.step(scheduler->decide(sched::make_observation(env)));
        sim::KpiWindow win(d.cfg.num_ues);
        for (uint32_t t = 0; t < cfg.run.window; ++t)
            win.add(env.step(scheduler->decide(sched::make_observation(env))));
        rows.push_back(
            {cfg.scheduler_name, std::to_string(d.index), sim::compute_kpis(win, d.cfg.tti_duration)});
    }
    append_mean_rows(rows);
    write_results_csv(out_path(cfg, "results.csv"), cfg.sim.hash(), Mode::kBaseline, rows);
    write_manifest(cfg, Mode::kBaseline, ov, deployments_json(deps), {"results.csv"});
}

void check_checkpoint_shape(const rl::Checkpoint& ck, const sim::SimConfig& sim_cfg) {
    if (ck.num_ues != sim_cfg.num_ues)
        throw std::invalid_argument("checkpoint trained for num_ues=" +
                                    std::to_string(ck.num_ues) + ", config has num_ues=" +
                                    std::to_string(sim_cfg.num_ues));
    if (ck.policy.dims.front() != 4 * sim_cfg.num_ues || ck.policy.dims.back() != sim_cfg.num_ues)
        throw std::invalid_argument("checkpoint network shape does not match num_ues");
}

std::vector<ResultRow> summary_rows(const rl::EvalSummary& summary) {
    std::vector<ResultRow> rows;
    for (const rl::SeedEval& se : summary.seeds)
        rows.push_back({"drl", std::to_string(se.seed_index), se.drl.kpis});
    for (const rl::SeedEval& se : summary.seeds)
        rows.push_back({"pf", std::to_string(se.seed_index), se.pf.kpis});
    append_mean_rows(rows);
    return rows;
}

void write_eval_detail(const std::string& path, uint64_t config_hash,
                       const rl::EvalSummary& summary) {
    CsvDoc doc;
    doc.comments = {"schema: eval-detail v1", "config_hash: " + hex64(config_hash)};
    doc.header = {"seed", "drl_reward", "pf_reward", "weighted_drl", "weighted_pf"};
    for (const rl::SeedEval& se : summary.seeds)
        doc.rows.push_back({std::to_string(se.seed_index), csv_double(se.drl.mean_reward),
                            csv_double(se.pf.mean_reward), csv_double(se.weighted_drl),
                            csv_double(se.weighted_pf)});
    doc.rows.push_back({"mean", csv_double(summary.mean_drl_reward),
                        csv_double(summary.mean_pf_reward), csv_double(summary.mean_weighted_drl),
                        csv_double(summary.mean_weighted_pf)});
    write_csv(path, doc);
}

void run_eval(const ExperimentConfig& cfg, const RunOverrides& ov) {
    if (ov.checkpoint.empty())
        throw std::invalid_argument("eval mode requires --checkpoint <path>");
    const rl::Checkpoint ck = rl::load_checkpoint(ov.checkpoint);
    check_checkpoint_shape(ck, cfg.sim);
    const rl::EvalSummary summary =
        rl::evaluate(ck.policy, cfg.sim, cfg.a2c, cfg.run.num_deployments, cfg.run.warmup,
                     cfg.run.window, cfg.run.master_seed, ov.transfer_rbgs);
    // The embedded hash reflects the grid the run actually used, so a transfer
    // run never compares as if it were the training-width config.
    sim::SimConfig hash_basis = cfg.sim;
    if (ov.transfer_rbgs > 0) hash_basis.num_rbgs = ov.transfer_rbgs;
    write_results_csv(out_path(cfg, "results.csv"), hash_basis.hash(), Mode::kEval,
                      summary_rows(summary));
    write_eval_detail(out_path(cfg, "eval_detail.csv"), hash_basis.hash(), summary);
    write_manifest(cfg, Mode::kEval, ov, deployments_json(fan_out(cfg, ov.transfer_rbgs)),
                   {"results.csv", "eval_detail.csv"});
}

void run_train(const ExperimentConfig& cfg, const RunOverrides& ov) {
    rl::A2cConfig a2c = cfg.a2c;
    a2c.rng_seed = cfg.run.master_seed;
    const rl::TrainResult tr = rl::train(cfg.sim, a2c);
    const std::string ck_path =
        ov.checkpoint.empty() ? out_path(cfg, "checkpoint.bin") : ov.checkpoint;
    rl::save_checkpoint(ck_path, tr.policy, tr.value, cfg.sim.num_ues);

    const uint64_t h = cfg.sim.hash();
    {
        CsvDoc doc;
        doc.comments = {"schema: learning-curve v1", "config_hash: " + hex64(h)};
        doc.header = {"iteration", "mean_reward", "pf_ref"};
        for (const rl::LearningPoint& p : tr.curve)
            doc.rows.push_back(
                {csv_u64(p.iteration), csv_double(p.mean_reward), csv_double(p.pf_ref)});
        write_csv(out_path(cfg, "learning_curve.csv"), doc);
    }
    {
        CsvDoc doc;
        doc.comments = {"schema: train-evals v1", "config_hash: " + hex64(h)};
        doc.header = {"iteration", "drl_reward", "pf_reward", "weighted_drl", "weighted_pf",
                      "drl_thp", "drl_jfi", "drl_pdr", "pf_thp", "pf_jfi", "pf_pdr"};
        for (const auto& [iter, s] : tr.evals)
            doc.rows.push_back({csv_u64(iter), csv_double(s.mean_drl_reward),
                                csv_double(s.mean_pf_reward), csv_double(s.mean_weighted_drl),
                                csv_double(s.mean_weighted_pf), csv_double(s.mean_drl.thp),
                                csv_double(s.mean_drl.jfi), csv_double(s.mean_drl.pdr),
                                csv_double(s.mean_pf.thp), csv_double(s.mean_pf.jfi),
                                csv_double(s.mean_pf.pdr)});
        write_csv(out_path(cfg, "evals.csv"), doc);
    }
    // Final scoring on deployments neither trained in nor used by the
    // in-training evals.
    const rl::EvalSummary fin =
        rl::evaluate(tr.policy, cfg.sim, a2c, cfg.run.num_deployments, cfg.run.warmup,
                     cfg.run.window, derive_seed(cfg.run.master_seed, "final-eval", 0));
    write_results_csv(out_path(cfg, "results.csv"), h, Mode::kTrain, summary_rows(fin));

    json deps = json::array();
    for (uint32_t e = 0; e < a2c.num_envs; ++e) {
        const sim::SimConfig c = sim::materialize_deployment(
            cfg.sim, derive_seed(a2c.rng_seed, "train-deploy", e),
            derive_seed(a2c.rng_seed, "train-env", e), 0);
        deps.push_back({{"index", e},
                        {"deploy_seed", derive_seed(a2c.rng_seed, "train-deploy", e)},
                        {"env_seed", derive_seed(a2c.rng_seed, "train-env", e)},
                        {"mean_snr_per_ue", c.mean_snr_per_ue}});
    }
    write_manifest(cfg, Mode::kTrain, ov, deps,
                   {"results.csv", "learning_curve.csv", "evals.csv", "checkpoint.bin"});
}

// PF warmup, then a pregenerated window the searches and the PF reference
// replay share verbatim.
genie::ReplayContext make_window(const Deployment& d, const ExperimentConfig& cfg) {
    sim::Environment env(d.cfg);
    sched::PfScheduler pf;
    for (uint32_t t = 0; t < cfg.run.warmup; ++t)
        env.step(pf.decide(sched::make_observation(env)));
    return genie::ReplayContext::from_env(env, cfg.run.window);
}

void run_genie_ga(const ExperimentConfig& cfg, const RunOverrides& ov) {
    const std::vector<Deployment> deps = fan_out(cfg, 0);
    std::vector<ResultRow> rows;
    CsvDoc front_doc, hv_doc;
    const uint64_t h = cfg.sim.hash();
    front_doc.comments = {"schema: front v1", "mode: genie-ga", "config_hash: " + hex64(h)};
    front_doc.header = {"deployment", "member", "thp", "jfi", "pdr", "weighted", "selected"};
    hv_doc.comments = {"schema: hypervolume v1", "config_hash: " + hex64(h)};
    hv_doc.header = {"deployment", "generation", "hypervolume"};

    for (const Deployment& d : deps) {
        const genie::ReplayContext ctx = make_window(d, cfg);
        ga::GaConfig g = cfg.ga;
        g.rng_seed = derive_seed(cfg.run.master_seed, "ga", d.index);
        const ga::GaResult res = ga::nsga2_run(ctx, g);
        const ga::EvaluatedGenome& best = ga::select_final(res.front, cfg.ga_weights);
        const size_t best_idx = static_cast<size_t>(&best - res.front.data());

        double thp_ref = 0.0;
        for (const ga::EvaluatedGenome& m : res.front) thp_ref = std::max(thp_ref, m.obj.thp);
        for (size_t m = 0; m < res.front.size(); ++m) {
            const Objectives& o = res.front[m].obj;
            front_doc.rows.push_back({std::to_string(d.index), std::to_string(m),
                                      csv_double(o.thp), csv_double(o.jfi), csv_double(o.pdr),
                                      csv_double(moo::weighted_score(o, thp_ref, cfg.ga_weights)),
                                      m == best_idx ? "1" : "0"});
        }
        for (size_t gen = 0; gen < res.hypervolume_history.size(); ++gen)
            hv_doc.rows.push_back({std::to_string(d.index), std::to_string(gen),
                                   csv_double(res.hypervolume_history[gen])});
        rows.push_back({"ga", std::to_string(d.index), best.obj});
        rows.push_back({"pf", std::to_string(d.index), genie::pf_replay(ctx)});
    }
    append_mean_rows(rows);
    write_results_csv(out_path(cfg, "results.csv"), h, Mode::kGenieGa, rows);
    write_csv(out_path(cfg, "front.csv"), front_doc);
    write_csv(out_path(cfg, "hv.csv"), hv_doc);
    write_manifest(cfg, Mode::kGenieGa, ov, deployments_json(deps),
                   {"results.csv", "front.csv", "hv.csv"});
}

void run_genie_pla(const ExperimentConfig& cfg, const RunOverrides& ov) {
    const std::vector<Deployment> deps = fan_out(cfg, 0);
    std::vector<ResultRow> rows;
    CsvDoc front_doc;
    const uint64_t h = cfg.sim.hash();
    front_doc.comments = {"schema: front v1", "mode: genie-pla", "config_hash: " + hex64(h)};
    front_doc.header = {"deployment", "member", "thp", "jfi", "pdr", "weighted", "selected"};

    for (const Deployment& d : deps) {
        const genie::ReplayContext ctx = make_window(d, cfg);
        const pla::PlaResult res = pla::pla_run(ctx, cfg.pla);

        double thp_ref = 0.0;
        for (const pla::SearchPath& p : res.final_list) thp_ref = std::max(thp_ref, p.obj.thp);
        for (size_t m = 0; m < res.final_list.size(); ++m) {
            const Objectives& o = res.final_list[m].obj;
            front_doc.rows.push_back(
                {std::to_string(d.index), std::to_string(m), csv_double(o.thp),
                 csv_double(o.jfi), csv_double(o.pdr),
                 csv_double(moo::weighted_score(o, thp_ref, cfg.pla.weights)),
                 m == res.selected ? "1" : "0"});
        }
        rows.push_back({"pla", std::to_string(d.index), res.final_list[res.selected].obj});
        rows.push_back({"pf", std::to_string(d.index), genie::pf_replay(ctx)});
    }
    append_mean_rows(rows);
    write_results_csv(out_path(cfg, "results.csv"), h, Mode::kGeniePla, rows);
    write_csv(out_path(cfg, "front.csv"), front_doc);
    write_manifest(cfg, Mode::kGeniePla, ov, deployments_json(deps), {"results.csv", "front.csv"});
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg0, Mode mode, const RunOverrides& overrides) {
    ExperimentConfig cfg = cfg0;
    if (overrides.master_seed) cfg.run.master_seed = *overrides.master_seed;
    if (!overrides.out_dir.empty()) cfg.run.out_dir = overrides.out_dir;

    const SolverSection need = mode == Mode::kBaseline ? SolverSection::kScheduler
                               : mode == Mode::kGenieGa ? SolverSection::kGa
                               : mode == Mode::kGeniePla ? SolverSection::kPla
                                                         : SolverSection::kA2c;
    if (cfg.solver != need)
        throw std::invalid_argument("config: mode \"" + mode_name(mode) + "\" requires the \"" +
                                    section_name(need) + "\" section (config carries \"" +
                                    section_name(cfg.solver) + "\")");
    if (overrides.transfer_rbgs > 0 && mode != Mode::kEval)
        throw std::invalid_argument("--transfer-rbgs only applies to eval mode");

    std::filesystem::create_directories(cfg.run.out_dir);
    switch (mode) {
        case Mode::kBaseline: run_baseline(cfg, overrides); break;
        case Mode::kEval: run_eval(cfg, overrides); break;
        case Mode::kTrain: run_train(cfg, overrides); break;
        case Mode::kGenieGa: run_genie_ga(cfg, overrides); break;
        case Mode::kGeniePla: run_genie_pla(cfg, overrides); break;
    }
}

namespace {

double parse_cell(const std::string& cell, const std::string& path) {
    try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("compare: bad numeric cell \"" + cell + "\" in " + path);
    }
}

double ratio(double x, double ref) {
    if (ref != 0.0) return x / ref;
    return x == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string run_compare(const std::vector<std::string>& csv_paths, const CompareOptions& opts,
                        std::string* csv_out) {
    if (csv_paths.empty()) throw std::invalid_argument("compare: no input files");

    std::string hash_seen, hash_owner;
    std::vector<std::string> order;
    std::map<std::string, std::pair<Objectives, uint32_t>> acc;
    for (const std::string& path : csv_paths) {
        const CsvDoc doc = read_csv(path);
        std::string h;
        for (const std::string& c : doc.comments)
            if (c.rfind("config_hash: ", 0) == 0) h = c.substr(13);
        if (h.empty())
            throw std::invalid_argument("compare: " + path + " carries no config_hash comment");
        if (hash_seen.empty()) {
            hash_seen = h;
            hash_owner = path;
        } else if (h != hash_seen) {
            throw std::invalid_argument("compare: sim config hash mismatch: " + hash_owner +
                                        " has " + hash_seen + ", " + path + " has " + h);
        }
        const std::vector<std::string> expect{"method", "seed", "thp", "jfi", "pdr"};
        if (doc.header != expect)
            throw std::invalid_argument("compare: " + path + " is not a results.csv");
        for (const auto& row : doc.rows) {
            if (row.size() != expect.size())
                throw std::invalid_argument("compare: ragged row in " + path);
            if (row[1] == "mean") continue;  // recomputed from the seed rows
            auto [it, fresh] = acc.try_emplace(row[0]);
            if (fresh) order.push_back(row[0]);
            it->second.first.thp += parse_cell(row[2], path);
            it->second.first.jfi += parse_cell(row[3], path);
            it->second.first.pdr += parse_cell(row[4], path);
            it->second.second += 1;
        }
    }
    if (!acc.count("pf"))
        throw std::invalid_argument("compare: no \"pf\" rows among inputs to serve as reference");

    std::map<std::string, Objectives> mean;
    double thp_ref = 0.0;
    for (const auto& [m, s] : acc) {
        mean[m] = Objectives{s.first.thp / s.second, s.first.jfi / s.second,
                             s.first.pdr / s.second};
        thp_ref = std::max(thp_ref, mean[m].thp);
    }
    const Objectives& pf = mean["pf"];
    const double pf_weighted = moo::weighted_score(pf, thp_ref, opts.weights);

    CsvDoc doc;
    doc.comments = {"schema: compare v1", "config_hash: " + hash_seen};
    doc.header = {"method", "thp",       "jfi",       "pdr",       "weighted",
                  "thp_ratio", "jfi_ratio", "pdr_ratio", "weighted_ratio"};
    std::ostringstream table;
    table << std::left << std::setw(10) << "method";
    for (size_t i = 1; i < doc.header.size(); ++i)
        table << std::right << std::setw(15) << doc.header[i];
    table << "\n";
    for (const std::string& m : order) {
        const Objectives& o = mean[m];
        const double w = moo::weighted_score(o, thp_ref, opts.weights);
        const double cells[8] = {o.thp,
                                 o.jfi,
                                 o.pdr,
                                 w,
                                 ratio(o.thp, pf.thp),
                                 ratio(o.jfi, pf.jfi),
                                 ratio(o.pdr, pf.pdr),
                                 ratio(w, pf_weighted)};
        std::vector<std::string> row{m};
        table << std::left << std::setw(10) << m;
        for (double c : cells) {
            row.push_back(csv_double(c));
            table << std::right << std::setw(15) << std::setprecision(6) << c;
        }
        doc.rows.push_back(std::move(row));
        table << "\n";
    }
    if (csv_out) *csv_out = csv_to_string(doc);
    return table.str();
}

}  // namespace schedlab::harness
