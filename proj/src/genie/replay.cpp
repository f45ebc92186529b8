#include "schedlab/genie/replay.hpp"

#include <stdexcept>
#include <string>

#include "schedlab/sched/observation.hpp"
#include "schedlab/sched/policies.hpp"

namespace schedlab::genie {

ReplayContext ReplayContext::from_env(const sim::Environment& env, uint32_t n_ttis) {
    ReplayContext ctx;
    ctx.cfg = env.config();
    ctx.init_blob = env.snapshot();
    ctx.trace = env.pregenerate(n_ttis);
    return ctx;
}

Objectives ReplayContext::replay(std::span<const int32_t> actions_1based) const {
    const uint32_t N = trace.num_ttis;
    const uint32_t B = trace.num_rbgs;
    if (actions_1based.size() != size_t(N) * B) {
        throw std::invalid_argument("replay: expected " + std::to_string(size_t(N) * B) +
                                    " actions, got " + std::to_string(actions_1based.size()));
    }
    sim::Environment env = make_env();
    sim::KpiWindow window(cfg.num_ues);
    for (uint32_t t = 0; t < N; ++t) {
        sim::Decision d = sim::Decision::idle(B);
        for (uint32_t b = 0; b < B; ++b) {
            const int32_t a = actions_1based[size_t(t) * B + b];
            if (a < 1 || static_cast<uint32_t>(a) > cfg.num_ues) {
                throw std::invalid_argument("replay: action " + std::to_string(a) +
                                            " outside 1.." + std::to_string(cfg.num_ues));
            }
            const auto ue = static_cast<uint32_t>(a - 1);
            if (env.active(ue)) d.rbg_to_ue[b] = static_cast<int32_t>(ue);
            // else: empty buffer, the gene replays as idle
        }
        window.add(env.step(d));
    }
    return sim::compute_kpis(window, cfg.tti_duration);
}

Objectives pf_replay(const ReplayContext& ctx) {
    sim::Environment env = ctx.make_env();
    sched::PfScheduler pf;
    sim::KpiWindow window(ctx.cfg.num_ues);
    for (uint32_t t = 0; t < ctx.trace.num_ttis; ++t)
        window.add(env.step(pf.decide(sched::make_observation(env))));
    return sim::compute_kpis(window, ctx.cfg.tti_duration);
}

}  // namespace schedlab::genie
