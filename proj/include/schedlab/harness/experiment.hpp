#ifndef SCHEDLAB_HARNESS_EXPERIMENT_HPP
#define SCHEDLAB_HARNESS_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schedlab/ga/nsga2.hpp"
#include "schedlab/moo/pareto.hpp"
#include "schedlab/pla/pla.hpp"
#include "schedlab/rl/a2c.hpp"
#include "schedlab/sim/config.hpp"

namespace schedlab::harness {

inline constexpr const char* kCodeVersion = "schedlab 1.0.0";

enum class Mode { kTrain, kEval, kGenieGa, kGeniePla, kBaseline };

// "train" | "eval" | "genie-ga" | "genie-pla" | "baseline"; throws otherwise.
Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

// Which solver section the config file carries; exactly one must be present.
enum class SolverSection { kScheduler, kA2c, kGa, kPla };

struct RunSection {
    uint64_t master_seed = 1;
    uint32_t num_deployments = 3;  // seed fan-out width
    uint32_t window = 500;         // measured TTIs per deployment
    uint32_t warmup = 200;         // TTIs before the measured window
    std::string out_dir = "results";
};

// Parsed experiment file: the simulation config plus exactly one solver
// section. Every seed anywhere in a run derives from run.master_seed; the
// file exposes no other seed field.
struct ExperimentConfig {
    sim::SimConfig sim;
    RunSection run;
    SolverSection solver = SolverSection::kScheduler;
    std::string scheduler_name = "pf";  // [scheduler]
    rl::A2cConfig a2c;                  // [a2c]
    ga::GaConfig ga;                    // [ga]
    moo::Weights ga_weights;            // final-member selection for the GA front
    pla::PlaConfig pla;                 // [pla]
    std::string canonical_json;         // sorted-key echo for the manifest
};

// Strict parse: unknown keys anywhere are errors, as are type mismatches and
// values the component validators reject. Messages name the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct RunOverrides {
    std::optional<uint64_t> master_seed;  // --seed
    std::string out_dir;                  // --out
    std::string checkpoint;               // eval: input (required); train: output path
    uint32_t transfer_rbgs = 0;           // eval only
};

// Executes one mode end to end and writes its artifacts (results.csv,
// manifest.json, and the mode's extras) under the effective output directory.
// Throws on any error; the CLI turns that into a nonzero exit.
void run_experiment(const ExperimentConfig& cfg, Mode mode, const RunOverrides& overrides);

// Combined gain table over results.csv files that share a sim config hash.
// Ratios are against the pooled "pf" rows, which must be present. Returns the
// rendered text table; fills `csv_out` (if non-null) with the same table.
struct CompareOptions {
    moo::Weights weights;
};
std::string run_compare(const std::vector<std::string>& csv_paths, const CompareOptions& opts,
                        std::string* csv_out);

}  // namespace schedlab::harness

#endif
