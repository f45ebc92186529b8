#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schedlab/harness/experiment.hpp"

namespace {

int do_run(const std::string& config_path, const std::string& mode_name,
           const schedlab::harness::RunOverrides& overrides) {
    const auto mode = schedlab::harness::parse_mode(mode_name);
    const auto cfg = schedlab::harness::load_config(config_path);
    schedlab::harness::run_experiment(cfg, mode, overrides);
    return 0;
}

int do_compare(const std::vector<std::string>& inputs, const std::vector<double>& weights,
               const std::string& out_csv) {
    schedlab::harness::CompareOptions opts;
    if (!weights.empty()) {
        if (weights.size() != 3)
            throw std::invalid_argument("--weights expects three values: alpha beta delta");
        opts.weights = {weights[0], weights[1], weights[2]};
    }
    std::string csv;
    const std::string table = schedlab::harness::run_compare(inputs, opts, &csv);
    std::cout << table;
    if (!out_csv.empty()) {
        std::ofstream f(out_csv, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for write: " + out_csv);
        f << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic TTI-level downlink scheduling laboratory"};
    app.require_subcommand(1);

    std::string config_path, mode_name, checkpoint, out_dir;
    uint32_t transfer_rbgs = 0;
    std::optional<uint64_t> seed;
    CLI::App* run = app.add_subcommand("run", "execute one experiment mode");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--mode", mode_name, "train|eval|genie-ga|genie-pla|baseline")->required();
    run->add_option("--checkpoint", checkpoint,
                    "weights file: input for eval, output path for train");
    run->add_option("--transfer-rbgs", transfer_rbgs, "eval on this many RBGs (transfer)");
    uint64_t seed_value = 0;
    CLI::Option* seed_opt = run->add_option("--seed", seed_value, "override run.master_seed");
    run->add_option("--out", out_dir, "override run.out_dir");

    std::vector<std::string> inputs;
    std::vector<double> weights;
    std::string compare_out;
    CLI::App* compare = app.add_subcommand("compare", "gain table over results.csv files");
    compare->add_option("inputs", inputs, "results.csv files")->required()->expected(-1);
    compare->add_option("--weights", weights, "alpha beta delta for the weighted score")
        ->expected(3);
    compare->add_option("--out", compare_out, "also write the table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            schedlab::harness::RunOverrides ov;
            ov.checkpoint = checkpoint;
            ov.transfer_rbgs = transfer_rbgs;
            ov.out_dir = out_dir;
            if (seed_opt->count() > 0) ov.master_seed = seed_value;
            return do_run(config_path, mode_name, ov);
        }
        return do_compare(inputs, weights, compare_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
