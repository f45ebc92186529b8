#ifndef SCHEDLAB_NN_MLP_HPP
#define SCHEDLAB_NN_MLP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "schedlab/util/binio.hpp"

namespace schedlab::nn {

// Dense ReLU stack with a linear head. Columns are samples throughout; the
// softmax for policy heads is applied outside via masked_softmax. 64-bit
// floats everywhere, ReLU subgradient at 0 is 0.
struct MlpParams {
    std::vector<uint32_t> dims;      // {input, hidden..., output}
    std::vector<Eigen::MatrixXd> W;  // W[l] is dims[l+1] x dims[l]
    std::vector<Eigen::VectorXd> b;  // b[l] is dims[l+1]

    size_t num_layers() const { return W.size(); }
    size_t param_count() const;

    // Flat view over every weight then every bias, layer by layer; used by the
    // finite-difference checker.
    double get_flat(size_t i) const;
    void set_flat(size_t i, double v);
};

// He-uniform weights (limit sqrt(6/fan_in), variance 2/fan_in), zero biases.
MlpParams mlp_init(const std::vector<uint32_t>& dims, std::mt19937_64& rng);

struct ForwardCache {
    std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[l+1] = layer l output
};

// Returns the head pre-activation (out x batch). Hidden layers apply ReLU.
Eigen::MatrixXd mlp_forward(const MlpParams& p, const Eigen::MatrixXd& x,
                            ForwardCache* cache = nullptr);

struct MlpGrads {
    std::vector<Eigen::MatrixXd> dW;
    std::vector<Eigen::VectorXd> db;

    bool finite() const;
    void accumulate(const MlpGrads& other);
};

MlpGrads zero_grads(const MlpParams& p);

// upstream = dLoss/d(head output), out x batch; gradients are literal sums
// over the batch columns, matching a summed (not averaged) loss.
MlpGrads mlp_backward(const MlpParams& p, const ForwardCache& cache,
                      const Eigen::MatrixXd& upstream);

// params <- params - lr * grads. Returns false (and leaves params untouched)
// when any gradient entry is non-finite.
bool sgd_step(MlpParams& p, const MlpGrads& g, double lr);

// Piecewise-constant schedule with a single decay point: lr0 before it,
// lr0 * factor from the decay iteration onward.
double lr_at(uint64_t iter, double lr0, uint64_t decay_point, double decay_factor);

// Softmax after subtracting 1e9 from entries whose `allowed` flag is false;
// numerically stabilized. Throws std::invalid_argument when nothing is
// allowed. Disallowed probabilities come out below 1e-12 (exactly 0 here).
Eigen::VectorXd masked_softmax(const Eigen::VectorXd& logits, const std::vector<uint8_t>& allowed);

// Max relative error between `analytic` and central finite differences of
// `loss` over a random subsample of parameters (fraction `sample_frac`, at
// least one). Both-tiny pairs (< 1e-12) count as zero error. Restores params.
double finite_diff_check(MlpParams& params, const std::function<double()>& loss,
                         const MlpGrads& analytic, double h, double sample_frac,
                         std::mt19937_64& rng);

// Versioned flat binary with a dims header.
void serialize_params(const MlpParams& p, BinWriter& w);
MlpParams deserialize_params(BinReader& r);

}  // namespace schedlab::nn

#endif
