#include "schedlab/nn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schedlab/util/rng.hpp"

namespace schedlab::nn {

namespace {
constexpr char kMagic[4] = {'S', 'L', 'N', 'N'};
constexpr uint32_t kVersion = 1;
constexpr double kMaskPenalty = 1e9;
}  // namespace

size_t MlpParams::param_count() const {
    size_t n = 0;
    for (size_t l = 0; l < W.size(); ++l) n += W[l].size() + b[l].size();
    return n;
}

double MlpParams::get_flat(size_t i) const {
    for (size_t l = 0; l < W.size(); ++l) {
        if (i < static_cast<size_t>(W[l].size())) return W[l].data()[i];
        i -= W[l].size();
        if (i < static_cast<size_t>(b[l].size())) return b[l].data()[i];
        i -= b[l].size();
    }
    throw std::out_of_range("MlpParams::get_flat");
}

void MlpParams::set_flat(size_t i, double v) {
    for (size_t l = 0; l < W.size(); ++l) {
        if (i < static_cast<size_t>(W[l].size())) {
            W[l].data()[i] = v;
            return;
        }
        i -= W[l].size();
        if (i < static_cast<size_t>(b[l].size())) {
            b[l].data()[i] = v;
            return;
        }
        i -= b[l].size();
    }
    throw std::out_of_range("MlpParams::set_flat");
}

MlpParams mlp_init(const std::vector<uint32_t>& dims, std::mt19937_64& rng) {
    if (dims.size() < 2) throw std::invalid_argument("mlp_init: need at least input and output dims");
    for (uint32_t d : dims)
        if (d == 0) throw std::invalid_argument("mlp_init: zero layer width");
    MlpParams p;
    p.dims = dims;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        const auto fan_in = static_cast<double>(dims[l]);
        const double limit = std::sqrt(6.0 / fan_in);
        Eigen::MatrixXd w(dims[l + 1], dims[l]);
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w.data()[i] = (2.0 * uniform01(rng) - 1.0) * limit;
        p.W.push_back(std::move(w));
        p.b.emplace_back(Eigen::VectorXd::Zero(dims[l + 1]));
    }
    return p;
}

Eigen::MatrixXd mlp_forward(const MlpParams& p, const Eigen::MatrixXd& x, ForwardCache* cache) {
    if (x.rows() != static_cast<Eigen::Index>(p.dims.front())) {
        throw std::invalid_argument("mlp_forward: input width mismatch");
    }
    if (cache) {
        cache->acts.clear();
        cache->acts.push_back(x);
    }
    Eigen::MatrixXd h = x;
    for (size_t l = 0; l < p.num_layers(); ++l) {
        Eigen::MatrixXd z = (p.W[l] * h).colwise() + p.b[l];
        if (l + 1 < p.num_layers()) z = z.cwiseMax(0.0);  // ReLU on hidden layers
        if (cache) cache->acts.push_back(z);
        h = std::move(z);
    }
    return h;
}

bool MlpGrads::finite() const {
    for (const auto& m : dW)
        if (!m.allFinite()) return false;
    for (const auto& v : db)
        if (!v.allFinite()) return false;
    return true;
}

void MlpGrads::accumulate(const MlpGrads& other) {
    for (size_t l = 0; l < dW.size(); ++l) {
        dW[l] += other.dW[l];
        db[l] += other.db[l];
    }
}

MlpGrads zero_grads(const MlpParams& p) {
    MlpGrads g;
    for (size_t l = 0; l < p.num_layers(); ++l) {
        g.dW.emplace_back(Eigen::MatrixXd::Zero(p.W[l].rows(), p.W[l].cols()));
        g.db.emplace_back(Eigen::VectorXd::Zero(p.b[l].size()));
    }
    return g;
}

MlpGrads mlp_backward(const MlpParams& p, const ForwardCache& cache,
                      const Eigen::MatrixXd& upstream) {
    if (cache.acts.size() != p.num_layers() + 1) {
        throw std::invalid_argument("mlp_backward: cache does not match params");
    }
    MlpGrads g;
    g.dW.resize(p.num_layers());
    g.db.resize(p.num_layers());
    Eigen::MatrixXd delta = upstream;  // dLoss/dz of the current layer
    for (size_t l = p.num_layers(); l-- > 0;) {
        // Hidden activations stored post-ReLU: the mask (act > 0) equals (z > 0),
        // with the subgradient at exactly 0 fixed to 0.
        g.dW[l] = delta * cache.acts[l].transpose();
        g.db[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = p.W[l].transpose() * delta;
            delta = delta.cwiseProduct(
                (cache.acts[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return g;
}

bool sgd_step(MlpParams& p, const MlpGrads& g, double lr) {
    if (!g.finite()) return false;
    for (size_t l = 0; l < p.num_layers(); ++l) {
        p.W[l] -= lr * g.dW[l];
        p.b[l] -= lr * g.db[l];
    }
    return true;
}

double lr_at(uint64_t iter, double lr0, uint64_t decay_point, double decay_factor) {
    return iter >= decay_point ? lr0 * decay_factor : lr0;
}

Eigen::VectorXd masked_softmax(const Eigen::VectorXd& logits, const std::vector<uint8_t>& allowed) {
    if (static_cast<size_t>(logits.size()) != allowed.size()) {
        throw std::invalid_argument("masked_softmax: mask length mismatch");
    }
    bool any = false;
    Eigen::VectorXd z = logits;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (allowed[k])
            any = true;
        else
            z[k] -= kMaskPenalty;
    }
    if (!any) throw std::invalid_argument("masked_softmax: every action masked");
    const double m = z.maxCoeff();
    Eigen::VectorXd p = (z.array() - m).exp();
    // Vectorized exp may leave subnormals where true zeros belong; masked
    // entries are zeroed outright so downstream code can rely on p[k] == 0.
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (!allowed[k]) p[k] = 0.0;
    return p / p.sum();
}

double finite_diff_check(MlpParams& params, const std::function<double()>& loss,
                         const MlpGrads& analytic, double h, double sample_frac,
                         std::mt19937_64& rng) {
    // Flatten analytic grads with the same layout as MlpParams::get_flat.
    std::vector<double> flat;
    flat.reserve(params.param_count());
    for (size_t l = 0; l < analytic.dW.size(); ++l) {
        flat.insert(flat.end(), analytic.dW[l].data(), analytic.dW[l].data() + analytic.dW[l].size());
        flat.insert(flat.end(), analytic.db[l].data(), analytic.db[l].data() + analytic.db[l].size());
    }
    const size_t n = flat.size();
    const size_t want = std::max<size_t>(1, static_cast<size_t>(std::llround(sample_frac * n)));

    // Partial Fisher-Yates over the index range.
    std::vector<size_t> indices(n);
    for (size_t i = 0; i < n; ++i) indices[i] = i;
    for (size_t i = 0; i < want; ++i) {
        const size_t j = i + static_cast<size_t>(uniform01(rng) * static_cast<double>(n - i));
        std::swap(indices[i], indices[std::min(j, n - 1)]);
    }

    double max_rel = 0.0;
    for (size_t i = 0; i < want; ++i) {
        const size_t idx = indices[i];
        const double orig = params.get_flat(idx);
        params.set_flat(idx, orig + h);
        const double up = loss();
        params.set_flat(idx, orig - h);
        const double down = loss();
        params.set_flat(idx, orig);
        const double fd = (up - down) / (2.0 * h);
        const double an = flat[idx];
        const double denom = std::max(std::abs(fd), std::abs(an));
        if (denom < 1e-12) continue;
        max_rel = std::max(max_rel, std::abs(fd - an) / denom);
    }
    return max_rel;
}

void serialize_params(const MlpParams& p, BinWriter& w) {
    for (char c : kMagic) w.put_u8(static_cast<uint8_t>(c));
    w.put_u32(kVersion);
    w.put_u32(static_cast<uint32_t>(p.dims.size()));
    for (uint32_t d : p.dims) w.put_u32(d);
    for (size_t l = 0; l < p.num_layers(); ++l) {
        for (Eigen::Index i = 0; i < p.W[l].size(); ++i) w.put_f64(p.W[l].data()[i]);
        for (Eigen::Index i = 0; i < p.b[l].size(); ++i) w.put_f64(p.b[l].data()[i]);
    }
}

MlpParams deserialize_params(BinReader& r) {
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.get_u8());
    if (magic[0] != kMagic[0] || magic[1] != kMagic[1] || magic[2] != kMagic[2] ||
        magic[3] != kMagic[3]) {
        throw std::runtime_error("network params: bad magic");
    }
    if (uint32_t v = r.get_u32(); v != kVersion) {
        throw std::runtime_error("network params: unsupported version " + std::to_string(v));
    }
    const uint32_t ndims = r.get_u32();
    if (ndims < 2) throw std::runtime_error("network params: bad dims header");
    std::vector<uint32_t> dims(ndims);
    for (auto& d : dims) d = r.get_u32();
    MlpParams p;
    p.dims = dims;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        Eigen::MatrixXd w(dims[l + 1], dims[l]);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = r.get_f64();
        Eigen::VectorXd b(dims[l + 1]);
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = r.get_f64();
        p.W.push_back(std::move(w));
        p.b.push_back(std::move(b));
    }
    return p;
}

}  // namespace schedlab::nn
