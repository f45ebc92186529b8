#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "schedlab/nn/mlp.hpp"

using namespace schedlab;
using namespace schedlab::nn;

TEST_CASE("he initialization: shapes, zero biases, fan-in variance") {
    std::mt19937_64 rng(17);
    auto p = mlp_init({100, 50, 10}, rng);
    REQUIRE(p.num_layers() == 2);
    CHECK(p.W[0].rows() == 50);
    CHECK(p.W[0].cols() == 100);
    CHECK(p.W[1].rows() == 10);
    CHECK(p.W[1].cols() == 50);
    CHECK(p.b[0].isZero());
    CHECK(p.b[1].isZero());
    CHECK(p.param_count() == 100 * 50 + 50 + 50 * 10 + 10);

    const double var = p.W[0].array().square().mean();
    CHECK(var == doctest::Approx(2.0 / 100).epsilon(0.1));
    const double limit = std::sqrt(6.0 / 100);
    CHECK(p.W[0].maxCoeff() <= limit);
    CHECK(p.W[0].minCoeff() >= -limit);

    SUBCASE("deterministic per seed") {
        std::mt19937_64 r2(17);
        auto q = mlp_init({100, 50, 10}, r2);
        CHECK(p.W[0] == q.W[0]);
        CHECK(p.W[1] == q.W[1]);
    }
    SUBCASE("degenerate dims are refused") {
        std::mt19937_64 r3(1);
        CHECK_THROWS_AS(mlp_init({5}, r3), std::invalid_argument);
        CHECK_THROWS_AS(mlp_init({5, 0, 2}, r3), std::invalid_argument);
    }
}

TEST_CASE("flat parameter view round-trips every coordinate") {
    std::mt19937_64 rng(3);
    auto p = mlp_init({3, 4, 2}, rng);
    for (size_t i = 0; i < p.param_count(); ++i) {
        const double old = p.get_flat(i);
        p.set_flat(i, old + 1.0);
        CHECK(p.get_flat(i) == old + 1.0);
        p.set_flat(i, old);
    }
}

TEST_CASE("forward pass closed forms") {
    SUBCASE("single linear layer is exactly Wx + b") {
        MlpParams p;
        p.dims = {2, 2};
        p.W = {(Eigen::MatrixXd(2, 2) << 1.0, 2.0, 3.0, 4.0).finished()};
        p.b = {(Eigen::VectorXd(2) << 0.5, -0.5).finished()};
        Eigen::MatrixXd x(2, 1);
        x << 1.0, 1.0;
        Eigen::MatrixXd y = mlp_forward(p, x);
        CHECK(y(0, 0) == doctest::Approx(3.5));
        CHECK(y(1, 0) == doctest::Approx(6.5));
    }
    SUBCASE("hidden relu clips negatives") {
        MlpParams p;
        p.dims = {2, 2, 1};
        p.W = {(Eigen::MatrixXd(2, 2) << 1.0, 0.0, 0.0, -1.0).finished(),
               (Eigen::MatrixXd(1, 2) << 1.0, 1.0).finished()};
        p.b = {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1)};
        Eigen::MatrixXd x(2, 2);
        x << 2.0, -1.0, 3.0, -4.0;  // columns: (2,3), (-1,-4)
        Eigen::MatrixXd y = mlp_forward(p, x);
        CHECK(y(0, 0) == doctest::Approx(2.0));  // relu(2) + relu(-3)
        CHECK(y(0, 1) == doctest::Approx(4.0));  // relu(-1) + relu(4)
    }
    SUBCASE("cache stores every activation") {
        std::mt19937_64 rng(5);
        auto p = mlp_init({3, 4, 2}, rng);
        Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 7);
        ForwardCache cache;
        mlp_forward(p, x, &cache);
        REQUIRE(cache.acts.size() == 3);
        CHECK(cache.acts[0] == x);
        CHECK(cache.acts[1].rows() == 4);
        CHECK(cache.acts[2].rows() == 2);
        CHECK((cache.acts[1].array() >= 0.0).all());  // relu output
    }
}

TEST_CASE("backward pass matches the hand-derived linear gradient") {
    // Single linear layer, loss = ||Wx + b - t||^2 summed over the batch:
    // dW = 2(y - t) x^T, db = 2(y - t) summed.
    MlpParams p;
    p.dims = {2, 2};
    p.W = {(Eigen::MatrixXd(2, 2) << 0.5, -1.0, 2.0, 0.25).finished()};
    p.b = {(Eigen::VectorXd(2) << 0.1, -0.2).finished()};

    Eigen::MatrixXd x(2, 3);
    x << 1.0, -2.0, 0.5, 0.0, 1.5, -1.0;
    Eigen::MatrixXd t = Eigen::MatrixXd::Constant(2, 3, 0.3);

    ForwardCache cache;
    Eigen::MatrixXd y = mlp_forward(p, x, &cache);
    Eigen::MatrixXd upstream = 2.0 * (y - t);
    auto g = mlp_backward(p, cache, upstream);

    Eigen::MatrixXd dw_ref = upstream * x.transpose();
    Eigen::VectorXd db_ref = upstream.rowwise().sum();
    CHECK((g.dW[0] - dw_ref).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((g.db[0] - db_ref).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("analytic gradients pass a dense finite-difference check") {
    std::mt19937_64 rng(11);
    auto p = mlp_init({3, 4, 2}, rng);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 5);

    auto loss = [&]() {
        Eigen::MatrixXd y = mlp_forward(p, x);
        return y.array().square().sum();
    };
    ForwardCache cache;
    Eigen::MatrixXd y = mlp_forward(p, x, &cache);
    auto g = mlp_backward(p, cache, 2.0 * y);

    const double err = finite_diff_check(p, loss, g, 1e-5, 1.0, rng);
    CHECK(err < 1e-8);
}

TEST_CASE("masked softmax") {
    SUBCASE("uniform over the allowed set") {
        Eigen::VectorXd logits = Eigen::VectorXd::Zero(4);
        auto pi = masked_softmax(logits, {1, 1, 0, 1});
        CHECK(pi[0] == doctest::Approx(1.0 / 3));
        CHECK(pi[1] == doctest::Approx(1.0 / 3));
        CHECK(pi[2] == 0.0);  // exactly zero, not merely small
        CHECK(pi[3] == doctest::Approx(1.0 / 3));
        CHECK(pi.sum() == doctest::Approx(1.0));
    }
    SUBCASE("extreme logits stay finite") {
        Eigen::VectorXd logits(2);
        logits << 1000.0, 0.0;
        auto pi = masked_softmax(logits, {1, 1});
        CHECK(std::isfinite(pi[0]));
        CHECK(pi[0] == doctest::Approx(1.0));
        CHECK(pi[1] >= 0.0);
    }
    SUBCASE("masked probabilities are below 1e-12 whatever the logits") {
        Eigen::VectorXd logits(3);
        logits << -500.0, 800.0, 3.0;
        auto pi = masked_softmax(logits, {0, 0, 1});
        CHECK(pi[0] < 1e-12);
        CHECK(pi[1] < 1e-12);
        CHECK(pi[2] == doctest::Approx(1.0));
    }
    SUBCASE("an all-masked row is refused") {
        Eigen::VectorXd logits = Eigen::VectorXd::Zero(3);
        CHECK_THROWS_AS(masked_softmax(logits, {0, 0, 0}), std::invalid_argument);
    }
}

TEST_CASE("learning rate schedule is a single step") {
    CHECK(lr_at(0, 1e-3, 100, 0.1) == doctest::Approx(1e-3));
    CHECK(lr_at(99, 1e-3, 100, 0.1) == doctest::Approx(1e-3));
    CHECK(lr_at(100, 1e-3, 100, 0.1) == doctest::Approx(1e-4));
    CHECK(lr_at(5000, 1e-3, 100, 0.1) == doctest::Approx(1e-4));
}

TEST_CASE("sgd step applies or refuses atomically") {
    std::mt19937_64 rng(13);
    auto p = mlp_init({2, 3, 1}, rng);
    auto g = zero_grads(p);

    SUBCASE("plain descent") {
        g.dW[0].setConstant(1.0);
        const Eigen::MatrixXd before = p.W[0];
        REQUIRE(sgd_step(p, g, 0.5));
        CHECK((p.W[0] - (before.array() - 0.5).matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("a single nan poisons nothing") {
        g.dW[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
        const Eigen::MatrixXd before0 = p.W[0];
        const Eigen::MatrixXd before1 = p.W[1];
        CHECK_FALSE(g.finite());
        REQUIRE_FALSE(sgd_step(p, g, 0.5));
        CHECK(p.W[0] == before0);
        CHECK(p.W[1] == before1);
    }
}

TEST_CASE("gradient accumulation sums layerwise") {
    std::mt19937_64 rng(19);
    auto p = mlp_init({2, 2}, rng);
    auto a = zero_grads(p);
    auto b = zero_grads(p);
    a.dW[0].setConstant(1.0);
    b.dW[0].setConstant(2.5);
    b.db[0].setConstant(-1.0);
    a.accumulate(b);
    CHECK(a.dW[0](0, 0) == doctest::Approx(3.5));
    CHECK(a.db[0](1) == doctest::Approx(-1.0));
}

TEST_CASE("parameter serialization round-trips bit-exactly") {
    std::mt19937_64 rng(23);
    auto p = mlp_init({5, 8, 3}, rng);
    p.b[1](2) = -0.0;  // signed zero must survive

    BinWriter w;
    serialize_params(p, w);
    BinReader r(w.bytes());
    auto q = deserialize_params(r);
    CHECK(r.at_end());
    REQUIRE(q.dims == p.dims);
    for (size_t l = 0; l < p.num_layers(); ++l) {
        REQUIRE(q.W[l] == p.W[l]);
        REQUIRE(q.b[l] == p.b[l]);
    }
    CHECK(std::signbit(q.b[1](2)));

    SUBCASE("truncation is detected") {
        auto bytes = w.bytes();
        bytes.resize(bytes.size() - 3);
        BinReader bad(bytes);
        CHECK_THROWS_AS(deserialize_params(bad), std::runtime_error);
    }
}
