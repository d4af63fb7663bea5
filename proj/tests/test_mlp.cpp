#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hybridcast/core/errors.hpp"
#include "hybridcast/core/rng.hpp"
#include "hybridcast/mlp/mlp.hpp"
#include "hybridcast/mlp/multi_run.hpp"
#include "support/oracles.hpp"

using namespace hybridcast;

namespace {

mlp::MlpModel random_model(int n_in, int n_hid, std::uint64_t seed) {
    core::Rng rng(seed);
    mlp::MlpModel m;
    m.n_input = n_in;
    m.n_hidden = n_hid;
    m.hidden_weights.resize(static_cast<std::size_t>(n_in) * static_cast<std::size_t>(n_hid));
    m.hidden_bias.resize(static_cast<std::size_t>(n_hid));
    m.output_weights.resize(static_cast<std::size_t>(n_hid));
    for (double& w : m.hidden_weights) w = rng.uniform(-1.0, 1.0);
    for (double& w : m.hidden_bias) w = rng.uniform(-1.0, 1.0);
    for (double& w : m.output_weights) w = rng.uniform(-1.0, 1.0);
    m.output_bias = rng.uniform(-1.0, 1.0);
    m.input_scaling.assign(static_cast<std::size_t>(n_in), {0.0, 1.0});
    return m;
}

mlp::LagMatrix random_matrix(int width, std::size_t rows, std::uint64_t seed) {
    core::Rng rng(seed);
    mlp::LagMatrix m;
    m.width = static_cast<std::size_t>(width);
    m.data.resize(rows * m.width);
    m.targets.resize(rows);
    for (double& v : m.data) v = rng.uniform01();
    for (double& v : m.targets) v = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("lag matrix windowing") {
    const mlp::LagMatrix m = mlp::build_lag_matrix({{"y", {1, 2, 3, 4, 5}, 2}});
    REQUIRE(m.rows() == 3);
    CHECK(m.width == 2);
    CHECK(m.targets == std::vector<double>{3, 4, 5});
    CHECK(std::vector<double>(m.row(0).begin(), m.row(0).end()) == std::vector<double>{2, 1});
    CHECK(std::vector<double>(m.row(1).begin(), m.row(1).end()) == std::vector<double>{3, 2});
    CHECK(std::vector<double>(m.row(2).begin(), m.row(2).end()) == std::vector<double>{4, 3});

    // Lag-free sources with one extra: the rows are the extra alone.
    const mlp::LagMatrix e = mlp::build_lag_matrix({{"y", {1, 2, 3}, 0}},
                                                   {{"aux", {9, 8, 7}}});
    REQUIRE(e.rows() == 3);
    CHECK(e.width == 1);
    CHECK(e.row(0)[0] == 9);
    CHECK(e.targets == std::vector<double>{1, 2, 3});

    // Misaligned sources are rejected.
    CHECK_THROWS_AS(mlp::build_lag_matrix({{"a", {1, 2, 3}, 1}, {"b", {1, 2}, 1}}),
                    AlignmentError);

    // Proposed-method layout: 4 + 2 lags and one forecast column.
    std::vector<double> y(30), r(30), lhat(30);
    for (std::size_t i = 0; i < 30; ++i) {
        y[i] = static_cast<double>(i);
        r[i] = 0.1 * static_cast<double>(i);
        lhat[i] = 0.5 * static_cast<double>(i);
    }
    const mlp::LagMatrix p =
        mlp::build_lag_matrix({{"y", y, 4}, {"r", r, 2}}, {{"lhat", lhat}});
    CHECK(p.width == 7);
}

TEST_CASE("training degenerate and known-function targets") {
    // All-zero targets collapse to a near-zero network.
    mlp::LagMatrix zeros = random_matrix(3, 60, 5);
    for (double& t : zeros.targets) t = 0.0;
    mlp::TrainConfig cfg;
    cfg.seed = 3;
    cfg.max_epochs = 3000;
    cfg.patience = 300;
    const mlp::TrainResult zr = mlp::train(zeros, 3, cfg);
    CHECK(mlp::mse_on(zr.model, zeros) < 1e-6);

    // sin(x) on [0, 2pi]; rows shuffled so the trailing validation slice
    // samples the whole domain.
    mlp::LagMatrix sine;
    sine.width = 1;
    const std::size_t n = 400;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    core::Rng shuffle_rng(2);
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(order[i], order[shuffle_rng.next_u64() % (i + 1)]);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 2.0 * 3.14159265358979323846 * static_cast<double>(order[i]) /
                         static_cast<double>(n - 1);
        sine.data.push_back(x);
        sine.targets.push_back(std::sin(x));
    }
    mlp::TrainConfig scfg;
    scfg.seed = 11;
    scfg.max_epochs = 6000;
    scfg.patience = 400;
    scfg.learning_rate = 0.02;
    const mlp::TrainResult sr = mlp::train(sine, 8, scfg);
    CHECK(std::sqrt(sr.best_val_mse) < 0.05);
}

TEST_CASE("prediction matches the closed form and an independent evaluator") {
    mlp::MlpModel zero = random_model(3, 2, 1);
    for (double& w : zero.hidden_weights) w = 0.0;
    for (double& w : zero.hidden_bias) w = 0.0;
    for (double& w : zero.output_weights) w = 0.0;
    zero.output_bias = 1.25;
    CHECK(mlp::predict(zero, std::vector<double>{0.3, 0.4, 0.5}) == doctest::Approx(1.25));

    // One hidden unit with zero pre-activation contributes sigmoid(0) = 1/2.
    mlp::MlpModel half = zero;
    half.n_hidden = 2;
    half.output_weights = {1.0, 0.0};
    half.output_bias = 0.0;
    CHECK(mlp::predict(half, std::vector<double>{0.1, 0.9, 0.2}) == doctest::Approx(0.5));

    const mlp::MlpModel m = random_model(5, 7, 23);
    core::Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(5, 0.0);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        CHECK(mlp::predict(m, x) ==
              doctest::Approx(oracles::independent_forward(m, x)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(mlp::predict(m, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("gradient check oracle") {
    const mlp::LagMatrix data = random_matrix(4, 80, 9);
    const mlp::MlpModel m = random_model(4, 5, 10);
    CHECK(mlp::gradient_check(m, data, 1e-5) < 1e-4);

    mlp::MlpModel zero = random_model(4, 5, 10);
    for (double& w : zero.hidden_weights) w = 0.0;
    for (double& w : zero.hidden_bias) w = 0.0;
    for (double& w : zero.output_weights) w = 0.0;
    zero.output_bias = 0.0;
    CHECK(mlp::gradient_check(zero, data, 1e-6) < 1e-8);

    // The check loses accuracy as epsilon grows toward 1e-1.
    const double tight = mlp::gradient_check(m, data, 1e-5);
    const double loose = mlp::gradient_check(m, data, 1e-1);
    CHECK(loose > tight * 10.0);
}

TEST_CASE("training is deterministic and improves on the initial loss") {
    const mlp::LagMatrix data = random_matrix(4, 120, 31);
    mlp::TrainConfig cfg;
    cfg.seed = 77;
    cfg.max_epochs = 800;
    cfg.patience = 100;

    const mlp::TrainResult a = mlp::train(data, 6, cfg);
    const mlp::TrainResult b = mlp::train(data, 6, cfg);
    CHECK(a.model.hidden_weights == b.model.hidden_weights);
    CHECK(a.model.output_weights == b.model.output_weights);
    CHECK(a.model.output_bias == b.model.output_bias);
    CHECK(a.best_epoch == b.best_epoch);

    // Loss at the returned weights never exceeds the epoch-0 loss.
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        mlp::TrainConfig c2 = cfg;
        c2.seed = seed;
        c2.max_epochs = 300;
        c2.patience = 50;
        const mlp::TrainResult r = mlp::train(data, 6, c2);
        // Reconstruct the untouched epoch-0 network by re-seeding.
        core::Rng rng(seed);
        mlp::MlpModel init = r.model;
        for (double& w : init.hidden_weights) w = rng.uniform(-0.5, 0.5);
        for (double& w : init.hidden_bias) w = rng.uniform(-0.5, 0.5);
        for (double& w : init.output_weights) w = rng.uniform(-0.5, 0.5);
        init.output_bias = rng.uniform(-0.5, 0.5);
        CHECK(mlp::mse_on(r.model, data) <= mlp::mse_on(init, data) + 1e-12);
    }
}

TEST_CASE("levenberg-marquardt trainer fits and replays deterministically") {
    // Same quadratic target for both trainers; LM should reach a lower
    // training loss in far fewer iterations.
    mlp::LagMatrix data;
    data.width = 2;
    core::Rng rng(6);
    for (int r = 0; r < 150; ++r) {
        const double a = rng.uniform01();
        const double b = rng.uniform01();
        data.data.push_back(a);
        data.data.push_back(b);
        data.targets.push_back(3.0 * a * a - 2.0 * b + 0.5 * a * b);
    }
    mlp::TrainConfig lm;
    lm.algorithm = mlp::Trainer::LevenbergMarquardt;
    lm.max_epochs = 200;
    lm.patience = 30;
    lm.seed = 4;
    const mlp::TrainResult r1 = mlp::train(data, 6, lm);
    const mlp::TrainResult r2 = mlp::train(data, 6, lm);
    CHECK(r1.model.hidden_weights == r2.model.hidden_weights);
    CHECK(r1.model.output_bias == r2.model.output_bias);

    mlp::TrainConfig adam;
    adam.max_epochs = 200;
    adam.patience = 199;
    adam.seed = 4;
    const mlp::TrainResult ra = mlp::train(data, 6, adam);
    CHECK(r1.final_train_mse < ra.final_train_mse);
    CHECK(r1.final_train_mse < 1e-3);
}

TEST_CASE("forward pass is lipschitz in a single feature") {
    const mlp::MlpModel m = random_model(4, 6, 55);
    double bound = 0.0;
    for (int j = 0; j < m.n_hidden; ++j)
        bound += std::abs(m.output_weights[static_cast<std::size_t>(j)] *
                          m.hidden_weights[static_cast<std::size_t>(j) * 4 + 2]);
    bound /= 4.0;  // sigmoid slope bound

    core::Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> x(4, 0.0);
        for (double& v : x) v = rng.uniform01();
        std::vector<double> y = x;
        const double delta = rng.uniform(-0.3, 0.3);
        y[2] += delta;
        const double change = std::abs(mlp::predict(m, y) - mlp::predict(m, x));
        CHECK(change <= bound * std::abs(delta) + 1e-12);
    }
}

TEST_CASE("multi_run aggregation semantics") {
    const auto fixed = [](std::uint64_t) {
        return core::MetricReport{2.0, 8.0, 0.5, 10};
    };
    const mlp::MultiRunResult single = mlp::multi_run(fixed, 1, 0);
    CHECK(single.mean.mae == 2.0);
    CHECK(single.stddev.mae == 0.0);

    const mlp::MultiRunResult fifty = mlp::multi_run(fixed, 50, 100);
    CHECK(fifty.mean.mse == 8.0);
    CHECK(fifty.stddev.mse == 0.0);

    const auto seeded = [](std::uint64_t seed) {
        const double v = static_cast<double>(seed % 7);
        return core::MetricReport{v, v * v, v / 10.0, 5};
    };
    const mlp::MultiRunResult a = mlp::multi_run(seeded, 21, 3);
    const mlp::MultiRunResult b = mlp::multi_run(seeded, 21, 3);
    REQUIRE(a.per_run.size() == b.per_run.size());
    for (std::size_t i = 0; i < a.per_run.size(); ++i) {
        CHECK(a.per_run[i].mae == b.per_run[i].mae);
        CHECK(a.per_run[i].mse == b.per_run[i].mse);
    }

    const auto failing = [](std::uint64_t seed) -> core::MetricReport {
        if (seed == 5 || seed == 7) throw TrainingError("diverged", 3);
        return core::MetricReport{1.0, 1.0, 1.0, 4};
    };
    try {
        mlp::multi_run(failing, 10, 0);
        CHECK(false);
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("5") != std::string::npos);
        CHECK(what.find("7") != std::string::npos);
    }
}
