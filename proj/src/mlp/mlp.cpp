#include "hybridcast/mlp/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcast/core/errors.hpp"
#include "hybridcast/core/linalg.hpp"
#include "hybridcast/core/parallel.hpp"
#include "hybridcast/core/rng.hpp"

namespace hybridcast::mlp {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct ParamView {
    // Flat layout: hidden_weights (H*N), hidden_bias (H), output_weights (H),
    // output_bias (1).
    int n_input;
    int n_hidden;
    std::size_t size() const {
        return static_cast<std::size_t>(n_hidden) * static_cast<std::size_t>(n_input) +
               2 * static_cast<std::size_t>(n_hidden) + 1;
    }
    std::size_t hw(int j, int i) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_input) +
               static_cast<std::size_t>(i);
    }
    std::size_t hb(int j) const {
        return static_cast<std::size_t>(n_hidden) * static_cast<std::size_t>(n_input) +
               static_cast<std::size_t>(j);
    }
    std::size_t ow(int j) const {
        return static_cast<std::size_t>(n_hidden) * static_cast<std::size_t>(n_input) +
               static_cast<std::size_t>(n_hidden) + static_cast<std::size_t>(j);
    }
    std::size_t ob() const { return size() - 1; }
};

double forward_scaled(const ParamView& pv, std::span<const double> params,
                      const double* x, double* hidden_out) {
    double out = params[pv.ob()];
    for (int j = 0; j < pv.n_hidden; ++j) {
        double a = params[pv.hb(j)];
        const double* wrow = params.data() + pv.hw(j, 0);
        for (int i = 0; i < pv.n_input; ++i) a += wrow[i] * x[i];
        const double h = sigmoid(a);
        if (hidden_out) hidden_out[j] = h;
        out += params[pv.ow(j)] * h;
    }
    return out;
}

// Loss over rows [0, rows): mean squared error.
double loss_scaled(const ParamView& pv, std::span<const double> params,
                   const std::vector<double>& scaled, const std::vector<double>& targets,
                   std::size_t rows, std::size_t width) {
    if (rows == 0) return 0.0;
    double ss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double pred = forward_scaled(pv, params, scaled.data() + r * width, nullptr);
        const double e = pred - targets[r];
        ss += e * e;
    }
    return ss / static_cast<double>(rows);
}

// Per-row Jacobian of the prediction with respect to every parameter.
void prediction_jacobian(const ParamView& pv, std::span<const double> params, const double* x,
                         double* jrow, double* pred_out) {
    double out = params[pv.ob()];
    for (int j = 0; j < pv.n_hidden; ++j) {
        double a = params[pv.hb(j)];
        const double* wrow = params.data() + pv.hw(j, 0);
        for (int i = 0; i < pv.n_input; ++i) a += wrow[i] * x[i];
        const double h = sigmoid(a);
        out += params[pv.ow(j)] * h;
        const double slope = params[pv.ow(j)] * h * (1.0 - h);
        jrow[pv.ow(j)] = h;
        jrow[pv.hb(j)] = slope;
        double* jw = jrow + pv.hw(j, 0);
        for (int i = 0; i < pv.n_input; ++i) jw[i] = slope * x[i];
    }
    jrow[pv.ob()] = 1.0;
    *pred_out = out;
}

// Normal equations J^T J and J^T r accumulated in fixed-size row chunks,
// combined in chunk order (thread-count invariant).
void accumulate_normal_equations(const ParamView& pv, std::span<const double> params,
                                 const std::vector<double>& scaled,
                                 const std::vector<double>& targets, std::size_t rows,
                                 std::size_t width, bool parallel,
                                 std::vector<std::vector<double>>& chunk_a,
                                 std::vector<std::vector<double>>& chunk_g, core::Matrix& a,
                                 std::vector<double>& g, double& sse) {
    const std::size_t n_params = pv.size();
    const std::size_t n_chunks = core::chunk_count(rows);
    if (chunk_a.size() < n_chunks) chunk_a.resize(n_chunks);
    if (chunk_g.size() < n_chunks) chunk_g.resize(n_chunks);

#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        auto& ca = chunk_a[static_cast<std::size_t>(c)];
        auto& cg = chunk_g[static_cast<std::size_t>(c)];
        ca.assign(n_params * n_params + 1, 0.0);  // last slot holds the SSE share
        cg.assign(n_params, 0.0);
        std::vector<double> jrow(n_params, 0.0);
        const std::size_t lo = static_cast<std::size_t>(c) * core::kReductionChunk;
        const std::size_t hi = std::min(rows, lo + core::kReductionChunk);
        for (std::size_t r = lo; r < hi; ++r) {
            double pred = 0.0;
            prediction_jacobian(pv, params, scaled.data() + r * width, jrow.data(), &pred);
            const double resid = pred - targets[r];
            ca[n_params * n_params] += resid * resid;
            for (std::size_t i = 0; i < n_params; ++i) {
                cg[i] += resid * jrow[i];
                const double ji = jrow[i];
                double* arow = ca.data() + i * n_params;
                for (std::size_t j = i; j < n_params; ++j) arow[j] += ji * jrow[j];
            }
        }
    }

    a = core::Matrix(n_params, n_params);
    g.assign(n_params, 0.0);
    sse = 0.0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        sse += chunk_a[c][n_params * n_params];
        for (std::size_t i = 0; i < n_params; ++i) {
            g[i] += chunk_g[c][i];
            for (std::size_t j = i; j < n_params; ++j)
                a(i, j) += chunk_a[c][i * n_params + j];
        }
    }
    for (std::size_t i = 0; i < n_params; ++i)
        for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
}

// Gradient of the training loss accumulated in fixed-size row chunks; the
// chunk partials are combined in chunk order so the sum is independent of
// the thread count.
void accumulate_gradient(const ParamView& pv, std::span<const double> params,
                         const std::vector<double>& scaled, const std::vector<double>& targets,
                         std::size_t rows, std::size_t width, bool parallel,
                         std::vector<std::vector<double>>& chunk_grads,
                         std::vector<double>& grad) {
    const std::size_t n_chunks = core::chunk_count(rows);
    const std::size_t n_params = pv.size();
    if (chunk_grads.size() < n_chunks) chunk_grads.resize(n_chunks);

    const double inv_rows = 1.0 / static_cast<double>(rows);

#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        auto& g = chunk_grads[static_cast<std::size_t>(c)];
        g.assign(n_params, 0.0);
        std::vector<double> hidden(static_cast<std::size_t>(pv.n_hidden), 0.0);
        const std::size_t lo = static_cast<std::size_t>(c) * core::kReductionChunk;
        const std::size_t hi = std::min(rows, lo + core::kReductionChunk);
        for (std::size_t r = lo; r < hi; ++r) {
            const double* x = scaled.data() + r * width;
            const double pred = forward_scaled(pv, params, x, hidden.data());
            const double g_pred = 2.0 * (pred - targets[r]) * inv_rows;
            g[pv.ob()] += g_pred;
            for (int j = 0; j < pv.n_hidden; ++j) {
                const double h = hidden[static_cast<std::size_t>(j)];
                g[pv.ow(j)] += g_pred * h;
                const double g_h = g_pred * params[pv.ow(j)] * h * (1.0 - h);
                g[pv.hb(j)] += g_h;
                double* grow = g.data() + pv.hw(j, 0);
                for (int i = 0; i < pv.n_input; ++i) grow[i] += g_h * x[i];
            }
        }
    }

    grad.assign(n_params, 0.0);
    for (std::size_t c = 0; c < n_chunks; ++c)
        for (std::size_t k = 0; k < n_params; ++k) grad[k] += chunk_grads[c][k];
}

}  // namespace

TrainResult train(const LagMatrix& matrix, int n_hidden, const TrainConfig& cfg) {
    if (n_hidden < 1) throw ConfigError("mlp::train: need at least one hidden unit");
    if (cfg.patience >= cfg.max_epochs)
        throw ConfigError("mlp::train: patience must be below max_epochs");
    const std::size_t rows = matrix.rows();
    const std::size_t width = matrix.width;
    if (rows < static_cast<std::size_t>(width) + static_cast<std::size_t>(n_hidden))
        throw InsufficientDataError("mlp::train: too few rows for the architecture");

    std::size_t val_rows = static_cast<std::size_t>(
        std::floor(cfg.validation_fraction * static_cast<double>(rows)));
    if (val_rows >= rows) val_rows = rows - 1;
    const std::size_t train_rows = rows - val_rows;

    // Row order: identity, or a seeded permutation whose tail becomes the
    // validation set. The permutation stream is independent of the weight
    // initialisation stream.
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    if (cfg.shuffle_validation && val_rows > 0) {
        core::Rng perm(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        for (std::size_t i = rows - 1; i > 0; --i)
            std::swap(order[i], order[perm.next_u64() % (i + 1)]);
    }
    const auto cell = [&](std::size_t r, std::size_t i) {
        return matrix.data[order[r] * width + i];
    };

    // Min-max bounds from the training rows only.
    std::vector<std::pair<double, double>> scaling(width, {0.0, 0.0});
    for (std::size_t i = 0; i < width; ++i) {
        double lo = cell(0, i);
        double hi = cell(0, i);
        for (std::size_t r = 1; r < train_rows; ++r) {
            const double v = cell(r, i);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        scaling[i] = {lo, hi};
    }
    std::vector<double> scaled(rows * width, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < width; ++i) {
            const auto [lo, hi] = scaling[i];
            const double v = cell(r, i);
            scaled[r * width + i] = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
        }
    }

    // Targets on the same [0,1] footing, so the output layer never has to
    // crawl toward large magnitudes.
    double tlo = matrix.targets[order[0]];
    double thi = tlo;
    for (std::size_t r = 1; r < train_rows; ++r) {
        tlo = std::min(tlo, matrix.targets[order[r]]);
        thi = std::max(thi, matrix.targets[order[r]]);
    }
    std::pair<double, double> target_scaling{0.0, 1.0};
    std::vector<double> targets(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) targets[r] = matrix.targets[order[r]];
    if (thi > tlo) {
        target_scaling = {tlo, thi};
        for (double& t : targets) t = (t - tlo) / (thi - tlo);
    }

    const ParamView pv{static_cast<int>(width), n_hidden};
    const std::size_t n_params = pv.size();
    std::vector<double> params(n_params, 0.0);
    core::Rng rng(cfg.seed);
    for (double& p : params) p = rng.uniform(-0.5, 0.5);

    std::vector<double> adam_m(n_params, 0.0);
    std::vector<double> adam_v(n_params, 0.0);
    std::vector<double> grad(n_params, 0.0);
    std::vector<std::vector<double>> chunk_grads;
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double adam_eps = 1e-8;

    const auto validation_mae_of = [&](std::span<const double> ps) {
        const std::size_t lo = (val_rows == 0) ? 0 : train_rows;
        const std::size_t hi = (val_rows == 0) ? train_rows : rows;
        double abs_sum = 0.0;
        for (std::size_t r = lo; r < hi; ++r) {
            const double pred = forward_scaled(pv, ps, scaled.data() + r * width, nullptr);
            abs_sum += std::abs(pred - targets[r]);
        }
        return abs_sum / static_cast<double>(hi - lo);
    };
    const auto validation_loss = [&](std::span<const double> ps) {
        if (val_rows == 0) return loss_scaled(pv, ps, scaled, targets, train_rows, width);
        double ss = 0.0;
        for (std::size_t r = train_rows; r < rows; ++r) {
            const double pred = forward_scaled(pv, ps, scaled.data() + r * width, nullptr);
            const double e = pred - targets[r];
            ss += e * e;
        }
        return ss / static_cast<double>(val_rows);
    };

    std::vector<double> best_params = params;
    double best_val = validation_loss(params);
    double best_val_mae = validation_mae_of(params);
    int best_epoch = 0;
    int since_best = 0;
    double train_mse = loss_scaled(pv, params, scaled, targets, train_rows, width);
    int epoch = 0;

    if (cfg.algorithm == Trainer::LevenbergMarquardt) {
        std::vector<std::vector<double>> chunk_a, chunk_g;
        core::Matrix normal;
        std::vector<double> gvec;
        double sse = 0.0;
        double lambda = 1e-3;
        accumulate_normal_equations(pv, params, scaled, targets, train_rows, width,
                                    cfg.parallel, chunk_a, chunk_g, normal, gvec, sse);
        for (epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
            bool accepted = false;
            std::vector<double> trial(n_params, 0.0);
            while (lambda <= 1e10) {
                core::Matrix damped = normal;
                for (std::size_t i = 0; i < n_params; ++i)
                    damped(i, i) = normal(i, i) * (1.0 + lambda) + 1e-12;
                std::vector<double> step;
                try {
                    std::vector<double> rhs(n_params, 0.0);
                    for (std::size_t i = 0; i < n_params; ++i) rhs[i] = -gvec[i];
                    step = core::solve_spd(std::move(damped), std::move(rhs));
                } catch (const RankError&) {
                    lambda *= 10.0;
                    continue;
                }
                for (std::size_t i = 0; i < n_params; ++i) step[i] += params[i];
                const double trial_sse =
                    loss_scaled(pv, step, scaled, targets, train_rows, width) *
                    static_cast<double>(train_rows);
                if (std::isfinite(trial_sse) && trial_sse < sse) {
                    trial = std::move(step);
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!accepted) break;  // fully damped, no descent direction left

            params = std::move(trial);
            accumulate_normal_equations(pv, params, scaled, targets, train_rows, width,
                                        cfg.parallel, chunk_a, chunk_g, normal, gvec, sse);
            train_mse = sse / static_cast<double>(train_rows);
            if (!std::isfinite(train_mse))
                throw TrainingError("mlp::train: loss diverged at epoch " +
                                        std::to_string(epoch),
                                    epoch);
            const double val = validation_loss(params);
            if (val < best_val) {
                best_val = val;
                best_val_mae = validation_mae_of(params);
                best_params = params;
                best_epoch = epoch;
                since_best = 0;
            } else {
                ++since_best;
                if (since_best > cfg.patience) break;
            }
        }

        TrainResult result;
        result.model.n_input = static_cast<int>(width);
        result.model.n_hidden = n_hidden;
        result.model.input_scaling = std::move(scaling);
        result.model.hidden_weights.assign(
            best_params.begin(), best_params.begin() + static_cast<std::ptrdiff_t>(pv.hb(0)));
        result.model.hidden_bias.assign(
            best_params.begin() + static_cast<std::ptrdiff_t>(pv.hb(0)),
            best_params.begin() + static_cast<std::ptrdiff_t>(pv.ow(0)));
        result.model.output_weights.assign(
            best_params.begin() + static_cast<std::ptrdiff_t>(pv.ow(0)),
            best_params.begin() + static_cast<std::ptrdiff_t>(pv.ob()));
        result.model.output_bias = best_params[pv.ob()];
        result.model.target_scaling = target_scaling;
        const double tspan = target_scaling.second - target_scaling.first;
        result.best_epoch = best_epoch;
        result.best_val_mse = best_val * tspan * tspan;
        result.best_val_mae = best_val_mae * tspan;
        result.final_train_mse = train_mse * tspan * tspan;
        result.epochs_run = std::min(epoch, cfg.max_epochs);
        return result;
    }

    for (epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        accumulate_gradient(pv, params, scaled, targets, train_rows, width, cfg.parallel,
                            chunk_grads, grad);
        const double bc1 = 1.0 - std::pow(beta1, epoch);
        const double bc2 = 1.0 - std::pow(beta2, epoch);
        for (std::size_t k = 0; k < n_params; ++k) {
            adam_m[k] = beta1 * adam_m[k] + (1.0 - beta1) * grad[k];
            adam_v[k] = beta2 * adam_v[k] + (1.0 - beta2) * grad[k] * grad[k];
            const double mhat = adam_m[k] / bc1;
            const double vhat = adam_v[k] / bc2;
            params[k] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + adam_eps);
        }

        train_mse = loss_scaled(pv, params, scaled, targets, train_rows, width);
        if (!std::isfinite(train_mse))
            throw TrainingError("mlp::train: loss diverged at epoch " + std::to_string(epoch),
                                epoch);
        const double val = validation_loss(params);
        if (val < best_val) {
            best_val = val;
            best_val_mae = validation_mae_of(params);
            best_params = params;
            best_epoch = epoch;
            since_best = 0;
        } else {
            ++since_best;
            if (since_best > cfg.patience) break;
        }
    }

    TrainResult result;
    result.model.n_input = static_cast<int>(width);
    result.model.n_hidden = n_hidden;
    result.model.input_scaling = std::move(scaling);
    result.model.hidden_weights.assign(best_params.begin(),
                                       best_params.begin() + static_cast<std::ptrdiff_t>(
                                                                 pv.hb(0)));
    result.model.hidden_bias.assign(
        best_params.begin() + static_cast<std::ptrdiff_t>(pv.hb(0)),
        best_params.begin() + static_cast<std::ptrdiff_t>(pv.ow(0)));
    result.model.output_weights.assign(
        best_params.begin() + static_cast<std::ptrdiff_t>(pv.ow(0)),
        best_params.begin() + static_cast<std::ptrdiff_t>(pv.ob()));
    result.model.output_bias = best_params[pv.ob()];
    result.model.target_scaling = target_scaling;
    const double tspan = target_scaling.second - target_scaling.first;
    result.best_epoch = best_epoch;
    result.best_val_mse = best_val * tspan * tspan;
    result.best_val_mae = best_val_mae * tspan;
    result.final_train_mse = train_mse * tspan * tspan;
    result.epochs_run = std::min(epoch, cfg.max_epochs);
    return result;
}

double predict(const MlpModel& model, std::span<const double> features) {
    if (features.size() != static_cast<std::size_t>(model.n_input))
        throw ShapeError("mlp::predict: feature width mismatch");
    std::vector<double> x(features.size(), 0.0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto [lo, hi] = model.input_scaling[i];
        x[i] = (hi > lo) ? (features[i] - lo) / (hi - lo) : 0.5;
    }
    double out = model.output_bias;
    for (int j = 0; j < model.n_hidden; ++j) {
        double a = model.hidden_bias[static_cast<std::size_t>(j)];
        for (int i = 0; i < model.n_input; ++i)
            a += model.hidden_weights[static_cast<std::size_t>(j) *
                                          static_cast<std::size_t>(model.n_input) +
                                      static_cast<std::size_t>(i)] *
                 x[static_cast<std::size_t>(i)];
        out += model.output_weights[static_cast<std::size_t>(j)] * sigmoid(a);
    }
    const auto [tlo, thi] = model.target_scaling;
    return tlo + (thi - tlo) * out;
}

double mse_on(const MlpModel& model, const LagMatrix& matrix) {
    if (matrix.rows() == 0) throw InsufficientDataError("mse_on: empty matrix");
    double ss = 0.0;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const double e = predict(model, matrix.row(r)) - matrix.targets[r];
        ss += e * e;
    }
    return ss / static_cast<double>(matrix.rows());
}

double gradient_check(const MlpModel& model, const LagMatrix& matrix, double epsilon) {
    if (epsilon <= 0.0) throw BoundsError("gradient_check: epsilon must be positive");
    const std::size_t rows = matrix.rows();
    const std::size_t width = matrix.width;
    const ParamView pv{model.n_input, model.n_hidden};

    std::vector<double> params(pv.size(), 0.0);
    for (int j = 0; j < model.n_hidden; ++j) {
        for (int i = 0; i < model.n_input; ++i)
            params[pv.hw(j, i)] =
                model.hidden_weights[static_cast<std::size_t>(j) *
                                         static_cast<std::size_t>(model.n_input) +
                                     static_cast<std::size_t>(i)];
        params[pv.hb(j)] = model.hidden_bias[static_cast<std::size_t>(j)];
        params[pv.ow(j)] = model.output_weights[static_cast<std::size_t>(j)];
    }
    params[pv.ob()] = model.output_bias;

    std::vector<double> scaled(rows * width, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < width; ++i) {
            const auto [lo, hi] = model.input_scaling[i];
            const double v = matrix.data[r * width + i];
            scaled[r * width + i] = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
        }
    }
    std::vector<double> targets(matrix.targets);
    {
        const auto [tlo, thi] = model.target_scaling;
        if (thi - tlo != 1.0 || tlo != 0.0)
            for (double& t : targets) t = (t - tlo) / (thi - tlo);
    }

    std::vector<double> grad;
    std::vector<std::vector<double>> chunk_grads;
    accumulate_gradient(pv, params, scaled, targets, rows, width, false, chunk_grads,
                        grad);

    double worst = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double saved = params[k];
        params[k] = saved + epsilon;
        const double up = loss_scaled(pv, params, scaled, targets, rows, width);
        params[k] = saved - epsilon;
        const double down = loss_scaled(pv, params, scaled, targets, rows, width);
        params[k] = saved;
        const double fd = (up - down) / (2.0 * epsilon);
        const double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
        worst = std::max(worst, std::abs(fd - grad[k]) / denom);
    }
    return worst;
}

}  // namespace hybridcast::mlp
