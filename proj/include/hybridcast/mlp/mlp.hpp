#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hybridcast/mlp/lag_matrix.hpp"

namespace hybridcast::mlp {

/**
 * Three-layer perceptron: sigmoid hidden units, linear output.
 *
 *   out(x) = w0 + sum_j wj * sigmoid(b_j + sum_i w_ji * scaled(x_i))
 *
 * Inputs and targets are min-max scaled into [0,1] with bounds taken from
 * the training rows; predictions are mapped back to the target scale.
 */
struct MlpModel {
    int n_input = 0;
    int n_hidden = 0;
    std::vector<double> hidden_weights;  // n_hidden x n_input, row-major
    std::vector<double> hidden_bias;     // n_hidden
    std::vector<double> output_weights;  // n_hidden
    double output_bias = 0.0;
    std::vector<std::pair<double, double>> input_scaling;  // (min, max) per feature
    // Targets are fitted on the same [0,1] scale and mapped back at
    // prediction; (0, 1) is the identity.
    std::pair<double, double> target_scaling{0.0, 1.0};
};

enum class Trainer {
    AdaptiveMoment,      // full-batch gradient descent with Adam steps
    LevenbergMarquardt,  // damped Gauss-Newton least squares
};

struct TrainConfig {
    Trainer algorithm = Trainer::AdaptiveMoment;
    double learning_rate = 0.01;  // AdaptiveMoment only
    int max_epochs = 4000;        // LM counts accepted iterations
    int patience = 50;
    std::uint64_t seed = 0;
    double validation_fraction = 0.2;
    // Validation rows are drawn at random (seeded) by default; a trailing
    // window confounds early stopping with regime shift on cyclic series.
    bool shuffle_validation = true;
    bool parallel = false;  // row-parallel gradient accumulation
};

struct TrainResult {
    MlpModel model;
    int best_epoch = 0;
    double best_val_mse = 0.0;
    double best_val_mae = 0.0;
    double final_train_mse = 0.0;
    int epochs_run = 0;
};

/**
 * Full-batch gradient descent with adaptive-moment steps and early
 * stopping on the trailing validation slice. Weights start uniform in
 * (-0.5, 0.5) from the seed; the returned weights are those of the best
 * validation epoch. Deterministic for a fixed seed, independent of the
 * thread count.
 */
TrainResult train(const LagMatrix& matrix, int n_hidden, const TrainConfig& cfg);

double predict(const MlpModel& model, std::span<const double> features);

/// Mean squared error of the model over a matrix.
double mse_on(const MlpModel& model, const LagMatrix& matrix);

/**
 * Maximum relative disagreement between analytic loss gradients and
 * central finite differences over every weight, on the given data.
 */
double gradient_check(const MlpModel& model, const LagMatrix& matrix, double epsilon);

}  // namespace hybridcast::mlp
