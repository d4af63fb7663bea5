// Timing comparison of the OpenMP kernel paths against their serial
// reference implementations, plus a checksum equality check so a speedup
// never comes from diverging arithmetic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hybridcast/arima/arima.hpp"
#include "hybridcast/core/parallel.hpp"
#include "hybridcast/core/rng.hpp"
#include "hybridcast/decomp/spline.hpp"
#include "hybridcast/mlp/mlp.hpp"

namespace {

using namespace hybridcast;

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double checksum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

struct Row {
    const char* name;
    double serial_s;
    double parallel_s;
    bool identical;
};

Row bench_mlp_epochs() {
    core::Rng rng(7);
    const std::size_t rows = 20000;
    const int width = 16;
    mlp::LagSource src{"y", {}, width};
    src.values.resize(rows + static_cast<std::size_t>(width));
    for (double& v : src.values) v = rng.normal();
    const mlp::LagMatrix matrix = mlp::build_lag_matrix({src});

    mlp::TrainConfig cfg;
    cfg.max_epochs = 60;
    cfg.patience = 59;
    cfg.seed = 11;
    cfg.validation_fraction = 0.1;

    cfg.parallel = false;
    double t0 = now_seconds();
    const mlp::TrainResult serial = mlp::train(matrix, 16, cfg);
    double t1 = now_seconds();
    cfg.parallel = true;
    const mlp::TrainResult parallel = mlp::train(matrix, 16, cfg);
    double t2 = now_seconds();

    bool same = serial.model.output_bias == parallel.model.output_bias;
    for (std::size_t i = 0; same && i < serial.model.hidden_weights.size(); ++i)
        same = serial.model.hidden_weights[i] == parallel.model.hidden_weights[i];
    return {"mlp full-batch training (20k rows, 16x16)", t1 - t0, t2 - t1, same};
}

Row bench_rolling_ar() {
    core::Rng rng(13);
    std::vector<double> series(400000, 0.0);
    for (std::size_t t = 1; t < series.size(); ++t)
        series[t] = 0.6 * series[t - 1] + rng.normal();
    const arima::ArimaModel model = arima::fit(
        std::span<const double>(series).subspan(0, 5000), arima::ArimaOrder{8, 0, 0});

    const double t0 = now_seconds();
    const std::vector<double> serial = arima::rolling_one_step_serial(model, series, 5000);
    const double t1 = now_seconds();
    const std::vector<double> parallel = arima::rolling_one_step(model, series, 5000);
    const double t2 = now_seconds();
    return {"rolling AR(8) one-step forecasts (400k points)", t1 - t0, t2 - t1,
            checksum(serial) == checksum(parallel) && serial == parallel};
}

Row bench_spline_grid() {
    const std::size_t knots = 4000;
    std::vector<double> x(knots), y(knots);
    for (std::size_t i = 0; i < knots; ++i) {
        x[i] = static_cast<double>(i) * 250.0;
        y[i] = std::sin(static_cast<double>(i) * 0.05);
    }
    const decomp::CubicSpline spline(x, y);
    const std::size_t grid = 1000000;

    const double t0 = now_seconds();
    const std::vector<double> serial = spline.sample_grid_serial(grid);
    const double t1 = now_seconds();
    const std::vector<double> parallel = spline.sample_grid(grid);
    const double t2 = now_seconds();
    return {"spline envelope sampling (1M points)", t1 - t0, t2 - t1, serial == parallel};
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", core::hardware_threads());
    std::printf("%-48s %10s %10s %9s %s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
                "identical");
    for (const Row& row : {bench_mlp_epochs(), bench_rolling_ar(), bench_spline_grid()}) {
        std::printf("%-48s %10.3f %10.3f %8.2fx %s\n", row.name, row.serial_s, row.parallel_s,
                    row.serial_s / row.parallel_s, row.identical ? "yes" : "NO");
    }
    return 0;
}
