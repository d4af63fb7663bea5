// Acceptance suite: every criterion prints one PASS/FAIL line; the process
// exits with the number of failed criteria. Individual criteria can be
// selected by passing their numbers as arguments.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hybridcast/arima/arima.hpp"
#include "hybridcast/bench/config.hpp"
#include "hybridcast/bench/report.hpp"
#include "hybridcast/core/adf.hpp"
#include "hybridcast/core/parallel.hpp"
#include "hybridcast/core/rng.hpp"
#include "hybridcast/decomp/emd.hpp"
#include "hybridcast/decomp/ma_filter.hpp"
#include "hybridcast/mlp/mlp.hpp"
#include "support/oracles.hpp"

using namespace hybridcast;

namespace {

const std::string kDataDir = HYBRIDCAST_DATA_DIR;
const std::string kConfigDir = HYBRIDCAST_CONFIG_DIR;
const std::string kCliPath = HYBRIDCAST_CLI_PATH;

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

bool within_rel(double value, double target, double tol) {
    return std::abs(value - target) <= tol * std::abs(target);
}

struct PaperCell {
    const char* dataset;
    const char* method;
    double mae;
    double mse;
    double mase;
};

// Printed comparison-table values; MAE/MSE for the exchange-rate series are
// in the x1e-5 convention, matching the emitted report scale.
const std::vector<PaperCell> kTable1 = {
    {"sunspot", "ann", 14.23, 353.12, 0.629},
    {"sunspot", "arima", 13.37, 306.97, 0.591},
    {"sunspot", "zhang", 13.14, 289.31, 0.581},
    {"sunspot", "khashei_bijari", 10.62, 205.08, 0.470},
    {"sunspot", "babu_reddy", 11.39, 239.90, 0.504},
    {"sunspot", "proposed", 10.48, 194.29, 0.463},
    {"lynx", "ann", 0.1249, 0.0241, 0.6185},
    {"lynx", "arima", 0.1198, 0.0231, 0.5932},
    {"lynx", "zhang", 0.1003, 0.0173, 0.4966},
    {"lynx", "khashei_bijari", 0.1025, 0.0175, 0.50757},
    {"lynx", "babu_reddy", 0.1102, 0.0189, 0.5457},
    {"lynx", "proposed", 0.1013, 0.0162, 0.5016},
    {"gbpusd", "ann", 428.55, 3.4681, 1.085},
    {"gbpusd", "arima", 435.72, 3.5272, 1.103},
    {"gbpusd", "zhang", 429.52, 3.4496, 1.087},
    {"gbpusd", "khashei_bijari", 406.22, 3.1053, 1.028},
    {"gbpusd", "babu_reddy", 436.34, 3.5053, 1.104},
    {"gbpusd", "proposed", 404.90, 2.9538, 1.025},
    {"intraday", "ann", 20.10, 617.46, 1.048},
    {"intraday", "arima", 20.22, 652.72, 1.054},
    {"intraday", "zhang", 19.16, 594.09, 0.999},
    {"intraday", "khashei_bijari", 19.79, 600.93, 1.031},
    {"intraday", "babu_reddy", 19.50, 619.67, 1.016},
    {"intraday", "proposed", 18.81, 581.38, 0.980},
};

std::vector<core::TimeSeries> load_benchmark_series(const bench::ExperimentConfig& cfg) {
    std::vector<core::TimeSeries> out;
    for (const auto& d : cfg.datasets) out.push_back(bench::load_dataset(d));
    return out;
}

std::vector<std::vector<double>> synthetic_corpus(int count) {
    std::vector<std::vector<double>> out;
    for (int s = 0; s < count; ++s) {
        core::Rng rng(1000 + static_cast<std::uint64_t>(s));
        const std::size_t n = 120 + (static_cast<std::size_t>(s) * 37) % 240;
        std::vector<double> y(n, 0.0);
        double level = rng.uniform(-50.0, 50.0);
        for (double& v : y) {
            level += rng.normal(0.0, 1.5);
            v = level + 4.0 * std::sin(static_cast<double>(&v - y.data()) * 0.35) +
                rng.normal(0.0, 0.5);
        }
        out.push_back(std::move(y));
    }
    return out;
}

// ---------------------------------------------------------------- C1

void criterion_exact_identities(const bench::ExperimentConfig& cfg) {
    std::ostringstream detail;
    bool pass = true;

    std::vector<std::vector<double>> inputs;
    for (const auto& s : load_benchmark_series(cfg)) inputs.push_back(s.values);
    for (auto& s : synthetic_corpus(20)) inputs.push_back(std::move(s));

    double worst_ma = 0.0;
    double worst_emd = 0.0;
    for (const auto& y : inputs) {
        double scale = 0.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        for (int m : {2, 5, 15}) {
            if (static_cast<std::size_t>(m) > y.size()) continue;
            const auto dec = decomp::ma_filter(y, m);
            for (std::size_t k = 0; k < dec.linear_part.size(); ++k) {
                const double err =
                    std::abs(dec.linear_part[k] + dec.residual_part[k] - y[dec.offset + k]);
                worst_ma = std::max(worst_ma, err / scale);
            }
        }
        const auto emd = decomp::emd(y);
        for (std::size_t t = 0; t < y.size(); ++t) {
            double sum = emd.residue[t];
            for (const auto& imf : emd.imfs) sum += imf[t];
            worst_emd = std::max(worst_emd, std::abs(sum - y[t]) / scale);
        }
    }
    if (worst_ma >= 1e-12) pass = false;
    if (worst_emd >= 1e-8) pass = false;
    detail << "max scaled MA error " << worst_ma << ", max EMD error " << worst_emd;

    core::Rng rng(5);
    std::vector<double> actual(60, 0.0), forecast(60, 0.0);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        actual[i] = rng.normal(20.0, 5.0);
        forecast[i] = actual[i] + rng.normal(0.0, 1.0);
    }
    const auto base = core::evaluate(actual, forecast);
    for (double c : {1e-3, 1.0, 1e3}) {
        std::vector<double> a = actual, f = forecast;
        for (auto& v : a) v *= c;
        for (auto& v : f) v *= c;
        const auto m = core::evaluate(a, f);
        if (!within_rel(m.mase, base.mase, 1e-12) || !within_rel(m.mae, base.mae * c, 1e-12) ||
            !within_rel(m.mse, base.mse * c * c, 1e-12)) {
            pass = false;
            detail << "; homogeneity violated at c=" << c;
        }
    }
    report(1, "exact identities (MA split, EMD reconstruction, metric homogeneity)", pass,
           detail.str());
}

// ---------------------------------------------------------------- C2

void criterion_estimator_recovery() {
    int ar1_ok = 0, ar2_ok = 0;
    for (int s = 0; s < 100; ++s) {
        const double phi1[] = {0.7};
        const auto y1 = oracles::simulate_ar(phi1, 5000, 3000 + static_cast<std::uint64_t>(s));
        if (std::abs(arima::fit(y1, {1, 0, 0}).ar_coeffs[0] - 0.7) <= 0.05) ++ar1_ok;

        const double phi2[] = {0.5, -0.3};
        const auto y2 = oracles::simulate_ar(phi2, 5000, 4000 + static_cast<std::uint64_t>(s));
        const auto m2 = arima::fit(y2, {2, 0, 0});
        if (std::abs(m2.ar_coeffs[0] - 0.5) <= 0.05 && std::abs(m2.ar_coeffs[1] + 0.3) <= 0.05)
            ++ar2_ok;
    }

    double worst_grad = 0.0;
    for (int s = 0; s < 20; ++s) {
        core::Rng rng(7000 + static_cast<std::uint64_t>(s));
        const int width = 2 + static_cast<int>(rng.next_u64() % 5);
        const int hidden = 1 + static_cast<int>(rng.next_u64() % 6);
        mlp::LagMatrix data;
        data.width = static_cast<std::size_t>(width);
        const std::size_t rows = 40 + rng.next_u64() % 80;
        data.data.resize(rows * data.width);
        data.targets.resize(rows);
        for (double& v : data.data) v = rng.uniform01();
        for (double& v : data.targets) v = rng.normal();

        mlp::MlpModel model;
        model.n_input = width;
        model.n_hidden = hidden;
        model.hidden_weights.resize(static_cast<std::size_t>(width * hidden));
        model.hidden_bias.resize(static_cast<std::size_t>(hidden));
        model.output_weights.resize(static_cast<std::size_t>(hidden));
        for (double& w : model.hidden_weights) w = rng.uniform(-1.0, 1.0);
        for (double& w : model.hidden_bias) w = rng.uniform(-1.0, 1.0);
        for (double& w : model.output_weights) w = rng.uniform(-1.0, 1.0);
        model.output_bias = rng.uniform(-1.0, 1.0);
        model.input_scaling.assign(static_cast<std::size_t>(width), {0.0, 1.0});
        worst_grad = std::max(worst_grad, mlp::gradient_check(model, data, 1e-5));
    }

    std::ostringstream detail;
    detail << "AR(1) " << ar1_ok << "/100, AR(2) " << ar2_ok
           << "/100 within ±0.05; max gradient mismatch " << worst_grad;
    report(2, "estimator recovery oracles (AR coefficients, MLP gradients)",
           ar1_ok >= 95 && ar2_ok >= 95 && worst_grad < 1e-4, detail.str());
}

// ---------------------------------------------------------------- C3

void criterion_adf_calibration(const bench::ExperimentConfig& cfg) {
    int noise_ok = 0, walk_ok = 0;
    for (int s = 0; s < 100; ++s) {
        const auto noise = oracles::white_noise(1000, 9000 + static_cast<std::uint64_t>(s));
        const auto walk = oracles::random_walk(1000, 9000 + static_cast<std::uint64_t>(s));
        if (core::adf_test(noise).p_value < 0.05) ++noise_ok;
        if (core::adf_test(walk).p_value > 0.10) ++walk_ok;
    }

    // Stationarity is judged on the raw observations (the transform is a
    // modeling device).
    double sunspot_p = -1.0, lynx_p = -1.0;
    for (auto d : cfg.datasets) {
        d.transform = core::Transform::None;
        if (d.name == "sunspot") sunspot_p = core::adf_test(bench::load_dataset(d).values).p_value;
        if (d.name == "lynx") lynx_p = core::adf_test(bench::load_dataset(d).values).p_value;
    }

    // Under the unit-root null the p-value is uniform on [0,1], so the
    // fail-to-reject rate at the 0.10 threshold cannot exceed ~90% for a
    // calibrated test; the printed >=95/100 bar is unattainable by
    // construction. The random-walk half is therefore checked as a
    // two-sided calibration band around the theoretical 90/100.
    const bool walk_calibrated = walk_ok >= 84 && walk_ok <= 96;
    const bool pass = noise_ok >= 95 && walk_calibrated &&
                      std::abs(sunspot_p - 0.083) <= 0.05 && std::abs(lynx_p - 0.056) <= 0.05;
    std::ostringstream detail;
    detail << "white noise " << noise_ok << "/100 reject (need >=95); random walk " << walk_ok
           << "/100 fail-to-reject (literal >=95 bar " << (walk_ok >= 95 ? "met" : "not met")
           << "; uniform-null theory predicts 90, calibration band [84,96] used); sunspot p="
           << sunspot_p << ", lynx p=" << lynx_p << " (raw scale)";
    report(3, "ADF calibration (Monte Carlo and dataset p-values)", pass, detail.str());
}

// ---------------------------------------------------------------- C4-C6

double cell(const bench::ResultTable& t, const std::string& d, const std::string& m,
            const std::string& metric) {
    return t.cells.at({d, m, metric}).mean;
}

void criterion_table1(const bench::ResultTable& table, double elapsed_s) {
    bool pass = true;
    std::ostringstream detail;
    int checked = 0;
    for (const auto& row : kTable1) {
        const auto key_mae = std::make_tuple(std::string(row.dataset), std::string(row.method),
                                             std::string("mae"));
        if (!table.cells.count(key_mae)) {
            pass = false;
            detail << row.dataset << '/' << row.method << " missing; ";
            continue;
        }
        const double mae = cell(table, row.dataset, row.method, "mae");
        const double mse = cell(table, row.dataset, row.method, "mse");
        const double mase = cell(table, row.dataset, row.method, "mase");
        ++checked;
        if (!within_rel(mae, row.mae, 0.20) || !within_rel(mse, row.mse, 0.20) ||
            !within_rel(mase, row.mase, 0.10)) {
            pass = false;
            detail << row.dataset << '/' << row.method << " got (" << mae << ", " << mse << ", "
                   << mase << ") want (" << row.mae << ", " << row.mse << ", " << row.mase
                   << "); ";
        }
    }
    const double budget = 600.0 * 4.0 / std::min(4, core::hardware_threads());
    if (elapsed_s > budget) {
        pass = false;
        detail << "runtime " << elapsed_s << "s over budget " << budget << "s; ";
    }
    std::ostringstream head;
    head << checked << " cells at ±20% MAE/MSE, ±10% MASE; " << elapsed_s << "s";
    report(4, "comparison-table reproduction, 50-seed means", pass,
           head.str() + (detail.str().empty() ? "" : "; " + detail.str()));
}

void criterion_rank(const bench::ResultTable& table) {
    const std::vector<std::string> all = {"ann",        "arima",      "zhang",
                                          "khashei_bijari", "babu_reddy", "proposed"};
    const std::vector<std::string> hybrids = {"zhang", "khashei_bijari", "babu_reddy",
                                              "proposed"};
    bool pass = true;
    std::ostringstream detail;
    for (const char* dataset : {"sunspot", "gbpusd", "intraday"}) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& m : all) best = std::min(best, cell(table, dataset, m, "mse"));
        const double prop = cell(table, dataset, "proposed", "mse");
        detail << dataset << " proposed/best=" << prop / best << "; ";
        if (prop > best * 1.02) pass = false;
    }
    double best_hybrid = std::numeric_limits<double>::infinity();
    for (const auto& m : hybrids) best_hybrid = std::min(best_hybrid, cell(table, "lynx", m, "mse"));
    const double lynx_prop = cell(table, "lynx", "proposed", "mse");
    detail << "lynx proposed/best-hybrid=" << lynx_prop / best_hybrid;
    if (lynx_prop > best_hybrid * 1.05) pass = false;
    report(5, "rank reproduction (proposed lowest MSE or within 2%; lynx within 5%)", pass,
           detail.str());
}

void criterion_emd_uplift(const bench::ResultTable& base, const bench::ResultTable& emd,
                          double elapsed_s) {
    bool pass = true;
    std::ostringstream detail;
    double worst_uplift = 1.0;
    for (const auto& row : kTable1) {
        const double b = cell(base, row.dataset, row.method, "mase");
        const double e = cell(emd, row.dataset, row.method, "mase");
        const double uplift = (b - e) / b;
        worst_uplift = std::min(worst_uplift, uplift);
        if (uplift < 0.15) {
            pass = false;
            detail << row.dataset << '/' << row.method << " uplift " << 100.0 * uplift << "%; ";
        }
    }
    for (const char* dataset : {"sunspot", "lynx", "gbpusd", "intraday"}) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& row : kTable1) {
            if (std::string(row.dataset) != dataset) continue;
            best = std::min(best, cell(emd, dataset, row.method, "mse"));
        }
        const double prop = cell(emd, dataset, "proposed", "mse");
        if (prop > best * 1.02) {
            pass = false;
            detail << dataset << " proposed+EMD not within 2% of best (" << prop / best << "); ";
        }
    }
    const double budget = 1800.0 * 4.0 / std::min(4, core::hardware_threads());
    if (elapsed_s > budget) {
        pass = false;
        detail << "runtime " << elapsed_s << "s over budget " << budget << "s; ";
    }
    std::ostringstream head;
    head << "min MASE uplift " << 100.0 * worst_uplift << "%; " << elapsed_s << "s";
    report(6, "EMD uplift (≥15% MASE per pair; proposed+EMD best column-wise)", pass,
           head.str() + (detail.str().empty() ? "" : "; " + detail.str()));
}

// ---------------------------------------------------------------- C7

void criterion_improvement_arithmetic() {
    bench::ResultTable paper1, paper2;
    for (const auto& row : kTable1)
        paper1.cells[{row.dataset, row.method, "mae"}] = {row.mae, 0.0};
    paper2.cells[{"intraday", "ann", "mae"}] = {10.96, 0.0};
    paper2.cells[{"lynx", "ann", "mae"}] = {0.0912, 0.0};
    paper2.cells[{"gbpusd", "ann", "mae"}] = {190.08, 0.0};

    const bench::ResultTable imp = bench::improvement_table(paper1, paper2);
    const double intraday = imp.cells.at({"intraday", "ann", "mae"}).mean;
    const double lynx = imp.cells.at({"lynx", "ann", "mae"}).mean;
    const double gbpusd = imp.cells.at({"gbpusd", "ann", "mae"}).mean;

    const bool pass = std::abs(intraday - 45.47) <= 0.5 && std::abs(lynx - 26.98) <= 0.5 &&
                      std::abs(gbpusd - 55.65) <= 0.5;
    std::ostringstream detail;
    detail << "intraday ANN MAE " << intraday << "%, lynx " << lynx << "%, gbpusd " << gbpusd
           << '%';
    report(7, "improvement arithmetic against recomputed percentages", pass, detail.str());
}

// ---------------------------------------------------------------- C8

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<unreadable:" + p.string() + ">";
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_replay_determinism() {
    const auto tmp = std::filesystem::temp_directory_path() / "hybridcast_replay";
    std::filesystem::remove_all(tmp);
    std::filesystem::create_directories(tmp);

    const std::string config =
        "runs = 3\nseed_base = 7\nmax_epochs = 400\npatience = 50\n\n"
        "[dataset sunspot]\npath = " + kDataDir + "/sunspot.csv\ntransform = none\n"
        "train_len = 221\narima_order = 9,0,0\nann_arch = 4x4\nproposed_lags = 4,2\n\n"
        "[method arima]\n[method zhang]\n";
    const auto cfg_path = tmp / "replay.cfg";
    std::ofstream(cfg_path) << config;

    const auto run = [&](const std::string& out_dir) {
        const std::string cmd = kCliPath + " bench --config " + cfg_path.string() + " --out " +
                                (tmp / out_dir).string() + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const int rc1 = run("a");
    const int rc2 = run("b");

    bool pass = rc1 == 0 && rc2 == 0;
    std::string detail;
    if (!pass) {
        detail = "bench exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2);
    } else {
        const std::string csv_a = slurp(tmp / "a" / "results.csv");
        const std::string csv_b = slurp(tmp / "b" / "results.csv");
        const std::string json_a = slurp(tmp / "a" / "results.json");
        const std::string json_b = slurp(tmp / "b" / "results.json");
        pass = !csv_a.empty() && csv_a == csv_b && json_a == json_b;
        detail = pass ? "CSV and JSON byte-identical across two bench invocations"
                      : "outputs differ between invocations";
    }
    std::filesystem::remove_all(tmp);
    report(8, "determinism replay of the bench command", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    const auto wants = [&](int id) { return selected.empty() || selected.count(id) > 0; };

    bench::ExperimentConfig cfg = bench::parse_config_file(kConfigDir + "/table1.cfg");
    for (auto& d : cfg.datasets) {
        // Paths in the config are repo-relative.
        if (!std::filesystem::exists(d.path)) d.path = kDataDir + "/" +
            std::filesystem::path(d.path).filename().string();
    }

    try {
        if (wants(1)) criterion_exact_identities(cfg);
        if (wants(2)) criterion_estimator_recovery();
        if (wants(3)) criterion_adf_calibration(cfg);

        bench::ResultTable table1;
        double table1_elapsed = 0.0;
        if (wants(4) || wants(5) || wants(6)) {
            const auto t0 = std::chrono::steady_clock::now();
            cfg.use_emd = false;
            table1 = bench::run_experiment(cfg).table;
            table1_elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
            for (const auto& [key, msg] : table1.errors)
                std::cout << "  (cell error " << key << ": " << msg << ")\n";
        }
        if (wants(4)) criterion_table1(table1, table1_elapsed);
        if (wants(5)) criterion_rank(table1);
        if (wants(6)) {
            const auto t0 = std::chrono::steady_clock::now();
            cfg.use_emd = true;
            const bench::ResultTable table2 = bench::run_experiment(cfg).table;
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (const auto& [key, msg] : table2.errors)
                std::cout << "  (emd cell error " << key << ": " << msg << ")\n";
            criterion_emd_uplift(table1, table2, elapsed);
        }
        if (wants(7)) criterion_improvement_arithmetic();
        if (wants(8)) criterion_replay_determinism();
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance aborted: " << e.what() << std::endl;
        return 99;
    }
    return g_failures;
}
