#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridcast/bench/config.hpp"
#include "hybridcast/bench/report.hpp"
#include "hybridcast/core/adf.hpp"
#include "hybridcast/core/errors.hpp"
#include "hybridcast/decomp/emd.hpp"
#include "hybridcast/decomp/ma_filter.hpp"
#include "hybridcast/hybrid/emd_wrap.hpp"
#include "hybridcast/mlp/mlp.hpp"

namespace {

using namespace hybridcast;

std::string default_output_dir() {
    const char* env = std::getenv("HYBRIDCAST_OUT");
    return env ? std::string(env) : std::string("out");
}

core::TimeSeries load_series(const std::string& path, const std::string& transform) {
    core::TimeSeries s = core::read_csv(path);
    return core::apply_transform(s, core::transform_from_string(transform));
}

int cmd_adf(const std::string& path, const std::string& transform, int max_lag,
            const std::string& policy) {
    const core::TimeSeries s = load_series(path, transform);
    core::AdfLagPolicy p = core::AdfLagPolicy::SchwertTStat;
    if (policy == "aic") p = core::AdfLagPolicy::Aic;
    else if (policy == "fixed") p = core::AdfLagPolicy::Fixed;
    else if (policy != "schwert") throw ConfigError("adf: unknown lag policy " + policy);
    const core::AdfResult r = core::adf_test(
        s.values, max_lag > 0 ? std::optional<int>(max_lag) : std::nullopt, p);
    std::cout << "statistic " << r.statistic << "\n"
              << "p_value " << r.p_value << "\n"
              << "lags_used " << r.lags_used << "\n"
              << "n_obs " << r.n_obs << "\n";
    return 0;
}

int cmd_decompose(const std::string& path, const std::string& transform, const std::string& rule,
                  const std::string& out_path) {
    const core::TimeSeries s = load_series(path, transform);
    int m = 0;
    if (rule == "adf") {
        m = decomp::find_ma_length_adf(s.values).m;
    } else if (rule == "kurtosis") {
        m = decomp::find_ma_length_kurtosis(s.values).m;
    } else if (rule.rfind("fixed:", 0) == 0) {
        m = std::stoi(rule.substr(6));
    } else {
        throw ConfigError("decompose: rule must be adf, kurtosis, or fixed:<m>");
    }
    const decomp::MaDecomposition dec = decomp::ma_filter(s.values, m);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw IoError("decompose: cannot write " + out_path);
        out = &file;
    }
    out->precision(17);
    *out << "label,value,linear,residual\n";
    for (std::size_t k = 0; k < dec.linear_part.size(); ++k) {
        const std::size_t t = dec.offset + k;
        const double label = s.has_labels() ? s.labels[t] : static_cast<double>(t);
        *out << label << ',' << s.values[t] << ',' << dec.linear_part[k] << ','
             << dec.residual_part[k] << '\n';
    }
    std::cerr << "m " << m << "\n";
    return 0;
}

int cmd_emd(const std::string& path, const std::string& transform, double sd_threshold,
            int max_sifts, int max_imfs, const std::string& out_path) {
    const core::TimeSeries s = load_series(path, transform);
    decomp::EmdConfig cfg;
    cfg.sd_threshold = sd_threshold;
    cfg.max_sift_iters = max_sifts;
    cfg.max_imfs = max_imfs;
    const decomp::EmdResult r = decomp::emd(s.values, cfg);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw IoError("emd: cannot write " + out_path);
        out = &file;
    }
    out->precision(17);
    *out << "label,value";
    for (std::size_t i = 0; i < r.imfs.size(); ++i) *out << ",imf" << (i + 1);
    *out << ",residue\n";
    for (std::size_t t = 0; t < s.size(); ++t) {
        const double label = s.has_labels() ? s.labels[t] : static_cast<double>(t);
        *out << label << ',' << s.values[t];
        for (const auto& imf : r.imfs) *out << ',' << imf[t];
        *out << ',' << r.residue[t] << '\n';
    }
    std::cerr << "imfs " << r.imfs.size() << "\n";
    return 0;
}

struct TrainFlags {
    double lr = 0.0;
    int epochs = 0;
    int patience = 0;
    double val_fraction = -1.0;
    std::string trainer;
};

hybrid::PipelineSpec spec_from_flags(const std::string& method, const std::string& order,
                                     const std::string& arch, int runs, std::uint64_t seed,
                                     const TrainFlags& tf = {}, const std::string& lags = "",
                                     const std::string& ma_rule = "") {
    hybrid::PipelineSpec spec;
    spec.method = hybrid::method_from_string(method);
    if (!order.empty()) {
        if (order == "random_walk") {
            spec.random_walk = true;
        } else {
            int p = 0, d = 0, q = 0;
            if (std::sscanf(order.c_str(), "%d,%d,%d", &p, &d, &q) != 3)
                throw ConfigError("--order expects p,d,q or random_walk");
            spec.arima_order = arima::ArimaOrder{p, d, q};
        }
    }
    if (!arch.empty()) {
        int n = 0, h = 0;
        if (std::sscanf(arch.c_str(), "%dx%d", &n, &h) != 2)
            throw ConfigError("--arch expects NxH");
        spec.ann_arch = {n, h};
        spec.ann_hidden = h;
    }
    if (!lags.empty()) {
        int a = 0, b = 0;
        if (std::sscanf(lags.c_str(), "%d,%d", &a, &b) != 2)
            throw ConfigError("--lags expects a,b");
        spec.proposed_lags = {a, b};
    }
    if (!ma_rule.empty()) {
        if (ma_rule == "adf") spec.ma_rule = hybrid::MaRule::Adf;
        else if (ma_rule == "kurtosis") spec.ma_rule = hybrid::MaRule::Kurtosis;
        else if (ma_rule.rfind("fixed:", 0) == 0) {
            spec.ma_rule = hybrid::MaRule::Fixed;
            spec.fixed_ma_length = std::stoi(ma_rule.substr(6));
        } else throw ConfigError("--ma-rule expects adf, kurtosis, or fixed:<m>");
    }
    spec.runs = runs;
    spec.seed_base = seed;
    if (tf.lr > 0.0) spec.train.learning_rate = tf.lr;
    if (tf.epochs > 0) spec.train.max_epochs = tf.epochs;
    if (tf.patience > 0) spec.train.patience = tf.patience;
    if (tf.val_fraction >= 0.0) spec.validation_fraction = tf.val_fraction;
    if (tf.trainer == "lm") spec.train.algorithm = mlp::Trainer::LevenbergMarquardt;
    else if (tf.trainer == "adam") spec.train.algorithm = mlp::Trainer::AdaptiveMoment;
    else if (!tf.trainer.empty()) throw ConfigError("--trainer expects lm or adam");
    return spec;
}

int cmd_fit(const std::string& path, const std::string& transform, const std::string& method,
            const std::string& order, const std::string& arch, std::size_t train_len, int runs,
            std::uint64_t seed) {
    core::TimeSeries s = load_series(path, transform);
    if (train_len == 0) train_len = s.size() * 8 / 10;
    const auto [train, test] = core::split(s, {train_len, 0.2});
    const hybrid::PipelineSpec spec = spec_from_flags(method, order, arch, runs, seed);
    const hybrid::PreparedPipeline prepared = hybrid::prepare_pipeline(train, test, spec);
    std::cout << "method " << method << "\n";
    for (const auto& [key, value] : prepared.diagnostics)
        std::cout << key << ' ' << value << "\n";
    return 0;
}

int cmd_forecast(const std::string& path, const std::string& transform,
                 const std::string& method, const std::string& order, const std::string& arch,
                 std::size_t train_len, int runs, std::uint64_t seed, bool use_emd,
                 bool causal, const std::string& out_path, const TrainFlags& tf,
                 const std::string& lags, const std::string& ma_rule) {
    core::TimeSeries s = load_series(path, transform);
    if (train_len == 0) train_len = s.size() * 8 / 10;
    const auto [train, test] = core::split(s, {train_len, 0.2});
    const hybrid::PipelineSpec spec =
        spec_from_flags(method, order, arch, runs, seed, tf, lags, ma_rule);

    hybrid::PipelineResult res;
    if (use_emd) {
        hybrid::EmdWrapOptions opts;
        opts.causal = causal;
        res = hybrid::emd_wrap(spec, train, test, opts);
    } else {
        res = hybrid::run_pipeline(train, test, spec);
    }

    std::cout.precision(10);
    std::cout << "n " << res.metrics_mean.n << "\n"
              << "mae " << res.metrics_mean.mae << " (std " << res.metrics_std.mae << ")\n"
              << "mse " << res.metrics_mean.mse << " (std " << res.metrics_std.mse << ")\n"
              << "mase " << res.metrics_mean.mase << " (std " << res.metrics_std.mase << ")\n";
    for (const auto& [key, value] : res.diagnostics) std::cout << key << ' ' << value << "\n";

    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw IoError("forecast: cannot write " + out_path);
        file.precision(17);
        file << "label,actual,forecast\n";
        for (std::size_t i = 0; i < test.size(); ++i) {
            const double label =
                test.has_labels() ? test.labels[i] : static_cast<double>(train_len + i);
            file << label << ',' << test.values[i] << ',' << res.mean_forecast[i] << '\n';
        }
    }
    return 0;
}

int cmd_bench(const std::string& config_path, bool emd_flag, int runs_override,
              std::optional<std::uint64_t> seed_override, std::string out_dir) {
    bench::ExperimentConfig cfg = bench::parse_config_file(config_path);
    if (runs_override > 0) cfg.runs = runs_override;
    if (seed_override) cfg.seed_base = *seed_override;
    if (out_dir.empty()) out_dir = cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir;

    cfg.use_emd = false;
    const bench::ExperimentOutput base = bench::run_experiment(cfg);
    bench::emit_report(base.table, base.artifacts, out_dir, "results");
    for (const auto& [key, message] : base.table.errors)
        std::cerr << "cell error: " << key << ": " << message << "\n";

    if (emd_flag) {
        cfg.use_emd = true;
        const bench::ExperimentOutput emd = bench::run_experiment(cfg);
        bench::emit_report(emd.table, emd.artifacts, out_dir, "results_emd");
        const bench::ResultTable imp = bench::improvement_table(base.table, emd.table);
        bench::emit_report(imp, {}, out_dir, "improvement",
                           bench::ReportFormats{true, true, false});
        for (const auto& [key, message] : emd.table.errors)
            std::cerr << "emd cell error: " << key << ": " << message << "\n";
    }
    std::cout << "wrote " << out_dir << "\n";
    return (base.table.errors.empty()) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybridcast: ARIMA-ANN hybrid time-series forecasting benchmark"};
    app.require_subcommand(1);

    std::string path, transform = "none", rule = "adf", out_path, policy = "schwert";
    std::string method = "arima", order, arch, config_path, out_dir;
    int max_lag = 0, runs = 1, max_sifts = 100, max_imfs = 16, runs_override = 0;
    double sd_threshold = 0.2;
    std::size_t train_len = 0;
    std::uint64_t seed = 0;
    bool use_emd = false, causal = false;
    std::optional<std::uint64_t> seed_override;

    auto* adf = app.add_subcommand("adf", "Unit-root test of a CSV series");
    adf->add_option("csv", path)->required();
    adf->add_option("--transform", transform);
    adf->add_option("--max-lag", max_lag);
    adf->add_option("--policy", policy)->check(CLI::IsMember({"schwert", "aic", "fixed"}));

    auto* dec = app.add_subcommand("decompose", "Trailing moving-average decomposition");
    dec->add_option("csv", path)->required();
    dec->add_option("--transform", transform);
    dec->add_option("--rule", rule);
    dec->add_option("--out", out_path);

    auto* emd = app.add_subcommand("emd", "Empirical mode decomposition");
    emd->add_option("csv", path)->required();
    emd->add_option("--transform", transform);
    emd->add_option("--sd-threshold", sd_threshold);
    emd->add_option("--max-sifts", max_sifts);
    emd->add_option("--max-imfs", max_imfs);
    emd->add_option("--out", out_path);

    auto* fit = app.add_subcommand("fit", "Fit a pipeline and print its diagnostics");
    fit->add_option("csv", path)->required();
    fit->add_option("--transform", transform);
    fit->add_option("--method", method)->required();
    fit->add_option("--order", order);
    fit->add_option("--arch", arch);
    fit->add_option("--train-len", train_len);
    fit->add_option("--runs", runs);
    fit->add_option("--seed", seed);

    TrainFlags tf;
    auto* fc = app.add_subcommand("forecast", "Rolling one-step forecasts over a split");
    fc->add_option("csv", path)->required();
    fc->add_option("--transform", transform);
    fc->add_option("--method", method)->required();
    fc->add_option("--order", order);
    fc->add_option("--arch", arch);
    fc->add_option("--train-len", train_len);
    fc->add_option("--runs", runs);
    fc->add_option("--seed", seed);
    fc->add_option("--lr", tf.lr);
    fc->add_option("--epochs", tf.epochs);
    fc->add_option("--patience", tf.patience);
    fc->add_option("--val-fraction", tf.val_fraction);
    fc->add_option("--trainer", tf.trainer);
    std::string lags, cli_ma_rule;
    fc->add_option("--lags", lags);
    fc->add_option("--ma-rule", cli_ma_rule);
    fc->add_flag("--emd", use_emd);
    fc->add_flag("--causal", causal);
    fc->add_option("--out", out_path);

    auto* bench_cmd = app.add_subcommand("bench", "Reproduce the comparison tables");
    bench_cmd->add_option("--config", config_path)->required();
    bench_cmd->add_flag("--emd", use_emd);
    bench_cmd->add_option("--runs", runs_override);
    bench_cmd->add_option_function<std::uint64_t>(
        "--seed", [&seed_override](std::uint64_t v) { seed_override = v; });
    bench_cmd->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
        if (adf->parsed()) return cmd_adf(path, transform, max_lag, policy);
        if (dec->parsed()) return cmd_decompose(path, transform, rule, out_path);
        if (emd->parsed())
            return cmd_emd(path, transform, sd_threshold, max_sifts, max_imfs, out_path);
        if (fit->parsed())
            return cmd_fit(path, transform, method, order, arch, train_len, runs, seed);
        if (fc->parsed())
            return cmd_forecast(path, transform, method, order, arch, train_len, runs, seed,
                                use_emd, causal, out_path, tf, lags, cli_ma_rule);
        if (bench_cmd->parsed())
            return cmd_bench(config_path, use_emd, runs_override, seed_override, out_dir);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hybridcast::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hybridcast::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const hybridcast::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
