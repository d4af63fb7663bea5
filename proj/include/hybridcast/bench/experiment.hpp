#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hybridcast/bench/dataset.hpp"
#include "hybridcast/decomp/emd.hpp"
#include "hybridcast/hybrid/pipeline.hpp"

namespace hybridcast::bench {

struct ExperimentConfig {
    std::vector<DatasetDescriptor> datasets;
    std::vector<hybrid::Method> methods;
    bool use_emd = false;
    bool causal_emd = false;
    int runs = 50;
    std::uint64_t seed_base = 0;
    std::string output_dir;
    mlp::TrainConfig train;
    decomp::EmdConfig emd;
};

/// (dataset, method, metric) -> aggregated value. Metric keys are "mae",
/// "mse", "mase"; MAE/MSE carry the dataset's report scale.
struct ResultTable {
    struct Cell {
        double mean = 0.0;
        double stddev = 0.0;
        bool operator==(const Cell&) const = default;
    };
    std::map<std::tuple<std::string, std::string, std::string>, Cell> cells;
    std::map<std::string, std::string> errors;  // "dataset/method" -> message
    std::string config_hash;
    std::uint64_t seed_base = 0;
};

/// Plot material retained per (dataset, method) cell.
struct CellArtifact {
    std::vector<double> actual;
    std::vector<double> forecast;  // mean forecast across runs
    std::map<std::string, double> diagnostics;
};

struct ExperimentOutput {
    ResultTable table;
    std::map<std::pair<std::string, std::string>, CellArtifact> artifacts;
};

/// Run every (dataset, method) pair of the configuration; failures are
/// recorded per cell and the run continues. Deterministic for a fixed
/// seed_base.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Percentage improvement 100*(base - improved)/base per matching cell
/// (means only). Cells missing a counterpart are omitted and listed in
/// `errors`.
ResultTable improvement_table(const ResultTable& base, const ResultTable& improved);

}  // namespace hybridcast::bench
