#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hybridcast/core/metrics.hpp"

namespace hybridcast::mlp {

struct MultiRunResult {
    std::vector<core::MetricReport> per_run;  // seed order
    core::MetricReport mean;
    core::MetricReport stddev;  // population std over runs
};

/**
 * Execute `runs` independent trainings with seeds seed_base .. seed_base +
 * runs - 1 and average the resulting error metrics (metric averaging, not
 * forecast averaging). Runs may execute concurrently; results are reduced
 * in seed order so the report is replay-identical. A failing run aborts
 * the whole call with an error listing the failed seeds.
 */
MultiRunResult multi_run(const std::function<core::MetricReport(std::uint64_t)>& runner,
                         int runs, std::uint64_t seed_base);

}  // namespace hybridcast::mlp
