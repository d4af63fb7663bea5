#include "hybridcast/mlp/multi_run.hpp"

#include <cmath>
#include <string>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::mlp {

MultiRunResult multi_run(const std::function<core::MetricReport(std::uint64_t)>& runner,
                         int runs, std::uint64_t seed_base) {
    if (runs < 1) throw ConfigError("multi_run: runs must be at least 1");

    MultiRunResult out;
    out.per_run.assign(static_cast<std::size_t>(runs), core::MetricReport{});
    std::vector<std::string> failures(static_cast<std::size_t>(runs));
    std::vector<char> failed(static_cast<std::size_t>(runs), 0);

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(r);
        try {
            out.per_run[static_cast<std::size_t>(r)] = runner(seed);
        } catch (const std::exception& e) {
            failed[static_cast<std::size_t>(r)] = 1;
            failures[static_cast<std::size_t>(r)] = e.what();
        }
    }

    std::string failed_seeds;
    for (int r = 0; r < runs; ++r) {
        if (failed[static_cast<std::size_t>(r)]) {
            if (!failed_seeds.empty()) failed_seeds += ", ";
            failed_seeds += std::to_string(seed_base + static_cast<std::uint64_t>(r)) + " (" +
                            failures[static_cast<std::size_t>(r)] + ")";
        }
    }
    if (!failed_seeds.empty())
        throw Error("multi_run: failed seeds: " + failed_seeds);

    const double dn = static_cast<double>(runs);
    double mae = 0.0, mse = 0.0, mase = 0.0;
    for (const auto& m : out.per_run) {
        mae += m.mae;
        mse += m.mse;
        mase += m.mase;
    }
    out.mean.mae = mae / dn;
    out.mean.mse = mse / dn;
    out.mean.mase = mase / dn;
    out.mean.n = out.per_run.front().n;

    double v_mae = 0.0, v_mse = 0.0, v_mase = 0.0;
    for (const auto& m : out.per_run) {
        v_mae += (m.mae - out.mean.mae) * (m.mae - out.mean.mae);
        v_mse += (m.mse - out.mean.mse) * (m.mse - out.mean.mse);
        v_mase += (m.mase - out.mean.mase) * (m.mase - out.mean.mase);
    }
    out.stddev.mae = std::sqrt(v_mae / dn);
    out.stddev.mse = std::sqrt(v_mse / dn);
    out.stddev.mase = std::sqrt(v_mase / dn);
    out.stddev.n = out.mean.n;
    return out;
}

}  // namespace hybridcast::mlp
