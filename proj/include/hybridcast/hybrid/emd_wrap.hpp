#pragma once

#include "hybridcast/decomp/emd.hpp"
#include "hybridcast/hybrid/pipeline.hpp"

namespace hybridcast::hybrid {

struct EmdWrapOptions {
    decomp::EmdConfig emd;
    /**
     * false: decompose train and test jointly (the convention of the
     * EMD-hybrid literature; sifting sees the whole series).
     * true: re-sift the history at every forecast origin so no future
     * observation influences the decomposition. Deterministic inner
     * pipelines only; far slower.
     */
    bool causal = false;
};

/**
 * Apply the inner pipeline independently to every intrinsic mode function
 * and the residue, then sum the per-component forecasts. Component models
 * are selected per component (fixed orders or architectures from the inner
 * spec are not inherited); ANN-bearing inner methods pair run r of every
 * component so per-run totals are well defined.
 */
PipelineResult emd_wrap(const PipelineSpec& inner, const core::TimeSeries& train,
                        const core::TimeSeries& test, const EmdWrapOptions& options = {});

}  // namespace hybridcast::hybrid
