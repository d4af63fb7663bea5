#pragma once

#include <string>

#include "hybridcast/bench/experiment.hpp"

namespace hybridcast::bench {

/**
 * Parse the flat key-value experiment format:
 *
 *   runs = 50
 *   seed_base = 42
 *
 *   [dataset sunspot]
 *   path = data/sunspot.csv
 *   transform = none
 *   train_len = 221
 *   arima_order = 9,0,0
 *   ann_arch = 4x4
 *   proposed_lags = 4,2
 *
 *   [method arima]
 *   [method proposed]
 *
 * Unknown keys are rejected. `#` starts a comment.
 */
ExperimentConfig parse_config_text(const std::string& text);

ExperimentConfig parse_config_file(const std::string& path);

}  // namespace hybridcast::bench
