#pragma once

#include <string>

#include "hybridcast/bench/experiment.hpp"

namespace hybridcast::bench {

struct ReportFormats {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

/**
 * Write the result table to `<dir>/<stem>.csv` and `<dir>/<stem>.json`
 * (full precision, deterministic ordering, provenance embedded in the
 * JSON) plus one `<stem>_<dataset>_<method>.svg` actual-vs-forecast plot
 * per artifact cell.
 */
void emit_report(const ResultTable& table,
                 const std::map<std::pair<std::string, std::string>, CellArtifact>& artifacts,
                 const std::string& output_dir, const std::string& stem,
                 const ReportFormats& formats = {});

/// Re-read a CSV emitted by emit_report.
ResultTable read_result_csv(const std::string& path);

}  // namespace hybridcast::bench
