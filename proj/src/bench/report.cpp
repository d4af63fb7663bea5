#include "hybridcast/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::bench {

namespace {

std::string format_full(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

void write_svg(const std::string& path, const CellArtifact& art, const std::string& title) {
    const std::size_t n = art.actual.size();
    if (n < 2) return;
    double lo = art.actual[0];
    double hi = art.actual[0];
    for (double v : art.actual) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : art.forecast) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) hi = lo + 1.0;

    constexpr double width = 720.0;
    constexpr double height = 360.0;
    constexpr double margin = 40.0;
    const auto px = [&](std::size_t i) {
        return margin + (width - 2 * margin) * static_cast<double>(i) /
                            static_cast<double>(n - 1);
    };
    const auto py = [&](double v) {
        return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo);
    };
    const auto path_of = [&](const std::vector<double>& ys) {
        std::ostringstream d;
        d.precision(6);
        for (std::size_t i = 0; i < ys.size(); ++i)
            d << (i == 0 ? "M" : " L") << px(i) << ' ' << py(ys[i]);
        return d.str();
    };

    std::ofstream out(path);
    if (!out) throw IoError("emit_report: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <text x=\"" << margin << "\" y=\"20\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << title << "</text>\n";
    out << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin
        << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    out << "  <path d=\"" << path_of(art.actual)
        << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    out << "  <path d=\"" << path_of(art.forecast)
        << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"4 2\"/>\n";
    out << "  <text x=\"" << width - margin - 150 << "\" y=\"20\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#1f77b4\">actual</text>\n";
    out << "  <text x=\"" << width - margin - 80 << "\" y=\"20\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#d62728\">forecast</text>\n";
    out << "</svg>\n";
}

}  // namespace

void emit_report(const ResultTable& table,
                 const std::map<std::pair<std::string, std::string>, CellArtifact>& artifacts,
                 const std::string& output_dir, const std::string& stem,
                 const ReportFormats& formats) {
    if (table.cells.empty()) throw ConfigError("emit_report: empty table");
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw IoError("emit_report: cannot create " + output_dir);
    const std::filesystem::path dir(output_dir);

    if (formats.csv) {
        std::ofstream out(dir / (stem + ".csv"));
        if (!out) throw IoError("emit_report: cannot write " + stem + ".csv");
        out << "dataset,method,metric,mean,std\n";
        for (const auto& [key, cell] : table.cells) {
            out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
                << format_full(cell.mean) << ',' << format_full(cell.stddev) << '\n';
        }
        if (!out) throw IoError("emit_report: write failure on " + stem + ".csv");
    }

    if (formats.json) {
        nlohmann::ordered_json root;
        root["provenance"]["config_hash"] = table.config_hash;
        root["provenance"]["seed_base"] = table.seed_base;
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (const auto& [key, cell] : table.cells) {
            nlohmann::ordered_json c;
            c["dataset"] = std::get<0>(key);
            c["method"] = std::get<1>(key);
            c["metric"] = std::get<2>(key);
            c["mean"] = cell.mean;
            c["std"] = cell.stddev;
            cells.push_back(c);
        }
        root["cells"] = cells;
        nlohmann::ordered_json errors = nlohmann::ordered_json::object();
        for (const auto& [key, message] : table.errors) errors[key] = message;
        root["errors"] = errors;
        std::ofstream out(dir / (stem + ".json"));
        if (!out) throw IoError("emit_report: cannot write " + stem + ".json");
        out << root.dump(2) << '\n';
    }

    if (formats.svg) {
        for (const auto& [key, art] : artifacts) {
            const std::string name = stem + "_" + key.first + "_" + key.second + ".svg";
            write_svg((dir / name).string(), art, key.first + " / " + key.second);
        }
    }
}

ResultTable read_result_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_result_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_result_csv: missing header");
    ResultTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string dataset, method, metric, mean, stddev;
        std::getline(row, dataset, ',');
        std::getline(row, method, ',');
        std::getline(row, metric, ',');
        std::getline(row, mean, ',');
        std::getline(row, stddev, ',');
        table.cells[{dataset, method, metric}] = {std::stod(mean), std::stod(stddev)};
    }
    return table;
}

}  // namespace hybridcast::bench
