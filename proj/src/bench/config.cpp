#include "hybridcast/bench/config.hpp"

#include <fstream>
#include <sstream>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::bench {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

long parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": '" + value + "'");
    }
}

double parse_real(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": '" + value + "'");
    }
}

std::pair<int, int> parse_pair(const std::string& value, char sep, const std::string& key) {
    const auto pos = value.find(sep);
    if (pos == std::string::npos)
        throw ConfigError("config: expected '" + std::string(1, sep) + "' in " + key + ": '" +
                          value + "'");
    return {static_cast<int>(parse_int(trim(value.substr(0, pos)), key)),
            static_cast<int>(parse_int(trim(value.substr(pos + 1)), key))};
}

void apply_dataset_key(DatasetDescriptor& d, const std::string& key, const std::string& value) {
    if (key == "path") {
        d.path = value;
    } else if (key == "transform") {
        d.transform = core::transform_from_string(value);
    } else if (key == "train_len") {
        d.train_len = static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "expected_len") {
        d.expected_len = static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "sha256") {
        d.sha256 = value;
    } else if (key == "arima_order") {
        if (value == "random_walk") {
            d.random_walk = true;
        } else {
            std::istringstream ss(value);
            int p = 0, dd = 0, q = 0;
            char c1 = 0, c2 = 0;
            ss >> p >> c1 >> dd >> c2 >> q;
            if (!ss || c1 != ',' || c2 != ',')
                throw ConfigError("config: arima_order expects p,d,q or random_walk: '" +
                                  value + "'");
            d.arima_order = arima::ArimaOrder{p, dd, q};
        }
    } else if (key == "ann_arch") {
        d.ann_arch = parse_pair(value, 'x', key);
    } else if (key == "proposed_lags") {
        d.proposed_lags = parse_pair(value, ',', key);
    } else if (key == "residual_lags") {
        d.residual_lags = static_cast<int>(parse_int(value, key));
    } else if (key == "fixed_ma_length") {
        d.fixed_ma_length = static_cast<int>(parse_int(value, key));
    } else if (key == "ma_max") {
        d.ma_max_length = static_cast<int>(parse_int(value, key));
    } else if (key == "report_scale") {
        d.report_scale = parse_real(value, key);
    } else if (key == "learning_rate") {
        d.learning_rate = parse_real(value, key);
    } else if (key == "max_epochs") {
        d.max_epochs = static_cast<int>(parse_int(value, key));
    } else if (key == "patience") {
        d.patience = static_cast<int>(parse_int(value, key));
    } else if (key == "validation_fraction") {
        d.validation_fraction = parse_real(value, key);
    } else {
        throw ConfigError("config: unknown dataset key '" + key + "'");
    }
}

void apply_global_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "runs") {
        cfg.runs = static_cast<int>(parse_int(value, key));
    } else if (key == "seed_base") {
        cfg.seed_base = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "output_dir") {
        cfg.output_dir = value;
    } else if (key == "use_emd") {
        cfg.use_emd = parse_int(value, key) != 0;
    } else if (key == "causal_emd") {
        cfg.causal_emd = parse_int(value, key) != 0;
    } else if (key == "learning_rate") {
        cfg.train.learning_rate = parse_real(value, key);
    } else if (key == "max_epochs") {
        cfg.train.max_epochs = static_cast<int>(parse_int(value, key));
    } else if (key == "patience") {
        cfg.train.patience = static_cast<int>(parse_int(value, key));
    } else if (key == "emd_sd_threshold") {
        cfg.emd.sd_threshold = parse_real(value, key);
    } else if (key == "emd_max_sifts") {
        cfg.emd.max_sift_iters = static_cast<int>(parse_int(value, key));
    } else if (key == "emd_max_imfs") {
        cfg.emd.max_imfs = static_cast<int>(parse_int(value, key));
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    DatasetDescriptor* current_dataset = nullptr;
    bool in_method_section = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: unterminated section at line " +
                                  std::to_string(line_no));
            const std::string header = trim(line.substr(1, line.size() - 2));
            const auto space = header.find(' ');
            const std::string kind = header.substr(0, space);
            const std::string name =
                (space == std::string::npos) ? "" : trim(header.substr(space + 1));
            if (kind == "dataset") {
                if (name.empty())
                    throw ConfigError("config: dataset section needs a name (line " +
                                      std::to_string(line_no) + ")");
                cfg.datasets.push_back(DatasetDescriptor{});
                cfg.datasets.back().name = name;
                current_dataset = &cfg.datasets.back();
                in_method_section = false;
            } else if (kind == "method") {
                cfg.methods.push_back(hybrid::method_from_string(name));
                current_dataset = nullptr;
                in_method_section = true;
            } else {
                throw ConfigError("config: unknown section '" + kind + "' at line " +
                                  std::to_string(line_no));
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (current_dataset) {
            apply_dataset_key(*current_dataset, key, value);
        } else if (in_method_section) {
            throw ConfigError("config: method sections take no keys (line " +
                              std::to_string(line_no) + ")");
        } else {
            apply_global_key(cfg, key, value);
        }
    }

    if (cfg.datasets.empty()) throw ConfigError("config: no [dataset ...] sections");
    if (cfg.methods.empty()) throw ConfigError("config: no [method ...] sections");
    for (const auto& d : cfg.datasets) {
        if (d.path.empty()) throw ConfigError("config: dataset " + d.name + " has no path");
        if (d.train_len == 0)
            throw ConfigError("config: dataset " + d.name + " has no train_len");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace hybridcast::bench
