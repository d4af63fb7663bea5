#include "hybridcast/core/time_series.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::core {

std::string to_string(Transform t) {
    switch (t) {
        case Transform::None: return "none";
        case Transform::Log10: return "log-base10";
        case Transform::LogNatural: return "log-natural";
    }
    return "none";
}

Transform transform_from_string(const std::string& s) {
    if (s == "none" || s.empty()) return Transform::None;
    if (s == "log-base10" || s == "log10") return Transform::Log10;
    if (s == "log-natural" || s == "log" || s == "ln") return Transform::LogNatural;
    throw ConfigError("unknown transform tag: " + s);
}

TimeSeries make_series(std::vector<double> values, std::vector<double> labels, std::string name,
                       Transform transform) {
    if (values.empty()) throw InsufficientDataError("series must contain at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw DomainError("non-finite value at index " + std::to_string(i));
    }
    if (!labels.empty()) {
        if (labels.size() != values.size())
            throw ShapeError("labels and values must have equal length");
        for (std::size_t i = 1; i < labels.size(); ++i) {
            if (!(labels[i] > labels[i - 1]))
                throw DomainError("labels must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
    }
    TimeSeries s;
    s.values = std::move(values);
    s.labels = std::move(labels);
    s.name = std::move(name);
    s.transform = transform;
    return s;
}

TimeSeries apply_transform(const TimeSeries& series, Transform kind) {
    if (kind == Transform::None) return series;
    if (series.transform != Transform::None)
        throw DomainError("series already carries a transform: " + to_string(series.transform));
    TimeSeries out = series;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double v = out.values[i];
        if (v <= 0.0)
            throw DomainError("logarithmic transform requires positive values; offending index " +
                              std::to_string(i));
        out.values[i] = (kind == Transform::Log10) ? std::log10(v) : std::log(v);
    }
    out.transform = kind;
    return out;
}

TimeSeries inverse_transform(const TimeSeries& series) {
    if (series.transform == Transform::None) return series;
    TimeSeries out = series;
    for (double& v : out.values)
        v = (series.transform == Transform::Log10) ? std::pow(10.0, v) : std::exp(v);
    out.transform = Transform::None;
    return out;
}

std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, const SplitSpec& spec) {
    const std::size_t n = series.size();
    if (spec.train_len < 1 || spec.train_len >= n)
        throw BoundsError("split: train_len must satisfy 1 <= train_len < length");
    TimeSeries train, test;
    train.name = series.name;
    test.name = series.name;
    train.transform = series.transform;
    test.transform = series.transform;
    train.values.assign(series.values.begin(),
                        series.values.begin() + static_cast<std::ptrdiff_t>(spec.train_len));
    test.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(spec.train_len),
                       series.values.end());
    if (series.has_labels()) {
        train.labels.assign(series.labels.begin(),
                            series.labels.begin() + static_cast<std::ptrdiff_t>(spec.train_len));
        test.labels.assign(series.labels.begin() + static_cast<std::ptrdiff_t>(spec.train_len),
                           series.labels.end());
    }
    return {std::move(train), std::move(test)};
}

TimeSeries read_csv(const std::string& path, std::string name) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": missing header row");
    std::vector<double> labels;
    std::vector<double> values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(path + ": row " + std::to_string(row) + " has no comma");
        try {
            labels.push_back(std::stod(line.substr(0, comma)));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError(path + ": parse failure at row " + std::to_string(row));
        }
    }
    if (values.empty()) throw IoError(path + ": no data rows");
    if (name.empty()) name = path;
    return make_series(std::move(values), std::move(labels), std::move(name));
}

void write_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "label,value\n";
    out.precision(17);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double label = series.has_labels() ? series.labels[i] : static_cast<double>(i);
        out << label << ',' << series.values[i] << '\n';
    }
    if (!out) throw IoError("write failure on " + path);
}

}  // namespace hybridcast::core
