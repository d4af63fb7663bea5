#include "hybridcast/mlp/lag_matrix.hpp"

#include <algorithm>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::mlp {

LagMatrix build_lag_matrix(const std::vector<LagSource>& sources,
                           const std::vector<ExtraFeature>& extras) {
    if (sources.empty()) throw ConfigError("build_lag_matrix: at least one source required");
    const std::size_t n = sources[0].values.size();
    int max_lag = 0;
    std::size_t width = 0;
    for (const auto& s : sources) {
        if (s.values.size() != n)
            throw AlignmentError("build_lag_matrix: source '" + s.name +
                                 "' is not aligned with the target grid");
        if (s.lags < 0) throw BoundsError("build_lag_matrix: negative lag count");
        max_lag = std::max(max_lag, s.lags);
        width += static_cast<std::size_t>(s.lags);
    }
    for (const auto& e : extras) {
        if (e.values.size() != n)
            throw AlignmentError("build_lag_matrix: extra '" + e.name +
                                 "' is not aligned with the target grid");
    }
    width += extras.size();
    if (width == 0) throw ConfigError("build_lag_matrix: no features requested");
    if (static_cast<std::size_t>(max_lag) >= n)
        throw BoundsError("build_lag_matrix: lags exceed series length");

    LagMatrix m;
    m.width = width;
    m.first_target = static_cast<std::size_t>(max_lag);
    const std::size_t rows = n - m.first_target;
    m.data.reserve(rows * width);
    m.targets.reserve(rows);
    for (const auto& s : sources)
        for (int l = 1; l <= s.lags; ++l)
            m.feature_names.push_back(s.name + "[t-" + std::to_string(l) + "]");
    for (const auto& e : extras) m.feature_names.push_back(e.name + "[t]");

    for (std::size_t t = m.first_target; t < n; ++t) {
        for (const auto& s : sources)
            for (int l = 1; l <= s.lags; ++l)
                m.data.push_back(s.values[t - static_cast<std::size_t>(l)]);
        for (const auto& e : extras) m.data.push_back(e.values[t]);
        m.targets.push_back(sources[0].values[t]);
    }
    return m;
}

LagMatrix head_rows(const LagMatrix& m, std::size_t n_head) {
    if (n_head > m.rows()) throw BoundsError("head_rows: count exceeds rows");
    LagMatrix out;
    out.width = m.width;
    out.first_target = m.first_target;
    out.feature_names = m.feature_names;
    out.data.assign(m.data.begin(), m.data.begin() + static_cast<std::ptrdiff_t>(n_head * m.width));
    out.targets.assign(m.targets.begin(), m.targets.begin() + static_cast<std::ptrdiff_t>(n_head));
    return out;
}

LagMatrix tail_rows(const LagMatrix& m, std::size_t n_head) {
    if (n_head > m.rows()) throw BoundsError("tail_rows: offset exceeds rows");
    LagMatrix out;
    out.width = m.width;
    out.first_target = m.first_target + n_head;
    out.feature_names = m.feature_names;
    out.data.assign(m.data.begin() + static_cast<std::ptrdiff_t>(n_head * m.width), m.data.end());
    out.targets.assign(m.targets.begin() + static_cast<std::ptrdiff_t>(n_head), m.targets.end());
    return out;
}

}  // namespace hybridcast::mlp
