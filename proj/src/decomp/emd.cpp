#include "hybridcast/decomp/emd.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcast/core/errors.hpp"
#include "hybridcast/decomp/spline.hpp"

namespace hybridcast::decomp {

ExtremaSet find_extrema(std::span<const double> y) {
    ExtremaSet out;
    const std::size_t n = y.size();
    if (n < 3) return out;

    std::size_t i = 1;
    while (i + 1 < n) {
        const double dl = y[i] - y[i - 1];
        if (dl == 0.0) {
            ++i;
            continue;
        }
        // Plateaus report their midpoint.
        std::size_t j = i;
        while (j + 1 < n && y[j + 1] == y[j]) ++j;
        if (j + 1 >= n) break;
        const double dr = y[j + 1] - y[j];
        const std::size_t mid = (i + j) / 2;
        if (dl > 0.0 && dr < 0.0) out.maxima.push_back(mid);
        if (dl < 0.0 && dr > 0.0) out.minima.push_back(mid);
        i = j + 1;
    }
    return out;
}

std::size_t zero_crossings(std::span<const double> y) {
    std::size_t count = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (double v : y) {
        if (v == 0.0) continue;
        if (have_prev && ((prev > 0.0) != (v > 0.0))) ++count;
        prev = v;
        have_prev = true;
    }
    return count;
}

namespace {

// Envelope through the given extrema with two extrema mirrored across each
// boundary; sampled on the integer grid 0..n-1.
std::vector<double> envelope(std::span<const double> y, const std::vector<std::size_t>& idx,
                             std::size_t n) {
    std::vector<double> xs;
    std::vector<double> vs;
    const std::size_t k = idx.size();
    const std::size_t mirror = std::min<std::size_t>(2, k);

    // Left mirror: reflect about x = 0.
    for (std::size_t m = mirror; m-- > 0;) {
        xs.push_back(-static_cast<double>(idx[m]));
        vs.push_back(y[idx[m]]);
    }
    for (std::size_t m = 0; m < k; ++m) {
        xs.push_back(static_cast<double>(idx[m]));
        vs.push_back(y[idx[m]]);
    }
    // Right mirror: reflect about x = n-1.
    const double right = static_cast<double>(n - 1);
    for (std::size_t m = 0; m < mirror; ++m) {
        const std::size_t src = k - 1 - m;
        xs.push_back(2.0 * right - static_cast<double>(idx[src]));
        vs.push_back(y[idx[src]]);
    }

    // Mirrored knots can collide when an extremum sits exactly on the
    // boundary; drop duplicates.
    std::vector<double> cx, cv;
    for (std::size_t m = 0; m < xs.size(); ++m) {
        if (!cx.empty() && xs[m] <= cx.back()) continue;
        cx.push_back(xs[m]);
        cv.push_back(vs[m]);
    }

    const CubicSpline spline(cx, cv);
    return spline.sample_grid(n);
}

}  // namespace

EmdResult emd(std::span<const double> y, const EmdConfig& config) {
    const std::size_t n = y.size();
    if (n < 8) throw InsufficientDataError("emd: need at least 8 samples");
    if (config.sd_threshold <= 0.0 || config.sd_threshold > 1.0)
        throw BoundsError("emd: sd_threshold must lie in (0, 1]");
    if (config.max_sift_iters < 1) throw BoundsError("emd: max_sift_iters must be at least 1");
    {
        const double first = y[0];
        bool constant = true;
        for (double v : y)
            if (v != first) {
                constant = false;
                break;
            }
        if (constant) throw DegenerateInputError("emd: constant series");
    }

    EmdResult result;
    result.residue.assign(y.begin(), y.end());

    for (int imf_index = 0; imf_index < config.max_imfs; ++imf_index) {
        const ExtremaSet ext = find_extrema(result.residue);
        if (ext.maxima.size() + ext.minima.size() < 2) break;
        if (ext.maxima.size() < 2 || ext.minima.size() < 2) break;

        std::vector<double> h = result.residue;
        int sifts = 0;
        while (sifts < config.max_sift_iters) {
            const ExtremaSet he = find_extrema(h);
            if (he.maxima.size() < 2 || he.minima.size() < 2) break;
            const std::vector<double> upper = envelope(h, he.maxima, n);
            const std::vector<double> lower = envelope(h, he.minima, n);

            // Huang's pointwise criterion SD = sum_t (h_k-1 - h_k)^2 / h_k-1^2,
            // with the denominator floored at a fraction of the mode's scale
            // so zero crossings cannot inflate the sum indefinitely.
            double h_scale = 0.0;
            for (std::size_t t = 0; t < n; ++t) h_scale = std::max(h_scale, std::abs(h[t]));
            const double floor_sq = 1e-4 * h_scale * h_scale + 1e-300;
            double sd = 0.0;
            std::vector<double> next(n, 0.0);
            for (std::size_t t = 0; t < n; ++t) {
                const double m = 0.5 * (upper[t] + lower[t]);
                next[t] = h[t] - m;
                sd += (m * m) / (h[t] * h[t] + floor_sq);
            }
            h = std::move(next);
            ++sifts;
            if (sd < config.sd_threshold) break;
        }

        for (std::size_t t = 0; t < n; ++t) result.residue[t] -= h[t];
        result.imfs.push_back(std::move(h));
        result.sift_counts.push_back(sifts);
    }

    return result;
}

}  // namespace hybridcast::decomp
