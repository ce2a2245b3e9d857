#pragma once

// Independent reference implementations used as test oracles. These stay
// deliberately naive (brute force, exhaustive enumeration, textbook formulas)
// and share no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Textbook Gaussian elimination without pivoting tricks shared with the
/// library (uses full pivot row swaps and long doubles).
inline std::vector<double> solve_dense(std::vector<std::vector<long double>> a,
                                       std::vector<long double> b) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = i;
        for (std::size_t r = i + 1; r < n; ++r)
            if (std::fabs(static_cast<double>(a[r][i])) >
                std::fabs(static_cast<double>(a[best][i])))
                best = r;
        std::swap(a[i], a[best]);
        std::swap(b[i], b[best]);
        if (a[i][i] == 0.0L) throw std::runtime_error("oracle solve: singular");
        for (std::size_t r = i + 1; r < n; ++r) {
            const long double f = a[r][i] / a[i][i];
            for (std::size_t c = i; c < n; ++c) a[r][c] -= f * a[i][c];
            b[r] -= f * b[i];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * static_cast<long double>(x[c]);
        x[i] = static_cast<double>(acc / a[i][i]);
    }
    return x;
}

/// Normal-equations AR(p) fit: beta = (X'X)^-1 X'y with intercept first.
inline std::vector<double> ar_normal_equations(const std::vector<double>& series,
                                               std::size_t p) {
    const std::size_t n = series.size();
    const std::size_t dim = p + 1;
    std::vector<std::vector<long double>> ata(dim, std::vector<long double>(dim, 0.0L));
    std::vector<long double> atb(dim, 0.0L);
    for (std::size_t t = p; t < n; ++t) {
        std::vector<long double> row(dim);
        row[0] = 1.0L;
        for (std::size_t j = 0; j < p; ++j) row[j + 1] = series[t - 1 - j];
        for (std::size_t a = 0; a < dim; ++a) {
            atb[a] += row[a] * static_cast<long double>(series[t]);
            for (std::size_t b2 = 0; b2 < dim; ++b2) ata[a][b2] += row[a] * row[b2];
        }
    }
    return solve_dense(std::move(ata), std::move(atb));
}

/// Brute-force two-window mean-difference scan; returns the index with the
/// largest |mean(after) - mean(before)| / pooled std above the threshold.
inline std::optional<std::size_t> brute_force_best_shift(const std::vector<double>& xs,
                                                         std::size_t w, double threshold) {
    std::optional<std::size_t> best;
    double best_score = threshold;
    for (std::size_t i = w; i + w <= xs.size(); ++i) {
        double ml = 0, mr = 0;
        for (std::size_t j = i - w; j < i; ++j) ml += xs[j];
        for (std::size_t j = i; j < i + w; ++j) mr += xs[j];
        ml /= static_cast<double>(w);
        mr /= static_cast<double>(w);
        double vl = 0, vr = 0;
        for (std::size_t j = i - w; j < i; ++j) vl += (xs[j] - ml) * (xs[j] - ml);
        for (std::size_t j = i; j < i + w; ++j) vr += (xs[j] - mr) * (xs[j] - mr);
        vl /= static_cast<double>(w);
        vr /= static_cast<double>(w);
        const double pooled = std::max(std::sqrt(0.5 * (vl + vr)), 1e-9);
        const double score = std::fabs(mr - ml) / pooled;
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

/// Exhaustive strict-extremum check over a full +-e neighborhood.
struct OracleExtremum {
    std::size_t index;
    bool is_max;
};
inline std::vector<OracleExtremum> exhaustive_extrema(const std::vector<double>& xs,
                                                      std::size_t e) {
    std::vector<OracleExtremum> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i < e || i + e >= xs.size()) continue;
        bool mx = true, mn = true;
        for (std::size_t j = i - e; j <= i + e; ++j) {
            if (j == i) continue;
            if (xs[j] >= xs[i]) mx = false;
            if (xs[j] <= xs[i]) mn = false;
        }
        if (mx) out.push_back({i, true});
        if (mn) out.push_back({i, false});
    }
    return out;
}

/// Maximum one-to-one matching between extrema sets (same polarity, within
/// tolerance) by exhaustive backtracking. Feasible for the bundled fixtures.
inline std::size_t optimal_extrema_matching(const std::vector<OracleExtremum>& forecast,
                                            const std::vector<OracleExtremum>& truth,
                                            std::size_t tolerance) {
    std::vector<bool> used(truth.size(), false);
    std::size_t best = 0;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t fi, std::size_t matched) {
        if (fi == forecast.size()) {
            best = std::max(best, matched);
            return;
        }
        rec(fi + 1, matched);  // leave forecast[fi] unmatched
        for (std::size_t ti = 0; ti < truth.size(); ++ti) {
            if (used[ti]) continue;
            if (truth[ti].is_max != forecast[fi].is_max) continue;
            const std::size_t a = forecast[fi].index, b = truth[ti].index;
            if ((a >= b ? a - b : b - a) > tolerance) continue;
            used[ti] = true;
            rec(fi + 1, matched + 1);
            used[ti] = false;
        }
    };
    rec(0, 0);
    return best;
}

/// Ordinal-pattern histogram entropy, built with an explicit rank table
/// instead of argsort. Ties take earlier-index-smaller-rank.
inline double histogram_permutation_entropy(const std::vector<double>& xs, std::size_t m,
                                            std::size_t tau) {
    const std::size_t span = (m - 1) * tau;
    std::map<std::vector<std::size_t>, std::size_t> counts;
    const std::size_t n_patterns = xs.size() - span;
    for (std::size_t s = 0; s < n_patterns; ++s) {
        std::vector<std::size_t> rank(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                const double vi = xs[s + i * tau], vj = xs[s + j * tau];
                if (vj < vi || (vj == vi && j < i)) ++rank[i];
            }
        }
        ++counts[rank];
    }
    double h = 0.0;
    for (const auto& [pattern, c] : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(n_patterns);
        h -= p * std::log(p);
    }
    double log_mf = 0.0;
    for (std::size_t i = 2; i <= m; ++i) log_mf += std::log(static_cast<double>(i));
    return h / log_mf;
}

}  // namespace oracles
