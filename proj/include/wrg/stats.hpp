#pragma once

// Rank correlation and saturation-curve fitting over per-text profiles.
//
// spearman() ranks both inputs with midrank ties and returns the Pearson
// correlation of the ranks; constant input yields 0. P-values use the
// t approximation, with the Student tail evaluated through a regularized
// incomplete beta continued fraction (absolute error well below 1e-10).
// A seeded Monte-Carlo permutation p-value is available for small samples.
//
// fit_asymptotic() fits y = f0 + (f_inf - f0) * (1 - exp(-t/T)). For fixed
// T the model is linear in (f0, f_inf), so the fit profiles T over a dense
// grid with a closed-form solve per cell and polishes the best cell with
// golden-section search. When the data carry no information about T
// (constant input, or a best fit with f_inf ~= f0) the result is flagged
// unidentifiable and T is reported as 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrg/error.hpp"
#include "wrg/graph.hpp"
#include "wrg/pipeline.hpp"

namespace wrg {

inline constexpr double kSignificanceAlpha = 0.05 / 7.0;  // Bonferroni over the 7 attributes

struct CorrelationResult {
    std::string attribute;
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool significant = false;
    bool degenerate = false;  // a constant input made rho undefined; reported as 0
};

struct FitResult {
    std::string attribute;
    double f0 = 0.0;
    double f_inf = 0.0;
    double time_constant = 0.0;  // meaningful only when identifiable
    double r_squared = 0.0;
    double mse = 0.0;
    bool identifiable = false;
};

struct FitPoint {
    double t;  // recommended year
    double y;  // attribute value
};

namespace detail {

/// Fractional midranks, ties averaged.
inline std::vector<double> midranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && v[order[j]] == v[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j - 1) + 1.0;  // 1-based midrank
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline double beta_cont_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_fraction(a, b, x) / a;
    return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

/// Two-sided Student tail P(|T_df| >= t).
inline double student_two_sided(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

}  // namespace detail

/// Spearman rank correlation with midrank ties. Returns 0 when either
/// input is constant (the coefficient is undefined there).
inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman: need at least 3 observations");
    const auto rx = detail::midranks(x);
    const auto ry = detail::midranks(y);
    return detail::pearson(rx, ry);
}

/// Two-sided p-value for a Spearman coefficient via the t approximation
/// with n - 2 degrees of freedom.
inline double spearman_pvalue(double rho, std::size_t n) {
    if (n < 3) throw std::invalid_argument("spearman_pvalue: need n >= 3");
    if (!(std::fabs(rho) <= 1.0 + 1e-12)) throw std::invalid_argument("spearman_pvalue: |rho| > 1");
    rho = std::clamp(rho, -1.0, 1.0);
    if (std::fabs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t2 = rho * rho * df / (1.0 - rho * rho);
    return detail::incomplete_beta(0.5 * df, 0.5, df / (df + t2));
}

/// Seeded Monte-Carlo permutation p-value (two-sided), suitable for small n
/// where the t approximation is rough.
inline double spearman_pvalue_permutation(std::span<const double> x, std::span<const double> y,
                                          int shuffles, std::uint64_t seed) {
    if (shuffles < 1) throw std::invalid_argument("permutation test: need at least one shuffle");
    const double observed = std::fabs(spearman(x, y));
    std::vector<double> perm(y.begin(), y.end());
    std::mt19937_64 rng(seed);
    int at_least = 0;
    for (int s = 0; s < shuffles; ++s) {
        std::shuffle(perm.begin(), perm.end(), rng);
        if (std::fabs(spearman(x, perm)) >= observed - 1e-12) ++at_least;
    }
    return static_cast<double>(at_least + 1) / static_cast<double>(shuffles + 1);
}

/// Model value; unidentifiable fits are constant at f0.
inline double model_value(const FitResult& fit, double t) {
    if (!fit.identifiable) return fit.f0;
    return fit.f0 + (fit.f_inf - fit.f0) * (1.0 - std::exp(-t / fit.time_constant));
}

namespace detail {

struct ProfileSolve {
    double ss_res;
    double offset;     // f0
    double amplitude;  // f_inf - f0
};

inline ProfileSolve solve_for_time_constant(std::span<const FitPoint> pts, double time_constant) {
    const double n = static_cast<double>(pts.size());
    double sg = 0.0, sgg = 0.0, sy = 0.0, sgy = 0.0;
    for (const auto& p : pts) {
        const double g = 1.0 - std::exp(-p.t / time_constant);
        sg += g;
        sgg += g * g;
        sy += p.y;
        sgy += g * p.y;
    }
    const double den = n * sgg - sg * sg;
    double amplitude, offset;
    if (std::fabs(den) < 1e-30) {
        amplitude = 0.0;
        offset = sy / n;
    } else {
        amplitude = (n * sgy - sg * sy) / den;
        offset = (sy - amplitude * sg) / n;
    }
    double ss = 0.0;
    for (const auto& p : pts) {
        const double g = 1.0 - std::exp(-p.t / time_constant);
        const double r = p.y - offset - amplitude * g;
        ss += r * r;
    }
    return {ss, offset, amplitude};
}

}  // namespace detail

inline constexpr double kFitTimeMin = 0.1;
inline constexpr double kFitTimeMax = 50.0;
inline constexpr double kFitGridStep = 0.05;
inline constexpr double kFitRefineTol = 1e-6;

/// Least-squares fit of the saturation model over (t, y) points. Needs at
/// least 3 points spanning at least 2 distinct t values.
inline FitResult fit_asymptotic(std::span<const FitPoint> points) {
    if (points.size() < 3) throw DataError("fit needs at least 3 points");
    bool two_t = false;
    for (const auto& p : points) {
        if (!std::isfinite(p.t) || !std::isfinite(p.y))
            throw DataError("fit points must be finite");
        if (p.t != points[0].t) two_t = true;
    }
    if (!two_t) throw DataError("fit needs at least 2 distinct t values");

    const double n = static_cast<double>(points.size());
    double mean_y = 0.0;
    for (const auto& p : points) mean_y += p.y;
    mean_y /= n;
    double ss_tot = 0.0;
    for (const auto& p : points) ss_tot += (p.y - mean_y) * (p.y - mean_y);

    FitResult fit;
    if (ss_tot == 0.0) {
        fit.f0 = fit.f_inf = mean_y;
        fit.time_constant = 0.0;
        fit.r_squared = 1.0;  // the constant model reproduces the data exactly
        fit.mse = 0.0;
        fit.identifiable = false;
        return fit;
    }

    double best_t = kFitTimeMin;
    double best_ss = std::numeric_limits<double>::infinity();
    for (int i = 0;; ++i) {
        const double t = kFitTimeMin + kFitGridStep * i;
        if (t > kFitTimeMax + 1e-12) break;
        const double ss = detail::solve_for_time_constant(points, t).ss_res;
        if (ss < best_ss) {
            best_ss = ss;
            best_t = t;
        }
    }

    double lo = std::max(kFitTimeMin, best_t - kFitGridStep);
    double hi = std::min(kFitTimeMax, best_t + kFitGridStep);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = detail::solve_for_time_constant(points, c).ss_res;
    double fd = detail::solve_for_time_constant(points, d).ss_res;
    while (hi - lo > kFitRefineTol * std::max(1.0, 0.5 * (hi + lo))) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = detail::solve_for_time_constant(points, c).ss_res;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = detail::solve_for_time_constant(points, d).ss_res;
        }
    }
    const double refined_t = 0.5 * (lo + hi);
    const auto solved = detail::solve_for_time_constant(points, refined_t);

    fit.f0 = solved.offset;
    fit.f_inf = solved.offset + solved.amplitude;
    fit.time_constant = refined_t;
    fit.r_squared = 1.0 - solved.ss_res / ss_tot;
    fit.mse = solved.ss_res / n;
    fit.identifiable = std::fabs(solved.amplitude) >
                       1e-6 * std::max({1.0, std::fabs(fit.f0), std::fabs(fit.f_inf)});
    if (!fit.identifiable) {
        fit.f_inf = fit.f0;
        fit.time_constant = 0.0;
    }
    return fit;
}

/// Per-year unweighted means of per-text profile means.
struct YearStats {
    int year = 0;
    std::size_t count = 0;
    AttributeVector mean;
};

inline std::vector<YearStats> per_year_means(std::span<const CorpusRecord> records) {
    if (records.empty()) throw DataError("no records");
    std::map<int, YearStats> by_year;
    for (const auto& r : records) {
        auto& ys = by_year[r.grade];
        ys.year = r.grade;
        ++ys.count;
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            ys.mean.values[k] += r.profile.mean.values[k];
    }
    std::vector<YearStats> out;
    out.reserve(by_year.size());
    for (auto& [year, ys] : by_year) {
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            ys.mean.values[k] /= static_cast<double>(ys.count);
        out.push_back(ys);
    }
    return out;
}

/// Whole-corpus per-attribute sample standard deviation of the profile means.
inline AttributeVector corpus_attribute_sd(std::span<const CorpusRecord> records) {
    AttributeVector sd;
    const std::size_t n = records.size();
    if (n < 2) return sd;
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
        double mean = 0.0;
        for (const auto& r : records) mean += r.profile.mean.values[k];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : records) {
            const double d = r.profile.mean.values[k] - mean;
            ss += d * d;
        }
        sd.values[k] = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return sd;
}

namespace detail {

inline void require_correlatable(std::span<const CorpusRecord> records) {
    if (records.size() < 3) throw DataError("need at least 3 profiles");
    const int first = records[0].grade;
    bool two_grades = false;
    for (const auto& r : records)
        if (r.grade != first) {
            two_grades = true;
            break;
        }
    if (!two_grades) throw DataError("need >= 2 distinct grades");
}

}  // namespace detail

/// Spearman correlation of each attribute against the grade, one point per
/// text. Constant attributes are reported as rho = 0, p = 1, degenerate.
inline std::vector<CorrelationResult> correlate_corpus(std::span<const CorpusRecord> records) {
    detail::require_correlatable(records);
    std::vector<double> grades(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        grades[i] = static_cast<double>(records[i].grade);

    std::vector<CorrelationResult> out;
    out.reserve(kAttributeCount);
    std::vector<double> values(records.size());
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
        for (std::size_t i = 0; i < records.size(); ++i)
            values[i] = records[i].profile.mean.values[k];
        CorrelationResult res;
        res.attribute = std::string(kAttributeNames[k]);
        res.n = records.size();
        const bool constant = std::all_of(values.begin(), values.end(),
                                          [&](double v) { return v == values[0]; });
        if (constant) {
            res.degenerate = true;
        } else {
            res.rho = spearman(grades, values);
            res.p_value = spearman_pvalue(res.rho, res.n);
            res.significant = res.p_value < kSignificanceAlpha;
        }
        out.push_back(std::move(res));
    }
    return out;
}

/// Saturation fit of each attribute against the grade, one point per text.
inline std::vector<FitResult> fit_corpus(std::span<const CorpusRecord> records) {
    detail::require_correlatable(records);
    std::vector<FitResult> out;
    out.reserve(kAttributeCount);
    std::vector<FitPoint> points(records.size());
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
        for (std::size_t i = 0; i < records.size(); ++i)
            points[i] = {static_cast<double>(records[i].grade), records[i].profile.mean.values[k]};
        auto fit = fit_asymptotic(points);
        fit.attribute = std::string(kAttributeNames[k]);
        out.push_back(std::move(fit));
    }
    return out;
}

}  // namespace wrg
