#pragma once

// Grade suggestion: nearest per-year mean profile under a z-score distance,
// sum over attributes of ((value - year_mean) / corpus_sd)^2. Attributes
// with zero or non-finite sd carry no signal and are left out of the sum.
// Ties break toward the lower grade.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wrg/error.hpp"
#include "wrg/graph.hpp"
#include "wrg/stats.hpp"

namespace wrg {

struct RecommendDiag {
    std::string attribute;
    double value = 0.0;
    double year_mean = 0.0;
    double sd = 0.0;
    double z = 0.0;
};

struct Recommendation {
    int grade = 0;
    std::vector<std::pair<int, double>> distances;  // (year, z-score distance), ascending year
    std::vector<RecommendDiag> diagnostics;         // per attribute, at the suggested grade
};

inline Recommendation recommend_grade(const AttributeVector& profile,
                                      std::span<const YearStats> years,
                                      const AttributeVector& sd) {
    if (years.empty()) throw DataError("no per-year statistics available");

    std::vector<YearStats> ordered(years.begin(), years.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const YearStats& a, const YearStats& b) { return a.year < b.year; });

    Recommendation rec;
    bool first = true;
    double best = 0.0;
    for (const auto& ys : ordered) {
        double dist = 0.0;
        for (std::size_t k = 0; k < kAttributeCount; ++k) {
            const double s = sd.values[k];
            if (!(s > 0.0) || !std::isfinite(s)) continue;
            const double z = (profile.values[k] - ys.mean.values[k]) / s;
            dist += z * z;
        }
        rec.distances.push_back({ys.year, dist});
        if (first || dist < best) {  // strict: ties keep the earlier (lower) year
            first = false;
            best = dist;
            rec.grade = ys.year;
        }
    }

    for (const auto& ys : ordered) {
        if (ys.year != rec.grade) continue;
        for (std::size_t k = 0; k < kAttributeCount; ++k) {
            RecommendDiag d;
            d.attribute = std::string(kAttributeNames[k]);
            d.value = profile.values[k];
            d.year_mean = ys.mean.values[k];
            d.sd = sd.values[k];
            d.z = (d.sd > 0.0 && std::isfinite(d.sd)) ? (d.value - d.year_mean) / d.sd : 0.0;
            rec.diagnostics.push_back(std::move(d));
        }
        break;
    }
    return rec;
}

}  // namespace wrg
