#pragma once

// Report serialization. All artifacts exist as CSV and as a JSON variant
// with identical fields. Real numbers serialize with 6 fractional digits,
// '.' decimal separator, locale-independent; rows are pre-sorted by the
// producers, so emitted bytes are stable and parse -> re-emit is the
// identity on anything this module wrote.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wrg/csv.hpp"
#include "wrg/error.hpp"
#include "wrg/graph.hpp"
#include "wrg/pipeline.hpp"
#include "wrg/stats.hpp"

namespace wrg {

using ordered_json = nlohmann::ordered_json;

inline std::string format_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";  // display-rounding artifact
    return s;
}

/// Rounds to 6 decimals for the JSON variants so both formats carry the
/// same precision.
inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

namespace detail {

inline double parse_double(std::string_view s, const std::string& where) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError(where + ": not a number: " + std::string(s));
    return v;
}

inline long long parse_int(std::string_view s, const std::string& where) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError(where + ": not an integer: " + std::string(s));
    return v;
}

inline bool parse_bool(std::string_view s, const std::string& where) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw DataError(where + ": expected true or false: " + std::string(s));
}

inline std::string attribute_header() {
    std::string out;
    for (const auto name : kAttributeNames) {
        out.push_back(',');
        out += name;
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- profiles

inline const std::string kProfilesHeader = "doc_id,grade,window_count" + detail::attribute_header();

inline std::string profiles_to_csv(std::span<const CorpusRecord> records) {
    std::string out = kProfilesHeader + "\n";
    for (const auto& r : records) {
        out += csv::escape(r.doc_id);
        out += ',' + std::to_string(r.grade);
        out += ',' + std::to_string(r.profile.window_count);
        for (const double v : r.profile.mean.values) out += ',' + format_fixed(v);
        out += '\n';
    }
    return out;
}

inline std::vector<CorpusRecord> profiles_from_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || csv::join_row(rows[0]) != kProfilesHeader + "\n")
        throw DataError("profiles: expected header " + kProfilesHeader);
    std::vector<CorpusRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = "profiles line " + std::to_string(r + 1);
        const auto& row = rows[r];
        if (row.size() != 3 + kAttributeCount) throw DataError(where + ": wrong field count");
        CorpusRecord rec;
        rec.doc_id = row[0];
        rec.grade = static_cast<int>(detail::parse_int(row[1], where));
        if (rec.grade < kMinGrade || rec.grade > kMaxGrade)
            throw DataError(where + ": grade out of range [0, 11]: " + row[1]);
        const long long wc = detail::parse_int(row[2], where);
        if (wc < 1) throw DataError(where + ": window_count must be >= 1");
        rec.profile.doc_id = rec.doc_id;
        rec.profile.window_count = static_cast<std::size_t>(wc);
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            rec.profile.mean.values[k] = detail::parse_double(row[3 + k], where);
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw DataError("profiles: no rows");
    return records;
}

inline ordered_json profiles_to_json(std::span<const CorpusRecord> records) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : records) {
        ordered_json o;
        o["doc_id"] = r.doc_id;
        o["grade"] = r.grade;
        o["window_count"] = r.profile.window_count;
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            o[std::string(kAttributeNames[k])] = round6(r.profile.mean.values[k]);
        arr.push_back(std::move(o));
    }
    return arr;
}

inline std::vector<CorpusRecord> profiles_from_json(const ordered_json& arr) {
    if (!arr.is_array() || arr.empty()) throw DataError("profiles JSON: expected a nonempty array");
    std::vector<CorpusRecord> records;
    for (const auto& o : arr) {
        CorpusRecord rec;
        rec.doc_id = o.at("doc_id").get<std::string>();
        rec.grade = o.at("grade").get<int>();
        if (rec.grade < kMinGrade || rec.grade > kMaxGrade)
            throw DataError("profiles JSON: grade out of range for " + rec.doc_id);
        rec.profile.doc_id = rec.doc_id;
        rec.profile.window_count = o.at("window_count").get<std::size_t>();
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            rec.profile.mean.values[k] = o.at(std::string(kAttributeNames[k])).get<double>();
        records.push_back(std::move(rec));
    }
    return records;
}

// ------------------------------------------------------------------- skips

inline const std::string kSkipsHeader = "doc_id,kind,detail";

inline std::string skips_to_csv(std::span<const SkipEntry> skips) {
    std::string out = kSkipsHeader + "\n";
    for (const auto& s : skips) {
        out += csv::escape(s.doc_id);
        out += ',';
        out += to_string(s.kind);
        out += ',';
        out += csv::escape(s.detail);
        out += '\n';
    }
    return out;
}

inline ordered_json skips_to_json(std::span<const SkipEntry> skips) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : skips) {
        ordered_json o;
        o["doc_id"] = s.doc_id;
        o["kind"] = std::string(to_string(s.kind));
        o["detail"] = s.detail;
        arr.push_back(std::move(o));
    }
    return arr;
}

// -------------------------------------------------------------------- fits

/// One row of the fit/correlation report: both analyses for one attribute.
struct AttributeReport {
    CorrelationResult correlation;
    FitResult fit;
};

inline const std::string kFitsHeader =
    "attribute,rho,p_value,significant,f0,f_inf,T,T_rounded,r_squared,mse,identifiable";

inline long long rounded_time_constant(const FitResult& fit) {
    return fit.identifiable ? std::llround(fit.time_constant) : 0;
}

inline std::string fits_to_csv(std::span<const AttributeReport> reports) {
    std::string out = kFitsHeader + "\n";
    for (const auto& r : reports) {
        out += r.correlation.attribute;
        out += ',' + format_fixed(r.correlation.rho);
        out += ',' + format_fixed(r.correlation.p_value);
        out += r.correlation.significant ? ",true" : ",false";
        out += ',' + format_fixed(r.fit.f0);
        out += ',' + format_fixed(r.fit.f_inf);
        out += ',' + format_fixed(r.fit.time_constant);
        out += ',' + std::to_string(rounded_time_constant(r.fit));
        out += ',' + format_fixed(r.fit.r_squared);
        out += ',' + format_fixed(r.fit.mse);
        out += r.fit.identifiable ? ",true" : ",false";
        out += '\n';
    }
    return out;
}

inline std::vector<AttributeReport> fits_from_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || csv::join_row(rows[0]) != kFitsHeader + "\n")
        throw DataError("fits: expected header " + kFitsHeader);
    std::vector<AttributeReport> reports;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = "fits line " + std::to_string(r + 1);
        const auto& row = rows[r];
        if (row.size() != 11) throw DataError(where + ": wrong field count");
        AttributeReport rep;
        rep.correlation.attribute = row[0];
        rep.fit.attribute = row[0];
        rep.correlation.rho = detail::parse_double(row[1], where);
        rep.correlation.p_value = detail::parse_double(row[2], where);
        rep.correlation.significant = detail::parse_bool(row[3], where);
        rep.fit.f0 = detail::parse_double(row[4], where);
        rep.fit.f_inf = detail::parse_double(row[5], where);
        rep.fit.time_constant = detail::parse_double(row[6], where);
        detail::parse_int(row[7], where);  // T_rounded is derived; validated only
        rep.fit.r_squared = detail::parse_double(row[8], where);
        rep.fit.mse = detail::parse_double(row[9], where);
        rep.fit.identifiable = detail::parse_bool(row[10], where);
        reports.push_back(std::move(rep));
    }
    return reports;
}

inline ordered_json fits_to_json(std::span<const AttributeReport> reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json o;
        o["attribute"] = r.correlation.attribute;
        o["rho"] = round6(r.correlation.rho);
        o["p_value"] = round6(r.correlation.p_value);
        o["significant"] = r.correlation.significant;
        o["f0"] = round6(r.fit.f0);
        o["f_inf"] = round6(r.fit.f_inf);
        o["T"] = round6(r.fit.time_constant);
        o["T_rounded"] = rounded_time_constant(r.fit);
        o["r_squared"] = round6(r.fit.r_squared);
        o["mse"] = round6(r.fit.mse);
        o["identifiable"] = r.fit.identifiable;
        arr.push_back(std::move(o));
    }
    return arr;
}

// ------------------------------------------------------------------ curves

inline const std::string kCurvesHeader = "attribute,t,empirical_mean,empirical_n,fitted_value";
inline constexpr int kCurveSampleCount = 45;  // t = 0, 0.25, ..., 11

inline std::string curves_to_csv(std::span<const YearStats> years,
                                 std::span<const FitResult> fits) {
    std::string out = kCurvesHeader + "\n";
    for (const auto& fit : fits) {
        std::size_t attr_index = 0;
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            if (kAttributeNames[k] == fit.attribute) attr_index = k;
        for (int q = 0; q < kCurveSampleCount; ++q) {
            const double t = 0.25 * q;
            out += fit.attribute;
            out += ',' + format_fixed(t);
            std::string mean_field, n_field;
            if (q % 4 == 0) {
                const int year = q / 4;
                for (const auto& ys : years) {
                    if (ys.year == year) {
                        mean_field = format_fixed(ys.mean.values[attr_index]);
                        n_field = std::to_string(ys.count);
                        break;
                    }
                }
            }
            out += ',' + mean_field;
            out += ',' + n_field;
            out += ',' + format_fixed(model_value(fit, t));
            out += '\n';
        }
    }
    return out;
}

inline ordered_json curves_to_json(std::span<const YearStats> years,
                                   std::span<const FitResult> fits) {
    ordered_json arr = ordered_json::array();
    for (const auto& fit : fits) {
        std::size_t attr_index = 0;
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            if (kAttributeNames[k] == fit.attribute) attr_index = k;
        for (int q = 0; q < kCurveSampleCount; ++q) {
            const double t = 0.25 * q;
            ordered_json o;
            o["attribute"] = fit.attribute;
            o["t"] = round6(t);
            o["empirical_mean"] = nullptr;
            o["empirical_n"] = nullptr;
            if (q % 4 == 0) {
                const int year = q / 4;
                for (const auto& ys : years) {
                    if (ys.year == year) {
                        o["empirical_mean"] = round6(ys.mean.values[attr_index]);
                        o["empirical_n"] = ys.count;
                        break;
                    }
                }
            }
            o["fitted_value"] = round6(model_value(fit, t));
            arr.push_back(std::move(o));
        }
    }
    return arr;
}

// -------------------------------------------------- year means / corpus sd

inline const std::string kYearMeansHeader = "year,n" + detail::attribute_header();

inline std::string year_means_to_csv(std::span<const YearStats> years) {
    std::string out = kYearMeansHeader + "\n";
    for (const auto& ys : years) {
        out += std::to_string(ys.year);
        out += ',' + std::to_string(ys.count);
        for (const double v : ys.mean.values) out += ',' + format_fixed(v);
        out += '\n';
    }
    return out;
}

inline std::vector<YearStats> year_means_from_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || csv::join_row(rows[0]) != kYearMeansHeader + "\n")
        throw DataError("year means: expected header " + kYearMeansHeader);
    std::vector<YearStats> years;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = "year means line " + std::to_string(r + 1);
        const auto& row = rows[r];
        if (row.size() != 2 + kAttributeCount) throw DataError(where + ": wrong field count");
        YearStats ys;
        ys.year = static_cast<int>(detail::parse_int(row[0], where));
        ys.count = static_cast<std::size_t>(detail::parse_int(row[1], where));
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            ys.mean.values[k] = detail::parse_double(row[2 + k], where);
        years.push_back(ys);
    }
    if (years.empty()) throw DataError("year means: no rows");
    return years;
}

inline ordered_json year_means_to_json(std::span<const YearStats> years) {
    ordered_json arr = ordered_json::array();
    for (const auto& ys : years) {
        ordered_json o;
        o["year"] = ys.year;
        o["n"] = ys.count;
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            o[std::string(kAttributeNames[k])] = round6(ys.mean.values[k]);
        arr.push_back(std::move(o));
    }
    return arr;
}

inline std::vector<YearStats> year_means_from_json(const ordered_json& arr) {
    if (!arr.is_array() || arr.empty())
        throw DataError("year means JSON: expected a nonempty array");
    std::vector<YearStats> years;
    for (const auto& o : arr) {
        YearStats ys;
        ys.year = o.at("year").get<int>();
        ys.count = o.at("n").get<std::size_t>();
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            ys.mean.values[k] = o.at(std::string(kAttributeNames[k])).get<double>();
        years.push_back(ys);
    }
    return years;
}

inline const std::string kCorpusSdHeader = "attribute,sd";

inline std::string corpus_sd_to_csv(const AttributeVector& sd) {
    std::string out = kCorpusSdHeader + "\n";
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
        out += kAttributeNames[k];
        out += ',' + format_fixed(sd.values[k]);
        out += '\n';
    }
    return out;
}

inline AttributeVector corpus_sd_from_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || csv::join_row(rows[0]) != kCorpusSdHeader + "\n")
        throw DataError("corpus sd: expected header " + kCorpusSdHeader);
    if (rows.size() != 1 + kAttributeCount) throw DataError("corpus sd: expected 7 rows");
    AttributeVector sd;
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
        const auto& row = rows[1 + k];
        const std::string where = "corpus sd line " + std::to_string(k + 2);
        if (row.size() != 2 || row[0] != kAttributeNames[k])
            throw DataError(where + ": expected attribute " + std::string(kAttributeNames[k]));
        sd.values[k] = detail::parse_double(row[1], where);
    }
    return sd;
}

inline ordered_json corpus_sd_to_json(const AttributeVector& sd) {
    ordered_json o;
    for (std::size_t k = 0; k < kAttributeCount; ++k)
        o[std::string(kAttributeNames[k])] = round6(sd.values[k]);
    return o;
}

inline AttributeVector corpus_sd_from_json(const ordered_json& o) {
    AttributeVector sd;
    for (std::size_t k = 0; k < kAttributeCount; ++k)
        sd.values[k] = o.at(std::string(kAttributeNames[k])).get<double>();
    return sd;
}

// -------------------------------------------------------------- file utils

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing file: " + path.string());
}

inline std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace wrg
