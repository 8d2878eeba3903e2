#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "wrg/recommend.hpp"
#include "wrg/report.hpp"

using namespace wrg;

namespace {

CorpusRecord record(std::string id, int grade, std::size_t windows, double base) {
    CorpusRecord r;
    r.doc_id = id;
    r.grade = grade;
    r.profile.doc_id = std::move(id);
    r.profile.window_count = windows;
    for (std::size_t k = 0; k < kAttributeCount; ++k)
        r.profile.mean.values[k] = base + 0.1 * static_cast<double>(k);
    return r;
}

std::vector<CorpusRecord> random_records(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> vd(-3.0, 40.0);
    std::uniform_int_distribution<int> gd(0, 11);
    std::uniform_int_distribution<std::size_t> wd(1, 400);
    std::vector<CorpusRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        CorpusRecord r;
        r.doc_id = "doc_" + std::to_string(i);
        r.grade = gd(rng);
        r.profile.doc_id = r.doc_id;
        r.profile.window_count = wd(rng);
        for (auto& v : r.profile.mean.values) v = vd(rng);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace

TEST_CASE("number formatting uses six fractional digits") {
    CHECK(format_fixed(19.0 / 11.0) == "1.727273");
    CHECK(format_fixed(2.0) == "2.000000");
    CHECK(format_fixed(-0.0) == "0.000000");
    CHECK(format_fixed(-1e-9) == "0.000000");
    CHECK(format_fixed(-1.5) == "-1.500000");
    CHECK(format_fixed(1.0 / 3.0) == "0.333333");
    CHECK(format_fixed(2.0 / 3.0) == "0.666667");
}

TEST_CASE("profiles CSV fixture") {
    std::vector<CorpusRecord> records = {record("a", 1, 3, 5.0)};
    CHECK(profiles_to_csv(records) ==
          "doc_id,grade,window_count,N,E,RE,PE,LCC,LSC,ASP\n"
          "a,1,3,5.000000,5.100000,5.200000,5.300000,5.400000,5.500000,5.600000\n");
}

TEST_CASE("profiles CSV round-trips byte-identically") {
    std::mt19937_64 rng(61001);
    const auto records = random_records(rng, 25);
    const auto csv = profiles_to_csv(records);
    const auto parsed = profiles_from_csv(csv);
    CHECK(profiles_to_csv(parsed) == csv);
    REQUIRE(parsed.size() == records.size());
    CHECK(parsed[3].doc_id == records[3].doc_id);
    CHECK(parsed[3].grade == records[3].grade);
    CHECK(parsed[3].profile.window_count == records[3].profile.window_count);
}

TEST_CASE("profiles CSV validation") {
    CHECK_THROWS_WITH_AS(profiles_from_csv("bad,header\n"), doctest::Contains("header"),
                         DataError);
    const std::string head = "doc_id,grade,window_count,N,E,RE,PE,LCC,LSC,ASP\n";
    CHECK_THROWS_WITH_AS(profiles_from_csv(head), doctest::Contains("no rows"), DataError);
    CHECK_THROWS_WITH_AS(
        profiles_from_csv(head + "a,13,1,1,1,1,1,1,1,1\n"), doctest::Contains("line 2"),
        DataError);
    CHECK_THROWS_AS(profiles_from_csv(head + "a,1,1,1,1,x,1,1,1,1\n"), DataError);
    CHECK_THROWS_AS(profiles_from_csv(head + "a,1,0,1,1,1,1,1,1,1\n"), DataError);
}

TEST_CASE("profiles JSON mirrors the CSV fields") {
    std::mt19937_64 rng(61002);
    const auto records = random_records(rng, 8);
    const auto j = profiles_to_json(records);
    const auto parsed = profiles_from_json(j);
    CHECK(dump_json(profiles_to_json(parsed)) == dump_json(j));
    CHECK(j[0].contains("doc_id"));
    CHECK(j[0].contains("window_count"));
    for (const auto name : kAttributeNames) CHECK(j[0].contains(std::string(name)));
}

TEST_CASE("skips CSV escapes embedded commas") {
    std::vector<SkipEntry> skips = {{"a,b", SkipKind::error, "cannot read file: x"},
                                    {"c", SkipKind::skipped, "short"}};
    const auto csv = skips_to_csv(skips);
    CHECK(csv ==
          "doc_id,kind,detail\n\"a,b\",error,cannot read file: x\nc,skipped,short\n");
    const auto rows = csv::parse(csv);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "a,b");
}

TEST_CASE("fits CSV fixture and round trip") {
    AttributeReport rep;
    rep.correlation = {"LSC", 0.51, 0.0001, 12, true, false};
    rep.fit = {"LSC", 8.0, 14.0, 5.0, 0.32, 4.5, true};
    std::vector<AttributeReport> reports = {rep};
    const auto csv = fits_to_csv(reports);
    CHECK(csv ==
          "attribute,rho,p_value,significant,f0,f_inf,T,T_rounded,r_squared,mse,identifiable\n"
          "LSC,0.510000,0.000100,true,8.000000,14.000000,5.000000,5,0.320000,4.500000,true\n");
    CHECK(fits_to_csv(fits_from_csv(csv)) == csv);

    rep.fit.identifiable = false;
    rep.fit.time_constant = 0.0;
    rep.fit.f_inf = rep.fit.f0;
    const auto degenerate = fits_to_csv({{rep}});
    CHECK(degenerate.find(",0.000000,0,") != std::string::npos);  // T and T_rounded
    CHECK(fits_to_csv(fits_from_csv(degenerate)) == degenerate);
}

TEST_CASE("curves table samples t at quarter years") {
    std::vector<YearStats> years(2);
    years[0].year = 0;
    years[0].count = 3;
    years[0].mean.values.fill(8.0);
    years[1].year = 2;
    years[1].count = 4;
    years[1].mean.values.fill(9.0);
    FitResult fit{"LSC", 8.0, 14.0, 5.0, 0.9, 0.1, true};
    const auto csv = curves_to_csv(years, {{fit}});
    const auto rows = csv::parse(csv);
    REQUIRE(rows.size() == 1 + 45);
    CHECK(rows[0] == std::vector<std::string>{"attribute", "t", "empirical_mean", "empirical_n",
                                              "fitted_value"});
    CHECK(rows[1] == std::vector<std::string>{"LSC", "0.000000", "8.000000", "3", "8.000000"});
    CHECK(rows[2][2] == "");  // non-integer t: empirical fields empty
    CHECK(rows[2][3] == "");
    // year 1 absent from the data: empty empirical fields at t = 1
    CHECK(rows[5][2] == "");
    CHECK(rows[1 + 8][2] == "9.000000");  // t = 2
    CHECK(rows[45][1] == "11.000000");
    const double expected = 8.0 + 6.0 * (1.0 - std::exp(-11.0 / 5.0));
    CHECK(rows[45][4] == format_fixed(expected));
}

TEST_CASE("year means and corpus sd round-trip") {
    std::vector<YearStats> years(2);
    years[0].year = 1;
    years[0].count = 10;
    years[0].mean.values = {26, 26.5, 1, 0.9, 21, 8, 5};
    years[1].year = 4;
    years[1].count = 7;
    years[1].mean.values = {27, 27.5, 0.5, 0.4, 24, 12, 5.2};
    const auto csv = year_means_to_csv(years);
    CHECK(year_means_to_csv(year_means_from_csv(csv)) == csv);
    const auto parsed = year_means_from_csv(csv);
    CHECK(parsed[1].count == 7);
    CHECK(parsed[1].mean.values[4] == 24.0);

    AttributeVector sd;
    sd.values = {0.5, 1.5, 0.1, 0.1, 3.0, 2.0, 0.3};
    const auto sd_csv = corpus_sd_to_csv(sd);
    CHECK(corpus_sd_to_csv(corpus_sd_from_csv(sd_csv)) == sd_csv);
    CHECK(corpus_sd_from_csv(sd_csv).values[4] == 3.0);
    CHECK_THROWS_AS(corpus_sd_from_csv("attribute,sd\nN,1\n"), DataError);

    const auto jm = year_means_to_json(years);
    CHECK(dump_json(year_means_to_json(year_means_from_json(jm))) == dump_json(jm));
    const auto js = corpus_sd_to_json(sd);
    CHECK(dump_json(corpus_sd_to_json(corpus_sd_from_json(js))) == dump_json(js));
}

TEST_CASE("every emitted CSV survives parse and re-emit byte-identically") {
    std::mt19937_64 rng(61003);
    auto records = random_records(rng, 30);
    records[0].doc_id = "weird,\"id\"";  // force quoting
    records[0].profile.doc_id = records[0].doc_id;
    std::vector<SkipEntry> skips = {{"s1", SkipKind::error, "cannot read file: a,b"},
                                    {"s2", SkipKind::skipped, "short"}};
    const auto years = per_year_means(records);
    const auto sd = corpus_attribute_sd(records);
    const auto fits = fit_corpus(records);
    const auto corrs = correlate_corpus(records);
    std::vector<AttributeReport> reports(kAttributeCount);
    for (std::size_t k = 0; k < kAttributeCount; ++k) reports[k] = {corrs[k], fits[k]};

    const std::vector<std::string> artifacts = {
        profiles_to_csv(records), skips_to_csv(skips),          fits_to_csv(reports),
        curves_to_csv(years, fits), year_means_to_csv(years),   corpus_sd_to_csv(sd),
    };
    for (const auto& text : artifacts) {
        std::string reemitted;
        for (const auto& row : csv::parse(text)) reemitted += csv::join_row(row);
        CHECK(reemitted == text);
    }
}

TEST_CASE("recommendation picks the nearest year by z-score distance") {
    std::vector<YearStats> years(3);
    for (int i = 0; i < 3; ++i) {
        years[i].year = i + 2;
        years[i].count = 5;
        years[i].mean.values.fill(10.0 + 2.0 * i);
    }
    AttributeVector sd;
    sd.values.fill(1.0);

    AttributeVector probe;
    probe.values.fill(14.0);  // exactly the year-4 mean
    CHECK(recommend_grade(probe, years, sd).grade == 4);

    probe.values.fill(11.0);  // equidistant between year 2 and year 3
    const auto rec = recommend_grade(probe, years, sd);
    CHECK(rec.grade == 2);  // ties break toward the lower grade
    REQUIRE(rec.distances.size() == 3);
    CHECK(rec.distances[0].second == rec.distances[1].second);
    REQUIRE(rec.diagnostics.size() == kAttributeCount);
    CHECK(rec.diagnostics[0].z == doctest::Approx(1.0));
}

TEST_CASE("recommendation skips zero-sd attributes and validates input") {
    std::vector<YearStats> years(2);
    years[0].year = 0;
    years[0].count = 1;
    years[0].mean.values.fill(5.0);
    years[1].year = 1;
    years[1].count = 1;
    years[1].mean.values.fill(7.0);
    AttributeVector sd;
    sd.values.fill(0.0);
    sd.values[3] = 1.0;  // only PE carries signal

    AttributeVector probe;
    probe.values.fill(0.0);
    probe.values[3] = 6.9;
    CHECK(recommend_grade(probe, years, sd).grade == 1);
    CHECK_THROWS_AS(recommend_grade(probe, {}, sd), DataError);
}
