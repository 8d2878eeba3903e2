#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "testutil.hpp"
#include "wrg/pipeline.hpp"
#include "wrg/report.hpp"

using namespace wrg;

namespace {

WindowingConfig config(std::size_t window, std::size_t step,
                       ShortTextPolicy policy = ShortTextPolicy::single_window) {
    WindowingConfig cfg;
    cfg.window_len = window;
    cfg.step = step;
    cfg.short_text_policy = policy;
    return cfg;
}

std::string repeat_words(const std::vector<std::string>& words, std::size_t count) {
    std::string text;
    for (std::size_t i = 0; i < count; ++i) {
        if (i) text += ' ';
        text += words[i % words.size()];
    }
    return text;
}

const std::vector<std::string> kSentence = {"era", "uma", "vez", "uma", "linda", "menina"};

}  // namespace

TEST_CASE("window enumeration with 50% overlap") {
    const auto windows = enumerate_windows(60, config(30, 15));
    REQUIRE(windows.size() == 3);
    CHECK(windows[0] == WindowSpan{0, 30});
    CHECK(windows[1] == WindowSpan{15, 30});
    CHECK(windows[2] == WindowSpan{30, 30});
}

TEST_CASE("exactly one window when the text fills it") {
    const auto windows = enumerate_windows(30, config(30, 15));
    REQUIRE(windows.size() == 1);
    CHECK(windows[0] == WindowSpan{0, 30});
}

TEST_CASE("short texts become one whole-text window or are skipped") {
    auto windows = enumerate_windows(29, config(30, 15));
    REQUIRE(windows.size() == 1);
    CHECK(windows[0] == WindowSpan{0, 29});
    CHECK(enumerate_windows(29, config(30, 15, ShortTextPolicy::skip)).empty());
}

TEST_CASE("no partial trailing windows") {
    CHECK(enumerate_windows(45, config(30, 15)) ==
          std::vector<WindowSpan>{{0, 30}, {15, 30}});
    CHECK(enumerate_windows(59, config(30, 15)).size() == 2);
    CHECK(enumerate_windows(44, config(30, 15)).size() == 1);
}

TEST_CASE("window count formula holds") {
    std::mt19937_64 rng(41001);
    std::uniform_int_distribution<std::size_t> wd(2, 40), td(2, 400);
    for (int i = 0; i < 200; ++i) {
        const std::size_t w = wd(rng);
        std::uniform_int_distribution<std::size_t> sd(1, w);
        const std::size_t s = sd(rng);
        const std::size_t tc = td(rng);
        if (tc < w) continue;
        CHECK(enumerate_windows(tc, config(w, s)).size() == (tc - w) / s + 1);
    }
}

TEST_CASE("empty stream is an error, invalid config rejected") {
    CHECK_THROWS_WITH_AS(enumerate_windows(0, config(30, 15)), doctest::Contains("no tokens"),
                         DataError);
    CHECK_THROWS_AS(enumerate_windows(10, config(1, 1)), ConfigError);
    CHECK_THROWS_AS(enumerate_windows(10, config(30, 31)), ConfigError);
    CHECK_THROWS_AS(enumerate_windows(10, config(30, 0)), ConfigError);
}

TEST_CASE("profile of a short single-line document equals its window") {
    const auto stream = tokenize(repeat_words(kSentence, 29), "doc");
    const auto profile = analyze_document(stream, config(30, 15));
    REQUIRE(profile.has_value());
    CHECK(profile->window_count == 1);
    const auto direct = compute_attributes(build_window_graph(stream.tokens, stream.boundary_before));
    CHECK(profile->mean == direct);
}

TEST_CASE("a 44-token document has one analyzed window") {
    const auto stream = tokenize(repeat_words(kSentence, 44), "doc");
    const auto profile = analyze_document(stream, config(30, 15));
    REQUIRE(profile.has_value());
    CHECK(profile->window_count == 1);  // start 15 would need 45 tokens
    std::vector<std::string> head(stream.tokens.begin(), stream.tokens.begin() + 30);
    std::vector<std::uint8_t> head_b(stream.boundary_before.begin(),
                                     stream.boundary_before.begin() + 30);
    CHECK(profile->mean == compute_attributes(build_window_graph(head, head_b)));
}

TEST_CASE("window means match the brute-force oracle") {
    const auto stream = tokenize(repeat_words(kSentence, 60), "doc");
    const auto profile = analyze_document(stream, config(30, 15));
    REQUIRE(profile.has_value());
    REQUIRE(profile->window_count == 3);

    double sums[kAttributeCount] = {};
    for (const std::size_t start : {0u, 15u, 30u}) {
        oracle::Window w;
        w.tokens.assign(stream.tokens.begin() + start, stream.tokens.begin() + start + 30);
        w.boundary.assign(stream.boundary_before.begin() + start,
                          stream.boundary_before.begin() + start + 30);
        const auto a = oracle::brute_attributes(w);
        sums[0] += static_cast<double>(a.nodes);
        sums[1] += static_cast<double>(a.distinct_edges);
        sums[2] += static_cast<double>(a.repeated_edges);
        sums[3] += static_cast<double>(a.parallel_edges);
        sums[4] += static_cast<double>(a.largest_component);
        sums[5] += static_cast<double>(a.largest_strong_component);
        sums[6] += a.avg_shortest_path;
    }
    for (std::size_t k = 0; k < kAttributeCount; ++k)
        CHECK(profile->mean.values[k] == doctest::Approx(sums[k] / 3.0).epsilon(1e-12));
}

TEST_CASE("analyze_document equals the public per-window path exactly") {
    std::mt19937_64 rng(41002);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<std::size_t> len(1, 90);
    std::bernoulli_distribution newline(0.1);
    for (int doc = 0; doc < 30; ++doc) {
        std::string text;
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) {
            text += vocab[pick(rng)];
            text += newline(rng) ? "\n" : " ";
        }
        const auto stream = tokenize(text, "doc");
        if (stream.empty()) continue;
        const auto cfg = config(30, 15);
        const auto profile = analyze_document(stream, cfg);
        REQUIRE(profile.has_value());

        AttributeVector acc;
        const auto windows = enumerate_windows(stream, cfg);
        for (const auto& w : windows) {
            std::vector<std::string> toks(stream.tokens.begin() + w.start,
                                          stream.tokens.begin() + w.start + w.length);
            std::vector<std::uint8_t> bnds(stream.boundary_before.begin() + w.start,
                                           stream.boundary_before.begin() + w.start + w.length);
            const auto a = compute_attributes(build_window_graph(toks, bnds));
            for (std::size_t k = 0; k < kAttributeCount; ++k) acc.values[k] += a.values[k];
        }
        for (std::size_t k = 0; k < kAttributeCount; ++k)
            acc.values[k] /= static_cast<double>(windows.size());
        CHECK(profile->mean == acc);
    }
}

TEST_CASE("periodic documents have the single-window profile exactly") {
    std::vector<std::string> period;
    for (int i = 0; i < 15; ++i) period.push_back("w" + std::to_string(i % 7));
    const auto stream = tokenize(repeat_words(period, 60), "doc");
    const auto profile = analyze_document(stream, config(30, 15));
    REQUIRE(profile.has_value());
    CHECK(profile->window_count == 3);
    std::vector<std::string> head(stream.tokens.begin(), stream.tokens.begin() + 30);
    CHECK(profile->mean == compute_attributes(build_window_graph(head)));
}

TEST_CASE("empty document throws, short document skips under skip policy") {
    CHECK_THROWS_WITH_AS(analyze_document(tokenize("", "doc"), config(30, 15)),
                         doctest::Contains("no tokens"), DataError);
    const auto skipped = analyze_document(tokenize("uma menina", "doc"),
                                          config(30, 15, ShortTextPolicy::skip));
    CHECK(!skipped.has_value());
}

TEST_CASE("manifest loading validates rows") {
    testutil::TempDir tmp("manifest");
    const auto path = tmp.path / "manifest.csv";

    testutil::write_file(path, "doc_id,path,grade\ncinderela_v1,texts/c1.txt,0\nb2,/abs/b2.txt,11\n");
    const auto entries = load_manifest(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].doc_id == "cinderela_v1");
    CHECK(entries[0].grade == 0);
    CHECK(entries[0].path == (tmp.path / "texts/c1.txt").string());  // relative to the manifest
    CHECK(entries[1].path == "/abs/b2.txt");

    testutil::write_file(path, "doc_id,path,grade\nd1,a.txt,12\n");
    CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("line 2"), DataError);

    testutil::write_file(path, "doc_id,path,grade\nd1,a.txt,3\nd1,b.txt,4\n");
    CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("duplicate"), DataError);

    testutil::write_file(path, "doc_id,path,grade\n");
    CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("no documents"), DataError);

    testutil::write_file(path, "doc_id,path,grade\nd1,a.txt\n");
    CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("3 fields"), DataError);

    testutil::write_file(path, "id,file,year\n");
    CHECK_THROWS_AS(load_manifest(path), DataError);

    CHECK_THROWS_AS(load_manifest(tmp.path / "nope.csv"), DataError);
}

namespace {

std::vector<ManifestEntry> small_corpus(const testutil::fs::path& dir) {
    testutil::write_file(dir / "b.txt", repeat_words(kSentence, 60) + "\n");
    testutil::write_file(dir / "a.txt", "A menina correu.\nO lobo correu atrás da menina.\n");
    return {{"b_doc", (dir / "b.txt").string(), 4}, {"a_doc", (dir / "a.txt").string(), 1}};
}

}  // namespace

TEST_CASE("run_corpus emits records sorted by doc_id") {
    testutil::TempDir tmp("corpus");
    const auto entries = small_corpus(tmp.path);
    const auto result = run_corpus(entries, config(30, 15), CleanRules::defaults());
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].doc_id == "a_doc");
    CHECK(result.records[1].doc_id == "b_doc");
    CHECK(result.skips.empty());
    CHECK(result.records[0].grade == 1);
}

TEST_CASE("unreadable documents are isolated as error entries") {
    testutil::TempDir tmp("corpus");
    auto entries = small_corpus(tmp.path);
    entries.push_back({"c_doc", (tmp.path / "missing.txt").string(), 2});
    const auto result = run_corpus(entries, config(30, 15), CleanRules::defaults());
    CHECK(result.records.size() == 2);
    REQUIRE(result.skips.size() == 1);
    CHECK(result.skips[0].doc_id == "c_doc");
    CHECK(result.skips[0].kind == SkipKind::error);
}

TEST_CASE("short documents are skip entries under the skip policy") {
    testutil::TempDir tmp("corpus");
    auto entries = small_corpus(tmp.path);
    const auto result =
        run_corpus(entries, config(30, 15, ShortTextPolicy::skip), CleanRules::defaults());
    REQUIRE(result.records.size() == 1);  // a.txt has fewer than 30 tokens
    CHECK(result.records[0].doc_id == "b_doc");
    REQUIRE(result.skips.size() == 1);
    CHECK(result.skips[0].kind == SkipKind::skipped);
}

TEST_CASE("run_corpus fails only when nothing succeeds") {
    testutil::TempDir tmp("corpus");
    std::vector<ManifestEntry> entries = {{"x", (tmp.path / "nope.txt").string(), 0}};
    CHECK_THROWS_AS(run_corpus(entries, config(30, 15), CleanRules::defaults()), DataError);
}

TEST_CASE("corpus output is independent of manifest order and worker count") {
    testutil::TempDir tmp("corpus");
    auto entries = small_corpus(tmp.path);
    testutil::write_file(tmp.path / "c.txt", repeat_words({"lua", "sol", "mar"}, 40));
    entries.push_back({"c_doc", (tmp.path / "c.txt").string(), 2});

    const auto cfg = config(30, 15);
    const auto rules = CleanRules::defaults();
    const auto base = profiles_to_csv(run_corpus(entries, cfg, rules, 1).records);

    auto shuffled = entries;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(profiles_to_csv(run_corpus(shuffled, cfg, rules, 1).records) == base);
    CHECK(profiles_to_csv(run_corpus(entries, cfg, rules, 4).records) == base);
    CHECK(profiles_to_csv(run_corpus(entries, cfg, rules, 1).records) == base);
}

TEST_CASE("profiles are invariant under re-encoding of the file") {
    testutil::TempDir tmp("encoding");
    const std::string body = repeat_words(kSentence, 40);
    testutil::write_file(tmp.path / "lf.txt", "primeira linha\n" + body + "\n");
    testutil::write_file(tmp.path / "crlf.txt", "primeira linha\r\n" + body + "\r\n");
    testutil::write_file(tmp.path / "bom.txt", "\xEF\xBB\xBFprimeira linha\n" + body + "\n");

    std::vector<ManifestEntry> entries = {{"d", (tmp.path / "lf.txt").string(), 0}};
    const auto cfg = config(30, 15);
    const auto rules = CleanRules::defaults();
    const auto lf = run_corpus(entries, cfg, rules).records[0].profile.mean;
    entries[0].path = (tmp.path / "crlf.txt").string();
    CHECK(run_corpus(entries, cfg, rules).records[0].profile.mean == lf);
    entries[0].path = (tmp.path / "bom.txt").string();
    CHECK(run_corpus(entries, cfg, rules).records[0].profile.mean == lf);
}
