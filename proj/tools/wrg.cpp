// wrg - word-recurrence graph analysis of literary texts.
//
// Subcommands:
//   analyze <file>              profile one document to stdout
//   corpus <manifest>           profile a whole corpus into --out
//   fit <profiles>              correlations + saturation fits into --out
//   recommend <file> --stats D  suggest a grade from per-year statistics
//
// Exit codes: 0 success, 1 usage error, 2 data/config error, 3 some corpus
// documents failed (the run itself succeeded).

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wrg/wrg.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::size_t window = 30;
    std::size_t step = 15;
    std::string short_text = "single";
    std::string rules_path;
    std::string out_dir = ".";
    std::string format = "csv";
    std::uint64_t seed = 0;
    unsigned workers = 0;

    std::string analyze_file;
    std::string manifest_file;
    std::string profiles_file;
    std::string recommend_file;
    std::string stats_dir;
};

wrg::WindowingConfig windowing(const Options& opt) {
    wrg::WindowingConfig cfg;
    cfg.window_len = opt.window;
    cfg.step = opt.step;
    cfg.short_text_policy = opt.short_text == "skip" ? wrg::ShortTextPolicy::skip
                                                     : wrg::ShortTextPolicy::single_window;
    cfg.validate();
    return cfg;
}

wrg::CleanRules load_rules(const Options& opt) {
    if (opt.rules_path.empty()) return wrg::CleanRules::defaults();
    return wrg::CleanRules::from_file(opt.rules_path);
}

bool json_format(const Options& opt) { return opt.format == "json"; }

wrg::TextProfile profile_file(const fs::path& path, const Options& opt) {
    const std::string raw = wrg::read_file(path);
    const auto rules = load_rules(opt);
    const auto stream = wrg::tokenize(wrg::clean_text(raw, rules), path.stem().string());
    auto profile = wrg::analyze_document(stream, windowing(opt));
    if (!profile)
        throw wrg::DataError(path.string() + ": shorter than one window (" +
                             std::to_string(stream.size()) + " tokens) under the skip policy");
    return std::move(*profile);
}

int cmd_analyze(const Options& opt) {
    const auto profile = profile_file(opt.analyze_file, opt);
    if (json_format(opt)) {
        wrg::ordered_json o;
        o["doc_id"] = profile.doc_id;
        o["window_count"] = profile.window_count;
        for (std::size_t k = 0; k < wrg::kAttributeCount; ++k)
            o[std::string(wrg::kAttributeNames[k])] = wrg::round6(profile.mean.values[k]);
        std::cout << wrg::dump_json(o);
        return 0;
    }
    std::cout << "doc_id,window_count";
    for (const auto name : wrg::kAttributeNames) std::cout << ',' << name;
    std::cout << '\n' << wrg::csv::escape(profile.doc_id) << ',' << profile.window_count;
    for (const double v : profile.mean.values) std::cout << ',' << wrg::format_fixed(v);
    std::cout << '\n';
    return 0;
}

int cmd_corpus(const Options& opt) {
    const auto entries = wrg::load_manifest(opt.manifest_file);
    const auto result = wrg::run_corpus(entries, windowing(opt), load_rules(opt), opt.workers);

    const fs::path out(opt.out_dir);
    fs::create_directories(out);
    if (json_format(opt)) {
        wrg::write_file(out / "profiles.json",
                        wrg::dump_json(wrg::profiles_to_json(result.records)));
        wrg::write_file(out / "skips.json", wrg::dump_json(wrg::skips_to_json(result.skips)));
    } else {
        wrg::write_file(out / "profiles.csv", wrg::profiles_to_csv(result.records));
        wrg::write_file(out / "skips.csv", wrg::skips_to_csv(result.skips));
    }

    std::size_t errors = 0;
    for (const auto& s : result.skips)
        if (s.kind == wrg::SkipKind::error) ++errors;
    std::cout << "analyzed " << result.records.size() << " documents, skipped "
              << result.skips.size() - errors << ", failed " << errors << '\n';
    return errors > 0 ? 3 : 0;
}

std::vector<wrg::CorpusRecord> load_profiles(const fs::path& path) {
    const std::string text = wrg::read_file(path);
    if (path.extension() == ".json")
        return wrg::profiles_from_json(wrg::ordered_json::parse(text));
    return wrg::profiles_from_csv(text);
}

int cmd_fit(const Options& opt) {
    const auto records = load_profiles(opt.profiles_file);
    const auto correlations = wrg::correlate_corpus(records);
    const auto fits = wrg::fit_corpus(records);
    const auto years = wrg::per_year_means(records);
    const auto sd = wrg::corpus_attribute_sd(records);

    std::vector<wrg::AttributeReport> reports(wrg::kAttributeCount);
    for (std::size_t k = 0; k < wrg::kAttributeCount; ++k)
        reports[k] = {correlations[k], fits[k]};

    const fs::path out(opt.out_dir);
    fs::create_directories(out);
    if (json_format(opt)) {
        wrg::write_file(out / "fits.json", wrg::dump_json(wrg::fits_to_json(reports)));
        wrg::write_file(out / "curves.json", wrg::dump_json(wrg::curves_to_json(years, fits)));
        wrg::write_file(out / "year_means.json",
                        wrg::dump_json(wrg::year_means_to_json(years)));
        wrg::write_file(out / "corpus_sd.json", wrg::dump_json(wrg::corpus_sd_to_json(sd)));
    } else {
        wrg::write_file(out / "fits.csv", wrg::fits_to_csv(reports));
        wrg::write_file(out / "curves.csv", wrg::curves_to_csv(years, fits));
        wrg::write_file(out / "year_means.csv", wrg::year_means_to_csv(years));
        wrg::write_file(out / "corpus_sd.csv", wrg::corpus_sd_to_csv(sd));
    }
    std::cout << "fitted " << wrg::kAttributeCount << " attributes over " << records.size()
              << " profiles\n";
    return 0;
}

int cmd_recommend(const Options& opt) {
    const fs::path stats(opt.stats_dir);
    std::vector<wrg::YearStats> years;
    wrg::AttributeVector sd;
    if (json_format(opt)) {
        years = wrg::year_means_from_json(
            wrg::ordered_json::parse(wrg::read_file(stats / "year_means.json")));
        sd = wrg::corpus_sd_from_json(
            wrg::ordered_json::parse(wrg::read_file(stats / "corpus_sd.json")));
    } else {
        years = wrg::year_means_from_csv(wrg::read_file(stats / "year_means.csv"));
        sd = wrg::corpus_sd_from_csv(wrg::read_file(stats / "corpus_sd.csv"));
    }

    const auto profile = profile_file(opt.recommend_file, opt);
    const auto rec = wrg::recommend_grade(profile.mean, years, sd);

    if (json_format(opt)) {
        wrg::ordered_json o;
        o["doc_id"] = profile.doc_id;
        o["grade"] = rec.grade;
        wrg::ordered_json dists = wrg::ordered_json::array();
        for (const auto& [year, dist] : rec.distances)
            dists.push_back({{"year", year}, {"distance", wrg::round6(dist)}});
        o["distances"] = std::move(dists);
        wrg::ordered_json diags = wrg::ordered_json::array();
        for (const auto& d : rec.diagnostics)
            diags.push_back({{"attribute", d.attribute},
                             {"value", wrg::round6(d.value)},
                             {"year_mean", wrg::round6(d.year_mean)},
                             {"sd", wrg::round6(d.sd)},
                             {"z", wrg::round6(d.z)}});
        o["diagnostics"] = std::move(diags);
        std::cout << wrg::dump_json(o);
        return 0;
    }

    std::cout << "recommended grade: " << rec.grade << '\n';
    std::cout << "distances:";
    for (const auto& [year, dist] : rec.distances)
        std::cout << ' ' << year << '=' << wrg::format_fixed(dist);
    std::cout << '\n';
    std::cout << "attribute,value,year_mean,sd,z\n";
    for (const auto& d : rec.diagnostics)
        std::cout << d.attribute << ',' << wrg::format_fixed(d.value) << ','
                  << wrg::format_fixed(d.year_mean) << ',' << wrg::format_fixed(d.sd) << ','
                  << wrg::format_fixed(d.z) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"word-recurrence graph analysis of literary texts"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--window", opt.window, "window length in tokens")->capture_default_str();
    app.add_option("--step", opt.step, "window step in tokens")->capture_default_str();
    app.add_option("--short-text", opt.short_text, "short-text policy")
        ->check(CLI::IsMember({"single", "skip"}))
        ->capture_default_str();
    app.add_option("--rules", opt.rules_path, "clean-rules file (default: built-in rules)");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized statistics")->capture_default_str();
    app.add_option("--workers", opt.workers, "worker threads (0 = hardware)")
        ->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "profile one document");
    analyze->add_option("file", opt.analyze_file, "UTF-8 text file")->required();

    auto* corpus = app.add_subcommand("corpus", "profile a corpus from a manifest");
    corpus->add_option("manifest", opt.manifest_file, "CSV manifest: doc_id,path,grade")
        ->required();

    auto* fit = app.add_subcommand("fit", "correlate and fit profiles against grades");
    fit->add_option("profiles", opt.profiles_file, "profiles.csv or profiles.json")->required();

    auto* recommend = app.add_subcommand("recommend", "suggest a grade for one document");
    recommend->add_option("file", opt.recommend_file, "UTF-8 text file")->required();
    recommend->add_option("--stats", opt.stats_dir, "directory with year_means and corpus_sd")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(opt);
        if (corpus->parsed()) return cmd_corpus(opt);
        if (fit->parsed()) return cmd_fit(opt);
        if (recommend->parsed()) return cmd_recommend(opt);
    } catch (const std::exception& e) {
        std::cerr << "wrg: error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
