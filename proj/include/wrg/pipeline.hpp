#pragma once

// Sliding-window document analysis: enumerate fixed-length windows with a
// configurable step, average the per-window graph attributes into one
// profile per document, and run whole manifests, optionally across worker
// threads. Documents are independent, and outputs are sorted by doc_id, so
// results do not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wrg/csv.hpp"
#include "wrg/error.hpp"
#include "wrg/graph.hpp"
#include "wrg/textprep.hpp"

namespace wrg {

enum class ShortTextPolicy { single_window, skip };

struct WindowingConfig {
    std::size_t window_len = 30;
    std::size_t step = 15;
    ShortTextPolicy short_text_policy = ShortTextPolicy::single_window;

    void validate() const {
        if (window_len < 2) throw ConfigError("window length must be at least 2");
        if (step < 1 || step > window_len)
            throw ConfigError("step must be between 1 and the window length");
    }
};

struct WindowSpan {
    std::size_t start;
    std::size_t length;
    friend bool operator==(const WindowSpan&, const WindowSpan&) = default;
};

/// Full windows at starts 0, step, 2*step, ... Documents shorter than one
/// window yield a single whole-text window or nothing, per policy.
/// Trailing tokens not covered by a full window are not analyzed.
inline std::vector<WindowSpan> enumerate_windows(std::size_t token_count,
                                                 const WindowingConfig& cfg) {
    cfg.validate();
    if (token_count == 0) throw DataError("no tokens");
    std::vector<WindowSpan> out;
    if (token_count < cfg.window_len) {
        if (cfg.short_text_policy == ShortTextPolicy::single_window)
            out.push_back({0, token_count});
        return out;
    }
    for (std::size_t start = 0; start + cfg.window_len <= token_count; start += cfg.step)
        out.push_back({start, cfg.window_len});
    return out;
}

inline std::vector<WindowSpan> enumerate_windows(const TokenStream& stream,
                                                 const WindowingConfig& cfg) {
    return enumerate_windows(stream.size(), cfg);
}

/// Window-averaged attributes for one document.
struct TextProfile {
    std::string doc_id;
    std::size_t window_count = 0;
    AttributeVector mean;
};

/// Analyzes every window of a document and averages the attributes with
/// equal weight. Returns nullopt when the skip policy rejects a short text;
/// throws DataError on an empty stream.
inline std::optional<TextProfile> analyze_document(const TokenStream& stream,
                                                   const WindowingConfig& cfg) {
    if (stream.boundary_before.size() != stream.tokens.size())
        throw DataError("token stream boundary flags do not match tokens");
    const auto windows = enumerate_windows(stream, cfg);
    if (windows.empty()) return std::nullopt;

    // Intern tokens once so the per-window work is integer-only.
    std::vector<NodeId> ids(stream.size());
    {
        std::unordered_map<std::string_view, NodeId> vocab;
        vocab.reserve(stream.size());
        for (std::size_t i = 0; i < stream.size(); ++i)
            ids[i] = vocab.try_emplace(stream.tokens[i], static_cast<NodeId>(vocab.size()))
                         .first->second;
    }
    std::size_t vocab_size = 0;
    for (const auto id : ids) vocab_size = std::max(vocab_size, static_cast<std::size_t>(id) + 1);

    detail::MetricsScratch scratch;
    std::vector<Transition> transitions;
    std::vector<NodeId> local(vocab_size, -1);
    std::vector<std::uint32_t> stamp(vocab_size, 0);
    std::uint32_t epoch = 0;

    std::array<double, kAttributeCount> acc{};
    for (const auto& w : windows) {
        ++epoch;
        NodeId next_local = 0;
        transitions.clear();
        NodeId prev = -1;
        for (std::size_t j = 0; j < w.length; ++j) {
            const std::size_t pos = w.start + j;
            const NodeId g = ids[pos];
            if (stamp[static_cast<std::size_t>(g)] != epoch) {
                stamp[static_cast<std::size_t>(g)] = epoch;
                local[static_cast<std::size_t>(g)] = next_local++;
            }
            const NodeId cur = local[static_cast<std::size_t>(g)];
            if (j > 0 && !stream.boundary_before[pos]) transitions.push_back({prev, cur});
            prev = cur;
        }
        const auto a = detail::to_attributes(detail::compute_metrics(next_local, transitions, scratch));
        for (std::size_t k = 0; k < kAttributeCount; ++k) acc[k] += a.values[k];
    }

    TextProfile profile;
    profile.doc_id = stream.doc_id;
    profile.window_count = windows.size();
    for (std::size_t k = 0; k < kAttributeCount; ++k)
        profile.mean.values[k] = acc[k] / static_cast<double>(windows.size());
    return profile;
}

inline constexpr int kMinGrade = 0;
inline constexpr int kMaxGrade = 11;  // 0 = kindergarten, 1-9 primary, 10 high school, 11 adult

struct ManifestEntry {
    std::string doc_id;
    std::string path;  // resolved relative to the manifest's directory
    int grade = 0;
};

/// Parses a `doc_id,path,grade` manifest. Rejects duplicate doc_ids and
/// out-of-range grades, naming the offending line.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read manifest: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const auto rows = csv::parse(buf.str());

    if (rows.empty() || rows[0] != std::vector<std::string>{"doc_id", "path", "grade"})
        throw DataError("manifest " + path.string() + ": expected header doc_id,path,grade");

    const auto base = path.parent_path();
    std::vector<ManifestEntry> entries;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = "manifest " + path.string() + " line " + std::to_string(r + 1);
        if (row.size() != 3) throw DataError(where + ": expected 3 fields");
        if (row[0].empty()) throw DataError(where + ": empty doc_id");
        if (!seen.insert(row[0]).second) throw DataError(where + ": duplicate doc_id " + row[0]);
        if (row[1].empty()) throw DataError(where + ": empty path");
        int grade = 0;
        const auto [ptr, ec] =
            std::from_chars(row[2].data(), row[2].data() + row[2].size(), grade);
        if (ec != std::errc{} || ptr != row[2].data() + row[2].size())
            throw DataError(where + ": grade is not an integer: " + row[2]);
        if (grade < kMinGrade || grade > kMaxGrade)
            throw DataError(where + ": grade out of range [0, 11]: " + row[2]);
        std::filesystem::path p(row[1]);
        if (p.is_relative()) p = base / p;
        entries.push_back({row[0], p.string(), grade});
    }
    if (entries.empty()) throw DataError("manifest " + path.string() + ": no documents");
    return entries;
}

struct CorpusRecord {
    std::string doc_id;
    int grade = 0;
    TextProfile profile;
};

enum class SkipKind { skipped, error };

inline std::string_view to_string(SkipKind k) {
    return k == SkipKind::skipped ? "skipped" : "error";
}

struct SkipEntry {
    std::string doc_id;
    SkipKind kind;
    std::string detail;
};

struct CorpusResult {
    std::vector<CorpusRecord> records;  // sorted by doc_id
    std::vector<SkipEntry> skips;       // sorted by doc_id
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Cleans, tokenizes and analyzes every manifest entry. Per-document
/// failures become error entries in the skip report; the run fails only if
/// no document succeeds. workers = 0 means hardware concurrency.
inline CorpusResult run_corpus(std::span<const ManifestEntry> entries, const WindowingConfig& cfg,
                               const CleanRules& rules, unsigned workers = 0) {
    cfg.validate();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(entries.size(), 1)));

    struct Slot {
        std::optional<CorpusRecord> record;
        std::optional<SkipEntry> skip;
    };
    std::vector<Slot> slots(entries.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= entries.size()) return;
            const auto& entry = entries[i];
            try {
                const std::string raw = read_file(entry.path);
                const auto stream = tokenize(clean_text(raw, rules), entry.doc_id);
                if (auto profile = analyze_document(stream, cfg)) {
                    slots[i].record = CorpusRecord{entry.doc_id, entry.grade, std::move(*profile)};
                } else {
                    slots[i].skip = SkipEntry{
                        entry.doc_id, SkipKind::skipped,
                        "shorter than one window (" + std::to_string(stream.size()) + " tokens)"};
                }
            } catch (const std::exception& e) {
                slots[i].skip = SkipEntry{entry.doc_id, SkipKind::error, e.what()};
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    CorpusResult result;
    for (auto& slot : slots) {
        if (slot.record) result.records.push_back(std::move(*slot.record));
        if (slot.skip) result.skips.push_back(std::move(*slot.skip));
    }
    auto by_id = [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; };
    std::sort(result.records.begin(), result.records.end(), by_id);
    std::sort(result.skips.begin(), result.skips.end(), by_id);
    if (result.records.empty()) throw DataError("no documents could be analyzed");
    return result;
}

}  // namespace wrg
