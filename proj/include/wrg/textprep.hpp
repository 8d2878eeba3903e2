#pragma once

// Editorial clean-up and tokenization of plain-text documents.
//
// Cleaning applies an ordered rule list to each line. A rule either drops
// the whole line or erases the spans it matches inside the line. Rules are
// re-applied per line until a fixpoint is reached, so cleaning twice equals
// cleaning once. Line terminators of retained lines are kept byte-for-byte.
//
// Tokenization lower-cases words, keeps word-internal hyphens and
// apostrophes (U+2019 is normalized to '\''), treats every other character
// as a separator, and flags the first token of every nonempty line as the
// start of a new segment.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wrg/error.hpp"
#include "wrg/unicode.hpp"

namespace wrg {

enum class RuleAction { drop_line, drop_span };

struct CleanRule {
    RuleAction action;
    std::string pattern;  // ECMAScript regex, matched against the line without its terminator
    std::regex re;
};

/// Ordered line-cleaning rules. Default-constructed: empty (clean_text is
/// the identity).
class CleanRules {
public:
    CleanRules() = default;

    void add(RuleAction action, std::string pattern) {
        try {
            std::regex re(pattern);
            rules_.push_back({action, std::move(pattern), std::move(re)});
        } catch (const std::regex_error& e) {
            throw ConfigError("bad rule pattern \"" + pattern + "\": " + e.what());
        }
    }

    const std::vector<CleanRule>& rules() const { return rules_; }
    const std::string& source() const { return source_; }

    /// Built-in rules for the usual editorial noise: ISBN lines, lines that
    /// are only a page number, table-of-contents dot leaders, and a few
    /// heading keywords.
    static CleanRules defaults() {
        CleanRules r;
        r.add(RuleAction::drop_line, R"(^\s*ISBN[-: ]?[0-9][0-9Xx -]*\s*$)");
        r.add(RuleAction::drop_line, R"(^\s*[0-9]+\s*$)");
        r.add(RuleAction::drop_line, R"(^.*\.{4,}\s*[0-9]+\s*$)");
        r.add(RuleAction::drop_line,
              "^\\s*(Sumário|SUMÁRIO|sumário|Índice|ÍNDICE|índice|"
              "Referências|REFERÊNCIAS|referências|Bibliografia|BIBLIOGRAFIA|"
              "bibliografia)\\s*$");
        return r;
    }

    /// Loads rules from a UTF-8 file, one `action<TAB>pattern` per line.
    /// Actions: drop-line, drop-span. Lines starting with '#' are comments.
    static CleanRules from_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot read rules file: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();

        CleanRules r;
        r.source_ = path.string();
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t nl = text.find('\n', pos);
            std::string_view line(text.data() + pos,
                                  (nl == std::string::npos ? text.size() : nl) - pos);
            pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty() || line.front() == '#') continue;

            const std::size_t tab = line.find('\t');
            if (tab == std::string_view::npos)
                throw ConfigError("rules file " + path.string() + " line " +
                                  std::to_string(lineno) + ": expected action<TAB>pattern");
            const std::string_view action = line.substr(0, tab);
            const std::string_view pattern = line.substr(tab + 1);
            if (pattern.empty())
                throw ConfigError("rules file " + path.string() + " line " +
                                  std::to_string(lineno) + ": empty pattern");
            RuleAction act;
            if (action == "drop-line") {
                act = RuleAction::drop_line;
            } else if (action == "drop-span") {
                act = RuleAction::drop_span;
            } else {
                throw ConfigError("rules file " + path.string() + " line " +
                                  std::to_string(lineno) + ": unknown action \"" +
                                  std::string(action) + "\"");
            }
            try {
                r.add(act, std::string(pattern));
            } catch (const ConfigError& e) {
                throw ConfigError("rules file " + path.string() + " line " +
                                  std::to_string(lineno) + ": " + e.what());
            }
        }
        return r;
    }

private:
    std::vector<CleanRule> rules_;
    std::string source_ = "default";
};

/// Removes editorial lines and spans. Retained lines, including their line
/// breaks, pass through unchanged; the output is a subsequence of the input.
inline std::string clean_text(std::string_view raw, const CleanRules& rules) {
    std::string out;
    out.reserve(raw.size());
    std::size_t pos = 0;
    while (pos < raw.size()) {
        const std::size_t nl = raw.find('\n', pos);
        const std::size_t end = nl == std::string_view::npos ? raw.size() : nl;
        std::string line(raw.substr(pos, end - pos));
        const bool has_terminator = nl != std::string_view::npos;
        pos = end + (has_terminator ? 1 : 0);

        bool dropped = false;
        bool changed = true;
        while (changed && !dropped) {
            changed = false;
            for (const auto& rule : rules.rules()) {
                if (rule.action == RuleAction::drop_line) {
                    if (std::regex_search(line, rule.re)) {
                        dropped = true;
                        break;
                    }
                } else {
                    std::string next = std::regex_replace(line, rule.re, "");
                    if (next != line) {
                        line = std::move(next);
                        changed = true;
                    }
                }
            }
        }
        if (!dropped) {
            out += line;
            if (has_terminator) out += '\n';
        }
    }
    return out;
}

/// One document as an ordered token list with segment-boundary flags.
/// boundary_before[i] is nonzero iff a new segment (line) starts at token i;
/// index 0 is always a boundary when the stream is nonempty.
struct TokenStream {
    std::string doc_id;
    std::vector<std::string> tokens;
    std::vector<std::uint8_t> boundary_before;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
};

/// Splits text into case-folded word tokens. A token is a maximal run of
/// letters/digits, possibly joined by word-internal hyphens or apostrophes.
/// Empty lines contribute neither tokens nor boundaries.
inline TokenStream tokenize(std::string_view text, std::string doc_id) {
    TokenStream ts;
    ts.doc_id = std::move(doc_id);
    std::string cur;
    bool new_segment = true;
    auto flush = [&] {
        if (cur.empty()) return;
        ts.boundary_before.push_back(new_segment ? 1 : 0);
        ts.tokens.push_back(std::move(cur));
        cur.clear();
        new_segment = false;
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const auto [cp, len] = uni::decode(text, i);
        if (uni::is_word_char(cp)) {
            uni::append_utf8(cur, uni::fold(cp));
            i += len;
            continue;
        }
        if ((cp == U'-' || cp == U'\'' || cp == U'’') && !cur.empty()) {
            const std::size_t next = i + static_cast<std::size_t>(len);
            if (next < text.size() && uni::is_word_char(uni::decode(text, next).cp)) {
                cur.push_back(cp == U'-' ? '-' : '\'');
                i += len;
                continue;
            }
        }
        flush();
        if (cp == U'\n') new_segment = true;
        i += len;
    }
    flush();
    return ts;
}

}  // namespace wrg
