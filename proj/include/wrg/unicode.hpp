#pragma once

// Minimal UTF-8 handling for word tokenization: code-point decoding, a
// letter/digit classifier and a case-folding map. Coverage is deliberately
// limited to the blocks that occur in the target corpora: ASCII, Latin-1
// Supplement, Latin Extended-A/B, Greek and Cyrillic. Code points outside
// these ranges act as separators.

#include <cstdint>
#include <string>
#include <string_view>

namespace wrg::uni {

struct DecodedChar {
    char32_t cp;
    int len;
};

/// Decodes one code point starting at `pos`. Invalid sequences yield
/// U+FFFD with length 1 so the scanner can resynchronize on the next byte.
inline DecodedChar decode(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](std::size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    auto tail = [&](std::size_t i) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i]) & 0x3F);
    };
    if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
        const char32_t cp = ((b0 & 0x1Fu) << 6) | tail(pos + 1);
        if (cp >= 0x80) return {cp, 2};
    } else if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
        const char32_t cp = ((b0 & 0x0Fu) << 12) | (tail(pos + 1) << 6) | tail(pos + 2);
        if (cp >= 0x800) return {cp, 3};
    } else if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        const char32_t cp =
            ((b0 & 0x07u) << 18) | (tail(pos + 1) << 12) | (tail(pos + 2) << 6) | tail(pos + 3);
        if (cp >= 0x10000 && cp <= 0x10FFFF) return {cp, 4};
    }
    return {0xFFFD, 1};
}

inline bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

inline bool is_letter(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    if (cp < 0xC0) return cp == 0xAA || cp == 0xBA;  // ordinal indicators
    if (cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
    if (cp <= 0x24F) return true;  // Latin Extended-A/B
    if (cp >= 0x386 && cp <= 0x3CE) {
        return cp != 0x387 && cp != 0x38B && cp != 0x38D && cp != 0x3A2;
    }
    return cp >= 0x400 && cp <= 0x4FF;
}

inline bool is_word_char(char32_t cp) { return is_letter(cp) || is_digit(cp); }

/// Lower-cases one code point. Idempotent: every target maps to itself.
inline char32_t fold(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;  // Latin-1 uppercase
    if (cp < 0x100) return cp;
    if (cp <= 0x137) return cp | 1;  // Latin Ext-A even/odd pairs
    if (cp == 0x138) return cp;
    if (cp <= 0x148) return (cp & 1) ? cp + 1 : cp;  // odd/even pairs
    if (cp == 0x149) return cp;
    if (cp <= 0x177) return cp | 1;
    if (cp == 0x178) return 0xFF;  // Y with diaeresis
    if (cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
    if (cp == 0x17F) return U's';  // long s
    if (cp == 0x386) return 0x3AC;
    if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
    if (cp == 0x38C) return 0x3CC;
    if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
    if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
    if (cp == 0x3C2) return 0x3C3;  // final sigma
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace wrg::uni
