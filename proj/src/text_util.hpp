#pragma once

// Character classes and small string helpers shared by the parsers.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "pldoc/source_span.hpp"

namespace pldoc::text {

inline bool is_layout(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
inline bool is_alpha(unsigned char c) { return is_upper(c) || is_lower(c); }
inline bool is_xdigit(unsigned char c)
{
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
/// Letter, digit, underscore, or any byte of a multi-byte UTF-8 sequence.
inline bool is_alnum(unsigned char c) { return is_alpha(c) || is_digit(c) || c == '_' || c >= 0x80; }
inline bool is_symbol_char(unsigned char c)
{
    return std::string_view("+-*/\\^<>=~:.?@#&$").find(static_cast<char>(c)) != std::string_view::npos;
}

inline int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

inline std::size_t utf8_length(unsigned char lead)
{
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xE) return 3;
    if ((lead >> 3) == 0x1E) return 4;
    return 1;
}

inline char32_t decode_utf8(std::string_view s)
{
    if (s.empty())
        return 0;
    auto lead = static_cast<unsigned char>(s[0]);
    std::size_t n = std::min(utf8_length(lead), s.size());
    if (n == 1)
        return lead;
    char32_t cp = lead & (0x7F >> n);
    for (std::size_t i = 1; i < n; ++i)
        cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
    return cp;
}

inline void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

/// Maps byte offsets to 1-based line numbers.
class LineIndex {
public:
    explicit LineIndex(std::string_view s)
    {
        starts_.push_back(0);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] == '\n')
                starts_.push_back(i + 1);
    }

    int line_of(std::size_t offset) const
    {
        auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
        return static_cast<int>(it - starts_.begin());
    }

    SourceSpan span(std::size_t start, std::size_t end) const
    {
        return SourceSpan{start, end, line_of(start), line_of(end > start ? end - 1 : start)};
    }

private:
    std::vector<std::size_t> starts_;
};

inline std::string_view trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && is_layout(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && is_layout(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

inline std::string_view trim_left(std::string_view s)
{
    std::size_t b = 0;
    while (b < s.size() && is_layout(static_cast<unsigned char>(s[b])))
        ++b;
    return s.substr(b);
}

inline std::string_view trim_right(std::string_view s)
{
    std::size_t e = s.size();
    while (e > 0 && is_layout(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(0, e);
}

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

/// Splits on '\n'; a trailing newline does not produce an empty last line.
inline std::vector<std::string> split_lines(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b < s.size()) {
        std::size_t e = s.find('\n', b);
        if (e == std::string_view::npos) {
            out.emplace_back(s.substr(b));
            break;
        }
        out.emplace_back(s.substr(b, e - b));
        b = e + 1;
    }
    return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

inline std::size_t indent_of(std::string_view s)
{
    std::size_t n = 0;
    while (n < s.size() && (s[n] == ' ' || s[n] == '\t'))
        ++n;
    return n;
}

inline std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

/// Collapses every run of layout to a single space and trims the ends.
inline std::string collapse_space(std::string_view s)
{
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (is_layout(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            continue;
        }
        if (pending)
            out += ' ';
        pending = false;
        out += c;
    }
    return out;
}

/// Splits into maximal runs of alphanumeric characters.
inline std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (is_alpha(u) || is_digit(u) || u >= 0x80) {
            cur += c;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

} // namespace pldoc::text
