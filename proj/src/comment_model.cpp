#include "pldoc/comment_model.hpp"

#include <algorithm>

#include "text_util.hpp"

namespace pldoc {

namespace {

constexpr std::pair<std::string_view, TagKeyword> kTagNames[] = {
    {"param", TagKeyword::param},         {"throws", TagKeyword::throws},
    {"error", TagKeyword::error},         {"see", TagKeyword::see},
    {"author", TagKeyword::author},       {"version", TagKeyword::version},
    {"deprecated", TagKeyword::deprecated}, {"compat", TagKeyword::compat},
    {"copyright", TagKeyword::copyright}, {"license", TagKeyword::license},
    {"bug", TagKeyword::bug},             {"tbd", TagKeyword::tbd},
};

bool is_marker_line(std::string_view line, const CommentOptions& opts)
{
    std::string_view l = text::trim_left(line);
    if (l.size() < 2 || l[0] != '%')
        return false;
    if (l[1] != '%' && !(opts.accept_percent_bang && l[1] == '!'))
        return false;
    return l.size() == 2 || text::is_layout(static_cast<unsigned char>(l[2]));
}

// A `%` comment is "full line" when only layout precedes it on its line.
bool starts_line(const CommentRecord& c, std::string_view source)
{
    std::size_t i = c.span.byte_start;
    while (i > 0) {
        char ch = source[i - 1];
        if (ch == '\n')
            return true;
        if (ch != ' ' && ch != '\t')
            return false;
        --i;
    }
    return true;
}

void strip_common_indent(std::vector<std::string>& lines)
{
    std::size_t common = std::string::npos;
    for (const auto& l : lines)
        if (!text::is_blank(l))
            common = std::min(common, text::indent_of(l));
    if (common == std::string::npos || common == 0)
        return;
    for (auto& l : lines)
        l = text::is_blank(l) ? std::string() : l.substr(common);
}

std::vector<std::string> strip_percent(std::string_view raw, const CommentOptions& opts)
{
    // Marker lines lose all leading layout; the others share a common margin.
    std::vector<std::string> out, rest;
    std::vector<bool> marker;
    for (const auto& line : text::split_lines(raw)) {
        std::string_view l = text::trim_left(line);
        const bool m = is_marker_line(l, opts);
        if (m)
            l = text::trim_left(l.substr(2));
        else if (!l.empty() && l[0] == '%')
            l.remove_prefix(1);
        marker.push_back(m);
        out.emplace_back(text::trim_right(l));
        if (!m)
            rest.push_back(out.back());
    }
    strip_common_indent(rest);
    for (std::size_t i = 0, j = 0; i < out.size(); ++i)
        if (!marker[i])
            out[i] = rest[j++];
    return out;
}

std::vector<std::string> strip_slashstar(std::string_view raw)
{
    std::string_view inner = raw.substr(3, raw.size() - 5); // between "/**" and "*/"
    std::vector<std::string> lines = text::split_lines(inner);
    if (!inner.empty() && inner.back() == '\n')
        lines.emplace_back();
    if (lines.empty())
        return lines;
    // the line holding "*/" contributes nothing when it is otherwise blank
    if (lines.size() > 1 && text::is_blank(lines.back()))
        lines.pop_back();

    // Optional " * " margin on continuation lines.
    std::size_t candidates = 0, starred = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (text::is_blank(lines[i]))
            continue;
        ++candidates;
        if (text::trim_left(lines[i]).front() == '*')
            ++starred;
    }
    if (candidates > 0 && starred * 5 >= candidates * 4) {
        for (std::size_t i = 1; i < lines.size(); ++i) {
            std::string_view l = text::trim_left(lines[i]);
            if (!l.empty() && l.front() == '*')
                l.remove_prefix(1);
            lines[i] = std::string(l);
        }
    }
    for (auto& l : lines)
        l = std::string(text::trim_right(l));
    lines[0] = std::string(text::trim_left(lines[0]));
    std::vector<std::string> rest(lines.begin() + 1, lines.end());
    strip_common_indent(rest);
    std::copy(rest.begin(), rest.end(), lines.begin() + 1);
    return lines;
}

int bracket_balance(std::string_view l)
{
    int depth = 0;
    char quote = 0;
    for (char c : l) {
        if (quote) {
            if (c == quote)
                quote = 0;
        } else if (c == '\'' || c == '"' || c == '`') {
            quote = c;
        } else if (c == '(' || c == '[' || c == '{') {
            ++depth;
        } else if (c == ')' || c == ']' || c == '}') {
            --depth;
        }
    }
    return depth;
}

bool is_tag_line(std::string_view l)
{
    return l.size() >= 2 && l[0] == '@' && text::is_alpha(static_cast<unsigned char>(l[1]));
}

std::string join_trimmed_block(const std::vector<std::string>& lines)
{
    std::size_t b = 0, e = lines.size();
    while (b < e && text::is_blank(lines[b]))
        ++b;
    while (e > b && text::is_blank(lines[e - 1]))
        --e;
    std::vector<std::string> mid(lines.begin() + b, lines.begin() + e);
    return text::join(mid, "\n");
}

// Splits "type_error(T,V) rest" at the end of the first balanced term-ish word.
std::pair<std::string, std::string> split_leading_term(std::string_view v)
{
    int depth = 0;
    std::size_t i = 0;
    char quote = 0;
    for (; i < v.size(); ++i) {
        char c = v[i];
        if (quote) {
            if (c == quote)
                quote = 0;
            continue;
        }
        if (c == '\'' || c == '"')
            quote = c;
        else if (c == '(' || c == '[' || c == '{')
            ++depth;
        else if (c == ')' || c == ']' || c == '}')
            --depth;
        else if (depth <= 0 && text::is_layout(static_cast<unsigned char>(c)))
            break;
    }
    return {std::string(v.substr(0, i)), std::string(text::trim(v.substr(i)))};
}

} // namespace

const char* to_string(TagKeyword k)
{
    for (auto& [n, kw] : kTagNames)
        if (kw == k)
            return n.data();
    return "?";
}

std::optional<TagKeyword> parse_tag_keyword(std::string_view s)
{
    for (auto& [n, kw] : kTagNames)
        if (n == s)
            return kw;
    return std::nullopt;
}

std::vector<CommentRecord> group_comments(const std::vector<CommentRecord>& comments,
                                          std::string_view source, const CommentOptions& opts)
{
    std::vector<CommentRecord> out;
    bool open_run = false;     // last output record is a growable line run
    bool last_was_marker = false;
    for (const auto& c : comments) {
        const bool full_line = c.style == CommentStyle::line && starts_line(c, source);
        const bool marker = c.style == CommentStyle::line && is_marker_line(c.text, opts);
        if (open_run && full_line && c.span.line_start == out.back().span.line_end + 1 &&
            !(marker && !last_was_marker)) {
            CommentRecord& run = out.back();
            run.span.byte_end = c.span.byte_end;
            run.span.line_end = c.span.line_end;
            run.text = std::string(source.substr(run.span.byte_start, run.span.size()));
            last_was_marker = marker;
            continue;
        }
        out.push_back(c);
        out.back().after_code = c.style == CommentStyle::line && !full_line;
        open_run = full_line;
        last_was_marker = marker;
    }
    return out;
}

bool has_structured_marker(const CommentRecord& c, const CommentOptions& opts)
{
    if (c.style == CommentStyle::line)
        return is_marker_line(text::split_lines(c.text).front(), opts) &&
               c.text.front() == '%';
    std::string_view t = c.text;
    return t.size() >= 5 && t.substr(0, 3) == "/**" && text::is_layout(static_cast<unsigned char>(t[3]));
}

std::string CommentSections::header_text() const
{
    std::vector<std::string> trimmed;
    for (const auto& l : header_lines)
        if (!text::is_blank(l))
            trimmed.emplace_back(text::trim(l));
    return text::join(trimmed, "\n");
}

std::string CommentSections::body_text() const { return join_trimmed_block(body_lines); }

CommentSections split_comment(const StructuredComment& sc)
{
    const auto& lines = sc.lines;
    std::size_t i = 0;
    if (sc.style == MarkerStyle::slashstar)
        while (i < lines.size() && text::is_blank(lines[i]))
            ++i;
    std::size_t header_end = i;
    if (sc.style == MarkerStyle::percent) {
        // Header lines carry the structured marker; a term with open
        // brackets continues on the following lines.
        const auto raw_lines = text::split_lines(sc.raw);
        int depth = 0;
        while (header_end < lines.size() && !text::is_blank(lines[header_end])) {
            std::string_view r = text::trim_left(raw_lines[header_end]);
            const bool marker = r.size() >= 2 && r[0] == '%' && (r[1] == '%' || r[1] == '!');
            if (!marker && depth <= 0)
                break;
            depth += bracket_balance(lines[header_end]);
            ++header_end;
        }
    } else {
        while (header_end < lines.size() && !text::is_blank(lines[header_end]))
            ++header_end;
    }
    if (header_end == i)
        throw EmptyHeader();

    // Smallest index from which every remaining line is a tag line, an
    // indented continuation, or blank.
    std::size_t tag_start = lines.size();
    for (std::size_t t = lines.size(); t-- > header_end;) {
        const std::string& l = lines[t];
        if (is_tag_line(l)) {
            tag_start = t;
            continue;
        }
        if (text::is_blank(l) || text::is_layout(static_cast<unsigned char>(l.front())))
            continue;
        break;
    }

    CommentSections s;
    s.header_lines.assign(lines.begin(), lines.begin() + static_cast<long>(header_end));
    s.body_lines.assign(lines.begin() + static_cast<long>(header_end), lines.begin() + static_cast<long>(tag_start));
    s.tag_lines.assign(lines.begin() + static_cast<long>(tag_start), lines.end());
    return s;
}

std::optional<StructuredComment> classify_comment(const CommentRecord& c, const CommentOptions& opts)
{
    if (c.after_code || !has_structured_marker(c, opts))
        return std::nullopt;

    StructuredComment sc;
    sc.style = c.style == CommentStyle::line ? MarkerStyle::percent : MarkerStyle::slashstar;
    sc.raw = c.text;
    sc.span = c.span;
    sc.lines = sc.style == MarkerStyle::percent ? strip_percent(c.text, opts) : strip_slashstar(c.text);

    CommentSections sections;
    try {
        sections = split_comment(sc);
    } catch (const EmptyHeader& e) {
        sc.diagnostics.push_back({Severity::warning, "EmptyHeader", e.what(), "", c.span});
        sections.body_lines = sc.lines;
    }
    TagParse tp = parse_tags(sections.tag_lines);
    for (auto& d : tp.diagnostics) {
        d.span = c.span;
        sc.diagnostics.push_back(std::move(d));
    }

    sc.header_text = sections.header_text();
    std::vector<std::string> body = sections.body_lines;
    if (!tp.body_lines.empty()) {
        body.emplace_back();
        body.insert(body.end(), tp.body_lines.begin(), tp.body_lines.end());
    }
    sc.body_text = join_trimmed_block(body);
    sc.tags = std::move(tp.tags);
    sc.header_lines = std::move(sections.header_lines);
    sc.body_lines = std::move(sections.body_lines);
    sc.tag_lines = std::move(sections.tag_lines);
    sc.kind = sc.header_text.rfind("<module>", 0) == 0 ? CommentKind::module_doc : CommentKind::predicate_doc;
    return sc;
}

Summary extract_summary(std::string_view body, CommentKind source)
{
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 == body.size() || text::is_layout(static_cast<unsigned char>(body[i + 1]))))
            return {text::collapse_space(body.substr(0, i + 1)), source};
    }
    std::string_view first = body.substr(0, body.find('\n'));
    return {text::collapse_space(first), source};
}

TagParse parse_tags(const std::vector<std::string>& tag_lines)
{
    TagParse out;
    // Gather each @keyword line with its continuation lines.
    std::vector<std::vector<std::string>> entries;
    for (const auto& l : tag_lines) {
        if (is_tag_line(l))
            entries.push_back({l});
        else if (!entries.empty() && !text::is_blank(l))
            entries.back().push_back(l);
    }
    for (const auto& e : entries) {
        std::string_view first = e.front();
        std::size_t kw_end = 1;
        while (kw_end < first.size() && !text::is_layout(static_cast<unsigned char>(first[kw_end])))
            ++kw_end;
        std::string kw(first.substr(1, kw_end - 1));
        std::string value(first.substr(kw_end));
        for (std::size_t i = 1; i < e.size(); ++i)
            value += " " + e[i];
        value = text::collapse_space(value);

        if (kw == "return" || kw == "since" || kw == "serial") {
            out.diagnostics.push_back({Severity::warning, "UnsupportedKeyword",
                                       "unsupported keyword @" + kw, "", {}});
            out.body_lines.insert(out.body_lines.end(), e.begin(), e.end());
            continue;
        }
        auto k = parse_tag_keyword(kw);
        if (!k) {
            out.diagnostics.push_back({Severity::warning, "UnknownKeyword", "unknown keyword @" + kw, "", {}});
            out.body_lines.insert(out.body_lines.end(), e.begin(), e.end());
            continue;
        }
        if (*k == TagKeyword::error) {
            auto [term, rest] = split_leading_term(value);
            std::string v = "error(" + term + ", Context)";
            if (!rest.empty())
                v += " " + rest;
            out.tags.push_back({TagKeyword::throws, std::move(v)});
            continue;
        }
        out.tags.push_back({*k, std::move(value)});
    }
    return out;
}

} // namespace pldoc
