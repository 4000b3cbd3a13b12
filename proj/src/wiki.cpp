#include "pldoc/wiki.hpp"

#include <algorithm>

#include "text_util.hpp"

namespace pldoc::wiki {

namespace {

bool is_space(char c) { return text::is_layout(static_cast<unsigned char>(c)); }

bool is_word_char(char c)
{
    auto u = static_cast<unsigned char>(c);
    return text::is_alpha(u) || text::is_digit(u) || u == '_' || u >= 0x80;
}

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_path(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (!(text::is_alpha(u) || text::is_digit(u) || c == '_' || c == '.' || c == '/' || c == '-'))
            return false;
    }
    return true;
}

bool is_indicator_word(std::string_view w)
{
    auto slash = w.find('/');
    if (slash == std::string_view::npos || slash == 0)
        return false;
    std::string_view name = w.substr(0, slash);
    std::string_view rest = w.substr(slash + 1);
    if (!rest.empty() && rest.front() == '/')
        rest.remove_prefix(1);
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return false;
    if (!text::is_lower(static_cast<unsigned char>(name.front())))
        return false;
    return std::all_of(name.begin(), name.end(), is_word_char);
}

bool left_boundary(std::string_view s, std::size_t i)
{
    if (i == 0)
        return true;
    char p = s[i - 1];
    return is_space(p) || p == '(' || p == '[' || p == '{' || p == '"' || p == '\'';
}

bool right_boundary(std::string_view s, std::size_t i)
{
    if (i >= s.size())
        return true;
    char c = s[i];
    return is_space(c) || std::string_view(".,;:!?)]}'\"").find(c) != std::string_view::npos;
}

Inline::Kind font_kind(char c)
{
    return c == '*' ? Inline::Kind::bold : c == '_' ? Inline::Kind::italic : Inline::Kind::code;
}

// List item recognition
struct ItemMatch {
    ListKind kind;
    std::size_t indent;
    std::string term;     // description lists
    std::string content;
};

std::optional<ItemMatch> match_item(std::string_view line)
{
    std::size_t ind = text::indent_of(line);
    std::string_view l = line.substr(ind);
    if (l.size() >= 2 && (l[0] == '-' || l[0] == '*') && is_space(l[1])) {
        std::string_view c = text::trim(l.substr(2));
        if (c.empty())
            return std::nullopt;
        return ItemMatch{ListKind::bulleted, ind, {}, std::string(c)};
    }
    std::size_t d = 0;
    while (d < l.size() && text::is_digit(static_cast<unsigned char>(l[d])))
        ++d;
    if (d > 0 && d + 1 < l.size() && l[d] == '.' && is_space(l[d + 1])) {
        std::string_view c = text::trim(l.substr(d + 2));
        if (c.empty())
            return std::nullopt;
        return ItemMatch{ListKind::numbered, ind, {}, std::string(c)};
    }
    if (l.size() >= 2 && l[0] == '$' && is_space(l[1])) {
        std::string_view rest = l.substr(2);
        auto colon = rest.find(" : ");
        if (colon == std::string_view::npos)
            return std::nullopt;
        return ItemMatch{ListKind::description, ind, std::string(text::trim(rest.substr(0, colon))),
                         std::string(text::trim(rest.substr(colon + 3)))};
    }
    return std::nullopt;
}

bool is_fence(std::string_view line) { return text::trim(line) == "=="; }

class BlockParser {
public:
    BlockParser(const std::vector<std::string>& lines, const std::vector<std::string>& args,
                Diagnostics& diags)
        : lines_(lines), args_(args), diags_(diags) {}

    std::vector<Block> parse_all()
    {
        std::vector<Block> out;
        while (i_ < lines_.size()) {
            const std::string& line = lines_[i_];
            if (text::is_blank(line)) {
                ++i_;
            } else if (is_fence(line)) {
                out.push_back(code_block());
            } else if (match_item(line)) {
                out.push_back(list());
            } else {
                out.push_back(paragraph());
            }
        }
        return out;
    }

private:
    Block code_block()
    {
        const std::size_t open = i_++;
        std::vector<std::string> body;
        while (i_ < lines_.size() && !is_fence(lines_[i_]))
            body.push_back(lines_[i_++]);
        if (i_ >= lines_.size()) {
            SourceSpan s;
            s.line_start = s.line_end = static_cast<int>(open) + 1;
            diags_.push_back({Severity::warning, "UnclosedCodeBlock",
                              "code block opened with == is not closed", "", s});
        } else {
            ++i_;
        }
        Block b;
        b.kind = Block::Kind::code;
        b.code = text::join(body, "\n");
        return b;
    }

    Block paragraph()
    {
        std::vector<std::string> para;
        while (i_ < lines_.size()) {
            const std::string& line = lines_[i_];
            if (text::is_blank(line) || is_fence(line) || (!para.empty() && match_item(line)))
                break;
            para.emplace_back(text::trim(line));
            ++i_;
        }
        Block b;
        b.kind = Block::Kind::paragraph;
        b.inlines = parse_inlines(text::join(para, "\n"), args_);
        return b;
    }

    Block list()
    {
        const ItemMatch first = *match_item(lines_[i_]);
        const std::size_t col = first.indent;
        Block b;
        b.kind = Block::Kind::list;
        b.list_kind = first.kind;
        std::vector<std::string> pending; // text of the current item

        auto flush = [&] {
            if (!b.items.empty()) {
                b.items.back().inlines = parse_inlines(text::join(pending, "\n"), args_);
                pending.clear();
            }
        };

        while (i_ < lines_.size()) {
            const std::string& line = lines_[i_];
            if (text::is_blank(line)) {
                std::size_t j = i_;
                while (j < lines_.size() && text::is_blank(lines_[j]))
                    ++j;
                if (j >= lines_.size())
                    break;
                auto m = match_item(lines_[j]);
                bool continues = m && ((m->indent == col && m->kind == b.list_kind) || m->indent > col);
                if (!continues)
                    break;
                i_ = j;
                continue;
            }
            auto m = match_item(line);
            std::size_t ind = text::indent_of(line);
            if (m && m->indent == col) {
                if (m->kind != b.list_kind)
                    break;
                flush();
                ListItem item;
                if (!m->term.empty())
                    item.term = {Inline::make_code(m->term)};
                b.items.push_back(std::move(item));
                pending.push_back(m->content);
                ++i_;
            } else if (ind > col && !b.items.empty()) {
                if (m) {
                    b.items.back().blocks.push_back(list());
                } else if (is_fence(line)) {
                    b.items.back().blocks.push_back(code_block());
                } else {
                    pending.emplace_back(text::trim(line));
                    ++i_;
                }
            } else {
                break;
            }
        }
        flush();
        return b;
    }

    const std::vector<std::string>& lines_;
    const std::vector<std::string>& args_;
    Diagnostics& diags_;
    std::size_t i_ = 0;
};

void plain_inlines(std::string& out, const Inlines& xs)
{
    for (const auto& x : xs) {
        switch (x.kind) {
        case Inline::Kind::text:
        case Inline::Kind::pred_link:
        case Inline::Kind::file_link:
        case Inline::Kind::arg_ref: out += x.text; break;
        case Inline::Kind::image:
            out += x.inline_image ? "[[" + x.text + "]]" : x.text;
            break;
        case Inline::Kind::code: out += "=|" + x.text + "|="; break;
        case Inline::Kind::bold:
            out += "*|";
            plain_inlines(out, x.children);
            out += "|*";
            break;
        case Inline::Kind::italic:
            out += "_|";
            plain_inlines(out, x.children);
            out += "|_";
            break;
        }
    }
}

void plain_blocks(std::string& out, const std::vector<Block>& blocks, std::size_t indent)
{
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const Block& b = blocks[bi];
        // Adjacent lists get decreasing indents so that they stay apart.
        std::size_t following = 0;
        while (b.kind == Block::Kind::list && bi + following + 1 < blocks.size() &&
               blocks[bi + following + 1].kind == Block::Kind::list)
            ++following;
        const std::string pad(indent + 2 * following, ' ');
        if (!out.empty() && out.back() != '\n')
            out += '\n';
        if (!out.empty())
            out += '\n';
        switch (b.kind) {
        case Block::Kind::paragraph: {
            std::string p;
            plain_inlines(p, b.inlines);
            for (const auto& l : text::split_lines(p))
                out += pad + l + "\n";
            break;
        }
        case Block::Kind::code: out += pad + "==\n" + b.code + "\n" + pad + "==\n"; break;
        case Block::Kind::list: {
            int n = 1;
            for (const auto& item : b.items) {
                std::string t;
                plain_inlines(t, item.inlines);
                if (b.list_kind == ListKind::bulleted)
                    out += pad + "- ";
                else if (b.list_kind == ListKind::numbered)
                    out += pad + std::to_string(n++) + ". ";
                else {
                    std::string term;
                    for (const auto& x : item.term)
                        term += x.text;
                    out += pad + "$ " + term + " : ";
                }
                out += t + "\n";
                std::string sub;
                plain_blocks(sub, item.blocks, pad.size() + 4);
                out += sub;
            }
            break;
        }
        case Block::Kind::tags:
            for (const auto& e : b.tags) {
                std::string v;
                plain_inlines(v, e.value);
                out += pad + "@" + to_string(e.keyword) + " " + (e.param.empty() ? "" : e.param + " ") + v + "\n";
            }
            break;
        }
    }
}

} // namespace

bool is_image_path(std::string_view path)
{
    std::string lower = text::to_lower(path);
    for (auto ext : {".png", ".gif", ".jpg", ".jpeg", ".svg"})
        if (ends_with(lower, ext) && lower.size() > std::string_view(ext).size())
            return true;
    return false;
}

Inline autolink(std::string_view word)
{
    if (word.size() > 4 && word.substr(0, 2) == "[[" && ends_with(word, "]]")) {
        std::string_view inner = word.substr(2, word.size() - 4);
        if (is_path(inner) && is_image_path(inner))
            return Inline::make_image(std::string(inner), true);
    }
    if (is_indicator_word(word))
        return Inline::make_pred(std::string(word));
    if (is_path(word)) {
        if (ends_with(word, ".pl") && word.size() > 3)
            return Inline::make_file(std::string(word), FileKind::prolog);
        if (ends_with(word, ".txt") && word.size() > 4)
            return Inline::make_file(std::string(word), FileKind::wiki);
        if (is_image_path(word))
            return Inline::make_image(std::string(word), false);
    }
    return Inline::make_text(std::string(word));
}

std::optional<Inline> emphasize(std::string_view s, std::size_t& consumed,
                                const std::vector<std::string>& arg_names)
{
    if (s.size() < 3)
        return std::nullopt;
    const char f = s[0];
    if (f != '*' && f != '_' && f != '=')
        return std::nullopt;
    const Inline::Kind kind = font_kind(f);

    if (s[1] == '|') {
        const char close[3] = {'|', f, '\0'};
        auto end = s.find(close, 2);
        if (end == std::string_view::npos || end == 2)
            return std::nullopt;
        std::string_view inner = s.substr(2, end - 2);
        consumed = end + 2;
        if (kind == Inline::Kind::code)
            return Inline::make_code(std::string(inner));
        return Inline::make_font(kind, parse_inlines(inner, arg_names));
    }

    // single word: *word*
    std::size_t j = 1;
    while (j < s.size() && !is_space(s[j]) && s[j] != f)
        ++j;
    if (j >= s.size() || s[j] != f || j == 1)
        return std::nullopt;
    std::string_view inner = s.substr(1, j - 1);
    if (!right_boundary(s, j + 1))
        return std::nullopt;
    if (kind != Inline::Kind::code &&
        !(is_word_char(inner.front()) && is_word_char(inner.back())))
        return std::nullopt;
    consumed = j + 1;
    if (kind == Inline::Kind::code)
        return Inline::make_code(std::string(inner));
    return Inline::make_font(kind, mark_args({Inline::make_text(std::string(inner))}, arg_names));
}

Inlines parse_inlines(std::string_view s, const std::vector<std::string>& arg_names)
{
    Inlines out;
    std::string pending;
    auto flush = [&] {
        if (!pending.empty()) {
            out.push_back(Inline::make_text(std::move(pending)));
            pending.clear();
        }
    };

    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if ((c == '*' || c == '_' || c == '=') && (s.substr(i + 1, 1) == "|" || left_boundary(s, i))) {
            std::size_t used = 0;
            if (auto x = emphasize(s.substr(i), used, arg_names)) {
                flush();
                out.push_back(std::move(*x));
                i += used;
                continue;
            }
        }
        if (left_boundary(s, i) && !is_space(c)) {
            std::size_t e = i;
            while (e < s.size() && !is_space(s[e]))
                ++e;
            std::string_view word = s.substr(i, e - i);
            bool bracketed = word.size() > 4 && word.substr(0, 2) == "[[";
            if (bracketed) {
                auto close = word.find("]]");
                if (close != std::string_view::npos)
                    word = word.substr(0, close + 2);
            } else {
                while (!word.empty() && std::string_view(".,;:!?)]}'\"").find(word.back()) != std::string_view::npos)
                    word.remove_suffix(1);
            }
            if (!word.empty()) {
                Inline link = autolink(word);
                if (link.kind != Inline::Kind::text) {
                    flush();
                    out.push_back(std::move(link));
                    i += word.size();
                    continue;
                }
            }
        }
        pending += c;
        ++i;
    }
    flush();
    return mark_args(std::move(out), arg_names);
}

Inlines mark_args(Inlines inlines, const std::vector<std::string>& arg_names)
{
    if (arg_names.empty())
        return inlines;
    auto unique_arg = [&](std::string_view w) {
        if (w.empty() || !text::is_upper(static_cast<unsigned char>(w.front())))
            return false;
        return std::count(arg_names.begin(), arg_names.end(), w) == 1;
    };

    Inlines out;
    for (auto& x : inlines) {
        if (x.kind == Inline::Kind::bold || x.kind == Inline::Kind::italic) {
            x.children = mark_args(std::move(x.children), arg_names);
            out.push_back(std::move(x));
            continue;
        }
        if (x.kind != Inline::Kind::text) {
            out.push_back(std::move(x));
            continue;
        }
        const std::string& s = x.text;
        std::string pending;
        std::size_t i = 0;
        while (i < s.size()) {
            if (is_word_char(s[i]) && (i == 0 || !is_word_char(s[i - 1]))) {
                std::size_t e = i;
                while (e < s.size() && is_word_char(s[e]))
                    ++e;
                std::string_view w(s.data() + i, e - i);
                if (unique_arg(w)) {
                    if (!pending.empty())
                        out.push_back(Inline::make_text(std::move(pending)));
                    pending.clear();
                    out.push_back(Inline::make_arg(std::string(w)));
                } else {
                    pending += w;
                }
                i = e;
                continue;
            }
            pending += s[i++];
        }
        if (!pending.empty())
            out.push_back(Inline::make_text(std::move(pending)));
    }
    return out;
}

WikiDoc parse_wiki(std::string_view text, const std::vector<std::string>& arg_names)
{
    WikiDoc doc;
    std::vector<std::string> lines = text::split_lines(text);
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r')
            l.pop_back();
    BlockParser p(lines, arg_names, doc.diagnostics);
    doc.blocks = p.parse_all();
    return doc;
}

Block tag_section(const std::vector<Tag>& tags, const std::vector<std::string>& arg_names)
{
    Block b;
    b.kind = Block::Kind::tags;
    for (const auto& t : tags) {
        TagEntry e{t.keyword, {}, {}};
        std::string_view v = t.value;
        if (t.keyword == TagKeyword::param) {
            auto sp = v.find_first_of(" \t");
            e.param = std::string(v.substr(0, sp));
            v = sp == std::string_view::npos ? std::string_view() : text::trim(v.substr(sp));
        }
        e.value = parse_inlines(v, arg_names);
        b.tags.push_back(std::move(e));
    }
    return b;
}

std::string to_plain(const Inlines& inlines)
{
    std::string out;
    plain_inlines(out, inlines);
    return out;
}

std::string to_plain(const WikiDoc& doc)
{
    std::string out;
    plain_blocks(out, doc.blocks, 0);
    return out;
}

} // namespace pldoc::wiki
