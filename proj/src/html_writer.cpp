#include "pldoc/html_writer.hpp"

#include <cstdlib>

#include "text_util.hpp"

namespace pldoc::html {

std::string escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string unescape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        auto semi = s.find(';', i);
        if (semi == std::string_view::npos) {
            out += s[i];
            continue;
        }
        std::string_view ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (ent.size() > 1 && ent[0] == '#') {
            bool hex = ent[1] == 'x' || ent[1] == 'X';
            std::string digits(ent.substr(hex ? 2 : 1));
            text::append_utf8(out, static_cast<char32_t>(std::strtoul(digits.c_str(), nullptr, hex ? 16 : 10)));
        } else {
            out += s[i];
            continue;
        }
        i = semi;
    }
    return out;
}

void Writer::start_tag(std::string_view tag, const Attrs& attrs)
{
    out_ += '<';
    out_ += tag;
    for (const auto& [k, v] : attrs) {
        out_ += ' ';
        out_ += k;
        out_ += "=\"";
        out_ += escape(v);
        out_ += '"';
    }
    out_ += '>';
}

Writer& Writer::open(std::string_view tag, const Attrs& attrs)
{
    start_tag(tag, attrs);
    stack_.emplace_back(tag);
    return *this;
}

Writer& Writer::close()
{
    if (!stack_.empty()) {
        out_ += "</";
        out_ += stack_.back();
        out_ += '>';
        stack_.pop_back();
    }
    return *this;
}

Writer& Writer::empty(std::string_view tag, const Attrs& attrs)
{
    start_tag(tag, attrs);
    return *this;
}

Writer& Writer::text(std::string_view s)
{
    out_ += escape(s);
    return *this;
}

Writer& Writer::element(std::string_view tag, const Attrs& attrs, std::string_view s)
{
    open(tag, attrs);
    text(s);
    return close();
}

Writer& Writer::append(const Fragment& f)
{
    out_ += f.markup_;
    return *this;
}

Writer& Writer::newline()
{
    out_ += '\n';
    return *this;
}

Fragment Writer::finish()
{
    while (!stack_.empty())
        close();
    return Fragment(std::move(out_));
}

} // namespace pldoc::html
