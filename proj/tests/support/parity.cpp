#include "parity.hpp"

#include <vector>

namespace testsupport {

namespace {

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string resolve(std::string_view dir, std::string_view rel)
{
    std::vector<std::string> parts;
    auto push = [&](std::string_view path) {
        std::size_t pos = 0;
        while (pos <= path.size()) {
            std::size_t e = path.find('/', pos);
            if (e == std::string_view::npos)
                e = path.size();
            std::string_view seg = path.substr(pos, e - pos);
            if (seg == "..") {
                if (!parts.empty())
                    parts.pop_back();
            } else if (!seg.empty() && seg != ".") {
                parts.emplace_back(seg);
            }
            pos = e + 1;
        }
    };
    push(dir);
    push(rel);
    std::string out;
    for (const auto& p : parts)
        out += (out.empty() ? "" : "/") + p;
    return out;
}

std::string canonical_static(std::string_view page_file, std::string_view href)
{
    std::string_view dir = page_file.substr(0, page_file.rfind('/') == std::string_view::npos ? 0 : page_file.rfind('/'));
    std::string p = resolve(dir, href);
    if (p == "assets/pldoc.css")
        return "css";
    if (p == "index.html")
        return "dir:";
    if (ends_with(p, "/index.html"))
        return "dir:" + p.substr(0, p.size() - 11);
    if (ends_with(p, ".src.html"))
        return "src:" + p.substr(0, p.size() - 9) + ".pl";
    if (ends_with(p, ".pl.html"))
        return "page:" + p.substr(0, p.size() - 5);
    if (ends_with(p, ".txt.html") || ends_with(p, "README.html") || ends_with(p, "README.md.html"))
        return "text:" + p.substr(0, p.size() - 5);
    if (ends_with(p, ".html"))
        return "page:" + p.substr(0, p.size() - 5) + ".pl";
    return "raw:" + p;
}

std::string canonical_live(std::string_view href)
{
    if (href == "/assets/pldoc.css")
        return "css";
    if (href.rfind("/source/", 0) == 0)
        return "src:" + std::string(href.substr(8));
    if (href.rfind("/doc/", 0) == 0) {
        std::string p(href.substr(5));
        if (p.empty())
            return "dir:";
        if (p.back() == '/')
            return "dir:" + p.substr(0, p.size() - 1);
        if (ends_with(p, ".pl"))
            return "page:" + p;
        std::string base = p.substr(p.rfind('/') == std::string::npos ? 0 : p.rfind('/') + 1);
        if (ends_with(p, ".txt") || base.rfind("README", 0) == 0)
            return "text:" + p;
        return "raw:" + p;
    }
    return "other:" + std::string(href);
}

} // namespace

std::string strip_live_controls(std::string_view doc)
{
    std::string out;
    const std::string open = "<div class=\"pldoc-ctl\">";
    std::size_t pos = 0;
    for (;;) {
        std::size_t s = doc.find(open, pos);
        if (s == std::string_view::npos)
            break;
        out += doc.substr(pos, s - pos);
        std::size_t e = doc.find("</div>", s);
        if (e == std::string_view::npos)
            return out;
        pos = e + 6;
    }
    out += doc.substr(pos);

    std::size_t s = out.find("<script ");
    if (s != std::string::npos) {
        std::size_t e = out.find("</script>", s);
        if (e != std::string::npos) {
            e += 9;
            if (e < out.size() && out[e] == '\n')
                ++e;
            out.erase(s, e - s);
        }
    }
    return out;
}

std::string normalize_links(std::string_view doc, bool live, std::string_view page_file)
{
    std::string out;
    std::size_t pos = 0;
    for (;;) {
        std::size_t h = doc.find(" href=\"", pos);
        std::size_t s = doc.find(" src=\"", pos);
        std::size_t at = std::min(h, s);
        if (at == std::string_view::npos)
            break;
        std::size_t vstart = doc.find('"', at) + 1;
        std::size_t vend = doc.find('"', vstart);
        out += doc.substr(pos, vstart - pos);
        std::string_view value = doc.substr(vstart, vend - vstart);
        std::string_view frag;
        if (auto hash = value.find('#'); hash != std::string_view::npos) {
            frag = value.substr(hash);
            value = value.substr(0, hash);
        }
        out += live ? canonical_live(value) : canonical_static(page_file, value);
        out += frag;
        pos = vend;
    }
    out += doc.substr(pos);
    return out;
}

} // namespace testsupport
