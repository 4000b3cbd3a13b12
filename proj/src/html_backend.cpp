#include "pldoc/html_backend.hpp"

#include <algorithm>
#include <fstream>

#include "pldoc/assets.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace pldoc {

namespace {

using html::Attrs;
using html::Fragment;
using html::Writer;

std::string url_encode(std::string_view s)
{
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (text::is_alpha(u) || text::is_digit(u) ||
            std::string_view("-._~/").find(c) != std::string_view::npos) {
            out += c;
        } else {
            out += '%';
            out += hex[u >> 4];
            out += hex[u & 0xF];
        }
    }
    return out;
}

std::string parent_dir(std::string_view rel)
{
    auto slash = rel.rfind('/');
    return slash == std::string_view::npos ? std::string() : std::string(rel.substr(0, slash));
}

std::string base_name(std::string_view rel)
{
    auto slash = rel.rfind('/');
    return std::string(slash == std::string_view::npos ? rel : rel.substr(slash + 1));
}

std::vector<std::string> segments(std::string_view p)
{
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b <= p.size() && !p.empty()) {
        auto e = p.find('/', b);
        if (e == std::string_view::npos)
            e = p.size();
        if (e > b)
            out.emplace_back(p.substr(b, e - b));
        b = e + 1;
    }
    return out;
}

/// Resolves `rel` against directory `dir`, folding `.` and `..`.
std::string join_path(std::string_view dir, std::string_view rel)
{
    std::vector<std::string> parts = segments(dir);
    for (auto& s : segments(rel)) {
        if (s == ".")
            continue;
        if (s == "..") {
            if (!parts.empty())
                parts.pop_back();
            continue;
        }
        parts.push_back(s);
    }
    return text::join(parts, "/");
}

std::string relative_href(const std::string& from_dir, const std::string& to)
{
    auto a = segments(from_dir);
    auto b = segments(to);
    std::size_t i = 0;
    while (i < a.size() && i + 1 < b.size() && a[i] == b[i])
        ++i;
    std::string out;
    for (std::size_t j = i; j < a.size(); ++j)
        out += "../";
    for (std::size_t j = i; j < b.size(); ++j) {
        if (j > i)
            out += '/';
        out += b[j];
    }
    return out;
}

Attrs cls(std::string_view c) { return {{"class", std::string(c)}}; }

const char* tag_label(TagKeyword k)
{
    switch (k) {
    case TagKeyword::param: return "Parameters:";
    case TagKeyword::throws:
    case TagKeyword::error: return "Throws:";
    case TagKeyword::see: return "See also:";
    case TagKeyword::author: return "Author:";
    case TagKeyword::version: return "Version:";
    case TagKeyword::deprecated: return "Deprecated:";
    case TagKeyword::compat: return "Compatibility:";
    case TagKeyword::copyright: return "Copyright:";
    case TagKeyword::license: return "License:";
    case TagKeyword::bug: return "Bug:";
    case TagKeyword::tbd: return "To be done:";
    }
    return "";
}

class Renderer {
public:
    Renderer(const DocIndex& index, std::string_view origin, const Linker& links)
        : index_(index), origin_(origin), links_(links) {}

    void blocks(Writer& w, const std::vector<wiki::Block>& bs)
    {
        for (const auto& b : bs)
            block(w, b);
    }

    void block(Writer& w, const wiki::Block& b)
    {
        switch (b.kind) {
        case wiki::Block::Kind::paragraph:
            w.open("p");
            inlines(w, b.inlines);
            w.close().newline();
            break;
        case wiki::Block::Kind::code:
            w.element("pre", cls("code"), b.code).newline();
            break;
        case wiki::Block::Kind::list: list(w, b); break;
        case wiki::Block::Kind::tags: tags(w, b); break;
        }
    }

    void inlines(Writer& w, const wiki::Inlines& xs)
    {
        for (const auto& x : xs)
            inline_(w, x);
    }

private:
    void list(Writer& w, const wiki::Block& b)
    {
        if (b.list_kind == wiki::ListKind::description) {
            w.open("dl", cls("termlist")).newline();
            for (const auto& item : b.items) {
                w.open("dt");
                inlines(w, item.term);
                w.close().open("dd");
                inlines(w, item.inlines);
                blocks(w, item.blocks);
                w.close().newline();
            }
            w.close().newline();
            return;
        }
        w.open(b.list_kind == wiki::ListKind::numbered ? "ol" : "ul").newline();
        for (const auto& item : b.items) {
            w.open("li");
            inlines(w, item.inlines);
            blocks(w, item.blocks);
            w.close().newline();
        }
        w.close().newline();
    }

    void tags(Writer& w, const wiki::Block& b)
    {
        w.open("dl", cls("tags")).newline();
        const char* last = nullptr;
        for (const auto& e : b.tags) {
            const char* label = tag_label(e.keyword);
            if (label != last)
                w.element("dt", cls("tag"), label).newline();
            last = label;
            w.open("dd");
            if (!e.param.empty()) {
                w.element("var", cls("arg"), e.param);
                if (!e.value.empty())
                    w.text(" ");
            }
            inlines(w, e.value);
            w.close().newline();
        }
        w.close().newline();
    }

    void inline_(Writer& w, const wiki::Inline& x)
    {
        using K = wiki::Inline::Kind;
        switch (x.kind) {
        case K::text: w.text(x.text); break;
        case K::bold:
            w.open("b");
            inlines(w, x.children);
            w.close();
            break;
        case K::italic:
            w.open("i");
            inlines(w, x.children);
            w.close();
            break;
        case K::code: w.element("code", x.text); break;
        case K::arg_ref: w.element("var", cls("arg"), x.text); break;
        case K::pred_link: pred_link(w, x.text); break;
        case K::file_link: file_link(w, x); break;
        case K::image: image(w, x); break;
        }
    }

    void pred_link(Writer& w, const std::string& spelled)
    {
        auto pi = Indicator::parse(spelled);
        const FileDoc* f = pi ? index_.locate(*pi, origin_) : nullptr;
        if (!f) {
            w.element("code", cls("pred-missing"), spelled);
            return;
        }
        std::string anchor;
        if (const PredDoc* pd = f->find(*pi))
            anchor = pd->indicator.str();
        else
            anchor = std::find(f->defined.begin(), f->defined.end(), *pi)->str();
        w.element("a", {{"class", "pred"}, {"href", links_.href({Target::Kind::file_page, f->path, anchor})}},
                  spelled);
    }

    void file_link(Writer& w, const wiki::Inline& x)
    {
        std::string path = join_path(parent_dir(origin_), x.text);
        if (x.file_kind == wiki::FileKind::prolog && index_.file(path)) {
            w.element("a", {{"class", "file"}, {"href", links_.href({Target::Kind::file_page, path, {}})}}, x.text);
        } else if (x.file_kind == wiki::FileKind::wiki && index_.texts.count(path)) {
            w.element("a", {{"class", "file"}, {"href", links_.href({Target::Kind::text_page, path, {}})}}, x.text);
        } else {
            w.element("code", cls("file-missing"), x.text);
        }
    }

    void image(Writer& w, const wiki::Inline& x)
    {
        std::string path = join_path(parent_dir(origin_), x.text);
        std::string href = links_.href({Target::Kind::raw_file, path, {}});
        if (x.inline_image)
            w.empty("img", {{"src", href}, {"alt", x.text}});
        else
            w.element("a", {{"class", "image"}, {"href", href}}, x.text);
    }

    const DocIndex& index_;
    std::string origin_;
    const Linker& links_;
};

void control_open(Writer& w) { w.open("div", cls(control_class)); }

std::string live_page_href(const RenderOptions& opts, const Target& self, bool public_only)
{
    RenderOptions live = opts;
    live.links = LinkMode::live;
    Linker l(live, self);
    std::string h = l.href(self);
    return public_only ? h : h + "?public_only=false";
}

void nav_controls(Writer& w, const RenderOptions& opts, const Target* self)
{
    if (opts.links != LinkMode::live)
        return;
    control_open(w);
    w.open("form", {{"class", "search"}, {"method", "get"}, {"action", opts.base_url + "/search"}});
    w.empty("input", {{"type", "text"}, {"name", "for"}, {"placeholder", "Search"}});
    w.empty("input", {{"type", "submit"}, {"value", "Search"}});
    w.close();
    w.close();
    if (self && (self->kind == Target::Kind::file_page || self->kind == Target::Kind::dir_index)) {
        control_open(w);
        w.element("a", {{"class", "zoom"}, {"href", live_page_href(opts, *self, !opts.public_only)}},
                  opts.public_only ? "show private" : "public only");
        w.close();
    }
    if (opts.edit_enabled) {
        control_open(w);
        w.open("form", {{"class", "reload"}, {"method", "post"}, {"action", opts.base_url + "/reload"}});
        w.empty("input", {{"type", "submit"}, {"value", "Reload"}});
        w.close();
        w.close();
    }
}

Page finish_page(std::string title, std::vector<std::pair<std::string, Target>> crumbs, Fragment body,
                 const RenderOptions& opts, const Target& self, const DocIndex* index)
{
    Linker links(opts, self);
    Page page;
    page.title = std::move(title);
    page.breadcrumb = std::move(crumbs);
    page.body = std::move(body);
    page.assets.push_back(links.href({Target::Kind::stylesheet, {}, {}}));
    if (opts.links == LinkMode::live)
        page.assets.push_back(opts.base_url + "/assets/ui.js");

    Writer w;
    w.open("html", {{"lang", "en"}}).newline();
    w.open("head").newline();
    w.empty("meta", {{"charset", "utf-8"}}).newline();
    w.element("title", page.title).newline();
    w.empty("link", {{"rel", "stylesheet"}, {"href", page.assets[0]}}).newline();
    if (opts.links == LinkMode::live)
        w.open("script", {{"src", page.assets[1]}, {"defer", "defer"}}).close().newline();
    w.close().newline();
    w.open("body").newline();
    w.open("div", cls("navhdr"));
    w.open("span", cls("crumbs"));
    for (std::size_t i = 0; i < page.breadcrumb.size(); ++i) {
        if (i)
            w.text(" / ");
        const auto& [label, t] = page.breadcrumb[i];
        w.element("a", {{"href", links.href(t)}}, label);
    }
    w.close();
    nav_controls(w, opts, &self);
    w.close().newline();
    w.open("div", cls("content")).newline();
    w.append(page.body);
    w.close().newline();
    if (opts.stamp_generation && index)
        w.element("div", {{"class", "footer"}, {"data-generation", std::to_string(index->generation)}},
                  "generation " + std::to_string(index->generation))
            .newline();
    w.close().newline();
    page.document = "<!DOCTYPE html>\n" + w.finish().str() + "\n";
    return page;
}

std::vector<std::pair<std::string, Target>> crumbs_for(std::string_view path, Target::Kind leaf_kind)
{
    std::vector<std::pair<std::string, Target>> out;
    out.push_back({"Home", {Target::Kind::dir_index, "", {}}});
    auto parts = segments(path);
    std::string acc;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        acc = acc.empty() ? parts[i] : acc + "/" + parts[i];
        bool leaf = i + 1 == parts.size();
        out.push_back({parts[i], {leaf ? leaf_kind : Target::Kind::dir_index, acc, {}}});
    }
    return out;
}

// Undocumented predicates shown at the bottom of a file page: exports
// without documentation, and for non-module files every undocumented
// definition.
std::vector<Indicator> undocumented_public(const DocIndex& index, const FileDoc& fd)
{
    std::vector<Indicator> out = undocumented_exports(index, fd.path);
    if (!fd.module.has_module_directive())
        for (const Indicator& pi : fd.defined)
            if (!fd.find(pi) && std::find(out.begin(), out.end(), pi) == out.end())
                out.push_back(pi);
    return out;
}

void comment_doc(Writer& w, const StructuredComment& sc, const DocIndex& index, std::string_view origin,
                 const Linker& links, const std::vector<std::string>& arg_names)
{
    Renderer r(index, origin, links);
    r.blocks(w, wiki::parse_wiki(sc.body_text, arg_names).blocks);
    if (!sc.tags.empty())
        r.block(w, wiki::tag_section(sc.tags, arg_names));
}

void type_markup(Writer& w, const Term& type)
{
    std::string t = format_term(type, default_operator_table(), 200);
    w.text(":");
    if (!t.empty() && text::is_symbol_char(static_cast<unsigned char>(t.front())))
        w.text(" ");
    w.element("span", cls("argtype"), t);
}

} // namespace

Linker::Linker(const RenderOptions& opts, Target page) : opts_(opts)
{
    page_dir_ = parent_dir(static_path(page));
}

std::string Linker::static_path(const Target& t)
{
    switch (t.kind) {
    case Target::Kind::file_page: {
        std::string_view p = t.path;
        // index.pl keeps its extension so it cannot clash with index.html
        if (p.size() > 3 && p.substr(p.size() - 3) == ".pl" && base_name(p) != "index.pl")
            p.remove_suffix(3);
        return std::string(p) + ".html";
    }
    case Target::Kind::text_page: return t.path + ".html";
    case Target::Kind::dir_index: return t.path.empty() ? "index.html" : t.path + "/index.html";
    case Target::Kind::source_page: {
        std::string_view p = t.path;
        if (p.size() > 3 && p.substr(p.size() - 3) == ".pl")
            p.remove_suffix(3);
        return std::string(p) + ".src.html";
    }
    case Target::Kind::raw_file: return t.path;
    case Target::Kind::stylesheet: return "assets/pldoc.css";
    case Target::Kind::search: return "";
    }
    return "";
}

std::string Linker::href(const Target& t) const
{
    std::string out;
    if (opts_.links == LinkMode::static_site) {
        out = url_encode(relative_href(page_dir_, static_path(t)));
    } else {
        out = opts_.base_url;
        switch (t.kind) {
        case Target::Kind::file_page:
        case Target::Kind::text_page:
        case Target::Kind::raw_file: out += "/doc/" + url_encode(t.path); break;
        case Target::Kind::dir_index: out += "/doc/" + (t.path.empty() ? "" : url_encode(t.path) + "/"); break;
        case Target::Kind::source_page: out += "/source/" + url_encode(t.path); break;
        case Target::Kind::stylesheet: out += "/assets/pldoc.css"; break;
        case Target::Kind::search: out += "/search"; break;
        }
    }
    if (!t.fragment.empty())
        out += "#" + url_encode(t.fragment);
    return out;
}

Fragment render_wiki(const wiki::WikiDoc& doc, const DocIndex& index, std::string_view origin,
                     const Linker& links)
{
    Writer w;
    Renderer(index, origin, links).blocks(w, doc.blocks);
    return w.finish();
}

Fragment render_inlines(const wiki::Inlines& xs, const DocIndex& index, std::string_view origin,
                        const Linker& links)
{
    Writer w;
    Renderer(index, origin, links).inlines(w, xs);
    return w.finish();
}

Fragment render_mode(const ModeDecl& md)
{
    Writer w;
    w.open("span", cls("mode"));
    w.element("b", cls("pred"), quote_atom_if_needed(md.name));
    if (!md.args.empty()) {
        w.text("(");
        for (std::size_t i = 0; i < md.args.size(); ++i) {
            const ArgSpec& a = md.args[i];
            if (i)
                w.text(", ");
            if (a.mode != ArgMode::none)
                w.text(std::string(1, static_cast<char>(a.mode)));
            w.element("var", cls("arg"), a.name);
            if (a.type)
                type_markup(w, *a.type);
        }
        w.text(")");
    }
    if (md.is_dcg)
        w.text("//");
    if (md.det != Determinism::unspecified) {
        w.text(" ");
        w.element("span", cls("det"), std::string("is ") + to_string(md.det));
    }
    w.close();
    return w.finish();
}

Fragment render_pred(const PredDoc& pd, const DocIndex& index, const RenderOptions& opts, const Linker& links)
{
    Writer w;
    const std::string id = pd.indicator.str();
    w.open("div", {{"class", pd.is_public ? "pred" : "pred private"}, {"id", id}}).newline();
    w.open("dl").newline();
    for (std::size_t i = 0; i < pd.modes.size(); ++i) {
        w.open("dt", cls("pred-head"));
        w.append(render_mode(pd.modes[i]));
        if (i == 0 && opts.edit_enabled && opts.links == LinkMode::live) {
            control_open(w);
            w.open("form", {{"class", "edit"},
                            {"method", "post"},
                            {"action", opts.base_url + "/edit?pred=" + url_encode(id)}});
            w.empty("input", {{"type", "submit"}, {"value", "edit"}});
            w.close();
            w.close();
        }
        w.close().newline();
    }
    w.open("dd", cls("defbody")).newline();
    comment_doc(w, pd.comment, index, pd.file, links, pd.arg_names());
    w.close().newline();
    w.close().newline();
    w.close().newline();
    return w.finish();
}

Page render_file_page(std::string_view file, const DocIndex& index, const RenderOptions& opts)
{
    const FileDoc& fd = index.file_or_throw(file);
    const Target self{Target::Kind::file_page, fd.path, {}};
    Linker links(opts, self);
    const std::string title = fd.module.title.value_or(fd.path);

    Writer w;
    w.element("h1", cls("module"), title).newline();
    w.open("p", cls("modinfo"));
    if (fd.module.module_name) {
        w.text("module ");
        w.element("code", *fd.module.module_name);
        w.text(", ");
    }
    w.text("file ");
    w.element("code", fd.path);
    w.text(" ");
    w.element("a", {{"class", "source"}, {"href", links.href({Target::Kind::source_page, fd.path, {}})}},
              "source");
    w.close().newline();

    if (fd.module.comment) {
        w.open("div", cls("moddoc")).newline();
        comment_doc(w, *fd.module.comment, index, fd.path, links, {});
        w.close().newline();
    }

    w.open("div", cls("preds")).newline();
    for (const PredDoc& pd : fd.preds)
        if (pd.is_public || !opts.public_only)
            w.append(render_pred(pd, index, opts, links));
    w.close().newline();

    auto undoc = undocumented_public(index, fd);
    if (!undoc.empty()) {
        w.open("div", cls("undoc")).newline();
        w.element("h2", "Undocumented public predicates").newline();
        w.open("ul").newline();
        for (const Indicator& pi : undoc) {
            w.open("li", {{"id", pi.str()}});
            w.element("code", pi.str());
            if (!fd.is_defined(pi))
                w.element("span", cls("nodef"), " (not defined)");
            w.close().newline();
        }
        w.close().newline();
        w.close().newline();
    }
    return finish_page(title, crumbs_for(fd.path, Target::Kind::file_page), w.finish(), opts, self, &index);
}

Page render_dir_index(std::string_view dir, const DocIndex& index, const RenderOptions& opts)
{
    if (!index.has_dir(dir))
        throw UnknownDir(std::string(dir));
    const Target self{Target::Kind::dir_index, std::string(dir), {}};
    Linker links(opts, self);
    const std::string title = dir.empty() ? "Index" : "Directory " + std::string(dir);

    Writer w;
    w.element("h1", cls("dir"), title).newline();
    if (const TextDoc* rd = index.readme(dir)) {
        w.open("div", cls("readme")).newline();
        w.append(render_wiki(wiki::parse_wiki(rd->text), index, rd->path, links));
        w.close().newline();
    }
    auto subs = index.subdirs(dir);
    if (!subs.empty()) {
        w.element("h2", "Subdirectories").newline();
        w.open("ul", cls("subdirs")).newline();
        for (const auto& s : subs) {
            w.open("li");
            w.element("a", {{"href", links.href({Target::Kind::dir_index, s, {}})}}, base_name(s) + "/");
            w.close().newline();
        }
        w.close().newline();
    }
    for (const FileDoc* fd : index.files_in(dir)) {
        w.open("div", cls("file-entry")).newline();
        w.open("h2", cls("file"));
        w.element("a", {{"href", links.href({Target::Kind::file_page, fd->path, {}})}}, base_name(fd->path));
        if (fd->module.title) {
            w.text(": ");
            w.element("span", cls("title"), *fd->module.title);
        }
        w.text(" ");
        w.element("a", {{"class", "source"}, {"href", links.href({Target::Kind::source_page, fd->path, {}})}},
                  "source");
        w.close().newline();

        w.open("table", cls("summary")).newline();
        auto row = [&](const Indicator& pi, const std::string& summary, bool pub) {
            w.open("tr", pub ? Attrs{} : cls("private"));
            w.open("td", cls("pi"));
            w.element("a", {{"href", links.href({Target::Kind::file_page, fd->path, pi.str()})}}, pi.str());
            w.close();
            w.element("td", cls("summary"), summary);
            w.close().newline();
        };
        for (const PredDoc& pd : fd->preds)
            if (pd.is_public || !opts.public_only)
                row(pd.indicator, pd.summary.text, pd.is_public);
        for (const Indicator& pi : undocumented_public(index, *fd))
            row(pi, "", true);
        w.close().newline();
        w.close().newline();
    }
    std::vector<const TextDoc*> pages;
    for (const TextDoc* t : index.texts_in(dir))
        if (t != index.readme(dir))
            pages.push_back(t);
    if (!pages.empty()) {
        w.element("h2", "Wiki pages").newline();
        w.open("ul", cls("wiki-pages")).newline();
        for (const TextDoc* t : pages) {
            w.open("li");
            w.element("a", {{"href", links.href({Target::Kind::text_page, t->path, {}})}}, base_name(t->path));
            w.close().newline();
        }
        w.close().newline();
    }
    auto crumbs = crumbs_for(dir, Target::Kind::dir_index);
    return finish_page(title, std::move(crumbs), w.finish(), opts, self, &index);
}

Page render_text_page(std::string_view file, const DocIndex& index, const RenderOptions& opts)
{
    auto it = index.texts.find(std::string(file));
    if (it == index.texts.end())
        throw UnknownFile(std::string(file));
    const Target self{Target::Kind::text_page, it->first, {}};
    Linker links(opts, self);
    Writer w;
    w.element("h1", cls("file"), base_name(it->first)).newline();
    w.open("div", cls("wiki")).newline();
    w.append(render_wiki(wiki::parse_wiki(it->second.text), index, it->first, links));
    w.close().newline();
    return finish_page(base_name(it->first), crumbs_for(it->first, Target::Kind::text_page), w.finish(), opts,
                       self, &index);
}

Page render_source_page(std::string_view file, const DocIndex& index, const RenderOptions& opts)
{
    const FileDoc& fd = index.file_or_throw(file);
    const Target self{Target::Kind::source_page, fd.path, {}};
    Linker links(opts, self);
    const std::string& text = fd.text;

    SourceReadResult src = read_source(text);
    XrefReport report = cross_reference(src.units, fd.module);
    std::vector<ColourSpan> spans = colour_source(text, src, report);

    // Structured comment groups are shown rendered, with the raw text folded.
    std::vector<CommentRecord> all;
    for (const ClauseUnit& u : src.units)
        all.insert(all.end(), u.leading_comments.begin(), u.leading_comments.end());
    std::vector<std::pair<CommentRecord, StructuredComment>> docs;
    for (const CommentRecord& g : group_comments(all, text))
        if (auto sc = classify_comment(g))
            docs.emplace_back(g, std::move(*sc));

    Writer w;
    w.element("h1", cls("source"), fd.path).newline();
    w.open("p");
    w.element("a", {{"href", links.href({Target::Kind::file_page, fd.path, {}})}}, "documentation");
    w.close().newline();
    w.open("div", cls("source")).newline();

    std::size_t pos = 0, si = 0;
    auto emit_code = [&](std::size_t end) {
        // spans and gaps in [pos, end)
        while (pos < end) {
            while (si < spans.size() && spans[si].span.byte_end <= pos)
                ++si;
            if (si < spans.size() && spans[si].span.byte_start <= pos) {
                std::size_t e = std::min(end, spans[si].span.byte_end);
                w.element("span", cls(css_class(spans[si].cls)), std::string_view(text).substr(pos, e - pos));
                pos = e;
            } else {
                std::size_t e = si < spans.size() ? std::min(end, spans[si].span.byte_start) : end;
                w.text(std::string_view(text).substr(pos, e - pos));
                pos = e;
            }
        }
    };

    w.open("pre", cls("src"));
    for (const auto& [rec, sc] : docs) {
        emit_code(rec.span.byte_start);
        w.close().newline();
        w.open("div", cls("comment-doc")).newline();
        if (sc.kind == CommentKind::predicate_doc && !sc.header_text.empty())
            w.element("pre", cls("header"), sc.header_text).newline();
        comment_doc(w, sc, index, fd.path, links, {});
        w.open("details").newline();
        w.element("summary", "comment source").newline();
        w.open("pre", cls("src"));
        emit_code(rec.span.byte_end);
        w.close().newline();
        w.close().newline();
        w.close().newline();
        w.open("pre", cls("src"));
    }
    emit_code(text.size());
    w.close().newline();
    w.close().newline();
    return finish_page(fd.path + " (source)", crumbs_for(fd.path, Target::Kind::source_page), w.finish(), opts,
                       self, &index);
}

Page render_search_page(std::string_view query, const std::vector<SearchHit>& hits, const DocIndex& index,
                        const RenderOptions& opts)
{
    const Target self{Target::Kind::search, "", {}};
    Linker links(opts, self);
    Writer w;
    w.element("h1", cls("search"), "Search results for \"" + std::string(query) + "\"").newline();
    if (hits.empty()) {
        w.element("p", cls("nohits"), "No matches").newline();
    } else {
        w.open("ul", cls("hits")).newline();
        for (const SearchHit& h : hits) {
            w.open("li", h.is_public ? Attrs{} : cls("private"));
            Target t = h.kind == SearchHit::Kind::module ? Target{Target::Kind::file_page, h.file, {}}
                                                         : Target{Target::Kind::file_page, h.file, h.target};
            w.element("a", {{"href", links.href(t)}}, h.target);
            w.text(" ");
            w.element("span", cls("kind"), to_string(h.kind));
            if (!h.summary.empty()) {
                w.text(" ");
                w.element("span", cls("summary"), h.summary);
            }
            w.close().newline();
        }
        w.close().newline();
    }
    return finish_page("Search: " + std::string(query), crumbs_for("", Target::Kind::dir_index), w.finish(),
                       opts, self, &index);
}

Page render_error_page(int status, std::string_view message, const RenderOptions& opts)
{
    Writer w;
    w.element("h1", cls("error"), std::to_string(status)).newline();
    w.element("p", message).newline();
    return finish_page("Error " + std::to_string(status), crumbs_for("", Target::Kind::dir_index), w.finish(),
                       opts, {Target::Kind::dir_index, "", {}}, nullptr);
}

std::vector<std::string> export_static(const DocIndex& index, const fs::path& outdir, bool public_only)
{
    RenderOptions opts;
    opts.public_only = public_only;
    opts.links = LinkMode::static_site;
    std::vector<std::string> written;

    auto put = [&](const std::string& rel, std::string_view content) {
        fs::path p = outdir / rel;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + p.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("cannot write " + p.string());
        written.push_back(rel);
    };

    for (const auto& d : index.dirs)
        put(Linker::static_path({Target::Kind::dir_index, d, {}}), render_dir_index(d, index, opts).document);
    for (const auto& [path, fd] : index.files) {
        put(Linker::static_path({Target::Kind::file_page, path, {}}), render_file_page(path, index, opts).document);
        put(Linker::static_path({Target::Kind::source_page, path, {}}),
            render_source_page(path, index, opts).document);
    }
    for (const auto& [path, td] : index.texts)
        put(Linker::static_path({Target::Kind::text_page, path, {}}), render_text_page(path, index, opts).document);
    put(Linker::static_path({Target::Kind::stylesheet, {}, {}}), stylesheet());
    for (const auto& img : index.images) {
        fs::path to = outdir / img;
        fs::create_directories(to.parent_path());
        fs::copy_file(index.root / img, to, fs::copy_options::overwrite_existing);
        written.push_back(img);
    }
    return written;
}

} // namespace pldoc
