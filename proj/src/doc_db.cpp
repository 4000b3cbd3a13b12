#include "pldoc/doc_db.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pldoc/wiki.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace pldoc {

namespace {

std::optional<Indicator> indicator_term(const Term& t)
{
    bool dcg = t.is("//", 2);
    if (!dcg && !t.is("/", 2))
        return std::nullopt;
    const Term& n = t.args[0];
    const Term& a = t.args[1];
    if (!n.is_atom() || a.kind != Term::Kind::integer || a.int_value < 0)
        return std::nullopt;
    return Indicator{n.name, static_cast<int>(a.int_value), dcg};
}

void list_elements(const Term& list, std::vector<const Term*>& out)
{
    const Term* cur = &list;
    while (cur->is("[|]", 2)) {
        out.push_back(&cur->args[0]);
        cur = &cur->args[1];
    }
}

const Term* strip_module(const Term* t)
{
    while (t->is(":", 2) && t->args[0].is_atom())
        t = &t->args[1];
    return t;
}

std::optional<Indicator> head_indicator(const Term& clause)
{
    if (clause.is(":-", 1) || clause.is("?-", 1))
        return std::nullopt;
    if (clause.is("-->", 2)) {
        const Term* h = &clause.args[0];
        if (h->is(",", 2)) // pushback
            h = &h->args[0];
        h = strip_module(h);
        if (!h->is_callable())
            return std::nullopt;
        return Indicator{h->name, static_cast<int>(h->arity()), true};
    }
    const Term* h = clause.is(":-", 2) ? &clause.args[0] : &clause;
    h = strip_module(h);
    if (!h->is_callable())
        return std::nullopt;
    return Indicator{h->name, static_cast<int>(h->arity()), false};
}

// Header errors carry header-relative lines; the header starts on the
// comment's first line unless a slashstar comment opens with a bare `/**`.
SourceSpan header_error_span(const StructuredComment& sc, const HeaderSyntaxError& e)
{
    int first = sc.span.line_start;
    if (sc.style == MarkerStyle::slashstar) {
        std::string_view raw = sc.raw;
        std::string_view line0 = raw.substr(0, raw.find('\n'));
        if (text::trim(line0) == "/**")
            ++first;
    }
    SourceSpan s = sc.span;
    s.line_start = first + e.span().line_start - 1;
    s.line_end = first + e.span().line_end - 1;
    return s;
}

FileStamp stamp_of(const fs::path& p, std::error_code& ec)
{
    FileStamp s;
    auto t = fs::last_write_time(p, ec);
    if (ec)
        return s;
    s.mtime = static_cast<std::int64_t>(t.time_since_epoch().count());
    s.size = fs::file_size(p, ec);
    return s;
}

bool read_file(const fs::path& p, std::string& out)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return !in.bad();
}

std::string rel_string(const fs::path& p) { return p.generic_string(); }

std::string parent_dir(std::string_view rel)
{
    auto slash = rel.rfind('/');
    return slash == std::string_view::npos ? std::string() : std::string(rel.substr(0, slash));
}

bool is_readme(std::string_view name)
{
    std::string l = text::to_lower(name);
    return l == "readme" || l == "readme.md" || l == "readme.txt";
}

bool hidden(const fs::path& rel)
{
    for (const auto& part : rel)
        if (!part.empty() && part.native()[0] == '.' && part != "." && part != "..")
            return true;
    return false;
}

struct ScanEntry {
    enum class Kind { prolog, text, image } kind;
    std::string rel;
    fs::path abs;
};

std::vector<ScanEntry> scan(const fs::path& root, Diagnostics& diags)
{
    std::vector<ScanEntry> out;
    std::error_code ec;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        diags.push_back({Severity::error, "IoError", ec.message(), rel_string(root), {}});
        return out;
    }
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            diags.push_back({Severity::error, "IoError", ec.message(), "", {}});
            break;
        }
        const fs::path rel = fs::relative(it->path(), root, ec);
        if (ec || hidden(rel)) {
            if (it->is_directory(ec))
                it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file(ec))
            continue;
        const std::string name = it->path().filename().string();
        const std::string ext = text::to_lower(it->path().extension().string());
        ScanEntry e{ScanEntry::Kind::prolog, rel_string(rel), it->path()};
        if (ext == ".pl")
            e.kind = ScanEntry::Kind::prolog;
        else if (ext == ".txt" || is_readme(name))
            e.kind = ScanEntry::Kind::text;
        else if (wiki::is_image_path(name))
            e.kind = ScanEntry::Kind::image;
        else
            continue;
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rel < b.rel; });
    return out;
}

DocIndex assemble(const fs::path& root, const DocIndex* prev, const IndexOptions& opts)
{
    DocIndex idx;
    idx.root = root;
    idx.generation = prev ? prev->generation + 1 : 1;
    std::set<std::string> dirs{""};

    for (const ScanEntry& e : scan(root, idx.diagnostics)) {
        for (std::string d = parent_dir(e.rel); !d.empty(); d = parent_dir(d))
            dirs.insert(d);
        if (e.kind == ScanEntry::Kind::image) {
            idx.images.push_back(e.rel);
            continue;
        }
        std::error_code ec;
        FileStamp st = stamp_of(e.abs, ec);
        if (ec) {
            idx.diagnostics.push_back({Severity::error, "IoError", ec.message(), e.rel, {}});
            continue;
        }
        if (e.kind == ScanEntry::Kind::prolog && prev) {
            if (const FileDoc* old = prev->file(e.rel); old && old->stamp == st) {
                idx.files.emplace(e.rel, *old);
                continue;
            }
        }
        if (e.kind == ScanEntry::Kind::text && prev) {
            if (auto it = prev->texts.find(e.rel); it != prev->texts.end() && it->second.stamp == st) {
                idx.texts.emplace(e.rel, it->second);
                continue;
            }
        }
        std::string content;
        if (!read_file(e.abs, content)) {
            idx.diagnostics.push_back({Severity::error, "IoError", "cannot read file", e.rel, {}});
            continue;
        }
        idx.parsed.push_back(e.rel);
        if (e.kind == ScanEntry::Kind::prolog) {
            FileDoc fd = parse_file(e.rel, std::move(content), opts);
            fd.stamp = st;
            idx.files.emplace(e.rel, std::move(fd));
        } else {
            idx.texts.emplace(e.rel, TextDoc{e.rel, std::move(content), st});
        }
    }
    idx.dirs.assign(dirs.begin(), dirs.end());
    return idx;
}

// Lower-cased words of `s`; `_` separates words, and the whole lower-cased
// string is included as well so that `atom_to_term` matches itself.
std::set<std::string> word_set(std::string_view s, bool with_whole = false)
{
    std::set<std::string> out;
    for (auto& w : text::words(s))
        out.insert(text::to_lower(w));
    if (with_whole && !s.empty())
        out.insert(text::to_lower(s));
    return out;
}

} // namespace

std::vector<std::string> PredDoc::arg_names() const
{
    std::map<std::string, std::size_t> most;
    std::vector<std::string> order;
    for (const ModeDecl& m : modes) {
        std::map<std::string, std::size_t> here;
        for (const ArgSpec& a : m.args)
            ++here[a.name];
        for (const ArgSpec& a : m.args) {
            if (!most.count(a.name))
                order.push_back(a.name);
            most[a.name] = std::max(most[a.name], here[a.name]);
        }
    }
    std::vector<std::string> out;
    for (const auto& name : order)
        out.insert(out.end(), most[name], name);
    return out;
}

const PredDoc* FileDoc::find(const Indicator& pi) const
{
    for (const auto& p : preds)
        if (p.indicator == pi)
            return &p;
    return nullptr;
}

bool FileDoc::is_public(const Indicator& pi) const
{
    if (!module.has_module_directive())
        return true;
    return std::find(module.exports.begin(), module.exports.end(), pi) != module.exports.end();
}

bool FileDoc::is_defined(const Indicator& pi) const
{
    return std::find(defined.begin(), defined.end(), pi) != defined.end();
}

const FileDoc* DocIndex::file(std::string_view rel) const
{
    auto it = files.find(std::string(rel));
    return it == files.end() ? nullptr : &it->second;
}

const FileDoc& DocIndex::file_or_throw(std::string_view rel) const
{
    if (const FileDoc* f = file(rel))
        return *f;
    throw UnknownFile(std::string(rel));
}

bool DocIndex::has_dir(std::string_view rel) const
{
    return std::find(dirs.begin(), dirs.end(), rel) != dirs.end();
}

std::vector<const FileDoc*> DocIndex::files_in(std::string_view dir) const
{
    std::vector<const FileDoc*> out;
    for (const auto& [path, fd] : files)
        if (parent_dir(path) == dir)
            out.push_back(&fd);
    return out;
}

std::vector<const TextDoc*> DocIndex::texts_in(std::string_view dir) const
{
    std::vector<const TextDoc*> out;
    for (const auto& [path, td] : texts)
        if (parent_dir(path) == dir)
            out.push_back(&td);
    return out;
}

std::vector<std::string> DocIndex::subdirs(std::string_view dir) const
{
    std::vector<std::string> out;
    for (const auto& d : dirs)
        if (!d.empty() && parent_dir(d) == dir)
            out.push_back(d);
    return out;
}

const TextDoc* DocIndex::readme(std::string_view dir) const
{
    for (const TextDoc* t : texts_in(dir)) {
        std::string_view name = t->path;
        if (auto s = name.rfind('/'); s != std::string_view::npos)
            name.remove_prefix(s + 1);
        if (is_readme(name))
            return t;
    }
    return nullptr;
}

const PredDoc* DocIndex::find_pred(const Indicator& pi) const
{
    for (const auto& [path, fd] : files)
        if (const PredDoc* p = fd.find(pi))
            return p;
    return nullptr;
}

const FileDoc* DocIndex::locate(const Indicator& pi, std::string_view origin) const
{
    if (const FileDoc* f = file(origin); f && (f->find(pi) || f->is_defined(pi)))
        return f;
    for (const auto& [path, fd] : files)
        if (fd.find(pi) || (fd.is_defined(pi) && fd.is_public(pi)))
            return &fd;
    return nullptr;
}

FileDoc parse_file(std::string path, std::string text, const IndexOptions& opts)
{
    FileDoc fd;
    fd.path = std::move(path);
    fd.text = std::move(text);
    fd.module.file = fd.path;

    SourceReadResult src = read_source(fd.text, opts.ops);
    for (auto& d : src.diagnostics) {
        d.file = fd.path;
        fd.diagnostics.push_back(std::move(d));
    }

    std::vector<CommentRecord> comments;
    for (const ClauseUnit& u : src.units) {
        auto grouped = group_comments(u.leading_comments, fd.text, opts.comments);
        comments.insert(comments.end(), grouped.begin(), grouped.end());

        if (!u.term)
            continue;
        const Term& t = *u.term;
        if (t.is(":-", 1)) {
            const Term& d = t.args[0];
            if (d.is("module", 2) && d.args[0].is_atom() && !fd.module.module_name) {
                fd.module.module_name = d.args[0].name;
                std::vector<const Term*> elems;
                list_elements(d.args[1], elems);
                for (const Term* e : elems)
                    if (auto pi = indicator_term(*e))
                        fd.module.exports.push_back(*pi);
            }
            continue;
        }
        if (auto pi = head_indicator(t); pi && !fd.is_defined(*pi))
            fd.defined.push_back(*pi);
    }

    for (const CommentRecord& c : comments) {
        auto sc = classify_comment(c, opts.comments);
        if (!sc)
            continue;
        for (auto d : sc->diagnostics) {
            d.file = fd.path;
            fd.diagnostics.push_back(std::move(d));
        }
        if (sc->kind == CommentKind::module_doc) {
            if (fd.module.comment) {
                fd.diagnostics.push_back({Severity::warning, "DuplicateModuleComment",
                                          "more than one module comment", fd.path, sc->span});
                continue;
            }
            try {
                HeaderParse hp = parse_formal_header(sc->header_text, opts.ops);
                fd.module.title = hp.module().title;
            } catch (const HeaderSyntaxError& e) {
                fd.diagnostics.push_back({Severity::warning, to_string(e.reason()), e.what(), fd.path,
                                          header_error_span(*sc, e)});
            }
            fd.module.summary = extract_summary(sc->body_text, CommentKind::module_doc);
            fd.module.comment = std::move(*sc);
            continue;
        }

        HeaderParse hp{std::vector<ModeDecl>{}, {}};
        try {
            hp = parse_formal_header(sc->header_text, opts.ops);
        } catch (const HeaderSyntaxError& e) {
            fd.diagnostics.push_back({Severity::warning, to_string(e.reason()), e.what(), fd.path,
                                      header_error_span(*sc, e)});
            continue;
        }
        for (auto d : hp.notes) {
            d.file = fd.path;
            d.span = sc->span;
            fd.diagnostics.push_back(std::move(d));
        }

        // One PredDoc per distinct indicator, sharing the comment.
        std::vector<PredDoc> fresh;
        for (const ModeDecl& m : hp.modes()) {
            Indicator pi = m.indicator();
            auto it = std::find_if(fresh.begin(), fresh.end(),
                                   [&](const PredDoc& p) { return p.indicator == pi; });
            if (it != fresh.end()) {
                it->modes.push_back(m);
                continue;
            }
            PredDoc pd;
            pd.indicator = pi;
            pd.modes.push_back(m);
            pd.file = fd.path;
            pd.line = sc->span.line_start;
            pd.summary = extract_summary(sc->body_text);
            fresh.push_back(std::move(pd));
        }
        for (auto& pd : fresh) {
            if (fd.find(pd.indicator)) {
                fd.diagnostics.push_back({Severity::warning, "DuplicateDoc",
                                          pd.indicator.str() + " is documented more than once", fd.path,
                                          sc->span});
                continue;
            }
            pd.comment = *sc;
            fd.preds.push_back(std::move(pd));
        }
    }

    for (PredDoc& pd : fd.preds) {
        pd.is_public = fd.is_public(pd.indicator);
        if (!fd.is_defined(pd.indicator))
            fd.diagnostics.push_back({Severity::info, "DocumentedNotDefined",
                                      pd.indicator.str() + " is documented but has no clauses here",
                                      fd.path, pd.comment.span});
        const auto names = pd.arg_names();
        for (const Tag& t : pd.comment.tags) {
            if (t.keyword != TagKeyword::param)
                continue;
            std::string name(t.value.substr(0, t.value.find_first_of(" \t")));
            if (std::find(names.begin(), names.end(), name) == names.end())
                fd.diagnostics.push_back({Severity::warning, "UnknownParam",
                                          "@param " + name + " does not name an argument of " +
                                              pd.indicator.str(),
                                          fd.path, pd.comment.span});
        }
    }
    return fd;
}

DocIndex build_index(const fs::path& root, const IndexOptions& opts)
{
    return assemble(root, nullptr, opts);
}

DocIndex reload(const DocIndex& prev, const IndexOptions& opts)
{
    return assemble(prev.root, &prev, opts);
}

std::vector<Indicator> undocumented_exports(const DocIndex& index, std::string_view file)
{
    const FileDoc& fd = index.file_or_throw(file);
    std::vector<Indicator> out;
    for (const Indicator& e : fd.module.exports)
        if (!fd.find(e) && std::find(out.begin(), out.end(), e) == out.end())
            out.push_back(e);
    return out;
}

const char* to_string(SearchHit::Kind k)
{
    return k == SearchHit::Kind::module ? "module" : "predicate";
}

std::vector<SearchHit> search(const DocIndex& index, std::string_view query, bool include_private,
                              const ExternalCorpus& extra)
{
    const std::set<std::string> qwords = word_set(query);
    std::vector<SearchHit> hits;
    if (qwords.empty())
        return hits;

    auto score = [&](const std::set<std::string>& name, const std::set<std::string>& args,
                     const std::set<std::string>& summary) {
        int s = 0;
        for (const auto& w : qwords)
            s += 3 * static_cast<int>(name.count(w)) + 2 * static_cast<int>(args.count(w)) +
                 static_cast<int>(summary.count(w));
        return s;
    };

    for (const auto& [path, fd] : index.files) {
        for (const PredDoc& pd : fd.preds) {
            if (!include_private && !pd.is_public)
                continue;
            std::set<std::string> args;
            for (const ModeDecl& m : pd.modes)
                for (const ArgSpec& a : m.args) {
                    args.merge(word_set(a.name, true));
                    if (a.type)
                        args.merge(word_set(format_term(*a.type)));
                }
            int s = score(word_set(pd.indicator.name, true), args, word_set(pd.summary.text));
            if (s > 0)
                hits.push_back({pd.indicator.str(), SearchHit::Kind::predicate, pd.summary.text,
                                pd.is_public, s, fd.path, pd.line});
        }
        for (const Indicator& pi : fd.defined) {
            if (fd.find(pi))
                continue;
            bool pub = fd.is_public(pi);
            if (!include_private && !pub)
                continue;
            int s = score(word_set(pi.name, true), {}, {});
            if (s > 0)
                hits.push_back({pi.str(), SearchHit::Kind::predicate, "", pub, s, fd.path, 1});
        }

        std::string stem = fs::path(path).stem().string();
        std::set<std::string> name = word_set(fd.module.module_name.value_or(stem), true);
        name.merge(word_set(stem, true));
        std::set<std::string> summary = word_set(fd.module.title.value_or(""));
        summary.merge(word_set(fd.module.summary.text));
        int s = score(name, {}, summary);
        if (s > 0) {
            const std::string& sum = !fd.module.summary.text.empty() ? fd.module.summary.text
                                                                     : fd.module.title.value_or("");
            hits.push_back({path, SearchHit::Kind::module, sum, true, s, fd.path, 1});
        }
    }
    if (extra) {
        auto more = extra(query);
        hits.insert(hits.end(), more.begin(), more.end());
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.target != b.target)
            return a.target < b.target;
        return a.file < b.file;
    });
    return hits;
}

DocHandle::DocHandle(DocIndex initial, IndexOptions opts)
    : current_(std::make_shared<const DocIndex>(std::move(initial))), opts_(std::move(opts))
{
}

std::shared_ptr<const DocIndex> DocHandle::snapshot() const
{
    std::lock_guard lock(mutex_);
    return current_;
}

std::shared_ptr<const DocIndex> DocHandle::reload()
{
    std::lock_guard serial(reload_mutex_);
    auto prev = snapshot();
    auto next = std::make_shared<const DocIndex>(pldoc::reload(*prev, opts_));
    std::lock_guard lock(mutex_);
    current_ = next;
    return next;
}

} // namespace pldoc
