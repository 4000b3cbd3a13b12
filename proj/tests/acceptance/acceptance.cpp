// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "markup_check.hpp"
#include "parity.hpp"
#include "pldoc/cli.hpp"
#include "pldoc/doc_server.hpp"
#include "pldoc/html_backend.hpp"
#include "pldoc/xref.hpp"
#include "term_oracle.hpp"

namespace fs = std::filesystem;
using namespace pldoc;
using testsupport::TempDir;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// The verbatim listing in the reference text that starts with the module comment.
std::string reference_listing()
{
    std::string ref = testsupport::read_file(PLDOC_REFERENCE_TEXT);
    std::size_t b = ref.find("/** <module> Base64 encoding and decoding");
    if (b == std::string::npos)
        return {};
    std::size_t e = ref.find("\\end{verbatim}", b);
    return ref.substr(b, e - b);
}

Outcome base64_end_to_end()
{
    std::string src = reference_listing();
    if (src.empty())
        return fail("listing not found in the reference text");
    if (src != testsupport::read_file(testsupport::corpus_dir() / "base64.pl"))
        return fail("tests/corpus/base64.pl differs from the reference listing");

    TempDir dir;
    dir.write("base64.pl", src);
    auto t0 = std::chrono::steady_clock::now();
    DocIndex idx = build_index(dir.path());
    const FileDoc* fd = idx.file("base64.pl");
    if (!fd || !fd->module.comment)
        return fail("no module comment");
    wiki::WikiDoc body = wiki::parse_wiki(fd->module.comment->body_text);
    Page page = render_file_page("base64.pl", idx, RenderOptions{});
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (fd->module.title != std::optional<std::string>("Base64 encoding and decoding"))
        return fail("title: " + fd->module.title.value_or("<none>"));
    if (fd->module.summary.text != "Prolog-based base64 encoding using DCG rules.")
        return fail("summary: " + fd->module.summary.text);
    std::vector<std::string> code;
    for (const auto& b : body.blocks)
        if (b.kind == wiki::Block::Kind::code)
            code.push_back(b.code);
    if (code.size() != 1)
        return fail(std::to_string(code.size()) + " code blocks");
    for (const char* q : {"1 ?- base64('Hello World', X).\nX = 'SGVsbG8gV29ybGQ='",
                          "2 ?- base64(H, 'SGVsbG8gV29ybGQ=').\nH = 'Hello World'"})
        if (code[0].find(q) == std::string::npos)
            return fail(std::string("code block lacks ") + q);
    const auto& tags = fd->module.comment->tags;
    std::vector<TagKeyword> kws;
    for (const Tag& t : tags)
        kws.push_back(t.keyword);
    if (kws != std::vector<TagKeyword>{TagKeyword::tbd, TagKeyword::tbd, TagKeyword::author})
        return fail("tags differ");
    auto rendered = testsupport::element_texts(page.document, "pre", "code");
    if (rendered.size() != 1 || rendered[0] != code[0])
        return fail("rendered code block differs");
    if (ms >= 1000)
        return fail("took " + std::to_string(ms) + " ms");
    return {true, "title, summary, 1 code block, tags [tbd,tbd,author]; " + std::to_string(ms) + " ms"};
}

Outcome header_conformance()
{
    const char* accept[] = {
        "p(+A)", "p(-A)", "p(?A)", "p(:A)", "p(@A)", "p(!A)",
        "p(+A:integer)", "p(-A:list(atom))", "p(?A:term)", "p(:A:callable)", "p(@A:stream)", "p(!A:mutable)",
        "digits(-Ds:list)//", "blank//", "expr(-T)// is semidet",
        "p(+A) is det", "p(+A) is semidet", "p(?A) is nondet", "p(-A) is multi",
        "halt_all", "reset is det", "lists:append(?L1, ?L2, ?L3) is nondet",
        "p(A, B:atom)", "pairs_keys(+Pairs:list(pair), -Keys:list) is det.",
    };
    const std::pair<const char*, HeaderSyntaxError::Reason> reject[] = {
        {"p(+x)", HeaderSyntaxError::Reason::non_variable_arg_name},
        {"p(+A) is foo", HeaderSyntaxError::Reason::bad_determinism},
        {"p(*A)", HeaderSyntaxError::Reason::bad_mode},
        {"p(+A", HeaderSyntaxError::Reason::syntax},
        {"p(+A))", HeaderSyntaxError::Reason::syntax},
        {"p(+1)", HeaderSyntaxError::Reason::non_variable_arg_name},
        {"p(+A) is", HeaderSyntaxError::Reason::syntax},
        {"p(+ -A)", HeaderSyntaxError::Reason::bad_mode},
        {"p(+A) is Det", HeaderSyntaxError::Reason::bad_determinism},
        {"42", HeaderSyntaxError::Reason::bad_head},
        {"p(+f(A))", HeaderSyntaxError::Reason::non_variable_arg_name},
        {"p(#A)", HeaderSyntaxError::Reason::bad_mode},
    };
    int ok = 0, total = 0;
    std::string bad;
    for (const char* h : accept) {
        ++total;
        try {
            HeaderParse hp = parse_formal_header(h);
            if (hp.modes().size() == 1)
                ++ok;
            else
                bad += std::string(" accept:") + h;
        } catch (const HeaderSyntaxError& e) {
            bad += std::string(" accept:") + h + "(" + e.what() + ")";
        }
    }
    for (auto [h, reason] : reject) {
        ++total;
        try {
            parse_formal_header(h);
            bad += std::string(" reject:") + h;
        } catch (const HeaderSyntaxError& e) {
            if (e.reason() == reason)
                ++ok;
            else
                bad += std::string(" reject:") + h + "(" + to_string(e.reason()) + ")";
        }
    }
    std::string counts = std::to_string(std::size(accept)) + " accept, " + std::to_string(std::size(reject)) +
                         " reject; " + std::to_string(ok) + "/" + std::to_string(total) + " correct";
    if (ok != total)
        return fail(counts + ":" + bad);
    return {true, counts};
}

int run_cli(std::vector<std::string> args, std::string& out)
{
    std::ostringstream o, e;
    std::istringstream in;
    int code = cli::run(args, o, e, in);
    out = o.str();
    return code;
}

Outcome undocumented_exports_lint()
{
    const std::string head = ":- module(m, [alpha/1, beta/2, gamma//0]).\n\n";
    const std::string documented = "%!  alpha(+X) is det.\n%   Alpha.\nalpha(_).\n\n"
                                   "%!  beta(+X, -Y) is det.\n%   Beta.\nbeta(X, X).\n\n";
    TempDir partial, full;
    partial.write("m.pl", head + documented + "gamma --> [].\n");
    full.write("m.pl", head + documented + "%!  gamma// is det.\n%   Gamma.\ngamma --> [].\n");

    std::string out;
    int code = run_cli({"lint", partial.path().string()}, out);
    if (code != 1)
        return fail("partial corpus exit " + std::to_string(code));
    if (out != "m.pl: undocumented export gamma//0\n")
        return fail("partial corpus output: " + out);
    std::string out_full;
    int code_full = run_cli({"lint", full.path().string()}, out_full);
    if (code_full != 0)
        return fail("documented corpus exit " + std::to_string(code_full) + ": " + out_full);
    return {true, "3 exports/2 documented -> exit 1 listing gamma//0; fully documented -> exit 0"};
}

Outcome search_behaviour()
{
    TempDir dir;
    dir.write("base64.pl", reference_listing());
    std::string first;
    for (int i = 0; i < 20; ++i) {
        DocIndex idx = build_index(dir.path());
        auto hits = search(idx, "base64");
        std::string line;
        for (const auto& h : hits)
            line += h.target + "/" + to_string(h.kind) + "/" + std::to_string(h.score) + " ";
        if (i == 0) {
            first = line;
            bool module = std::any_of(hits.begin(), hits.end(), [](const SearchHit& h) {
                return h.kind == SearchHit::Kind::module && h.file == "base64.pl";
            });
            bool pred = std::any_of(hits.begin(), hits.end(), [](const SearchHit& h) { return h.target == "base64/2"; });
            if (!module || !pred)
                return fail("hits: " + line);
        } else if (line != first) {
            return fail("run " + std::to_string(i) + " differs: " + line);
        }
    }
    std::string cli_a, cli_b;
    run_cli({"search", "base64", dir.path().string()}, cli_a);
    run_cli({"search", "base64", dir.path().string()}, cli_b);
    if (cli_a != cli_b || cli_a.empty())
        return fail("CLI output differs between runs");
    return {true, "hits " + first + "identical over 20 index builds"};
}

Outcome escaping_safety()
{
    const char* pieces[] = {"<", ">", "&", "*", "==", "<zq>", "</zq>", "<zq class=\"x\">", "&lt;", "&#60;",
                            "*<zq>*", "=<zq>=", "*|a<zq>b|*", "_<_", "- <zq>", "$ <zq> : >", "[[<zq>.png]]",
                            "a<zq>/1", "x.pl<", "word", "\"", "'"};
    std::mt19937 rng(8675309);
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    int pages = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::string> words = {"<", ">", "&", "*", "=="};
        for (int k = 0, n = pick(15); k < n; ++k)
            words.push_back(pieces[pick(static_cast<int>(std::size(pieces)))]);
        std::shuffle(words.begin(), words.end(), rng);
        std::string body;
        for (const auto& w : words)
            body += (pick(5) == 0 ? "\n%   " : " ") + w;
        std::string src = "%!  p(+X) is det.\n%\n%  " + body + "\n%\n%   @param X " + words[0] +
                          "\n%   @see " + words[1] + "\np(_).\n";

        DocIndex idx;
        idx.files.emplace("t.pl", parse_file("t.pl", src));
        idx.dirs.push_back("");
        RenderOptions live;
        live.edit_enabled = true;
        RenderOptions stat;
        stat.links = LinkMode::static_site;
        for (const Page& p : {render_file_page("t.pl", idx, live), render_file_page("t.pl", idx, stat),
                              render_source_page("t.pl", idx, live), render_dir_index("", idx, live)}) {
            ++pages;
            if (auto err = testsupport::check_markup(p.document))
                return fail("body #" + std::to_string(i) + ": " + *err + "\n" + src);
            if (p.document.find("<zq") != std::string::npos || p.document.find("</zq") != std::string::npos)
                return fail("input tag leaked in body #" + std::to_string(i));
        }
    }
    return {true, "1000 bodies, " + std::to_string(pages) + " pages well formed, no input tags"};
}

Outcome reader_oracle()
{
    testsupport::TermGenerator gen(1977);
    int agree = 0;
    for (int i = 0; i < 100; ++i) {
        Term t = gen.next(5);
        std::string src = testsupport::oracle_print(t);
        try {
            Term back = read_term(src + " .");
            if (auto d = testsupport::oracle_diff(t, back))
                return fail("term " + std::to_string(i) + " " + src + ": " + *d);
            Term again = read_term(format_term(back) + " .");
            if (auto d = testsupport::oracle_diff(t, again))
                return fail("round trip of " + src + ": " + *d);
            ++agree;
        } catch (const SyntaxError& e) {
            return fail("term " + std::to_string(i) + " " + src + ": " + e.what());
        }
    }
    return {true, std::to_string(agree) + "/100 terms agree with the oracle and round-trip"};
}

Outcome colour_coverage()
{
    int files = 0;
    bool undefined_seen = false;
    std::vector<fs::path> paths;
    for (const auto& e : fs::recursive_directory_iterator(testsupport::corpus_dir()))
        if (e.path().extension() == ".pl")
            paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const fs::path& p : paths) {
        std::string text = testsupport::read_file(p);
        SourceReadResult src = read_source(text);
        FileDoc fd = parse_file(p.filename().string(), text);
        XrefReport rep = cross_reference(src.units, fd.module);
        auto spans = colour_source(text, src, rep);
        std::size_t pos = 0;
        for (const ColourSpan& s : spans) {
            if (s.span.byte_start < pos || s.span.byte_end <= s.span.byte_start || s.span.byte_end > text.size())
                return fail(p.filename().string() + ": bad span at byte " + std::to_string(s.span.byte_start));
            for (std::size_t i = pos; i < s.span.byte_start; ++i)
                if (!std::isspace(static_cast<unsigned char>(text[i])))
                    return fail(p.filename().string() + ": uncovered byte " + std::to_string(i));
            pos = s.span.byte_end;
            if (text.substr(s.span.byte_start, s.span.size()) == "undefined_helper")
                undefined_seen = s.cls == ColourClass::call_undefined;
        }
        for (std::size_t i = pos; i < text.size(); ++i)
            if (!std::isspace(static_cast<unsigned char>(text[i])))
                return fail(p.filename().string() + ": uncovered tail");
        ++files;
    }
    if (!undefined_seen)
        return fail("undefined_helper/3 not classed call_undefined");
    return {true, std::to_string(files) + " files covered; undefined_helper/3 is call_undefined"};
}

std::string marker_file(int gen)
{
    std::string src = "/** <module> Snapshot " + std::to_string(gen) + std::string(gen, '+') + "\n*/\n";
    for (int i = 0; i < 60; ++i)
        src += "%!  p" + std::to_string(i) + "(+X:list, -Y) is det.\n%\n%   Pred *" + std::to_string(i) +
               "* maps X to Y; see p0/2.\np" + std::to_string(i) + "(X, X).\n\n";
    return src;
}

Outcome snapshot_isolation()
{
    TempDir dir;
    dir.write("a.pl", marker_file(1));
    auto docs = std::make_shared<DocHandle>(build_index(dir.path()));
    ServerConfig cfg;
    cfg.stamp_generation = true;
    DocServer server(cfg, docs);

    std::atomic<int> mixed{0}, rendered{0}, ready{0};
    std::set<std::string> seen_gens;
    std::mutex seen_mu;
    std::atomic<bool> go{false};
    std::vector<std::thread> threads;
    for (int t = 0; t < 50; ++t) {
        threads.emplace_back([&] {
            ++ready;
            while (!go)
                std::this_thread::yield();
            for (int k = 0; k < 4; ++k) {
                Request req;
                req.path = "/doc/a.pl";
                Response r = server.handle(req);
                std::string doc = r.body;
                std::size_t m = doc.find("<title>Snapshot ");
                std::size_t g = doc.find("data-generation=\"");
                if (m == std::string::npos || g == std::string::npos) {
                    ++mixed;
                    continue;
                }
                std::string marker = doc.substr(m + 16, doc.find_first_of("+<", m + 16) - m - 16);
                std::string gen = doc.substr(g + 17, doc.find('"', g + 17) - g - 17);
                if (marker != gen)
                    ++mixed;
                ++rendered;
                std::lock_guard<std::mutex> lock(seen_mu);
                seen_gens.insert(gen);
            }
        });
    }
    while (ready < 50)
        std::this_thread::yield();
    go = true;
    for (int gen = 2; gen <= 4; ++gen) {
        dir.write("a.pl", marker_file(gen));
        Request reload{"POST", "/reload", {}, "127.0.0.1"};
        if (server.handle(reload).status != 200)
            return fail("reload refused");
    }
    for (auto& t : threads)
        t.join();
    std::string gens;
    for (const auto& g : seen_gens)
        gens += g + " ";
    if (mixed != 0)
        return fail(std::to_string(mixed.load()) + " mixed pages of " + std::to_string(rendered.load()));
    return {true, std::to_string(rendered.load()) + " pages from 50 threads across 3 reloads, generations seen: " +
                      gens + "; no mixed pages"};
}

Outcome static_live_parity()
{
    TempDir src, out;
    for (const auto& e : fs::recursive_directory_iterator(testsupport::corpus_dir()))
        if (e.is_regular_file())
            testsupport::write_file(src / fs::relative(e.path(), testsupport::corpus_dir()).string(),
                                    testsupport::read_file(e.path()));
    src.write("index.pl", "%!  idx(+X) is det.\n%   Index page predicate; see lib/pairs_util.pl.\nidx(_).\n");

    std::string build_out;
    if (run_cli({"build", src.path().string(), "--out", out.path().string()}, build_out) != 0)
        return fail("build failed");

    auto docs = std::make_shared<DocHandle>(build_index(src.path()));
    ServerConfig cfg;
    cfg.port = 0;
    DocServer server(cfg, docs);
    server.start();
    httplib::Client client("127.0.0.1", server.port());

    // live URL -> static file, spelled out by hand
    std::vector<std::pair<std::string, std::string>> pages = {
        {"/doc/", "index.html"},
        {"/doc/lib/", "lib/index.html"},
        {"/doc/base64.pl", "base64.html"},
        {"/doc/index.pl", "index.pl.html"},
        {"/doc/lib/pairs_util.pl", "lib/pairs_util.html"},
        {"/source/base64.pl", "base64.src.html"},
        {"/source/index.pl", "index.src.html"},
        {"/source/lib/pairs_util.pl", "lib/pairs_util.src.html"},
        {"/doc/README.txt", "README.txt.html"},
        {"/doc/lib/notes.txt", "lib/notes.txt.html"},
    };
    std::size_t html_files = 0;
    for (const auto& e : fs::recursive_directory_iterator(out.path()))
        html_files += e.path().extension() == ".html";
    if (html_files != pages.size())
        return fail("export has " + std::to_string(html_files) + " pages, expected " + std::to_string(pages.size()));

    for (const auto& [url, file] : pages) {
        auto res = client.Get(url);
        if (!res || res->status != 200)
            return fail("GET " + url + " failed");
        std::string live = testsupport::normalize_links(testsupport::strip_live_controls(res->body), true);
        std::string stat = testsupport::normalize_links(testsupport::read_file(out / file), false, file);
        if (live != stat) {
            std::size_t i = 0;
            while (i < live.size() && i < stat.size() && live[i] == stat[i])
                ++i;
            return fail(url + " differs at byte " + std::to_string(i) + ": live '" + live.substr(i, 60) +
                        "' static '" + stat.substr(i, 60) + "'");
        }
    }
    auto css = client.Get("/assets/pldoc.css");
    if (!css || css->body != testsupport::read_file(out / "assets/pldoc.css"))
        return fail("stylesheet differs");
    auto img = client.Get("/doc/lib/diagram.png");
    if (!img || img->body != testsupport::read_file(out / "lib/diagram.png"))
        return fail("image differs");
    server.stop();
    return {true, std::to_string(pages.size()) + " pages, stylesheet and image byte-identical after normalization"};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"base64-end-to-end", base64_end_to_end},
        {"header-grammar-conformance", header_conformance},
        {"undocumented-export-detection", undocumented_exports_lint},
        {"search-behaviour", search_behaviour},
        {"escaping-safety", escaping_safety},
        {"reader-oracle", reader_oracle},
        {"colour-coverage", colour_coverage},
        {"snapshot-isolation", snapshot_isolation},
        {"static-live-parity", static_live_parity},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
