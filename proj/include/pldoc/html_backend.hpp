#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pldoc/doc_db.hpp"
#include "pldoc/html_writer.hpp"
#include "pldoc/wiki.hpp"
#include "pldoc/xref.hpp"

namespace pldoc {

enum class LinkMode {
    live,         // absolute paths below /doc, /source and /assets
    static_site,  // relative paths between exported files
};

struct RenderOptions {
    bool public_only = true;       // zoom off
    bool edit_enabled = false;     // edit and reload controls; loopback peers only
    LinkMode links = LinkMode::live;
    std::string base_url;          // prefix for live links, e.g. "http://host:4000"
    bool stamp_generation = false; // index generation in the footer
};

/// Where a link points, independent of how it is spelled.
struct Target {
    enum class Kind { file_page, text_page, dir_index, source_page, raw_file, stylesheet, search };
    Kind kind = Kind::file_page;
    std::string path;     // relative to the index root; directories without '/'
    std::string fragment; // anchor, e.g. "base64/2"
};

/// Spells targets as hrefs for a page at `page_path` (the logical path of
/// the page being rendered: a file, text, or directory path).
class Linker {
public:
    Linker(const RenderOptions& opts, Target page);

    std::string href(const Target& t) const;
    /// Output file of a target in a static export, relative to the export root.
    static std::string static_path(const Target& t);

private:
    const RenderOptions& opts_;
    std::string page_dir_; // directory of the page's static output file
};

struct Page {
    std::string title;
    std::vector<std::pair<std::string, Target>> breadcrumb;
    html::Fragment body;
    std::vector<std::string> assets;
    std::string document; // complete HTML5 text
};

class UnknownDir : public std::runtime_error {
public:
    explicit UnknownDir(const std::string& d) : std::runtime_error("unknown directory: " + d) {}
};

/// Text of the live-only control wrapper; everything inside it is dropped
/// when comparing live and static pages.
inline constexpr std::string_view control_class = "pldoc-ctl";

html::Fragment render_wiki(const wiki::WikiDoc& doc, const DocIndex& index, std::string_view origin,
                           const Linker& links);
html::Fragment render_inlines(const wiki::Inlines& xs, const DocIndex& index, std::string_view origin,
                              const Linker& links);
html::Fragment render_mode(const ModeDecl& md);

html::Fragment render_pred(const PredDoc& pd, const DocIndex& index, const RenderOptions& opts,
                           const Linker& links);

Page render_file_page(std::string_view file, const DocIndex& index, const RenderOptions& opts);
Page render_dir_index(std::string_view dir, const DocIndex& index, const RenderOptions& opts);
Page render_text_page(std::string_view file, const DocIndex& index, const RenderOptions& opts);
Page render_source_page(std::string_view file, const DocIndex& index, const RenderOptions& opts);
Page render_search_page(std::string_view query, const std::vector<SearchHit>& hits,
                        const DocIndex& index, const RenderOptions& opts);
Page render_error_page(int status, std::string_view message, const RenderOptions& opts);

/// Writes the static site and returns the written paths relative to `outdir`.
std::vector<std::string> export_static(const DocIndex& index, const std::filesystem::path& outdir,
                                       bool public_only = true);

} // namespace pldoc
