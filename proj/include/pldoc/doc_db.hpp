#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pldoc/comment_model.hpp"
#include "pldoc/header_parser.hpp"
#include "pldoc/indicator.hpp"
#include "pldoc/prolog_reader.hpp"

namespace pldoc {

struct PredDoc {
    Indicator indicator;
    std::vector<ModeDecl> modes;
    StructuredComment comment;
    Summary summary;
    std::string file;   // path relative to the index root
    int line = 1;       // first line of the comment
    bool is_public = true;

    /// Argument names of all modes; a name used by several modes appears
    /// as often as the mode using it most, so only genuine clashes repeat.
    std::vector<std::string> arg_names() const;
};

struct ModuleDoc {
    std::string file;
    std::optional<std::string> module_name;
    std::optional<std::string> title;
    std::optional<StructuredComment> comment;
    Summary summary;
    std::vector<Indicator> exports;

    bool has_module_directive() const { return module_name.has_value(); }
};

struct FileStamp {
    std::int64_t mtime = 0;
    std::uintmax_t size = 0;
    bool operator==(const FileStamp&) const = default;
};

struct FileDoc {
    std::string path;                 // relative, '/' separated
    std::string text;                 // full source
    FileStamp stamp;
    ModuleDoc module;
    std::vector<PredDoc> preds;       // source order
    std::vector<Indicator> defined;   // clause and grammar-rule heads, source order
    Diagnostics diagnostics;

    const PredDoc* find(const Indicator& pi) const;
    bool is_public(const Indicator& pi) const;
    bool is_defined(const Indicator& pi) const;
};

/// A README or `.txt` page.
struct TextDoc {
    std::string path;
    std::string text;
    FileStamp stamp;
};

class UnknownFile : public std::runtime_error {
public:
    explicit UnknownFile(const std::string& path) : std::runtime_error("unknown file: " + path) {}
};

class DocIndex {
public:
    std::filesystem::path root;
    std::uint64_t generation = 1;
    std::map<std::string, FileDoc> files;    // .pl files by relative path
    std::map<std::string, TextDoc> texts;    // .txt and README files
    std::vector<std::string> images;         // image files under root
    std::vector<std::string> dirs;           // "" is the root itself
    Diagnostics diagnostics;                 // I/O problems
    std::vector<std::string> parsed;         // files (re)parsed to build this snapshot

    const FileDoc* file(std::string_view rel) const;
    const FileDoc& file_or_throw(std::string_view rel) const;
    bool has_dir(std::string_view rel) const;

    /// Files and text pages directly inside `dir`.
    std::vector<const FileDoc*> files_in(std::string_view dir) const;
    std::vector<const TextDoc*> texts_in(std::string_view dir) const;
    std::vector<std::string> subdirs(std::string_view dir) const;
    const TextDoc* readme(std::string_view dir) const;

    /// Documented predicate by indicator; files are searched in path order.
    const PredDoc* find_pred(const Indicator& pi) const;
    /// File that defines or documents `pi`, with `origin` preferred.
    const FileDoc* locate(const Indicator& pi, std::string_view origin = {}) const;
};

struct IndexOptions {
    CommentOptions comments;
    OperatorTable ops = default_operator_table();
};

/// Turns one source text into its file documentation. Pure.
FileDoc parse_file(std::string path, std::string text, const IndexOptions& opts = {});

DocIndex build_index(const std::filesystem::path& root, const IndexOptions& opts = {});

/// Rescans `prev.root`; files with unchanged size and modification time keep
/// their entries, the rest are parsed again.
DocIndex reload(const DocIndex& prev, const IndexOptions& opts = {});

/// Exports of a module file without a PredDoc, in export-list order.
std::vector<Indicator> undocumented_exports(const DocIndex& index, std::string_view file);

struct SearchHit {
    enum class Kind { predicate, module };

    std::string target;   // indicator, or file path for module hits
    Kind kind = Kind::predicate;
    std::string summary;
    bool is_public = true;
    int score = 0;
    std::string file;
    int line = 1;
};

const char* to_string(SearchHit::Kind k);

/// Supplies hits from a corpus outside the scanned tree.
using ExternalCorpus = std::function<std::vector<SearchHit>(std::string_view query)>;

/// Case-insensitive word search. Per distinct query word a hit scores 3 for
/// a name match, 2 for an argument name or type match and 1 for a summary
/// match. Ordered by descending score, then target, then file.
std::vector<SearchHit> search(const DocIndex& index, std::string_view query,
                              bool include_private = true, const ExternalCorpus& extra = {});

/// Shared, swappable reference to the current index. Readers take a snapshot
/// and keep it for as long as they need; reloads build a complete new index
/// and publish it in one step.
class DocHandle {
public:
    explicit DocHandle(DocIndex initial, IndexOptions opts = {});

    std::shared_ptr<const DocIndex> snapshot() const;
    /// Serialised with other reloads; returns the published snapshot.
    std::shared_ptr<const DocIndex> reload();

private:
    mutable std::mutex mutex_;
    std::mutex reload_mutex_;
    std::shared_ptr<const DocIndex> current_;
    IndexOptions opts_;
};

} // namespace pldoc
