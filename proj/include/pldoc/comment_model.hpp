#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pldoc/prolog_reader.hpp"
#include "pldoc/source_span.hpp"

namespace pldoc {

enum class MarkerStyle { percent, slashstar };
enum class CommentKind { predicate_doc, module_doc };

enum class TagKeyword {
    param, throws, error, see, author, version, deprecated, compat, copyright, license, bug, tbd
};

const char* to_string(TagKeyword k);
std::optional<TagKeyword> parse_tag_keyword(std::string_view s);

struct Tag {
    TagKeyword keyword;
    std::string value; // wiki text
    bool operator==(const Tag&) const = default;
};

struct Summary {
    std::string text;
    CommentKind source = CommentKind::predicate_doc;
};

struct StructuredComment {
    MarkerStyle style = MarkerStyle::percent;
    CommentKind kind = CommentKind::predicate_doc;
    std::string raw;               // byte-identical to the source
    SourceSpan span;

    // Content lines after margin stripping, and their three-way partition.
    std::vector<std::string> lines;
    std::vector<std::string> header_lines;
    std::vector<std::string> body_lines;
    std::vector<std::string> tag_lines;

    std::string header_text;
    std::string body_text;
    std::vector<Tag> tags;
    Diagnostics diagnostics;
};

struct CommentOptions {
    bool accept_percent_bang = true; // `%!` as well as `%%`
};

class EmptyHeader : public std::runtime_error {
public:
    EmptyHeader() : std::runtime_error("structured comment has no header") {}
};

/// Merges runs of full-line `%` comments on consecutive lines into single
/// records. A new run starts at a structured marker line unless the previous
/// line was one too, so stacked mode lines stay together.
std::vector<CommentRecord> group_comments(const std::vector<CommentRecord>& comments,
                                          std::string_view source,
                                          const CommentOptions& opts = {});

/// True when the record starts with a structured-comment marker.
bool has_structured_marker(const CommentRecord& c, const CommentOptions& opts = {});

std::optional<StructuredComment> classify_comment(const CommentRecord& c,
                                                  const CommentOptions& opts = {});

struct CommentSections {
    std::vector<std::string> header_lines;
    std::vector<std::string> body_lines;
    std::vector<std::string> tag_lines;

    std::string header_text() const;
    std::string body_text() const;
};

/// Partitions the margin-stripped lines of `sc`. Throws EmptyHeader.
CommentSections split_comment(const StructuredComment& sc);

Summary extract_summary(std::string_view body_text, CommentKind source = CommentKind::predicate_doc);

struct TagParse {
    std::vector<Tag> tags;
    std::vector<std::string> body_lines; // lines rejected as tags, kept as text
    Diagnostics diagnostics;
};

TagParse parse_tags(const std::vector<std::string>& tag_lines);

} // namespace pldoc
