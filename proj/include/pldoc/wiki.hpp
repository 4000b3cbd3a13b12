#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pldoc/comment_model.hpp"
#include "pldoc/source_span.hpp"

// Parser for the wiki dialect used in comment bodies and .txt files:
// paragraphs, bulleted/numbered/description lists, `==` code fences,
// *bold* / _italic_ / =code= (with *|multi word|* forms), autolinks for
// name/arity, name//arity, file.pl, file.txt and images, [[image.png]]
// inline images, and argument names typeset as references.
// Embedded HTML is never interpreted.

namespace pldoc::wiki {

enum class FileKind { prolog, wiki };

struct Inline {
    enum class Kind { text, bold, italic, code, pred_link, file_link, image, arg_ref };

    Kind kind = Kind::text;
    std::string text;              // text, code, indicator, path or argument name
    std::vector<Inline> children;  // bold / italic
    FileKind file_kind = FileKind::prolog;
    bool inline_image = false;

    static Inline make_text(std::string s) { return {Kind::text, std::move(s), {}, {}, false}; }
    static Inline make_code(std::string s) { return {Kind::code, std::move(s), {}, {}, false}; }
    static Inline make_pred(std::string s) { return {Kind::pred_link, std::move(s), {}, {}, false}; }
    static Inline make_arg(std::string s) { return {Kind::arg_ref, std::move(s), {}, {}, false}; }
    static Inline make_file(std::string s, FileKind k) { return {Kind::file_link, std::move(s), {}, k, false}; }
    static Inline make_image(std::string s, bool in_line) { return {Kind::image, std::move(s), {}, {}, in_line}; }
    static Inline make_font(Kind k, std::vector<Inline> c) { return {k, {}, std::move(c), {}, false}; }

    bool operator==(const Inline&) const = default;
};

using Inlines = std::vector<Inline>;

enum class ListKind { bulleted, numbered, description };

struct Block;

struct ListItem {
    Inlines term;              // description lists only
    Inlines inlines;
    std::vector<Block> blocks; // nested lists / code
};

struct TagEntry {
    TagKeyword keyword;
    std::string param;         // argument name for @param
    Inlines value;
};

struct Block {
    enum class Kind { paragraph, list, code, tags };

    Kind kind = Kind::paragraph;
    Inlines inlines;              // paragraph
    ListKind list_kind = ListKind::bulleted;
    std::vector<ListItem> items;  // list
    std::string code;             // code block, verbatim
    std::vector<TagEntry> tags;   // tag section
};

struct WikiDoc {
    std::vector<Block> blocks;
    Diagnostics diagnostics;
};

WikiDoc parse_wiki(std::string_view text, const std::vector<std::string>& arg_names = {});

Inlines parse_inlines(std::string_view text, const std::vector<std::string>& arg_names = {});

/// Classifies one whitespace-delimited word with trailing punctuation removed.
Inline autolink(std::string_view word);

/// Tries a font change at the start of `s`; on success `consumed` receives
/// the number of bytes the construct spans.
std::optional<Inline> emphasize(std::string_view s, std::size_t& consumed,
                                const std::vector<std::string>& arg_names = {});

/// Replaces capitalised words that equal exactly one argument name by ArgRef.
Inlines mark_args(Inlines inlines, const std::vector<std::string>& arg_names);

Block tag_section(const std::vector<Tag>& tags, const std::vector<std::string>& arg_names = {});

/// Plain wiki source for a document; reparsing yields the same block structure.
std::string to_plain(const WikiDoc& doc);
std::string to_plain(const Inlines& inlines);

bool is_image_path(std::string_view path);

} // namespace pldoc::wiki
