#pragma once

#include <set>
#include <string_view>
#include <vector>

#include "pldoc/comment_model.hpp"
#include "pldoc/doc_db.hpp"
#include "pldoc/indicator.hpp"
#include "pldoc/prolog_reader.hpp"

namespace pldoc {

struct XrefReport {
    std::set<Indicator> defined;
    std::set<Indicator> called;
    std::set<Indicator> exported;
    std::set<Indicator> dynamic_decls;
    bool has_module = false;

    /// Heads of non-module files count as public.
    bool is_public(const Indicator& pi) const { return !has_module || exported.count(pi) > 0; }
};

enum class ColourClass {
    comment,
    structured_comment,
    head_exported,
    head_local,
    call_defined,
    call_undefined,
    variable,
    singleton_variable,
    quoted_atom,
    string,
    number,
    operator_,
    directive,
    plain,
};

/// The CSS class name; identical to the enumerator name ("operator" without
/// the trailing underscore).
const char* css_class(ColourClass c);

struct ColourSpan {
    SourceSpan span;
    ColourClass cls = ColourClass::plain;
};

/// name/arity pairs that need no definition in the scanned file.
const std::set<Indicator>& default_builtins();

XrefReport cross_reference(const std::vector<ClauseUnit>& units, const ModuleDoc& module);

/// One span per token, in source order. Layout between tokens is left
/// uncoloured.
std::vector<ColourSpan> colour_source(std::string_view text, const SourceReadResult& src,
                                      const XrefReport& report,
                                      const std::set<Indicator>& builtins = default_builtins(),
                                      const CommentOptions& comments = {});

} // namespace pldoc
