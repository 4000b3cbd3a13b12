#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pldoc/indicator.hpp"
#include "pldoc/prolog_reader.hpp"

namespace pldoc {

enum class Determinism { unspecified, det, semidet, nondet, multi };

const char* to_string(Determinism d);

/// Argument mode characters: + - ? : @ !
enum class ArgMode : char {
    none = 0,
    in = '+',
    out = '-',
    either = '?',
    meta = ':',
    unaltered = '@',
    mutable_ = '!',
};

std::optional<ArgMode> parse_arg_mode(std::string_view s);

struct ArgSpec {
    ArgMode mode = ArgMode::none;
    std::string name;
    std::optional<Term> type;

    bool is_meta() const { return mode == ArgMode::meta; }
    bool same(const ArgSpec& o) const;
};

struct ModeDecl {
    std::string name;
    bool is_dcg = false;
    Determinism det = Determinism::unspecified;
    std::vector<ArgSpec> args;

    int arity() const { return static_cast<int>(args.size()); }
    Indicator indicator() const { return Indicator{name, arity(), is_dcg}; }
    bool same(const ModeDecl& o) const;
};

/// "name/arity", or "name//arity" for a grammar rule.
std::string indicator(const ModeDecl& md);

/// Re-prints a mode the way it is written in a header.
std::string to_string(const ModeDecl& md, const OperatorTable& ops = default_operator_table());

struct ModuleHeader {
    std::string title;
};

class HeaderSyntaxError : public std::runtime_error {
public:
    enum class Reason {
        syntax, non_variable_arg_name, bad_determinism, bad_mode, bad_head, empty_title
    };

    HeaderSyntaxError(Reason reason, SourceSpan span, const std::string& message)
        : std::runtime_error(message), reason_(reason), span_(span) {}

    Reason reason() const { return reason_; }
    /// Offsets are relative to the header text; lines count from 1.
    const SourceSpan& span() const { return span_; }

private:
    Reason reason_;
    SourceSpan span_;
};

const char* to_string(HeaderSyntaxError::Reason r);

struct HeaderParse {
    std::variant<ModuleHeader, std::vector<ModeDecl>> value;
    Diagnostics notes; // informational, e.g. name//0

    bool is_module() const { return std::holds_alternative<ModuleHeader>(value); }
    const ModuleHeader& module() const { return std::get<ModuleHeader>(value); }
    const std::vector<ModeDecl>& modes() const { return std::get<std::vector<ModeDecl>>(value); }
};

/// Reads each header term (one per line; a term continues while brackets
/// are open) and matches it against the mode grammar. Throws
/// HeaderSyntaxError on the first malformed term.
HeaderParse parse_formal_header(std::string_view header_text,
                                const OperatorTable& ops = default_operator_table());

/// Parses a single mode term such as "foo(+X:atom) is det".
ModeDecl parse_mode(std::string_view text, const OperatorTable& ops = default_operator_table());

/// Throws HeaderSyntaxError(bad_determinism) for anything but the four values.
Determinism validate_determinism(std::string_view atom);

/// The reader table used for headers: `ops` plus a postfix `//` and prefix
/// entries for symbol characters so that bad mode characters are diagnosed
/// as modes rather than as generic syntax errors.
OperatorTable header_operator_table(const OperatorTable& ops = default_operator_table());

} // namespace pldoc
