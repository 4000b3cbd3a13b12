#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pldoc/source_span.hpp"

namespace pldoc {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind {
    atom,          // letter-digit or quoted atom
    variable,
    integer,
    floating,
    string,        // "..." or `...`
    punct,         // symbol-char atom, `!` or `;`
    open,          // (
    close,         // )
    open_list,     // [
    close_list,    // ]
    open_curly,    // {
    close_curly,   // }
    comma,
    bar,
    end,           // the clause-terminating `.`
    comment_line,
    comment_block,
};

const char* to_string(TokenKind k);

struct Token {
    TokenKind kind;
    std::string text;          // exact source slice
    SourceSpan span;
    bool layout_before = false;

    bool is_comment() const {
        return kind == TokenKind::comment_line || kind == TokenKind::comment_block;
    }
    /// Atom-like tokens that can act as a functor or operator name.
    bool is_name() const { return kind == TokenKind::atom || kind == TokenKind::punct; }
};

class SyntaxError : public std::runtime_error {
public:
    enum class Code { syntax, unterminated_block_comment, unterminated_quoted };

    SyntaxError(Code code, SourceSpan span, const std::string& message)
        : std::runtime_error(message), code_(code), span_(span) {}

    Code code() const { return code_; }
    const SourceSpan& span() const { return span_; }

private:
    Code code_;
    SourceSpan span_;
};

/// Splits `text` into tokens. Comments are kept as tokens; layout is the only
/// thing not represented, so token texts plus the gaps between them rebuild
/// the input exactly. A leading UTF-8 byte-order mark counts as layout.
std::vector<Token> tokenize(std::string_view text);

/// Value of a quoted atom/string token with escapes processed.
std::string unquote(std::string_view token_text);

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

enum class OpType { xfx, xfy, yfx, fy, fx, xf, yf };

const char* to_string(OpType t);
std::optional<OpType> parse_op_type(std::string_view s);

struct OpDef {
    int priority = 0;
    OpType type = OpType::xfx;
    bool operator==(const OpDef&) const = default;
};

struct OpEntry {
    std::optional<OpDef> prefix;
    std::optional<OpDef> infix;
    std::optional<OpDef> postfix;
};

class OperatorTable {
public:
    /// Adds or replaces the entry for `name` in the class implied by `type`.
    /// Throws std::invalid_argument for priorities outside 1..1200.
    void add(int priority, OpType type, std::string name);
    void remove_all(const std::string& name);

    const OpEntry* lookup(std::string_view name) const;
    const OpDef* prefix(std::string_view name) const;
    const OpDef* infix(std::string_view name) const;
    const OpDef* postfix(std::string_view name) const;
    bool is_op(std::string_view name) const { return lookup(name) != nullptr; }

    const std::map<std::string, OpEntry, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, OpEntry, std::less<>> entries_;
};

/// ISO operators, the usual SWI additions, and the mode prefixes
/// `+ - ? : @ !` at 200 fy so that mode headers read as ordinary terms.
const OperatorTable& default_operator_table();

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind { atom, var, integer, floating, string, compound };

    Kind kind = Kind::atom;
    std::string name;          // atom text, variable name, functor, string value
    std::int64_t int_value = 0;
    double float_value = 0.0;
    std::vector<Term> args;
    SourceSpan span;           // whole term
    SourceSpan functor_span;   // the token naming the atom/functor/operator

    static Term atom(std::string name, SourceSpan span = {});
    static Term var(std::string name, SourceSpan span = {});
    static Term integer(std::int64_t v, SourceSpan span = {});
    static Term floating(double v, SourceSpan span = {});
    static Term string(std::string v, SourceSpan span = {});
    static Term compound(std::string name, std::vector<Term> args, SourceSpan span = {});

    bool is_atom() const { return kind == Kind::atom; }
    bool is_var() const { return kind == Kind::var; }
    bool is_compound() const { return kind == Kind::compound; }
    bool is_callable() const { return is_atom() || is_compound(); }
    bool is_atom(std::string_view n) const { return is_atom() && name == n; }
    bool is(std::string_view functor, std::size_t arity) const {
        return is_compound() && name == functor && args.size() == arity;
    }
    std::size_t arity() const { return args.size(); }

    /// Structural equality ignoring spans.
    bool same_shape(const Term& other) const;
};

/// Sequential reader over a token vector; comments are skipped transparently.
class TermReader {
public:
    TermReader(const std::vector<Token>& tokens, const OperatorTable& ops);

    bool at_end() const;
    std::size_t position() const { return pos_; }

    /// Reads one clause term up to and including its `end` token.
    Term read_term();

    /// Moves past the next `end` token (error recovery).
    void skip_to_end();

private:
    struct Parsed {
        Term term;
        int priority;
    };

    const Token* peek(std::size_t ahead = 0) const;
    const Token& next();
    const Token& expect(TokenKind kind, const char* what);
    Parsed parse(int max_priority);
    Parsed parse_primary(int max_priority);
    Term parse_arglist(Term functor);
    Term parse_list(const Token& open);
    Term parse_curly(const Token& open);
    bool starts_term(const Token* t) const;
    bool is_terminator(const Token* t) const;
    [[noreturn]] void fail(const Token* at, const std::string& message) const;
    SourceSpan eof_span() const;

    std::vector<const Token*> toks_;
    const OperatorTable& ops_;
    std::size_t pos_ = 0;
};

/// Reads a single term from a complete string such as "foo(+X) is det."
Term read_term(std::string_view text, const OperatorTable& ops = default_operator_table());

// ---------------------------------------------------------------------------
// Clause units
// ---------------------------------------------------------------------------

enum class CommentStyle { line, block };

struct CommentRecord {
    std::string text;          // including delimiters
    SourceSpan span;
    CommentStyle style = CommentStyle::line;
    bool after_code = false;   // line comment trailing code on its line
};

struct ClauseUnit {
    std::optional<Term> term;
    std::vector<CommentRecord> leading_comments;
    std::optional<SourceSpan> term_span;
};

struct SourceReadResult {
    std::vector<ClauseUnit> units;
    std::vector<Token> tokens;
    Diagnostics diagnostics;
};

/// Reads all clauses of a file, attaching each comment to the clause during
/// whose reading it was seen. Syntax errors are collected and reading resumes
/// after the next `end` token. A tokenizer error leaves `tokens` holding the
/// prefix that could be tokenized.
SourceReadResult read_source(std::string_view text,
                             const OperatorTable& ops = default_operator_table());

// ---------------------------------------------------------------------------
// Writing terms
// ---------------------------------------------------------------------------

/// Atom text quoted when it would not read back as the same atom.
std::string quote_atom_if_needed(std::string_view name);

/// Functional notation with quoted atoms; lists and curly terms keep their
/// surface syntax. Reads back to an identical shape with any operator table.
std::string write_canonical(const Term& t);

/// Operator-aware writer with minimal brackets. The result reads back as
/// the same term in an argument context of at most `max_priority`.
std::string format_term(const Term& t, const OperatorTable& ops = default_operator_table(),
                        int max_priority = 1200);

} // namespace pldoc
