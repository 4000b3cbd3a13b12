#include "pldoc/prolog_reader.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "text_util.hpp"

namespace pldoc {

const char* to_string(Severity s)
{
    switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
    }
    return "?";
}

const char* to_string(TokenKind k)
{
    switch (k) {
    case TokenKind::atom: return "atom";
    case TokenKind::variable: return "variable";
    case TokenKind::integer: return "integer";
    case TokenKind::floating: return "float";
    case TokenKind::string: return "string";
    case TokenKind::punct: return "punct";
    case TokenKind::open: return "open";
    case TokenKind::close: return "close";
    case TokenKind::open_list: return "open_list";
    case TokenKind::close_list: return "close_list";
    case TokenKind::open_curly: return "open_curly";
    case TokenKind::close_curly: return "close_curly";
    case TokenKind::comma: return "comma";
    case TokenKind::bar: return "bar";
    case TokenKind::end: return "end";
    case TokenKind::comment_line: return "comment_line";
    case TokenKind::comment_block: return "comment_block";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src), lines_(src) {}

    // Tokenizes as far as possible; a lexical error stops the scan and is
    // returned alongside the tokens read so far.
    std::optional<SyntaxError> run(std::vector<Token>& out)
    {
        bool layout = false;
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") {
            pos_ = 3;
            layout = true;
        }
        try {
            while (pos_ < src_.size()) {
                unsigned char c = static_cast<unsigned char>(src_[pos_]);
                if (text::is_layout(c)) {
                    ++pos_;
                    layout = true;
                    continue;
                }
                out.push_back(scan_one(layout));
                layout = false;
                // the lexer may emit a split `end` token for an all-dots run
                if (pending_end_) {
                    out.push_back(*pending_end_);
                    pending_end_.reset();
                }
            }
        } catch (const SyntaxError& e) {
            return e;
        }
        return std::nullopt;
    }

private:
    Token make(TokenKind kind, std::size_t start, bool layout) const
    {
        return Token{kind, std::string(src_.substr(start, pos_ - start)),
                     lines_.span(start, pos_), layout};
    }

    char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

    bool end_follows(std::size_t i) const
    {
        return i >= src_.size() || text::is_layout(static_cast<unsigned char>(src_[i])) ||
               src_[i] == '%';
    }

    [[noreturn]] void error(SyntaxError::Code code, std::size_t start, std::size_t len,
                            const std::string& msg) const
    {
        throw SyntaxError(code, lines_.span(start, std::min(src_.size(), start + len)), msg);
    }

    Token scan_one(bool layout)
    {
        const std::size_t start = pos_;
        const unsigned char c = static_cast<unsigned char>(src_[pos_]);

        if (c == '%') {
            while (pos_ < src_.size() && src_[pos_] != '\n')
                ++pos_;
            return make(TokenKind::comment_line, start, layout);
        }
        if (c == '/' && at(pos_ + 1) == '*') {
            auto close = src_.find("*/", pos_ + 2);
            if (close == std::string_view::npos)
                error(SyntaxError::Code::unterminated_block_comment, start, 2,
                      "unterminated block comment");
            pos_ = close + 2;
            return make(TokenKind::comment_block, start, layout);
        }
        if (text::is_digit(c))
            return scan_number(start, layout);
        if (c == '_' || text::is_upper(c)) {
            while (pos_ < src_.size() && text::is_alnum(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            return make(TokenKind::variable, start, layout);
        }
        if (text::is_lower(c) || c >= 0x80) {
            while (pos_ < src_.size() && text::is_alnum(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            return make(TokenKind::atom, start, layout);
        }
        if (c == '\'') {
            scan_quoted('\'');
            return make(TokenKind::atom, start, layout);
        }
        if (c == '"' || c == '`') {
            scan_quoted(static_cast<char>(c));
            return make(TokenKind::string, start, layout);
        }

        ++pos_;
        switch (c) {
        case '(': return make(TokenKind::open, start, layout);
        case ')': return make(TokenKind::close, start, layout);
        case '[': return make(TokenKind::open_list, start, layout);
        case ']': return make(TokenKind::close_list, start, layout);
        case '{': return make(TokenKind::open_curly, start, layout);
        case '}': return make(TokenKind::close_curly, start, layout);
        case ',': return make(TokenKind::comma, start, layout);
        case '|':
            if (at(pos_) == '|') {
                ++pos_;
                return make(TokenKind::punct, start, layout);
            }
            return make(TokenKind::bar, start, layout);
        case '!':
        case ';': return make(TokenKind::punct, start, layout);
        default: break;
        }
        --pos_;

        if (text::is_symbol_char(c)) {
            while (pos_ < src_.size() && text::is_symbol_char(static_cast<unsigned char>(src_[pos_])) &&
                   !(src_[pos_] == '/' && at(pos_ + 1) == '*'))
                ++pos_;
            std::string_view sym = src_.substr(start, pos_ - start);
            if (sym == "." && end_follows(pos_))
                return make(TokenKind::end, start, layout);
            // An elision such as `...` at the end of a clause: the last dot
            // terminates the clause.
            if (sym.size() >= 3 && sym.find_first_not_of('.') == std::string_view::npos &&
                end_follows(pos_)) {
                const std::size_t stop = pos_;
                pos_ = stop - 1;
                Token atom = make(TokenKind::punct, start, layout);
                pos_ = stop;
                pending_end_ = make(TokenKind::end, stop - 1, false);
                return atom;
            }
            return make(TokenKind::punct, start, layout);
        }
        error(SyntaxError::Code::syntax, start, 1,
              std::string("illegal character '") + static_cast<char>(c) + "'");
    }

    void skip_escape(std::size_t quote_start)
    {
        // at the backslash
        ++pos_;
        if (pos_ >= src_.size())
            error(SyntaxError::Code::unterminated_quoted, quote_start, 1, "unterminated quoted");
        char e = src_[pos_];
        if (e == 'x') {
            ++pos_;
            while (pos_ < src_.size() && text::is_xdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (at(pos_) == '\\')
                ++pos_;
        } else if (e >= '0' && e <= '7') {
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '7')
                ++pos_;
            if (at(pos_) == '\\')
                ++pos_;
        } else {
            ++pos_;
        }
    }

    void scan_quoted(char q)
    {
        const std::size_t start = pos_;
        ++pos_;
        for (;;) {
            if (pos_ >= src_.size())
                error(SyntaxError::Code::unterminated_quoted, start, 1, "unterminated quoted");
            char ch = src_[pos_];
            if (ch == q) {
                if (at(pos_ + 1) == q) {
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                return;
            }
            if (ch == '\\') {
                skip_escape(start);
                continue;
            }
            ++pos_;
        }
    }

    Token scan_number(std::size_t start, bool layout)
    {
        if (src_[pos_] == '0' && at(pos_ + 1) == '\'') {
            pos_ += 2;
            if (pos_ >= src_.size())
                error(SyntaxError::Code::syntax, start, 2, "incomplete character code");
            if (src_[pos_] == '\\') {
                skip_escape(start);
            } else if (src_[pos_] == '\'' && at(pos_ + 1) == '\'') {
                pos_ += 2;
            } else {
                pos_ += text::utf8_length(static_cast<unsigned char>(src_[pos_]));
                pos_ = std::min(pos_, src_.size());
            }
            return make(TokenKind::integer, start, layout);
        }
        if (src_[pos_] == '0' && (at(pos_ + 1) == 'x' || at(pos_ + 1) == 'o' || at(pos_ + 1) == 'b')) {
            const char r = at(pos_ + 1);
            auto ok = [r](unsigned char d) {
                if (r == 'x') return text::is_xdigit(d);
                if (r == 'o') return d >= '0' && d <= '7';
                return d == '0' || d == '1';
            };
            if (ok(static_cast<unsigned char>(at(pos_ + 2)))) {
                pos_ += 2;
                while (pos_ < src_.size() && ok(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
                return make(TokenKind::integer, start, layout);
            }
        }
        while (pos_ < src_.size() && text::is_digit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        bool is_float = false;
        if (at(pos_) == '.' && text::is_digit(static_cast<unsigned char>(at(pos_ + 1)))) {
            is_float = true;
            pos_ += 1;
            while (pos_ < src_.size() && text::is_digit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (is_float && (at(pos_) == 'e' || at(pos_) == 'E')) {
            std::size_t p = pos_ + 1;
            if (at(p) == '+' || at(p) == '-')
                ++p;
            if (text::is_digit(static_cast<unsigned char>(at(p)))) {
                pos_ = p;
                while (pos_ < src_.size() && text::is_digit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        return make(is_float ? TokenKind::floating : TokenKind::integer, start, layout);
    }

    std::string_view src_;
    text::LineIndex lines_;
    std::size_t pos_ = 0;
    std::optional<Token> pending_end_;
};

// Decodes one escape sequence starting after the backslash at s[i].
// Returns the code point (or -1 for a line continuation) and advances i.
long decode_escape(std::string_view s, std::size_t& i)
{
    char e = s[i++];
    switch (e) {
    case 'a': return 7;
    case 'b': return 8;
    case 'f': return 12;
    case 'n': return 10;
    case 'r': return 13;
    case 't': return 9;
    case 'v': return 11;
    case 'e': return 27;
    case 's': return ' ';
    case 'z': return -1;
    case '\n': return -1;
    case 'x': {
        long v = 0;
        while (i < s.size() && text::is_xdigit(static_cast<unsigned char>(s[i])))
            v = v * 16 + text::hex_value(s[i++]);
        if (i < s.size() && s[i] == '\\')
            ++i;
        return v;
    }
    default:
        if (e >= '0' && e <= '7') {
            long v = e - '0';
            while (i < s.size() && s[i] >= '0' && s[i] <= '7')
                v = v * 8 + (s[i++] - '0');
            if (i < s.size() && s[i] == '\\')
                ++i;
            return v;
        }
        return static_cast<unsigned char>(e);
    }
}

} // namespace

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    Lexer lex(text);
    if (auto err = lex.run(out))
        throw *err;
    return out;
}

std::string unquote(std::string_view t)
{
    if (t.size() < 2)
        return std::string(t);
    const char q = t.front();
    if (q != '\'' && q != '"' && q != '`')
        return std::string(t);
    std::string out;
    std::string_view body = t.substr(1, t.size() - 2);
    for (std::size_t i = 0; i < body.size();) {
        char c = body[i];
        if (c == q && i + 1 < body.size() && body[i + 1] == q) {
            out += q;
            i += 2;
        } else if (c == '\\' && i + 1 < body.size()) {
            ++i;
            long cp = decode_escape(body, i);
            if (cp >= 0)
                text::append_utf8(out, static_cast<char32_t>(cp));
        } else {
            out += c;
            ++i;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

const char* to_string(OpType t)
{
    switch (t) {
    case OpType::xfx: return "xfx";
    case OpType::xfy: return "xfy";
    case OpType::yfx: return "yfx";
    case OpType::fy: return "fy";
    case OpType::fx: return "fx";
    case OpType::xf: return "xf";
    case OpType::yf: return "yf";
    }
    return "?";
}

std::optional<OpType> parse_op_type(std::string_view s)
{
    static constexpr std::pair<std::string_view, OpType> names[] = {
        {"xfx", OpType::xfx}, {"xfy", OpType::xfy}, {"yfx", OpType::yfx}, {"fy", OpType::fy},
        {"fx", OpType::fx},   {"xf", OpType::xf},   {"yf", OpType::yf}};
    for (auto& [n, t] : names)
        if (n == s)
            return t;
    return std::nullopt;
}

void OperatorTable::add(int priority, OpType type, std::string name)
{
    if (priority < 1 || priority > 1200)
        throw std::invalid_argument("operator priority out of range: " + std::to_string(priority));
    OpEntry& e = entries_[std::move(name)];
    OpDef def{priority, type};
    switch (type) {
    case OpType::fy:
    case OpType::fx: e.prefix = def; break;
    case OpType::xf:
    case OpType::yf: e.postfix = def; break;
    default: e.infix = def; break;
    }
}

void OperatorTable::remove_all(const std::string& name) { entries_.erase(name); }

const OpEntry* OperatorTable::lookup(std::string_view name) const
{
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

const OpDef* OperatorTable::prefix(std::string_view name) const
{
    auto* e = lookup(name);
    return e && e->prefix ? &*e->prefix : nullptr;
}

const OpDef* OperatorTable::infix(std::string_view name) const
{
    auto* e = lookup(name);
    return e && e->infix ? &*e->infix : nullptr;
}

const OpDef* OperatorTable::postfix(std::string_view name) const
{
    auto* e = lookup(name);
    return e && e->postfix ? &*e->postfix : nullptr;
}

const OperatorTable& default_operator_table()
{
    static const OperatorTable table = [] {
        OperatorTable t;
        using enum OpType;
        for (auto n : {":-", "-->"})
            t.add(1200, xfx, n);
        for (auto n : {":-", "?-"})
            t.add(1200, fx, n);
        for (auto n : {"dynamic", "discontiguous", "initialization", "meta_predicate",
                       "module_transparent", "multifile", "public", "thread_local", "table"})
            t.add(1150, fx, n);
        t.add(1100, xfy, ";");
        t.add(1100, xfy, "|");
        t.add(1050, xfy, "->");
        t.add(1050, xfy, "*->");
        t.add(1000, xfy, ",");
        t.add(990, xfx, ":=");
        t.add(900, fy, "\\+");
        for (auto n : {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=",
                       "=\\=", "<", ">", "=<", ">=", ">:<", ":<", "as"})
            t.add(700, xfx, n);
        t.add(600, xfy, ":");
        for (auto n : {"+", "-", "/\\", "\\/", "xor"})
            t.add(500, yfx, n);
        for (auto n : {"*", "/", "//", "rem", "mod", "div", "<<", ">>", "divmod", "rdiv"})
            t.add(400, yfx, n);
        t.add(200, xfx, "**");
        t.add(200, xfy, "^");
        t.add(200, fy, "\\");
        // mode prefixes
        for (auto n : {"+", "-", "?", ":", "@", "!"})
            t.add(200, fy, n);
        t.add(100, yfx, ".");
        t.add(1, fx, "$");
        return t;
    }();
    return table;
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

Term Term::atom(std::string name, SourceSpan span)
{
    Term t;
    t.kind = Kind::atom;
    t.name = std::move(name);
    t.span = t.functor_span = span;
    return t;
}

Term Term::var(std::string name, SourceSpan span)
{
    Term t = atom(std::move(name), span);
    t.kind = Kind::var;
    return t;
}

Term Term::integer(std::int64_t v, SourceSpan span)
{
    Term t;
    t.kind = Kind::integer;
    t.int_value = v;
    t.span = t.functor_span = span;
    return t;
}

Term Term::floating(double v, SourceSpan span)
{
    Term t;
    t.kind = Kind::floating;
    t.float_value = v;
    t.span = t.functor_span = span;
    return t;
}

Term Term::string(std::string v, SourceSpan span)
{
    Term t = atom(std::move(v), span);
    t.kind = Kind::string;
    return t;
}

Term Term::compound(std::string name, std::vector<Term> args, SourceSpan span)
{
    Term t = atom(std::move(name), span);
    t.kind = Kind::compound;
    t.args = std::move(args);
    return t;
}

bool Term::same_shape(const Term& o) const
{
    if (kind != o.kind)
        return false;
    switch (kind) {
    case Kind::integer: return int_value == o.int_value;
    case Kind::floating: return float_value == o.float_value;
    case Kind::compound:
        if (name != o.name || args.size() != o.args.size())
            return false;
        for (std::size_t i = 0; i < args.size(); ++i)
            if (!args[i].same_shape(o.args[i]))
                return false;
        return true;
    default: return name == o.name;
    }
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

namespace {

SourceSpan join(const SourceSpan& a, const SourceSpan& b)
{
    return SourceSpan{a.byte_start, b.byte_end, a.line_start, b.line_end};
}

std::string name_of(const Token& t)
{
    if (t.kind == TokenKind::atom && !t.text.empty() && t.text.front() == '\'')
        return unquote(t.text);
    return t.text;
}

std::int64_t integer_value(const Token& t)
{
    std::string_view s = t.text;
    if (s.size() >= 2 && s[0] == '0' && s[1] == '\'') {
        std::string_view rest = s.substr(2);
        if (rest.size() >= 2 && rest[0] == '\'' && rest[1] == '\'')
            return '\'';
        if (!rest.empty() && rest[0] == '\\') {
            std::size_t i = 1;
            return decode_escape(rest, i);
        }
        return text::decode_utf8(rest);
    }
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'o' || s[1] == 'b')) {
        base = s[1] == 'x' ? 16 : s[1] == 'o' ? 8 : 2;
        s.remove_prefix(2);
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc() || p != s.data() + s.size())
        throw SyntaxError(SyntaxError::Code::syntax, t.span, "integer out of range: " + t.text);
    return v;
}

double float_value(const Token& t)
{
    double v = 0;
    std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    return v;
}

} // namespace

TermReader::TermReader(const std::vector<Token>& tokens, const OperatorTable& ops) : ops_(ops)
{
    for (const Token& t : tokens)
        if (!t.is_comment())
            toks_.push_back(&t);
}

bool TermReader::at_end() const { return pos_ >= toks_.size(); }

const Token* TermReader::peek(std::size_t ahead) const
{
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : nullptr;
}

const Token& TermReader::next()
{
    if (at_end())
        fail(nullptr, "unexpected end of file");
    return *toks_[pos_++];
}

SourceSpan TermReader::eof_span() const
{
    if (toks_.empty())
        return {};
    SourceSpan s = toks_.back()->span;
    return SourceSpan{s.byte_end, s.byte_end, s.line_end, s.line_end};
}

void TermReader::fail(const Token* at, const std::string& message) const
{
    if (!at)
        throw SyntaxError(SyntaxError::Code::syntax, eof_span(), message);
    throw SyntaxError(SyntaxError::Code::syntax, at->span, message + " near '" + at->text + "'");
}

const Token& TermReader::expect(TokenKind kind, const char* what)
{
    const Token* t = peek();
    if (!t || t->kind != kind)
        fail(t, std::string("expected ") + what);
    return next();
}

bool TermReader::is_terminator(const Token* t) const
{
    if (!t)
        return true;
    switch (t->kind) {
    case TokenKind::close:
    case TokenKind::close_list:
    case TokenKind::close_curly:
    case TokenKind::comma:
    case TokenKind::bar:
    case TokenKind::end: return true;
    default: return false;
    }
}

bool TermReader::starts_term(const Token* t) const
{
    if (!t)
        return false;
    switch (t->kind) {
    case TokenKind::atom:
    case TokenKind::punct:
    case TokenKind::variable:
    case TokenKind::integer:
    case TokenKind::floating:
    case TokenKind::string:
    case TokenKind::open:
    case TokenKind::open_list:
    case TokenKind::open_curly: return true;
    default: return false;
    }
}

Term TermReader::read_term()
{
    if (at_end())
        fail(nullptr, "unexpected end of file");
    Parsed p = parse(1200);
    const Token* t = peek();
    if (!t || t->kind != TokenKind::end)
        fail(t, "operator expected");
    next();
    return std::move(p.term);
}

void TermReader::skip_to_end()
{
    while (!at_end()) {
        if (toks_[pos_++]->kind == TokenKind::end)
            return;
    }
}

Term TermReader::parse_arglist(Term functor)
{
    expect(TokenKind::open, "(");
    std::vector<Term> args;
    for (;;) {
        args.push_back(parse(999).term);
        const Token* t = peek();
        if (t && t->kind == TokenKind::comma) {
            next();
            continue;
        }
        if (t && t->kind == TokenKind::close)
            break;
        fail(t, "expected , or )");
    }
    const Token& close = next();
    Term c = Term::compound(std::move(functor.name), std::move(args), join(functor.span, close.span));
    c.functor_span = functor.span;
    return c;
}

Term TermReader::parse_list(const Token& open)
{
    const Token* t = peek();
    if (t && t->kind == TokenKind::close_list) {
        next();
        return Term::atom("[]", join(open.span, t->span));
    }
    std::vector<Term> items;
    std::optional<Term> tail;
    for (;;) {
        items.push_back(parse(999).term);
        t = peek();
        if (t && t->kind == TokenKind::comma) {
            next();
            continue;
        }
        if (t && t->kind == TokenKind::bar) {
            next();
            tail = parse(999).term;
            t = peek();
        }
        if (t && t->kind == TokenKind::close_list)
            break;
        fail(t, "expected , | or ]");
    }
    const Token& close = next();
    Term list = tail ? std::move(*tail) : Term::atom("[]", close.span);
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
        SourceSpan s = join(it->span, close.span);
        list = Term::compound("[|]", {std::move(*it), std::move(list)}, s);
        list.functor_span = open.span;
    }
    list.span = join(open.span, close.span);
    return list;
}

Term TermReader::parse_curly(const Token& open)
{
    const Token* t = peek();
    if (t && t->kind == TokenKind::close_curly) {
        next();
        return Term::atom("{}", join(open.span, t->span));
    }
    Term inner = parse(1200).term;
    const Token& close = expect(TokenKind::close_curly, "}");
    Term c = Term::compound("{}", {std::move(inner)}, join(open.span, close.span));
    c.functor_span = open.span;
    return c;
}

TermReader::Parsed TermReader::parse_primary(int max_priority)
{
    const Token* t = peek();
    if (!t)
        fail(nullptr, "unexpected end of file");

    switch (t->kind) {
    case TokenKind::integer: {
        next();
        return {Term::integer(integer_value(*t), t->span), 0};
    }
    case TokenKind::floating: next(); return {Term::floating(float_value(*t), t->span), 0};
    case TokenKind::string: next(); return {Term::string(unquote(t->text), t->span), 0};
    case TokenKind::variable: next(); return {Term::var(t->text, t->span), 0};
    case TokenKind::open: {
        next();
        Term inner = parse(1200).term;
        const Token& close = expect(TokenKind::close, ")");
        inner.span = join(t->span, close.span);
        return {std::move(inner), 0};
    }
    case TokenKind::open_list: next(); return {parse_list(*t), 0};
    case TokenKind::open_curly: next(); return {parse_curly(*t), 0};
    case TokenKind::atom:
    case TokenKind::punct: break;
    default: fail(t, "unexpected token");
    }

    next();
    const bool quoted = t->text.front() == '\'';
    Term atom = Term::atom(name_of(*t), t->span);
    const Token* nt = peek();

    if (nt && nt->kind == TokenKind::open && !nt->layout_before)
        return {parse_arglist(std::move(atom)), 0};

    if (!quoted && atom.name == "-" && nt && !nt->layout_before &&
        (nt->kind == TokenKind::integer || nt->kind == TokenKind::floating)) {
        next();
        if (nt->kind == TokenKind::integer) {
            std::int64_t v = integer_value(*nt);
            return {Term::integer(-v, join(t->span, nt->span)), 0};
        }
        return {Term::floating(-float_value(*nt), join(t->span, nt->span)), 0};
    }

    if (const OpDef* pre = ops_.prefix(atom.name)) {
        bool as_atom = is_terminator(nt);
        if (!as_atom && nt->is_name()) {
            std::string nn = name_of(*nt);
            const Token* after = peek(1);
            bool functional = after && after->kind == TokenKind::open && !after->layout_before;
            if ((ops_.infix(nn) || ops_.postfix(nn)) && !ops_.prefix(nn) && !functional &&
                (starts_term(after) || is_terminator(after)))
                as_atom = true;
        }
        if (!as_atom) {
            const int p = pre->priority;
            if (p > max_priority)
                fail(t, "operator priority clash");
            const int arg_max = pre->type == OpType::fy ? p : p - 1;
            Term arg = parse(arg_max).term;
            SourceSpan s = join(t->span, arg.span);
            Term c = Term::compound(atom.name, {std::move(arg)}, s);
            c.functor_span = t->span;
            return {std::move(c), p};
        }
    }
    return {std::move(atom), 0};
}

TermReader::Parsed TermReader::parse(int max_priority)
{
    Parsed left = parse_primary(max_priority);
    for (;;) {
        const Token* t = peek();
        if (!t)
            break;
        std::string name;
        std::optional<OpDef> inf;
        std::optional<OpDef> post;
        if (t->kind == TokenKind::comma) {
            name = ",";
            inf = OpDef{1000, OpType::xfy};
        } else if (t->kind == TokenKind::bar) {
            name = ";";
            inf = OpDef{1100, OpType::xfy};
        } else if (t->is_name()) {
            name = name_of(*t);
            if (auto* d = ops_.infix(name))
                inf = *d;
            if (auto* d = ops_.postfix(name))
                post = *d;
        }
        if (!inf && !post)
            break;

        if (inf && post) {
            // Prefer the infix reading when an operand follows that is not
            // itself a pure infix operator.
            const Token* after = peek(1);
            bool operand = starts_term(after);
            if (operand && after->is_name()) {
                std::string an = name_of(*after);
                bool functional = peek(2) && peek(2)->kind == TokenKind::open && !peek(2)->layout_before;
                if (ops_.infix(an) && !ops_.prefix(an) && !functional)
                    operand = false;
            }
            if (operand)
                post.reset();
            else
                inf.reset();
        }

        if (inf) {
            const int p = inf->priority;
            const int left_max = inf->type == OpType::yfx ? p : p - 1;
            const int right_max = inf->type == OpType::xfy ? p : p - 1;
            if (p > max_priority || left.priority > left_max)
                break;
            next();
            Term right = parse(right_max).term;
            SourceSpan s = join(left.term.span, right.span);
            Term c = Term::compound(name, {std::move(left.term), std::move(right)}, s);
            c.functor_span = t->span;
            left = {std::move(c), p};
            continue;
        }
        const int p = post->priority;
        const int left_max = post->type == OpType::yf ? p : p - 1;
        if (p > max_priority || left.priority > left_max)
            break;
        next();
        SourceSpan s = join(left.term.span, t->span);
        Term c = Term::compound(name, {std::move(left.term)}, s);
        c.functor_span = t->span;
        left = {std::move(c), p};
    }
    return left;
}

Term read_term(std::string_view text, const OperatorTable& ops)
{
    auto tokens = tokenize(text);
    TermReader reader(tokens, ops);
    Term t = reader.read_term();
    if (!reader.at_end())
        throw SyntaxError(SyntaxError::Code::syntax, t.span, "trailing text after term");
    return t;
}

// ---------------------------------------------------------------------------
// Source files
// ---------------------------------------------------------------------------

namespace {

bool is_op_directive(const Term& t)
{
    return t.is(":-", 1) && (t.args[0].is("op", 3));
}

} // namespace

SourceReadResult read_source(std::string_view text, const OperatorTable& ops)
{
    SourceReadResult result;
    {
        Lexer lex(text);
        if (auto err = lex.run(result.tokens)) {
            result.diagnostics.push_back(
                {Severity::error,
                 err->code() == SyntaxError::Code::unterminated_block_comment ? "UnterminatedBlockComment"
                 : err->code() == SyntaxError::Code::unterminated_quoted     ? "UnterminatedQuoted"
                                                                             : "SyntaxError",
                 err->what(), "", err->span()});
        }
    }
    const auto& tokens = result.tokens;

    // Index of each non-comment token in the raw stream.
    std::vector<std::size_t> raw;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (!tokens[i].is_comment())
            raw.push_back(i);

    TermReader reader(tokens, ops);
    std::size_t boundary = 0; // raw index of the first token not yet assigned

    auto comments_until = [&](std::size_t raw_end) {
        std::vector<CommentRecord> out;
        for (std::size_t i = boundary; i < raw_end; ++i) {
            const Token& t = tokens[i];
            if (t.is_comment())
                out.push_back({t.text, t.span,
                               t.kind == TokenKind::comment_line ? CommentStyle::line : CommentStyle::block});
        }
        boundary = raw_end;
        return out;
    };

    while (!reader.at_end()) {
        ClauseUnit unit;
        try {
            Term t = reader.read_term();
            unit.term_span = t.span;
            if (is_op_directive(t))
                result.diagnostics.push_back({Severity::warning, "IgnoredOperatorDirective",
                                              "operator directives are not executed; ignored", "", t.span});
            unit.term = std::move(t);
        } catch (const SyntaxError& e) {
            result.diagnostics.push_back({Severity::error, "SyntaxError", e.what(), "", e.span()});
            reader.skip_to_end();
        }
        const std::size_t consumed = reader.position();
        const std::size_t raw_end = consumed == 0 ? 0 : raw[consumed - 1] + 1;
        unit.leading_comments = comments_until(raw_end);
        result.units.push_back(std::move(unit));
    }
    auto rest = comments_until(tokens.size());
    if (!rest.empty()) {
        ClauseUnit unit;
        unit.leading_comments = std::move(rest);
        result.units.push_back(std::move(unit));
    }
    return result;
}

} // namespace pldoc
