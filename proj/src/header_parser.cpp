#include "pldoc/header_parser.hpp"

#include "text_util.hpp"

namespace pldoc {

namespace {

using Reason = HeaderSyntaxError::Reason;

// Maps a span inside one header chunk back onto the whole header text.
struct Chunk {
    std::string text;
    std::size_t offset = 0; // byte offset in header text
    int line = 1;           // 1-based line in header text
};

SourceSpan shift(const SourceSpan& s, const Chunk& c)
{
    return SourceSpan{s.byte_start + c.offset, s.byte_end + c.offset, s.line_start + c.line - 1,
                      s.line_end + c.line - 1};
}

// Groups header lines into terms: a term continues onto the next line while
// brackets remain open.
std::vector<Chunk> split_terms(std::string_view header)
{
    std::vector<Chunk> out;
    std::size_t pos = 0;
    int line = 1;
    int depth = 0;
    Chunk cur;
    while (pos <= header.size()) {
        std::size_t eol = header.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = header.size();
        std::string_view l = header.substr(pos, eol - pos);
        if (depth == 0 && text::is_blank(l)) {
            // nothing
        } else {
            if (cur.text.empty()) {
                cur.offset = pos;
                cur.line = line;
            } else {
                cur.text += '\n';
            }
            cur.text += l;
            char quote = 0;
            for (char c : l) {
                if (quote) {
                    if (c == quote)
                        quote = 0;
                } else if (c == '\'' || c == '"' || c == '`') {
                    quote = c;
                } else if (c == '(' || c == '[' || c == '{') {
                    ++depth;
                } else if (c == ')' || c == ']' || c == '}') {
                    --depth;
                }
            }
            if (depth <= 0) {
                out.push_back(std::move(cur));
                cur = Chunk{};
                depth = 0;
            }
        }
        if (eol == header.size())
            break;
        pos = eol + 1;
        ++line;
    }
    if (!cur.text.empty())
        out.push_back(std::move(cur));
    return out;
}

bool is_mode_like(const Term& t)
{
    if (!t.is_compound() || t.arity() != 1 || t.name.size() != 1)
        return false;
    auto c = static_cast<unsigned char>(t.name[0]);
    return text::is_symbol_char(c) || c == '!';
}

ArgSpec parse_argspec(const Term& t)
{
    ArgSpec spec;
    // `+Name:Type` reads as (+Name):Type because the mode binds tighter
    if (t.is(":", 2) && is_mode_like(t.args[0])) {
        Term regrouped = t.args[0];
        regrouped.args[0] = Term::compound(":", {t.args[0].args[0], t.args[1]}, t.span);
        return parse_argspec(regrouped);
    }
    const Term* inner = &t;
    if (is_mode_like(t)) {
        auto m = parse_arg_mode(t.name);
        if (!m)
            throw HeaderSyntaxError(Reason::bad_mode, t.functor_span,
                                    "unknown argument mode '" + t.name + "'");
        spec.mode = *m;
        inner = &t.args[0];
    }
    const Term* name = inner;
    if (inner->is(":", 2)) {
        name = &inner->args[0];
        spec.type = inner->args[1];
    }
    if (!name->is_var()) {
        if (is_mode_like(*name))
            throw HeaderSyntaxError(Reason::bad_mode, name->functor_span,
                                    "argument carries more than one mode");
        throw HeaderSyntaxError(Reason::non_variable_arg_name, name->span,
                                "argument name must be a variable: " + write_canonical(*name));
    }
    spec.name = name->name;
    return spec;
}

ModeDecl mode_from_term(const Term& term, Diagnostics* notes)
{
    ModeDecl md;
    const Term* t = &term;
    if (t->is("is", 2)) {
        const Term& d = t->args[1];
        if (!d.is_atom())
            throw HeaderSyntaxError(Reason::bad_determinism, d.span,
                                    "determinism must be one of det, semidet, nondet, multi");
        try {
            md.det = validate_determinism(d.name);
        } catch (const HeaderSyntaxError& e) {
            throw HeaderSyntaxError(e.reason(), d.span, e.what());
        }
        t = &t->args[0];
    }
    if (t->is("//", 1)) {
        md.is_dcg = true;
        t = &t->args[0];
    }
    if (t->is(":", 2) && t->args[0].is_atom())
        t = &t->args[1];

    if (t->is_atom()) {
        md.name = t->name;
        if (md.is_dcg && notes)
            notes->push_back({Severity::info, "NullaryGrammarRule",
                              "grammar rule without arguments: " + indicator(md), "", t->span});
        return md;
    }
    if (!t->is_compound())
        throw HeaderSyntaxError(Reason::bad_head, t->span, "predicate head expected");
    md.name = t->name;
    for (const Term& a : t->args)
        md.args.push_back(parse_argspec(a));
    return md;
}

ModeDecl read_mode(const Chunk& chunk, const OperatorTable& table, Diagnostics* notes)
{
    std::string src = chunk.text;
    std::string_view tail = text::trim_right(src);
    // "foo(X) is det." may carry its own full stop
    if (!(tail.size() >= 2 && tail.back() == '.' &&
          !text::is_symbol_char(static_cast<unsigned char>(tail[tail.size() - 2]))))
        src += " .";
    try {
        Term t = read_term(src, table);
        return mode_from_term(t, notes);
    } catch (const SyntaxError& e) {
        throw HeaderSyntaxError(Reason::syntax, shift(e.span(), chunk), e.what());
    } catch (const HeaderSyntaxError& e) {
        throw HeaderSyntaxError(e.reason(), shift(e.span(), chunk), e.what());
    }
}

} // namespace

const char* to_string(Determinism d)
{
    switch (d) {
    case Determinism::unspecified: return "";
    case Determinism::det: return "det";
    case Determinism::semidet: return "semidet";
    case Determinism::nondet: return "nondet";
    case Determinism::multi: return "multi";
    }
    return "";
}

const char* to_string(HeaderSyntaxError::Reason r)
{
    switch (r) {
    case Reason::syntax: return "HeaderSyntax";
    case Reason::non_variable_arg_name: return "NonVariableArgName";
    case Reason::bad_determinism: return "BadDeterminism";
    case Reason::bad_mode: return "BadMode";
    case Reason::bad_head: return "BadHead";
    case Reason::empty_title: return "EmptyTitle";
    }
    return "HeaderSyntax";
}

std::optional<ArgMode> parse_arg_mode(std::string_view s)
{
    if (s.size() != 1)
        return std::nullopt;
    switch (s[0]) {
    case '+': return ArgMode::in;
    case '-': return ArgMode::out;
    case '?': return ArgMode::either;
    case ':': return ArgMode::meta;
    case '@': return ArgMode::unaltered;
    case '!': return ArgMode::mutable_;
    default: return std::nullopt;
    }
}

bool ArgSpec::same(const ArgSpec& o) const
{
    if (mode != o.mode || name != o.name || type.has_value() != o.type.has_value())
        return false;
    return !type || type->same_shape(*o.type);
}

bool ModeDecl::same(const ModeDecl& o) const
{
    if (name != o.name || is_dcg != o.is_dcg || det != o.det || args.size() != o.args.size())
        return false;
    for (std::size_t i = 0; i < args.size(); ++i)
        if (!args[i].same(o.args[i]))
            return false;
    return true;
}

std::string indicator(const ModeDecl& md) { return md.indicator().str(); }

std::string to_string(const ModeDecl& md, const OperatorTable& ops)
{
    std::string out = quote_atom_if_needed(md.name);
    if (!md.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < md.args.size(); ++i) {
            const ArgSpec& a = md.args[i];
            if (i)
                out += ", ";
            if (a.mode != ArgMode::none)
                out += static_cast<char>(a.mode);
            out += a.name;
            if (a.type) {
                out += ':';
                std::string type = format_term(*a.type, ops, 200);
                if (!type.empty() && text::is_symbol_char(static_cast<unsigned char>(type.front())))
                    out += ' ';
                out += type;
            }
        }
        out += ')';
    }
    if (md.is_dcg)
        out += "//";
    if (md.det != Determinism::unspecified) {
        out += " is ";
        out += to_string(md.det);
    }
    return out;
}

Determinism validate_determinism(std::string_view atom)
{
    if (atom == "det") return Determinism::det;
    if (atom == "semidet") return Determinism::semidet;
    if (atom == "nondet") return Determinism::nondet;
    if (atom == "multi") return Determinism::multi;
    throw HeaderSyntaxError(Reason::bad_determinism, {},
                            "unknown determinism '" + std::string(atom) +
                                "'; expected det, semidet, nondet or multi");
}

OperatorTable header_operator_table(const OperatorTable& ops)
{
    OperatorTable t = ops;
    t.add(400, OpType::xf, "//");
    for (auto n : {"*", "=", ">", "<", "#", "^", "&", "$", "~", "\\"})
        t.add(200, OpType::fy, n);
    return t;
}

HeaderParse parse_formal_header(std::string_view header_text, const OperatorTable& ops)
{
    std::string_view h = text::trim(header_text);
    if (h.rfind("<module>", 0) == 0) {
        std::string title = text::collapse_space(h.substr(8));
        if (title.empty())
            throw HeaderSyntaxError(Reason::empty_title, {}, "module header without a title");
        return HeaderParse{ModuleHeader{std::move(title)}, {}};
    }

    const OperatorTable table = header_operator_table(ops);
    HeaderParse result{std::vector<ModeDecl>{}, {}};
    auto& modes = std::get<std::vector<ModeDecl>>(result.value);
    for (const Chunk& c : split_terms(header_text))
        modes.push_back(read_mode(c, table, &result.notes));
    if (modes.empty())
        throw HeaderSyntaxError(Reason::bad_head, {}, "empty header");
    return result;
}

ModeDecl parse_mode(std::string_view text, const OperatorTable& ops)
{
    Chunk c{std::string(text), 0, 1};
    return read_mode(c, header_operator_table(ops), nullptr);
}

} // namespace pldoc
