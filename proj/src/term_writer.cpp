#include <charconv>
#include <cmath>

#include "pldoc/prolog_reader.hpp"
#include "text_util.hpp"

namespace pldoc {

namespace {

bool is_solo_atom(std::string_view s) { return s == "[]" || s == "{}" || s == "!" || s == ";"; }

bool is_letter_digit_atom(std::string_view s)
{
    if (s.empty())
        return false;
    auto c0 = static_cast<unsigned char>(s[0]);
    if (!(text::is_lower(c0) || c0 >= 0x80))
        return false;
    for (char c : s)
        if (!text::is_alnum(static_cast<unsigned char>(c)))
            return false;
    return true;
}

bool is_symbol_atom(std::string_view s)
{
    if (s.empty() || s == "." || s.find("/*") != std::string_view::npos)
        return false;
    for (char c : s)
        if (!text::is_symbol_char(static_cast<unsigned char>(c)))
            return false;
    return true;
}

void escape_quoted(std::string& out, std::string_view s, char q)
{
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c == q) {
                out += '\\';
                out += c;
            } else if (static_cast<unsigned char>(c) < 0x20) {
                static const char* hex = "0123456789abcdef";
                out += "\\x";
                out += hex[(c >> 4) & 0xF];
                out += hex[c & 0xF];
                out += '\\';
            } else {
                out += c;
            }
        }
    }
}

std::string format_float(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, p);
    auto e = s.find_first_of("eE");
    std::string mant = e == std::string::npos ? s : s.substr(0, e);
    std::string exp = e == std::string::npos ? "" : s.substr(e);
    if (mant.find('.') == std::string::npos)
        mant += ".0";
    return mant + exp;
}

std::string write_number(const Term& t)
{
    if (t.kind == Term::Kind::integer)
        return std::to_string(t.int_value);
    return format_float(t.float_value);
}

std::string write_string(const std::string& v)
{
    std::string out = "\"";
    escape_quoted(out, v, '"');
    out += '"';
    return out;
}

bool is_list_cell(const Term& t) { return t.is("[|]", 2); }

// Appends `piece`, inserting a space where the two would otherwise fuse
// into a single token.
void glue(std::string& out, std::string_view piece)
{
    if (!out.empty() && !piece.empty()) {
        auto a = static_cast<unsigned char>(out.back());
        auto b = static_cast<unsigned char>(piece.front());
        bool fuse = (text::is_alnum(a) && text::is_alnum(b)) ||
                    (text::is_symbol_char(a) && text::is_symbol_char(b)) ||
                    (a == ',' && b == ',');
        if (fuse)
            out += ' ';
    }
    out += piece;
}

class OpWriter {
public:
    explicit OpWriter(const OperatorTable& ops) : ops_(ops) {}

    std::string write(const Term& t, int max, bool operand)
    {
        switch (t.kind) {
        case Term::Kind::var: return t.name;
        case Term::Kind::integer:
        case Term::Kind::floating: return write_number(t);
        case Term::Kind::string: return write_string(t.name);
        case Term::Kind::atom: {
            std::string a = quote_atom_if_needed(t.name);
            if (operand && ops_.is_op(t.name) && !is_solo_atom(t.name))
                return "(" + a + ")";
            return a;
        }
        case Term::Kind::compound: break;
        }

        if (is_list_cell(t))
            return write_list(t);
        if (t.is("{}", 1))
            return "{" + write(t.args[0], 1200, false) + "}";

        if (t.arity() == 2) {
            const OpDef* d = t.name == "," ? &comma_ : ops_.infix(t.name);
            if (d) {
                const int p = d->priority;
                const int lp = d->type == OpType::yfx ? p : p - 1;
                const int rp = d->type == OpType::xfy ? p : p - 1;
                std::string out = write(t.args[0], lp, true);
                const std::string op = t.name == "," ? "," : quote_atom_if_needed(t.name);
                if (p >= 700 || text::is_alpha(static_cast<unsigned char>(op.front()))) {
                    out += t.name == "," ? ", " : " " + op + " ";
                    out += write(t.args[1], rp, true);
                } else {
                    glue(out, op);
                    glue(out, write(t.args[1], rp, true));
                }
                return p > max ? "(" + out + ")" : out;
            }
        }
        if (t.arity() == 1) {
            if (const OpDef* d = ops_.prefix(t.name); d && t.name != "-" && t.name != "+") {
                return prefix(t, *d, max);
            } else if (d && t.args[0].kind != Term::Kind::integer &&
                       t.args[0].kind != Term::Kind::floating) {
                return prefix(t, *d, max);
            }
            if (const OpDef* d = ops_.postfix(t.name)) {
                const int p = d->priority;
                const int ap = d->type == OpType::yf ? p : p - 1;
                std::string out = write(t.args[0], ap, true);
                glue(out, quote_atom_if_needed(t.name));
                return p > max ? "(" + out + ")" : out;
            }
        }

        std::string out = quote_atom_if_needed(t.name) + "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i)
                out += ", ";
            out += write(t.args[i], 999, false);
        }
        return out + ")";
    }

private:
    std::string prefix(const Term& t, const OpDef& d, int max)
    {
        const int p = d.priority;
        const int ap = d.type == OpType::fy ? p : p - 1;
        std::string out = quote_atom_if_needed(t.name);
        std::string arg = write(t.args[0], ap, true);
        if (arg.front() == '(' || text::is_alpha(static_cast<unsigned char>(out.back())))
            out += ' ';
        glue(out, arg);
        return p > max ? "(" + out + ")" : out;
    }

    std::string write_list(const Term& t)
    {
        std::string out = "[";
        const Term* cur = &t;
        bool first = true;
        while (is_list_cell(*cur)) {
            if (!first)
                out += ", ";
            first = false;
            out += write(cur->args[0], 999, false);
            cur = &cur->args[1];
        }
        if (!cur->is_atom("[]"))
            out += "|" + write(*cur, 999, false);
        return out + "]";
    }

    const OperatorTable& ops_;
    OpDef comma_{1000, OpType::xfy};
};

} // namespace

std::string quote_atom_if_needed(std::string_view name)
{
    if (is_solo_atom(name) || is_letter_digit_atom(name) || is_symbol_atom(name))
        return std::string(name);
    std::string out = "'";
    escape_quoted(out, name, '\'');
    out += '\'';
    return out;
}

std::string write_canonical(const Term& t)
{
    switch (t.kind) {
    case Term::Kind::var: return t.name;
    case Term::Kind::integer:
    case Term::Kind::floating: return write_number(t);
    case Term::Kind::string: return write_string(t.name);
    case Term::Kind::atom: return quote_atom_if_needed(t.name);
    case Term::Kind::compound: break;
    }
    if (is_list_cell(t)) {
        std::string out = "[";
        const Term* cur = &t;
        bool first = true;
        while (is_list_cell(*cur)) {
            if (!first)
                out += ',';
            first = false;
            out += write_canonical(cur->args[0]);
            cur = &cur->args[1];
        }
        if (!cur->is_atom("[]"))
            out += "|" + write_canonical(*cur);
        return out + "]";
    }
    if (t.is("{}", 1))
        return "{" + write_canonical(t.args[0]) + "}";
    std::string out = quote_atom_if_needed(t.name);
    // `[]` and `{}` are not name tokens, so they cannot start functional notation.
    if (t.name == "[]" || t.name == "{}")
        out = "'" + t.name + "'";
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i)
            out += ',';
        out += write_canonical(t.args[i]);
    }
    return out + ")";
}

std::string format_term(const Term& t, const OperatorTable& ops, int max_priority)
{
    return OpWriter(ops).write(t, max_priority, max_priority < 1200);
}

} // namespace pldoc
