#include "pldoc/xref.hpp"

#include <functional>
#include <map>
#include <unordered_map>

namespace pldoc {

namespace {

const char* const builtin_list[] = {
    "true/0", "fail/0", "false/0", "!/0", ",/2", ";/2", "->/2", "*->/2", "\\+/1", "call/1", "call/2",
    "call/3", "call/4", "call/5", "call/6", "call/7", "call/8", "not/1", "once/1", "ignore/1",
    "forall/2", "findall/3", "findall/4", "bagof/3", "setof/3", "aggregate_all/3", "catch/3",
    "throw/1", "=/2", "\\=/2", "==/2", "\\==/2", "@</2", "@>/2", "@=</2", "@>=/2", "compare/3",
    "is/2", "=:=/2", "=\\=/2", "</2", ">/2", "=</2", ">=/2", "var/1", "nonvar/1", "atom/1",
    "number/1", "integer/1", "float/1", "atomic/1", "compound/1", "callable/1", "is_list/1",
    "string/1", "ground/1", "functor/3", "arg/3", "=../2", "copy_term/2", "atom_codes/2",
    "atom_chars/2", "char_code/2", "atom_length/2", "atom_concat/3", "sub_atom/5",
    "number_codes/2", "number_chars/2", "atom_number/2", "atom_string/2", "atom_to_term/3",
    "term_to_atom/2", "format/1", "format/2", "format/3", "write/1", "writeln/1", "print/1",
    "write_canonical/1", "writeq/1", "nl/0", "nl/1", "write/2", "read/1", "read_term/2",
    "read_term/3", "assert/1", "asserta/1", "assertz/1", "retract/1", "retractall/1",
    "abolish/1", "length/2", "append/3", "append/2", "member/2", "memberchk/2", "reverse/2",
    "nth0/3", "nth1/3", "last/2", "msort/2", "sort/2", "sort/4", "predsort/3", "keysort/2",
    "list_to_set/2", "sum_list/2", "max_list/2", "min_list/2", "numlist/3", "exclude/3",
    "include/3", "partition/4", "maplist/2", "maplist/3", "maplist/4", "maplist/5", "foldl/4",
    "foldl/5", "foldl/6", "between/3", "succ/2", "plus/3", "nb_getval/2", "b_getval/2",
    "nb_setval/2", "b_setval/2", "tab/1", "halt/0", "halt/1", "phrase/2", "phrase/3",
    "string_concat/3", "string_codes/2", "string_chars/2", "string_to_atom/2",
    "string_length/2", "sub_string/5", "split_string/4", "number_string/2", "term_string/2",
    "upcase_atom/2", "downcase_atom/2", "char_type/2", "code_type/2", "atomic_list_concat/2",
    "atomic_list_concat/3", "open/3", "open/4", "close/1", "close/2", "current_op/3", "op/3",
    "get_char/1", "get_char/2", "put_char/1", "put_char/2", "peek_char/1", "peek_char/2",
    "current_prolog_flag/2", "set_prolog_flag/2", "tab/2", "must_be/2",
    "is_of_type/2", "domain_error/2", "type_error/2", "existence_error/2", "permission_error/3",
    "instantiation_error/1", "setup_call_cleanup/3", "call_cleanup/2", "with_output_to/2",
    "sformat/3", "tab/2", "assertion/1", "ground/1", "term_variables/2",
    "setarg/3", "nb_setarg/3", "flag/3", "garbage_collect/0", "statistics/2", "get_time/1",
    "atom_codes/2", "last/2", "delete/3", "subtract/3", "intersection/3", "union/3",
    "exclude/3", "select/3", "selectchk/3", "permutation/2", "flatten/2", "max_member/2",
    "min_member/2", "pairs_keys_values/3", "pairs_keys/2", "pairs_values/2",
    "dynamic/1", "discontiguous/1", "multifile/1", "module/2", "use_module/1", "use_module/2",
    "ensure_loaded/1", "initialization/1", "initialization/2", "meta_predicate/1",
    "module_transparent/1", "public/1", "thread_local/1", "table/1",
};

using Walk = std::function<void(const Term& functor_term, const Indicator& pi)>;

void walk_goal(const Term& g, int extra, const Walk& on_call);
void walk_dcg(const Term& g, const Walk& on_call);

void call_of(const Term& g, int extra, const Walk& on_call)
{
    if (!g.is_callable())
        return;
    on_call(g, Indicator{g.name, static_cast<int>(g.arity()) + extra, false});
}

void walk_goal(const Term& g, int extra, const Walk& on_call)
{
    if (g.is_var() || !g.is_callable())
        return;
    if (extra == 0) {
        if (g.is(",", 2) || g.is(";", 2) || g.is("->", 2) || g.is("*->", 2) || g.is("|", 2)) {
            walk_goal(g.args[0], 0, on_call);
            walk_goal(g.args[1], 0, on_call);
            return;
        }
        if (g.is(":", 2) && g.args[0].is_atom()) {
            walk_goal(g.args[1], 0, on_call);
            return;
        }
    }
    const std::size_t n = g.arity();
    call_of(g, extra, on_call);
    if (extra != 0)
        return;
    auto goal_arg = [&](std::size_t i, int more = 0) {
        const Term* a = &g.args[i];
        while (a->is("^", 2)) // bagof/setof existential
            a = &a->args[1];
        walk_goal(*a, more, on_call);
    };
    if (g.name == "call" && n >= 1) {
        goal_arg(0, static_cast<int>(n) - 1);
    } else if ((g.name == "\\+" || g.name == "once" || g.name == "ignore" || g.name == "not") && n == 1) {
        goal_arg(0);
    } else if (g.name == "forall" && n == 2) {
        goal_arg(0);
        goal_arg(1);
    } else if ((g.name == "findall" && (n == 3 || n == 4)) || ((g.name == "bagof" || g.name == "setof" ||
                                                               g.name == "aggregate_all") && n == 3)) {
        goal_arg(1);
    } else if (g.name == "catch" && n == 3) {
        goal_arg(0);
        goal_arg(2);
    } else if (g.name == "setup_call_cleanup" && n == 3) {
        goal_arg(0);
        goal_arg(1);
        goal_arg(2);
    } else if (g.name == "call_cleanup" && n == 2) {
        goal_arg(0);
        goal_arg(1);
    } else if (g.name == "phrase" && (n == 2 || n == 3)) {
        walk_dcg(g.args[0], on_call);
    } else if ((g.name == "maplist" && n >= 2) || (g.name == "foldl" && n >= 4)) {
        goal_arg(0, static_cast<int>(n) - 1 - (g.name == "foldl" ? 1 : 0));
    } else if ((g.name == "include" || g.name == "exclude") && n == 3) {
        goal_arg(0, 1);
    }
}

void walk_dcg(const Term& g, const Walk& on_call)
{
    if (g.is_var())
        return;
    if (g.is(",", 2) || g.is(";", 2) || g.is("|", 2) || g.is("->", 2)) {
        walk_dcg(g.args[0], on_call);
        walk_dcg(g.args[1], on_call);
        return;
    }
    if (g.is("{}", 1)) {
        walk_goal(g.args[0], 0, on_call);
        return;
    }
    if (g.is("\\+", 1)) {
        walk_dcg(g.args[0], on_call);
        return;
    }
    if (g.is(":", 2) && g.args[0].is_atom()) {
        walk_dcg(g.args[1], on_call);
        return;
    }
    if (g.is("[|]", 2) || g.is_atom("[]") || g.is_atom("!") || !g.is_callable())
        return;
    if (g.name == "call") {
        on_call(g, Indicator{g.name, static_cast<int>(g.arity()) + 2, false});
        return;
    }
    on_call(g, Indicator{g.name, static_cast<int>(g.arity()), true});
}

const Term* strip_module(const Term* t)
{
    while (t->is(":", 2) && t->args[0].is_atom())
        t = &t->args[1];
    return t;
}

void declared_indicators(const Term& spec, std::vector<Indicator>& out)
{
    if (spec.is(",", 2)) {
        declared_indicators(spec.args[0], out);
        declared_indicators(spec.args[1], out);
        return;
    }
    if (spec.is("[|]", 2)) {
        declared_indicators(spec.args[0], out);
        declared_indicators(spec.args[1], out);
        return;
    }
    const Term* t = strip_module(&spec);
    bool dcg = t->is("//", 2);
    if ((dcg || t->is("/", 2)) && t->args[0].is_atom() && t->args[1].kind == Term::Kind::integer)
        out.push_back(Indicator{t->args[0].name, static_cast<int>(t->args[1].int_value), dcg});
}

struct Clause {
    const Term* head = nullptr;
    bool dcg = false;
    const Term* body = nullptr;
    const Term* directive = nullptr;
};

Clause split_clause(const Term& t)
{
    Clause c;
    if (t.is(":-", 1) || t.is("?-", 1)) {
        c.directive = &t.args[0];
    } else if (t.is("-->", 2)) {
        c.head = &t.args[0];
        if (c.head->is(",", 2))
            c.head = &c.head->args[0];
        c.dcg = true;
        c.body = &t.args[1];
    } else if (t.is(":-", 2)) {
        c.head = &t.args[0];
        c.body = &t.args[1];
    } else {
        c.head = &t;
    }
    if (c.head)
        c.head = strip_module(c.head);
    return c;
}

std::optional<Indicator> head_of(const Clause& c)
{
    if (!c.head || !c.head->is_callable())
        return std::nullopt;
    return Indicator{c.head->name, static_cast<int>(c.head->arity()), c.dcg};
}

void directive_goals(const Term& d, const Walk& on_call)
{
    if (d.is("initialization", 1) || d.is("initialization", 2))
        walk_goal(d.args[0], 0, on_call);
}

void count_vars(const Term& t, std::map<std::string, int>& counts)
{
    if (t.is_var()) {
        ++counts[t.name];
        return;
    }
    for (const Term& a : t.args)
        count_vars(a, counts);
}

class Colourer {
public:
    Colourer(std::string_view text, const SourceReadResult& src, const XrefReport& report,
             const std::set<Indicator>& builtins)
        : text_(text), src_(src), report_(report), builtins_(builtins)
    {
        for (std::size_t i = 0; i < src.tokens.size(); ++i)
            at_[src.tokens[i].span.byte_start] = i;
        classes_.resize(src.tokens.size(), ColourClass::plain);
    }

    void base_classes(const CommentOptions& opts)
    {
        for (std::size_t i = 0; i < src_.tokens.size(); ++i) {
            const Token& tok = src_.tokens[i];
            ColourClass c = ColourClass::plain;
            switch (tok.kind) {
            case TokenKind::comment_line:
            case TokenKind::comment_block: c = ColourClass::comment; break;
            case TokenKind::variable: c = ColourClass::variable; break;
            case TokenKind::integer:
            case TokenKind::floating: c = ColourClass::number; break;
            case TokenKind::string: c = ColourClass::string; break;
            case TokenKind::atom:
                if (!tok.text.empty() && tok.text[0] == '\'')
                    c = ColourClass::quoted_atom;
                break;
            case TokenKind::punct:
                if (default_operator_table().is_op(tok.text) && tok.text != "!")
                    c = ColourClass::operator_;
                break;
            default: break;
            }
            classes_[i] = c;
        }

        std::vector<CommentRecord> all;
        for (const ClauseUnit& u : src_.units)
            for (const CommentRecord& r : u.leading_comments)
                all.push_back(r);
        for (const CommentRecord& g : group_comments(all, text_, opts)) {
            if (!classify_comment(g, opts))
                continue;
            for (std::size_t i = 0; i < src_.tokens.size(); ++i) {
                const Token& tok = src_.tokens[i];
                if (tok.is_comment() && tok.span.byte_start >= g.span.byte_start &&
                    tok.span.byte_end <= g.span.byte_end)
                    classes_[i] = ColourClass::structured_comment;
            }
        }
    }

    void clause(const Term& t)
    {
        std::map<std::string, int> counts;
        count_vars(t, counts);
        mark_vars(t, counts);

        Clause c = split_clause(t);
        if (c.directive) {
            set(t.functor_span, ColourClass::directive);
            if (c.directive->is_callable())
                set(c.directive->functor_span, ColourClass::directive);
            directive_goals(*c.directive, [&](const Term& f, const Indicator& pi) { call(f, pi); });
            return;
        }
        if (auto pi = head_of(c))
            set(c.head->functor_span, report_.is_public(*pi) ? ColourClass::head_exported : ColourClass::head_local);
        if (!c.body)
            return;
        Walk w = [&](const Term& f, const Indicator& pi) { call(f, pi); };
        if (c.dcg)
            walk_dcg(*c.body, w);
        else
            walk_goal(*c.body, 0, w);
    }

    std::vector<ColourSpan> result() const
    {
        std::vector<ColourSpan> out;
        out.reserve(classes_.size());
        for (std::size_t i = 0; i < classes_.size(); ++i)
            out.push_back({src_.tokens[i].span, classes_[i]});
        return out;
    }

private:
    bool known(const Indicator& pi) const
    {
        return report_.defined.count(pi) || report_.dynamic_decls.count(pi) || builtins_.count(pi);
    }

    void call(const Term& f, const Indicator& pi)
    {
        // control constructs keep their operator colour
        if (f.arity() == 2 && (f.name == "," || f.name == ";" || f.name == "->"))
            return;
        set(f.functor_span, known(pi) ? ColourClass::call_defined : ColourClass::call_undefined);
    }

    void mark_vars(const Term& t, const std::map<std::string, int>& counts)
    {
        if (t.is_var()) {
            auto it = counts.find(t.name);
            bool single = t.name != "_" && it != counts.end() && it->second == 1;
            set(t.span, single ? ColourClass::singleton_variable : ColourClass::variable);
            return;
        }
        for (const Term& a : t.args)
            mark_vars(a, counts);
    }

    void set(const SourceSpan& s, ColourClass c)
    {
        auto it = at_.find(s.byte_start);
        if (it == at_.end())
            return;
        const Token& tok = src_.tokens[it->second];
        if (tok.is_comment() || tok.kind == TokenKind::open || tok.kind == TokenKind::open_list ||
            tok.kind == TokenKind::open_curly)
            return;
        classes_[it->second] = c;
    }

    std::string_view text_;
    const SourceReadResult& src_;
    const XrefReport& report_;
    const std::set<Indicator>& builtins_;
    std::unordered_map<std::size_t, std::size_t> at_;
    std::vector<ColourClass> classes_;
};

} // namespace

const char* css_class(ColourClass c)
{
    switch (c) {
    case ColourClass::comment: return "comment";
    case ColourClass::structured_comment: return "structured_comment";
    case ColourClass::head_exported: return "head_exported";
    case ColourClass::head_local: return "head_local";
    case ColourClass::call_defined: return "call_defined";
    case ColourClass::call_undefined: return "call_undefined";
    case ColourClass::variable: return "variable";
    case ColourClass::singleton_variable: return "singleton_variable";
    case ColourClass::quoted_atom: return "quoted_atom";
    case ColourClass::string: return "string";
    case ColourClass::number: return "number";
    case ColourClass::operator_: return "operator";
    case ColourClass::directive: return "directive";
    case ColourClass::plain: return "plain";
    }
    return "plain";
}

const std::set<Indicator>& default_builtins()
{
    static const std::set<Indicator> table = [] {
        std::set<Indicator> s;
        for (const char* b : builtin_list)
            if (auto pi = Indicator::parse(b))
                s.insert(*pi);
        return s;
    }();
    return table;
}

XrefReport cross_reference(const std::vector<ClauseUnit>& units, const ModuleDoc& module)
{
    XrefReport r;
    r.has_module = module.has_module_directive();
    r.exported.insert(module.exports.begin(), module.exports.end());
    Walk record = [&](const Term&, const Indicator& pi) { r.called.insert(pi); };
    for (const ClauseUnit& u : units) {
        if (!u.term)
            continue;
        Clause c = split_clause(*u.term);
        if (c.directive) {
            const Term& d = *c.directive;
            if ((d.is("dynamic", 1) || d.is("thread_local", 1) || d.is("table", 1))) {
                std::vector<Indicator> pis;
                declared_indicators(d.args[0], pis);
                r.dynamic_decls.insert(pis.begin(), pis.end());
            }
            directive_goals(d, record);
            continue;
        }
        if (auto pi = head_of(c))
            r.defined.insert(*pi);
        if (c.body) {
            if (c.dcg)
                walk_dcg(*c.body, record);
            else
                walk_goal(*c.body, 0, record);
        }
    }
    return r;
}

std::vector<ColourSpan> colour_source(std::string_view text, const SourceReadResult& src,
                                      const XrefReport& report, const std::set<Indicator>& builtins,
                                      const CommentOptions& comments)
{
    Colourer c(text, src, report, builtins);
    c.base_classes(comments);
    for (const ClauseUnit& u : src.units)
        if (u.term)
            c.clause(*u.term);
    return c.result();
}

} // namespace pldoc
