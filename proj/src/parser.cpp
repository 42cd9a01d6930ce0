#include "pap/parser.hpp"

#include <cctype>
#include <cstdlib>

#include "pap/semantics.hpp"

namespace pap {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer.
// ---------------------------------------------------------------------------

struct Tok {
    enum class Type { Ident, Int, Real, Punct, End };
    Type type = Type::End;
    std::string text;
    long long ival = 0;
    double rval = 0.0;
    int line = 1, col = 1;
    bool adj = false;  // no whitespace between this and the previous token
};

std::vector<Tok> tokenize(const std::string& text, const std::string& file) {
    std::vector<Tok> toks;
    size_t i = 0;
    int line = 1, col = 1;
    bool adj = false;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            adj = false;
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            adj = false;
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        t.adj = adj;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_' || text[i] == '\''))
                advance(1);
            t.type = Tok::Type::Ident;
            t.text = text.substr(start, i - start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            bool real = false;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                advance(1);
            if (i + 1 < text.size() && text[i] == '.' &&
                std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                real = true;
                advance(1);
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    advance(1);
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    real = true;
                    advance(j - i);
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                        advance(1);
                }
            }
            t.text = text.substr(start, i - start);
            if (real) {
                t.type = Tok::Type::Real;
                t.rval = std::strtod(t.text.c_str(), nullptr);
            } else {
                t.type = Tok::Type::Int;
                t.ival = std::strtoll(t.text.c_str(), nullptr, 10);
            }
        } else {
            static const char* two[] = {"<-", "<=", ">=", "!=", "=>"};
            t.type = Tok::Type::Punct;
            t.text = std::string(1, c);
            for (const char* p : two)
                if (i + 1 < text.size() && c == p[0] && text[i + 1] == p[1]) {
                    t.text = p;
                    break;
                }
            if (std::string("()[]{},.:;@&=<>+-*/!").find(c) == std::string::npos)
                throw ParseError("unexpected character '" + std::string(1, c) + "'",
                                 {file, line, col});
            advance(t.text.size());
        }
        if (t.type == Tok::Type::Ident || t.type == Tok::Type::Int || t.type == Tok::Type::Real) {
            // advance already done above for ident/number paths
        }
        toks.push_back(std::move(t));
        adj = true;
    }
    Tok end;
    end.type = Tok::Type::End;
    end.line = line;
    end.col = col;
    toks.push_back(end);
    return toks;
}

bool upper_initial(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

// ---------------------------------------------------------------------------
// Parser.
// ---------------------------------------------------------------------------

struct Parser {
    std::vector<Tok> toks;
    size_t pos = 0;
    std::string file;
    Strategy default_strategy = Strategy::Ig;

    const Tok& peek(size_t k = 0) const {
        size_t j = pos + k;
        return j < toks.size() ? toks[j] : toks.back();
    }
    const Tok& next() { return toks[std::min(pos++, toks.size() - 1)]; }
    bool at_punct(const std::string& p, size_t k = 0) const {
        return peek(k).type == Tok::Type::Punct && peek(k).text == p;
    }
    bool at_ident(const std::string& s, size_t k = 0) const {
        return peek(k).type == Tok::Type::Ident && peek(k).text == s;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, {file, peek().line, peek().col});
    }
    void expect_punct(const std::string& p) {
        if (!at_punct(p)) fail("expected '" + p + "'");
        next();
    }
    std::string expect_ident(const char* what) {
        if (peek().type != Tok::Type::Ident) fail(std::string("expected ") + what);
        return next().text;
    }

    bool at_modality() const {
        return peek().type == Tok::Type::Ident && modality_from_string(peek().text) &&
               peek(1).type == Tok::Type::Ident && at_punct("(", 2);
    }

    // -- terms --------------------------------------------------------------

    TermPtr parse_primary() {
        const Tok& t = peek();
        if (t.type == Tok::Type::Int) {
            next();
            return term_obj(Object(t.ival));
        }
        if (t.type == Tok::Type::Real) {
            next();
            return term_obj(Object(t.rval));
        }
        if (at_punct("(")) {
            next();
            TermPtr inner = parse_term();
            expect_punct(")");
            return inner;
        }
        if (at_punct("{")) return term_obj(parse_record());
        if (t.type != Tok::Type::Ident) fail("expected a term");
        next();
        TermPtr base = upper_initial(t.text) ? term_var(t.text) : term_obj(Object(t.text));
        // Field access: tight dots, e.g. X.pop
        while (at_punct(".") && peek().adj && peek(1).type == Tok::Type::Ident && peek(1).adj &&
               !at_punct("(", 2)) {
            next();
            base = term_field(base, next().text);
        }
        return base;
    }

    Object parse_record() {
        expect_punct("{");
        Record rec;
        while (!at_punct("}")) {
            std::string key = expect_ident("field name");
            expect_punct(":");
            TermPtr v = parse_term();
            if (!term_ground(v)) fail("record fields must be ground");
            rec[key] = eval_term(v, Binding{});
            if (at_punct(","))
                next();
            else
                break;
        }
        expect_punct("}");
        return Object(std::move(rec));
    }

    TermPtr parse_mul() {
        TermPtr t = parse_primary();
        while (at_punct("*") || at_punct("/")) {
            char op = next().text[0];
            t = term_binop(op, t, parse_primary());
        }
        return t;
    }

    TermPtr parse_term() {
        TermPtr t = parse_mul();
        while (at_punct("+") || at_punct("-")) {
            char op = next().text[0];
            t = term_binop(op, t, parse_mul());
        }
        return t;
    }

    // -- code calls and conditions -------------------------------------------

    CodeCall parse_code_call() {
        CodeCall c;
        c.domain = expect_ident("domain name");
        expect_punct(".");
        c.fn = expect_ident("function name");
        expect_punct("(");
        while (!at_punct(")")) {
            c.args.push_back(parse_term());
            if (at_punct(","))
                next();
            else
                break;
        }
        expect_punct(")");
        return c;
    }

    bool at_cc_atom() const {
        return (at_ident("in") || at_ident("notin")) && at_punct("(", 1);
    }

    CodeCallAtom parse_cc_atom() {
        CodeCallAtom a;
        a.positive = next().text == "in";
        expect_punct("(");
        a.subject = parse_term();
        expect_punct(",");
        a.call = parse_code_call();
        expect_punct(")");
        return a;
    }

    Conjunct parse_conjunct() {
        if (at_cc_atom()) return parse_cc_atom();
        TermPtr lhs = parse_term();
        Rel rel;
        if (at_punct("=")) rel = Rel::Eq;
        else if (at_punct("!=")) rel = Rel::Ne;
        else if (at_punct("<")) rel = Rel::Lt;
        else if (at_punct(">")) rel = Rel::Gt;
        else if (at_punct("<=")) rel = Rel::Le;
        else if (at_punct(">=")) rel = Rel::Ge;
        else fail("expected a comparison operator");
        next();
        return Comparison{lhs, rel, parse_term()};
    }

    CodeCallCondition parse_condition() {
        CodeCallCondition c;
        c.push_back(parse_conjunct());
        while (at_punct("&")) {
            next();
            c.push_back(parse_conjunct());
        }
        return c;
    }

    // -- annotations ----------------------------------------------------------

    AnnotationItem parse_ann_primary() {
        const Tok& t = peek();
        if (t.type == Tok::Type::Int) {
            next();
            return AnnotationItem::constant(static_cast<double>(t.ival));
        }
        if (t.type == Tok::Type::Real) {
            next();
            return AnnotationItem::constant(t.rval);
        }
        if (at_punct("(")) {
            next();
            AnnotationItem a = parse_ann_item();
            expect_punct(")");
            return a;
        }
        bool op_fn = t.type == Tok::Type::Punct &&
                     (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/") &&
                     at_punct("(", 1);
        if (op_fn || (t.type == Tok::Type::Ident && at_punct("(", 1))) {
            std::string fn = next().text;
            expect_punct("(");
            std::vector<AnnotationItem> args;
            while (!at_punct(")")) {
                args.push_back(parse_ann_item());
                if (at_punct(","))
                    next();
                else
                    break;
            }
            expect_punct(")");
            if (!annotation_fn_known(fn, args.size()))
                fail("unknown annotation function " + fn + "/" + std::to_string(args.size()));
            return AnnotationItem::apply(fn, std::move(args));
        }
        if (t.type == Tok::Type::Ident) {
            next();
            return AnnotationItem::variable(t.text);
        }
        fail("expected an annotation item");
    }

    AnnotationItem parse_ann_mul() {
        AnnotationItem a = parse_ann_primary();
        while ((at_punct("*") || at_punct("/")) && !at_punct("(", 1)) {
            std::string op = next().text;
            a = AnnotationItem::apply(op, {a, parse_ann_primary()});
        }
        return a;
    }

    AnnotationItem parse_ann_item() {
        AnnotationItem a = parse_ann_mul();
        while ((at_punct("+") || at_punct("-")) && !at_punct("(", 1)) {
            std::string op = next().text;
            a = AnnotationItem::apply(op, {a, parse_ann_mul()});
        }
        return a;
    }

    Annotation parse_annotation() {
        expect_punct("[");
        Annotation a;
        a.lo = parse_ann_item();
        expect_punct(",");
        a.hi = parse_ann_item();
        expect_punct("]");
        return a;
    }

    Strategy parse_strategy() {
        std::string id = expect_ident("strategy id");
        auto s = strategy_from_string(id);
        if (!s) fail("unknown strategy " + id);
        return *s;
    }

    // -- status atoms and rules ------------------------------------------------

    StatusAtom parse_status_atom() {
        std::string m = expect_ident("modality");
        auto mod = modality_from_string(m);
        if (!mod) fail("unknown modality " + m);
        StatusAtom a;
        a.op = *mod;
        a.action = expect_ident("action name");
        expect_punct("(");
        while (!at_punct(")")) {
            a.args.push_back(parse_term());
            if (at_punct(","))
                next();
            else
                break;
        }
        expect_punct(")");
        return a;
    }

    Rule parse_rule() {
        Rule r;
        r.head = parse_status_atom();
        if (at_punct("<-")) {
            next();
            if (at_punct(".")) {  // empty body: `head <- .`
                next();
                return r;
            }
            CodeCallCondition group;
            auto close_group = [&](std::optional<Annotation> ann, Strategy strat) {
                if (group.empty()) {
                    if (ann) fail("annotation without a condition");
                    return;
                }
                AnnotatedCondition ac;
                ac.cond = std::move(group);
                group.clear();
                if (ann) {
                    ac.ann = *ann;
                    ac.strat = strat;
                } else {
                    ac.ann.lo = AnnotationItem::constant(1.0);
                    ac.ann.hi = AnnotationItem::constant(1.0);
                    ac.strat = default_strategy;
                }
                r.body_prob.push_back(std::move(ac));
            };
            for (;;) {
                if (at_ident("not")) {
                    next();
                    close_group(std::nullopt, default_strategy);
                    r.body_neg.push_back(parse_status_atom());
                } else if (at_modality()) {
                    close_group(std::nullopt, default_strategy);
                    r.body_pos.push_back(parse_status_atom());
                } else {
                    group.push_back(parse_conjunct());
                    if (at_punct(":")) {
                        next();
                        Annotation ann = parse_annotation();
                        expect_punct("@");
                        close_group(ann, parse_strategy());
                    }
                }
                if (at_punct(",") || at_punct("&")) {
                    next();
                    continue;
                }
                break;
            }
            close_group(std::nullopt, default_strategy);
        }
        expect_punct(".");
        return r;
    }

    // -- action blocks, constraints ---------------------------------------------

    ActionDef parse_action_block() {
        next();  // 'action'
        ActionDef a;
        a.name = expect_ident("action name");
        expect_punct("(");
        while (!at_punct(")")) {
            std::string v = expect_ident("parameter");
            if (!upper_initial(v)) fail("action parameters must be variables");
            a.params.push_back(v);
            if (at_punct(","))
                next();
            else
                break;
        }
        expect_punct(")");
        expect_punct("{");
        while (!at_punct("}")) {
            std::string section = expect_ident("section (pre/add/del)");
            expect_punct(":");
            if (section == "pre") {
                a.pre = parse_condition();
            } else if (section == "add" || section == "del") {
                auto& list = section == "add" ? a.add : a.del;
                list.push_back(parse_cc_atom_checked());
                while (at_punct(",")) {
                    next();
                    list.push_back(parse_cc_atom_checked());
                }
            } else {
                fail("unknown action section " + section);
            }
            if (at_punct(";")) next();
        }
        expect_punct("}");
        if (at_punct(".")) next();
        return a;
    }

    CodeCallAtom parse_cc_atom_checked() {
        if (!at_cc_atom()) fail("expected an in(...) atom");
        CodeCallAtom a = parse_cc_atom();
        if (!a.positive) fail("add/del atoms must have polarity in");
        return a;
    }

    ActionConstraint parse_action_constraint() {
        next();  // 'constraint'
        ActionConstraint c;
        expect_punct("{");
        while (!at_punct("}")) {
            ActionAtom a;
            a.name = expect_ident("action name");
            expect_punct("(");
            while (!at_punct(")")) {
                a.args.push_back(parse_term());
                if (at_punct(","))
                    next();
                else
                    break;
            }
            expect_punct(")");
            c.blocked.push_back(std::move(a));
            if (at_punct(","))
                next();
            else
                break;
        }
        expect_punct("}");
        if (c.blocked.empty()) fail("empty action constraint");
        if (at_punct("<-")) {
            next();
            c.guard = parse_condition();
        }
        expect_punct(".");
        return c;
    }

    IntegrityConstraint parse_ic() {
        next();  // 'ic'
        IntegrityConstraint c;
        c.antecedent = parse_condition();
        expect_punct("=>");
        c.consequent.push_back(parse_conjunct());
        expect_punct(".");
        return c;
    }
};

// Actions used by rules/constraints but never declared get implicit empty
// definitions (no precondition, no effects).
void declare_implicit_actions(Program& prog) {
    auto ensure = [&](const std::string& name, size_t arity) {
        if (prog.actions.count(name)) return;
        ActionDef def;
        def.name = name;
        for (size_t i = 0; i < arity; ++i) def.params.push_back("X" + std::to_string(i + 1));
        prog.actions[name] = std::move(def);
    };
    for (const auto& r : prog.rules) {
        ensure(r.head.action, r.head.args.size());
        for (const auto& a : r.body_pos) ensure(a.action, a.args.size());
        for (const auto& a : r.body_neg) ensure(a.action, a.args.size());
    }
    for (const auto& c : prog.action_constraints)
        for (const auto& a : c.blocked) ensure(a.name, a.args.size());
}

}  // namespace

Program parse_program(const std::string& text, const std::string& file,
                      Strategy default_strategy) {
    Parser p{tokenize(text, file), 0, file, default_strategy};
    Program prog;
    while (p.peek().type != Tok::Type::End) {
        if (p.at_ident("action") && p.peek(1).type == Tok::Type::Ident && p.at_punct("(", 2)) {
            ActionDef a = p.parse_action_block();
            prog.actions[a.name] = std::move(a);
        } else if (p.at_ident("constraint") && p.at_punct("{", 1)) {
            prog.action_constraints.push_back(p.parse_action_constraint());
        } else if (p.at_ident("ic")) {
            prog.integrity_constraints.push_back(p.parse_ic());
        } else {
            Rule r = p.parse_rule();
            r.id = static_cast<int>(prog.rules.size()) + 1;
            prog.rules.push_back(std::move(r));
        }
    }
    declare_implicit_actions(prog);
    auto safety = check_safety(prog);
    if (!safety.ok()) throw ParseError(safety.violations.front(), {file, 1, 1});
    for (const auto& ic : prog.integrity_constraints)
        if (ic.consequent.size() != 1)
            throw ParseError("integrity-constraint consequent must be a single atom",
                             {file, 1, 1});
    return prog;
}

ProbState parse_state(const std::string& text, const std::string& file) {
    Parser p{tokenize(text, file), 0, file};
    ProbState st;
    while (p.peek().type != Tok::Type::End) {
        CodeCall cc = p.parse_code_call();
        Binding empty;
        auto call = ground_call(cc, empty);
        if (!call) p.fail("state entries must use ground code calls");
        p.expect_punct("=");
        p.expect_punct("{");
        RVSet rvs;
        while (!p.at_punct("}")) {
            if (!p.at_ident("rv") || !p.at_punct("{", 1)) p.fail("expected rv{...}");
            p.next();
            p.expect_punct("{");
            RandomVariable rv;
            while (!p.at_punct("}")) {
                TermPtr t = p.parse_term();
                if (!term_ground(t)) p.fail("state objects must be ground");
                p.expect_punct(":");
                const Tok& num = p.peek();
                double prob;
                if (num.type == Tok::Type::Real)
                    prob = num.rval;
                else if (num.type == Tok::Type::Int)
                    prob = static_cast<double>(num.ival);
                else
                    p.fail("expected a probability");
                p.next();
                rv.objects.push_back(eval_term(t, empty));
                rv.prob.push_back(prob);
                if (p.at_punct(","))
                    p.next();
                else
                    break;
            }
            p.expect_punct("}");
            auto rep = validate_random_variable(rv);
            if (!rep.ok()) p.fail("invalid random variable: " + rep.violations.front());
            rvs.push_back(std::move(rv));
            if (p.at_punct(","))
                p.next();
            else
                break;
        }
        p.expect_punct("}");
        auto rep = check_coherent(rvs);
        if (!rep.ok()) p.fail("incoherent result set: " + rep.violations.front());
        st.entries[*call] = std::move(rvs);
    }
    return st;
}

Query parse_query(const std::string& text, const std::string& file, Strategy default_strategy) {
    Parser p{tokenize(text, file), 0, file, default_strategy};
    if (p.at_modality()) {
        StatusAtom a = p.parse_status_atom();
        if (p.peek().type != Tok::Type::End) p.fail("trailing input after status atom");
        return a;
    }
    AnnotatedCondition ac;
    ac.cond = p.parse_condition();
    if (p.at_punct(":")) {
        p.next();
        ac.ann = p.parse_annotation();
        p.expect_punct("@");
        ac.strat = p.parse_strategy();
    } else {
        ac.ann.lo = AnnotationItem::constant(1.0);
        ac.ann.hi = AnnotationItem::constant(1.0);
        ac.strat = default_strategy;
    }
    if (p.peek().type != Tok::Type::End) p.fail("trailing input after condition");
    return ac;
}

StatusSet parse_status_set(const std::string& text, const std::string& file) {
    Parser p{tokenize(text, file), 0, file};
    StatusSet out;
    while (p.peek().type != Tok::Type::End) {
        if (p.at_punct(".")) {
            p.next();
            continue;
        }
        StatusAtom a = p.parse_status_atom();
        Binding empty;
        GroundStatusAtom g;
        try {
            g = ground_status_atom(a, empty);
        } catch (const PapError&) {
            p.fail("status atoms must be ground");
        }
        out.insert(g);
        if (p.at_punct(",")) p.next();
    }
    return out;
}

GroundAction parse_action_invocation(const std::string& text, const std::string& file) {
    Parser p{tokenize(text, file), 0, file};
    GroundAction a;
    a.name = p.expect_ident("action name");
    p.expect_punct("(");
    Binding empty;
    while (!p.at_punct(")")) {
        TermPtr t = p.parse_term();
        if (!term_ground(t)) p.fail("action arguments must be ground");
        a.args.push_back(eval_term(t, empty));
        if (p.at_punct(","))
            p.next();
        else
            break;
    }
    p.expect_punct(")");
    if (p.peek().type != Tok::Type::End) p.fail("trailing input after action invocation");
    return a;
}

}  // namespace pap
