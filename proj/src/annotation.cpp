#include "pap/annotation.hpp"

#include <algorithm>
#include <cmath>

namespace pap {

// ---------------------------------------------------------------------------
// Term evaluation.
// ---------------------------------------------------------------------------

Object eval_term(const TermPtr& t, const Binding& b) {
    if (!t) throw PapError("null term");
    switch (t->kind) {
        case Term::Kind::Obj:
            return t->obj;
        case Term::Kind::Var: {
            if (const Object* o = b.find(t->name)) return *o;
            throw PapError("unbound variable " + t->name);
        }
        case Term::Kind::Field: {
            Object base = eval_term(t->lhs, b);
            if (!base.is_record())
                throw PapError("field access ." + t->name + " on non-record " + to_string(base));
            auto it = base.as_record().find(t->name);
            if (it == base.as_record().end())
                throw PapError("record has no field " + t->name);
            return it->second;
        }
        case Term::Kind::BinOp: {
            Object l = eval_term(t->lhs, b), r = eval_term(t->rhs, b);
            if (!l.is_numeric() || !r.is_numeric())
                throw PapError("arithmetic on non-numeric operands: " + to_string(t));
            if (l.is_int() && r.is_int() && t->op != '/') {
                long long x = l.as_int(), y = r.as_int();
                switch (t->op) {
                    case '+': return Object(x + y);
                    case '-': return Object(x - y);
                    case '*': return Object(x * y);
                }
            }
            double x = l.as_real(), y = r.as_real();
            switch (t->op) {
                case '+': return Object(x + y);
                case '-': return Object(x - y);
                case '*': return Object(x * y);
                case '/':
                    if (y == 0.0) throw PapError("division by zero");
                    return Object(x / y);
            }
            throw PapError(std::string("unknown operator ") + t->op);
        }
    }
    throw PapError("bad term");
}

bool eval_rel(const Object& a, Rel rel, const Object& o) {
    int c = compare(a, o);
    switch (rel) {
        case Rel::Eq: return c == 0;
        case Rel::Ne: return c != 0;
        case Rel::Lt: return c < 0;
        case Rel::Gt: return c > 0;
        case Rel::Le: return c <= 0;
        case Rel::Ge: return c >= 0;
    }
    return false;
}

std::optional<GroundCall> ground_call(const CodeCall& c, const Binding& b) {
    GroundCall out;
    out.domain = c.domain;
    out.fn = c.fn;
    for (const auto& t : c.args) {
        std::set<std::string> vars;
        collect_vars(t, vars);
        for (const auto& v : vars)
            if (!b.find(v)) return std::nullopt;
        out.args.push_back(eval_term(t, b));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strategies.
// ---------------------------------------------------------------------------

namespace {
double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }
}  // namespace

ProbInterval combine(Strategy s, ProbInterval a, ProbInterval b) {
    ProbInterval r;
    switch (s) {
        case Strategy::Ig:
            r = {std::max(0.0, a.lo + b.lo - 1.0), std::min(a.hi, b.hi)};
            break;
        case Strategy::Pc:
            r = {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
            break;
        case Strategy::Nc:
            r = {std::max(0.0, a.lo + b.lo - 1.0), std::max(0.0, a.hi + b.hi - 1.0)};
            break;
        case Strategy::In:
            r = {a.lo * b.lo, a.hi * b.hi};
            break;
    }
    return {clamp01(r.lo), clamp01(r.hi)};
}

// ---------------------------------------------------------------------------
// Annotation functions and evaluation.
// ---------------------------------------------------------------------------

namespace {
struct AnnFn {
    size_t arity;
    double (*fn)(const std::vector<double>&);
};

const std::map<std::string, AnnFn>& ann_fn_table() {
    static const std::map<std::string, AnnFn> table = {
        {"+", {2, [](const std::vector<double>& a) { return a[0] + a[1]; }}},
        {"-", {2, [](const std::vector<double>& a) { return a[0] - a[1]; }}},
        {"*", {2, [](const std::vector<double>& a) { return a[0] * a[1]; }}},
        {"/", {2, [](const std::vector<double>& a) {
             // Division by zero clamps to the top of the unit interval.
             return a[1] == 0.0 ? 1.0 : a[0] / a[1];
         }}},
        {"min", {2, [](const std::vector<double>& a) { return std::min(a[0], a[1]); }}},
        {"max", {2, [](const std::vector<double>& a) { return std::max(a[0], a[1]); }}},
        {"pow", {2, [](const std::vector<double>& a) { return std::pow(a[0], a[1]); }}},
    };
    return table;
}
}  // namespace

bool annotation_fn_known(const std::string& name, size_t arity) {
    auto it = ann_fn_table().find(name);
    return it != ann_fn_table().end() && it->second.arity == arity;
}

double eval_annotation_item(const AnnotationItem& item, const Binding& b) {
    switch (item.kind) {
        case AnnotationItem::Kind::Const:
            return clamp01(item.value);
        case AnnotationItem::Kind::Var: {
            auto it = b.ann_vars.find(item.name);
            if (it == b.ann_vars.end())
                throw PapError("unbound annotation variable " + item.name);
            return clamp01(it->second);
        }
        case AnnotationItem::Kind::Apply: {
            auto it = ann_fn_table().find(item.name);
            if (it == ann_fn_table().end() || it->second.arity != item.args.size())
                throw PapError("unknown annotation function " + item.name + "/" +
                               std::to_string(item.args.size()));
            std::vector<double> args;
            for (const auto& a : item.args) args.push_back(eval_annotation_item(a, b));
            return clamp01(it->second.fn(args));
        }
    }
    throw PapError("bad annotation item");
}

ProbInterval eval_annotation(const Annotation& a, const Binding& b) {
    ProbInterval r{eval_annotation_item(a.lo, b), eval_annotation_item(a.hi, b)};
    if (r.lo > r.hi + kEps)
        throw PapError("inverted annotation interval " + to_string(r));
    return r;
}

// ---------------------------------------------------------------------------
// Axiom checker.
// ---------------------------------------------------------------------------

namespace {
bool leq(double a, double b) { return a <= b + kEps; }
bool ival_eq(ProbInterval a, ProbInterval b) {
    return std::abs(a.lo - b.lo) <= kEps && std::abs(a.hi - b.hi) <= kEps;
}
bool ival_sub(ProbInterval a, ProbInterval b) {  // a ⊆ b
    return leq(b.lo, a.lo) && leq(a.hi, b.hi);
}
std::string pair_str(ProbInterval a, ProbInterval b) {
    return to_string(a) + " x " + to_string(b);
}
}  // namespace

AxiomReport check_strategy_axioms(Strategy s, const std::vector<ProbInterval>& samples,
                                  bool include_identity) {
    AxiomReport rep;
    auto fail = [&](const std::string& axiom, const std::string& at) {
        rep.violations.push_back(to_string(s) + ": " + axiom + " at " + at);
    };
    const ProbInterval one{1.0, 1.0}, zero{0.0, 0.0};
    for (const auto& a : samples) {
        // Identity: x ⊗ [1,1] = x.
        if (include_identity && !ival_eq(combine(s, a, one), a))
            fail("Identity", to_string(a));
        // Annihilator: x ⊗ [0,0] = [0,0].
        if (!ival_eq(combine(s, a, zero), zero)) fail("Annihilator", to_string(a));
        for (const auto& b : samples) {
            ProbInterval ab = combine(s, a, b);
            // Bottomline: result below the component-wise minima.
            if (!(leq(ab.lo, std::min(a.lo, b.lo)) && leq(ab.hi, std::min(a.hi, b.hi))))
                fail("Bottomline", pair_str(a, b));
            // Ignorance: result inside the ig interval.
            if (!ival_sub(ab, combine(Strategy::Ig, a, b))) fail("Ignorance", pair_str(a, b));
            // Commutativity.
            if (!ival_eq(ab, combine(s, b, a))) fail("Commutativity", pair_str(a, b));
            for (const auto& c : samples) {
                // Associativity.
                if (!ival_eq(combine(s, ab, c), combine(s, a, combine(s, b, c))))
                    fail("Associativity", pair_str(a, b) + " x " + to_string(c));
                // Monotonicity: a ≤ c componentwise ⇒ a ⊗ b ≤ c ⊗ b.
                if (leq(a.lo, c.lo) && leq(a.hi, c.hi)) {
                    ProbInterval cb = combine(s, c, b);
                    if (!(leq(ab.lo, cb.lo) && leq(ab.hi, cb.hi)))
                        fail("Monotonicity", pair_str(a, c) + " with " + to_string(b));
                }
            }
            if (rep.violations.size() > 50) return rep;  // enough evidence
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Grounding.
// ---------------------------------------------------------------------------

std::vector<Binding> ground_condition(const ProbState& state, const CodeCallCondition& cond,
                                      const Binding& initial, bool filter) {
    std::vector<Binding> bindings{initial};
    for (const auto& cj : cond) {
        std::vector<Binding> next;
        for (const auto& b : bindings) {
            if (const auto* atom = std::get_if<CodeCallAtom>(&cj)) {
                auto call = ground_call(atom->call, b);
                if (!call)
                    throw PapError("unsafe condition: unbound variable in call arguments of " +
                                   to_string(*atom));
                bool subject_is_free_var = atom->subject->kind == Term::Kind::Var &&
                                           !b.find(atom->subject->name);
                if (subject_is_free_var) {
                    if (!atom->positive)
                        throw PapError("unsafe condition: notin-atom with unbound subject " +
                                       to_string(*atom));
                    for (const auto& rv : eval_prob_call(state, *call)) {
                        for (const auto& o : rv.objects) {
                            Binding nb = b;
                            nb.vars[atom->subject->name] = o;
                            next.push_back(std::move(nb));
                        }
                    }
                } else {
                    std::set<std::string> vars;
                    collect_vars(atom->subject, vars);
                    for (const auto& v : vars)
                        if (!b.find(v))
                            throw PapError("unsafe condition: unbound variable " + v + " in " +
                                           to_string(*atom));
                    if (filter) {
                        Object o = eval_term(atom->subject, b);
                        bool present = false;
                        for (const auto& rv : eval_prob_call(state, *call))
                            if (rv.prob_of(o)) {
                                present = true;
                                break;
                            }
                        if (present != atom->positive) continue;
                    }
                    next.push_back(b);
                }
            } else {
                const auto& cmp = std::get<Comparison>(cj);
                std::set<std::string> vars;
                collect_vars(cmp.lhs, vars);
                collect_vars(cmp.rhs, vars);
                for (const auto& v : vars)
                    if (!b.find(v))
                        throw PapError("unsafe condition: unbound variable " + v + " in " +
                                       to_string(cmp));
                if (filter && !eval_rel(eval_term(cmp.lhs, b), cmp.rel, eval_term(cmp.rhs, b)))
                    continue;
                next.push_back(b);
            }
        }
        bindings = std::move(next);
    }
    return bindings;
}

// ---------------------------------------------------------------------------
// Satisfaction.
// ---------------------------------------------------------------------------

namespace {

// The unique RV containing the object (coherence makes it unique).
std::optional<double> prob_in_state(const ProbState& state, const GroundCall& call,
                                    const Object& o) {
    for (const auto& rv : eval_prob_call(state, call))
        if (auto p = rv.prob_of(o)) return p;
    return std::nullopt;
}

bool atom_satisfied(const ProbState& state, const CodeCallAtom& atom, const Binding& b,
                    const ProbInterval& ann) {
    Object o = eval_term(atom.subject, b);
    auto call = ground_call(atom.call, b);
    if (!call) throw PapError("non-ground code call " + to_string(atom.call));
    auto p = prob_in_state(state, *call, o);
    if (atom.positive) return p && ann.contains(*p);
    return !p || !ann.contains(*p);
}

}  // namespace

std::optional<ProbInterval> tightest_interval(const ProbState& state, const Conjunct& c,
                                              const Binding& b, const ProbInterval& query) {
    if (const auto* atom = std::get_if<CodeCallAtom>(&c)) {
        if (atom->positive) {
            Object o = eval_term(atom->subject, b);
            auto call = ground_call(atom->call, b);
            if (!call) throw PapError("non-ground code call " + to_string(atom->call));
            if (auto p = prob_in_state(state, *call, o)) return ProbInterval{*p, *p};
            return std::nullopt;
        }
        // notin: contributes the deterministic interval when satisfied at the
        // query annotation; otherwise the whole conjunction is unsatisfied.
        if (atom_satisfied(state, *atom, b, query)) return ProbInterval{1.0, 1.0};
        return std::nullopt;
    }
    const auto& cmp = std::get<Comparison>(c);
    if (eval_rel(eval_term(cmp.lhs, b), cmp.rel, eval_term(cmp.rhs, b)))
        return ProbInterval{1.0, 1.0};
    return std::nullopt;
}

std::optional<ProbInterval> tightest_interval(const ProbState& state,
                                              const CodeCallCondition& cond, Strategy strat,
                                              const Binding& b, const ProbInterval& query) {
    std::optional<ProbInterval> acc;
    for (const auto& cj : cond) {
        auto t = tightest_interval(state, cj, b, query);
        if (!t) return std::nullopt;
        acc = acc ? combine(strat, *acc, *t) : *t;
    }
    return acc;
}

bool satisfies_ground(const ProbState& state, const CodeCallCondition& cond, Strategy strat,
                      const ProbInterval& ann, const Binding& b) {
    if (cond.empty()) return true;
    if (cond.size() == 1) {
        if (const auto* atom = std::get_if<CodeCallAtom>(&cond[0]))
            return atom_satisfied(state, *atom, b, ann);
        const auto& cmp = std::get<Comparison>(cond[0]);
        // Deterministic atoms hold regardless of the annotation when true.
        return eval_rel(eval_term(cmp.lhs, b), cmp.rel, eval_term(cmp.rhs, b));
    }
    auto t = tightest_interval(state, cond, strat, b, ann);
    return t && ann.contains(*t);
}

bool satisfies(const ProbState& state, const AnnotatedCondition& ac, const Binding& b) {
    ProbInterval ann = eval_annotation(ac.ann, b);
    std::vector<Binding> bindings = ground_condition(state, ac.cond, b, /*filter=*/false);
    if (bindings.empty()) return false;
    for (const auto& gb : bindings)
        if (!satisfies_ground(state, ac.cond, ac.strat, ann, gb)) return false;
    return true;
}

bool holds_existential(const ProbState& state, const CodeCallCondition& cond,
                       const ProbInterval& level, const Binding& initial) {
    if (cond.empty()) return true;
    for (const auto& gb : ground_condition(state, cond, initial, /*filter=*/false))
        if (satisfies_ground(state, cond, Strategy::Ig, level, gb)) return true;
    return false;
}

}  // namespace pap
