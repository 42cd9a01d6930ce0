#include "pap/semantics.hpp"

#include <algorithm>

namespace pap {

// ---------------------------------------------------------------------------
// Closures.
// ---------------------------------------------------------------------------

StatusSet deontic_closure(const StatusSet& ps) {
    StatusSet out = ps;
    for (const auto& a : ps)
        if (a.op == Modality::O) out.insert({Modality::P, a.atom});
    return out;
}

StatusSet action_closure(const StatusSet& ps, ClosureVariant v) {
    StatusSet out = ps;
    for (const auto& a : ps) {
        switch (a.op) {
            case Modality::O:
                out.insert({Modality::Do, a.atom});
                out.insert({Modality::P, a.atom});
                break;
            case Modality::Do:
                out.insert({Modality::P, a.atom});
                if (v == ClosureVariant::Extended) {
                    out.insert({Modality::O, a.atom});
                }
                break;
            default:
                break;
        }
    }
    return out;
}

bool is_action_closed(const StatusSet& ps, ClosureVariant v) {
    return action_closure(ps, v) == ps;
}

// ---------------------------------------------------------------------------
// Substitution helpers.
// ---------------------------------------------------------------------------

namespace {

TermPtr subst_term(const TermPtr& t, const Binding& b) {
    if (!t) return t;
    switch (t->kind) {
        case Term::Kind::Obj:
            return t;
        case Term::Kind::Var:
            if (const Object* o = b.find(t->name)) return term_obj(*o);
            return t;
        case Term::Kind::Field:
            return term_field(subst_term(t->lhs, b), t->name);
        case Term::Kind::BinOp:
            return term_binop(t->op, subst_term(t->lhs, b), subst_term(t->rhs, b));
    }
    return t;
}

CodeCallCondition subst_condition(const CodeCallCondition& c, const Binding& b) {
    CodeCallCondition out;
    for (const auto& cj : c) {
        if (const auto* a = std::get_if<CodeCallAtom>(&cj)) {
            CodeCallAtom na = *a;
            na.subject = subst_term(na.subject, b);
            for (auto& t : na.call.args) t = subst_term(t, b);
            out.push_back(na);
        } else {
            Comparison nc = std::get<Comparison>(cj);
            nc.lhs = subst_term(nc.lhs, b);
            nc.rhs = subst_term(nc.rhs, b);
            out.push_back(nc);
        }
    }
    return out;
}

StatusAtom subst_status_atom(const StatusAtom& a, const Binding& b) {
    StatusAtom out = a;
    for (auto& t : out.args) t = subst_term(t, b);
    return out;
}

StatusAtom status_atom_of(const GroundStatusAtom& g) {
    StatusAtom out;
    out.op = g.op;
    out.action = g.atom.name;
    for (const auto& o : g.atom.args) out.args.push_back(term_obj(o));
    return out;
}

// Unify a status atom's arguments against a ground atom, extending `b`.
bool match_status_atom(const StatusAtom& pat, const GroundStatusAtom& g, Binding& b) {
    if (pat.op != g.op || pat.action != g.atom.name || pat.args.size() != g.atom.args.size())
        return false;
    Binding trial = b;
    for (size_t i = 0; i < pat.args.size(); ++i) {
        const TermPtr& t = pat.args[i];
        if (t->kind == Term::Kind::Var) {
            if (const Object* bound = trial.find(t->name)) {
                if (*bound != g.atom.args[i]) return false;
            } else {
                trial.vars[t->name] = g.atom.args[i];
            }
        } else {
            std::set<std::string> vars;
            collect_vars(t, vars);
            for (const auto& v : vars)
                if (!trial.find(v)) return false;  // complex unbound terms don't unify
            if (eval_term(t, trial) != g.atom.args[i]) return false;
        }
    }
    b = std::move(trial);
    return true;
}

}  // namespace

GroundStatusAtom ground_status_atom(const StatusAtom& a, const Binding& b) {
    GroundStatusAtom out;
    out.op = a.op;
    out.atom.name = a.action;
    for (const auto& t : a.args) out.atom.args.push_back(eval_term(t, b));
    return out;
}

// ---------------------------------------------------------------------------
// Rule grounding.
// ---------------------------------------------------------------------------

std::vector<GroundRule> rule_instances(const Program& prog, const ProbState& state, const Rule& r,
                                       const StatusSet& match_against) {
    (void)prog;
    std::vector<Binding> bindings{Binding{}};
    // Condition part: enumerate and keep instances satisfied at their
    // annotation levels.
    for (const auto& ac : r.body_prob) {
        std::vector<Binding> next;
        for (const auto& b : bindings) {
            for (const auto& gb : ground_condition(state, ac.cond, b, /*filter=*/true)) {
                ProbInterval ann = eval_annotation(ac.ann, gb);
                if (satisfies_ground(state, ac.cond, ac.strat, ann, gb)) next.push_back(gb);
            }
        }
        bindings = std::move(next);
    }
    // Remaining variables of positive body literals bind by matching against
    // the given status set.
    for (const auto& pos : r.body_pos) {
        std::set<std::string> vars;
        for (const auto& t : pos.args) collect_vars(t, vars);
        std::vector<Binding> next;
        for (const auto& b : bindings) {
            bool all_bound = true;
            for (const auto& v : vars)
                if (!b.find(v)) all_bound = false;
            if (all_bound) {
                next.push_back(b);
                continue;
            }
            for (const auto& g : match_against) {
                Binding nb = b;
                if (match_status_atom(pos, g, nb)) next.push_back(std::move(nb));
            }
        }
        bindings = std::move(next);
    }

    std::vector<GroundRule> out;
    for (const auto& b : bindings) {
        GroundRule gr;
        gr.id = r.id;
        gr.head = ground_status_atom(r.head, b);
        for (const auto& ac : r.body_prob) {
            AnnotatedCondition g = ac;
            g.cond = subst_condition(ac.cond, b);
            gr.body_prob.push_back(std::move(g));
        }
        for (const auto& a : r.body_pos) gr.body_pos.push_back(ground_status_atom(a, b));
        for (const auto& a : r.body_neg) gr.body_neg.push_back(ground_status_atom(a, b));
        out.push_back(std::move(gr));
    }
    return out;
}

ValidationReport check_safety(const Program& prog) {
    ValidationReport rep;
    for (const auto& r : prog.rules) {
        std::set<std::string> bound;
        auto all_bound = [&](const TermPtr& t) {
            std::set<std::string> vars;
            collect_vars(t, vars);
            for (const auto& v : vars)
                if (!bound.count(v)) return false;
            return true;
        };
        bool safe = true;
        std::string offender;
        for (const auto& ac : r.body_prob) {
            for (const auto& cj : ac.cond) {
                if (const auto* a = std::get_if<CodeCallAtom>(&cj)) {
                    for (const auto& t : a->call.args)
                        if (!all_bound(t)) {
                            safe = false;
                            offender = to_string(*a);
                        }
                    if (a->positive && a->subject->kind == Term::Kind::Var) {
                        bound.insert(a->subject->name);
                    } else if (!all_bound(a->subject)) {
                        safe = false;
                        offender = to_string(*a);
                    }
                } else {
                    const auto& cmp = std::get<Comparison>(cj);
                    if (!all_bound(cmp.lhs) || !all_bound(cmp.rhs)) {
                        safe = false;
                        offender = to_string(cmp);
                    }
                }
            }
        }
        // Positive body literals self-bind their variables at evaluation time.
        for (const auto& a : r.body_pos)
            for (const auto& t : a.args) collect_vars(t, bound);
        std::set<std::string> need;
        for (const auto& t : r.head.args) collect_vars(t, need);
        for (const auto& a : r.body_neg)
            for (const auto& t : a.args) collect_vars(t, need);
        for (const auto& v : need)
            if (!bound.count(v)) {
                safe = false;
                offender = "variable " + v;
            }
        if (!safe)
            rep.violations.push_back("unsafe rule " + std::to_string(r.id) + ": " + offender);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Operators and consistency.
// ---------------------------------------------------------------------------

namespace {
bool modality_needs_pre(Modality m) {
    return m == Modality::P || m == Modality::O || m == Modality::Do;
}

const ActionDef& lookup_action(const Program& prog, const GroundAction& a) {
    auto it = prog.actions.find(a.name);
    if (it == prog.actions.end()) throw PapError("undeclared action " + a.name);
    if (it->second.params.size() != a.args.size())
        throw PapError("arity mismatch for action " + a.name);
    return it->second;
}

Binding bind_params(const ActionDef& def, const GroundAction& a) {
    Binding b;
    for (size_t i = 0; i < def.params.size(); ++i) b.vars[def.params[i]] = a.args[i];
    return b;
}
}  // namespace

bool pre_holds(const Program& prog, const ProbState& state, const GroundAction& a, double p) {
    const ActionDef& def = lookup_action(prog, a);
    return holds_existential(state, def.pre, {p, 1.0}, bind_params(def, a));
}

StatusSet app_operator(const Program& prog, const ProbState& state, const StatusSet& ps,
                       double p) {
    StatusSet out;
    for (const auto& r : prog.rules) {
        for (const auto& gi : rule_instances(prog, state, r, ps)) {
            bool ok = true;
            for (const auto& a : gi.body_pos)
                if (!ps.count(a)) ok = false;
            for (const auto& a : gi.body_neg)
                if (ps.count(a)) ok = false;
            if (!ok) continue;
            if (modality_needs_pre(gi.head.op) && !pre_holds(prog, state, gi.head.atom, p))
                continue;
            for (const auto& a : gi.body_pos)
                if (modality_needs_pre(a.op) && !pre_holds(prog, state, a.atom, p)) ok = false;
            if (!ok) continue;
            out.insert(gi.head);
        }
    }
    return out;
}

Consistency deontically_consistent(const Program& prog, const ProbState& state,
                                   const StatusSet& ps, double p) {
    Consistency c;
    for (const auto& a : ps) {
        if (a.op == Modality::O && ps.count({Modality::W, a.atom})) {
            c.ok = false;
            c.witnesses.push_back("O and W clash on " + to_string(a.atom));
        }
        if (a.op == Modality::P) {
            if (ps.count({Modality::F, a.atom})) {
                c.ok = false;
                c.witnesses.push_back("P and F clash on " + to_string(a.atom));
            }
            if (!pre_holds(prog, state, a.atom, p)) {
                c.ok = false;
                c.witnesses.push_back("precondition of permitted " + to_string(a.atom) +
                                      " not entailed");
            }
        }
    }
    return c;
}

Consistency action_consistent(const Program& prog, const ProbState& state, const StatusSet& ps,
                              double p) {
    (void)prog;
    Consistency c;
    std::set<GroundAction> done = op_projection(ps, Modality::Do);
    for (const auto& ac : prog.action_constraints) {
        std::vector<Binding> bindings =
            ac.guard.empty() ? std::vector<Binding>{Binding{}}
                             : ground_condition(state, ac.guard, Binding{}, /*filter=*/false);
        for (const auto& b : bindings) {
            if (!ac.guard.empty() &&
                !satisfies_ground(state, ac.guard, Strategy::Ig, {p, 1.0}, b))
                continue;
            bool all_done = true;
            for (const auto& atom : ac.blocked) {
                GroundAction ga;
                ga.name = atom.name;
                for (const auto& t : atom.args) ga.args.push_back(eval_term(t, b));
                if (!done.count(ga)) all_done = false;
            }
            if (all_done) {
                c.ok = false;
                c.witnesses.push_back("action constraint violated: " + to_string(ac));
            }
        }
    }
    return c;
}

ProbState conc_execute(const Program& prog, const ProbState& state,
                       const std::set<GroundAction>& actions) {
    struct Effects {
        GroundAction action;
        std::set<GroundEffect> dels, adds;
    };
    std::vector<Effects> all;
    for (const auto& ga : actions) {
        const ActionDef& def = lookup_action(prog, ga);
        Binding theta = bind_params(def, ga);
        std::vector<Binding> gammas =
            def.pre.empty() ? std::vector<Binding>{theta}
                            : ground_condition(state, def.pre, theta, /*filter=*/true);
        Effects eff;
        eff.action = ga;
        for (const auto& g : gammas) {
            for (const auto& atom : def.del) {
                auto call = ground_call(atom.call, g);
                if (!call) throw PapError("non-ground delete atom of " + def.name);
                eff.dels.insert({*call, eval_term(atom.subject, g)});
            }
            for (const auto& atom : def.add) {
                auto call = ground_call(atom.call, g);
                if (!call) throw PapError("non-ground add atom of " + def.name);
                eff.adds.insert({*call, eval_term(atom.subject, g)});
            }
        }
        all.push_back(std::move(eff));
    }
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = 0; j < all.size(); ++j) {
            if (i == j) continue;
            for (const auto& e : all[i].adds)
                if (all[j].dels.count(e))
                    throw PapError("concurrency conflict: " + to_string(all[i].action) +
                                   " adds what " + to_string(all[j].action) + " deletes (" +
                                   to_string(e.obj) + " in " + to_string(e.call) + ")");
        }
    std::vector<GroundEffect> dels, adds;
    for (const auto& e : all) {
        dels.insert(dels.end(), e.dels.begin(), e.dels.end());
        for (const auto& a : e.adds)
            if (std::find(adds.begin(), adds.end(), a) == adds.end()) adds.push_back(a);
    }
    return apply_effects(state, dels, adds);
}

bool ic_satisfied(const ProbState& state, const IntegrityConstraint& ic,
                  const ProbInterval& level) {
    for (const auto& b : ground_condition(state, ic.antecedent, Binding{}, /*filter=*/false)) {
        if (!satisfies_ground(state, ic.antecedent, Strategy::Ig, level, b)) continue;
        if (!satisfies_ground(state, ic.consequent, Strategy::Ig, level, b)) return false;
    }
    return true;
}

StateConsistency state_consistent(const Program& prog, const ProbState& state,
                                  const StatusSet& ps, double p) {
    StateConsistency sc;
    try {
        sc.result = conc_execute(prog, state, op_projection(ps, Modality::Do));
    } catch (const PapError& e) {
        sc.ok = false;
        sc.witnesses.push_back(e.what());
        return sc;
    }
    for (const auto& ic : prog.integrity_constraints)
        if (!ic_satisfied(sc.result, ic, {p, 1.0})) {
            sc.ok = false;
            sc.witnesses.push_back("integrity constraint violated: " + to_string(ic));
        }
    return sc;
}

// ---------------------------------------------------------------------------
// Feasibility.
// ---------------------------------------------------------------------------

FeasibilityReport check_feasible(const Program& prog, const ProbState& state, const StatusSet& ps,
                                 double p, ClosureVariant v) {
    FeasibilityReport rep;
    StatusSet app = app_operator(prog, state, ps, p);
    for (const auto& a : app)
        if (!ps.count(a)) {
            rep.ps1_ok = false;
            rep.witnesses.push_back("PS1: " + to_string(a) + " derivable but absent");
        }
    auto dc = deontically_consistent(prog, state, ps, p);
    auto ac = action_consistent(prog, state, ps, p);
    rep.ps2_ok = dc.ok && ac.ok;
    for (auto& w : dc.witnesses) rep.witnesses.push_back("PS2: " + w);
    for (auto& w : ac.witnesses) rep.witnesses.push_back("PS2: " + w);
    if (!is_action_closed(ps, v)) {
        rep.ps3_ok = false;
        rep.witnesses.push_back("PS3: set not closed under the action/deontic rules");
    }
    auto sc = state_consistent(prog, state, ps, p);
    rep.ps4_ok = sc.ok;
    for (auto& w : sc.witnesses) rep.witnesses.push_back("PS4: " + w);
    return rep;
}

namespace {
bool satisfies_ps123(const Program& prog, const ProbState& state, const StatusSet& ps, double p,
                     ClosureVariant v) {
    if (!is_action_closed(ps, v)) return false;
    if (!deontically_consistent(prog, state, ps, p).ok) return false;
    if (!action_consistent(prog, state, ps, p).ok) return false;
    StatusSet app = app_operator(prog, state, ps, p);
    for (const auto& a : app)
        if (!ps.count(a)) return false;
    return true;
}
}  // namespace

bool check_grounded(const Program& prog, const ProbState& state, const StatusSet& ps, double p,
                    ClosureVariant v) {
    std::vector<GroundStatusAtom> atoms(ps.begin(), ps.end());
    if (atoms.size() > 24) throw PapError("groundedness check bound exceeded");
    size_t n = atoms.size();
    for (size_t mask = 0; mask + 1 < (size_t(1) << n); ++mask) {
        StatusSet sub;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i)) sub.insert(atoms[i]);
        if (satisfies_ps123(prog, state, sub, p, v)) return false;
    }
    return true;
}

bool check_rational(const Program& prog, const ProbState& state, const StatusSet& ps, double p,
                    ClosureVariant v) {
    return check_feasible(prog, state, ps, p, v).feasible() &&
           check_grounded(prog, state, ps, p, v);
}

// ---------------------------------------------------------------------------
// Fixpoints.
// ---------------------------------------------------------------------------

namespace {
std::optional<GroundAction> find_clash(const StatusSet& x) {
    for (const auto& a : x) {
        if (a.op == Modality::O && x.count({Modality::W, a.atom})) return a.atom;
        if (a.op == Modality::P && x.count({Modality::F, a.atom})) return a.atom;
    }
    return std::nullopt;
}
}  // namespace

SResult compute_S(const Program& prog, const ProbState& state, const StatusSet& ps,
                  ClosureVariant v, double p, Trace* trace, int iteration) {
    if (!prog.positive()) throw PapError("compute_S requires a positive program");
    StatusSet x = ps;
    for (const auto& r : prog.rules) {
        for (const auto& gi : rule_instances(prog, state, r, ps)) {
            bool ok = true;
            for (const auto& a : gi.body_pos)
                if (!ps.count(a)) ok = false;
            if (!ok) continue;
            if (modality_needs_pre(gi.head.op) && !pre_holds(prog, state, gi.head.atom, p))
                continue;
            for (const auto& a : gi.body_pos)
                if (modality_needs_pre(a.op) && !pre_holds(prog, state, a.atom, p)) ok = false;
            if (!ok) continue;
            StatusSet cl = action_closure({gi.head}, v);
            x.insert(cl.begin(), cl.end());
            if (trace) trace->push_back({iteration, gi.id, gi.head});
        }
    }
    if (auto clash = find_clash(x))
        return {false, {}, "no consistent set exists (clash on " + to_string(*clash) + ")"};
    return {true, std::move(x), ""};
}

SResult compute_lfp(const Program& prog, const ProbState& state, ClosureVariant v, double p,
                    Trace* trace) {
    StatusSet prev;
    int iteration = 1;
    for (;; ++iteration) {
        SResult r = compute_S(prog, state, prev, v, p, trace, iteration);
        if (!r.ok) return r;
        if (r.set == prev) break;
        prev = std::move(r.set);
    }
    for (const auto& a : op_projection(prev, Modality::Do))
        if (!pre_holds(prog, state, a, p))
            return {false, {},
                    "no reasonable prob. status set exists (precondition of " + to_string(a) +
                        " not entailed)"};
    auto sc = state_consistent(prog, state, prev, p);
    if (!sc.ok)
        return {false, {},
                "no reasonable prob. status set exists (" + sc.witnesses.front() + ")"};
    auto ac = action_consistent(prog, state, prev, p);
    if (!ac.ok)
        return {false, {},
                "no reasonable prob. status set exists (" + ac.witnesses.front() + ")"};
    return {true, std::move(prev), ""};
}

// ---------------------------------------------------------------------------
// Reduct and reasonableness.
// ---------------------------------------------------------------------------

Program reduct(const Program& prog, const StatusSet& ps, const ProbState& state) {
    Program out;
    out.actions = prog.actions;
    out.action_constraints = prog.action_constraints;
    out.integrity_constraints = prog.integrity_constraints;
    int id = 0;
    for (const auto& r : prog.rules) {
        for (const auto& gi : rule_instances(prog, state, r, ps)) {
            bool blocked = false;
            for (const auto& a : gi.body_neg)
                if (ps.count(a)) blocked = true;
            if (blocked) continue;
            Rule nr;
            nr.id = ++id;
            nr.head = status_atom_of(gi.head);
            nr.body_prob = gi.body_prob;
            for (const auto& a : gi.body_pos) nr.body_pos.push_back(status_atom_of(a));
            out.rules.push_back(std::move(nr));
        }
    }
    return out;
}

bool check_reasonable(const Program& prog, const ProbState& state, const StatusSet& ps, double p,
                      ClosureVariant v) {
    Program red = reduct(prog, ps, state);
    SResult lfp = compute_lfp(red, state, v, p);
    return lfp.ok && lfp.set == ps;
}

// ---------------------------------------------------------------------------
// Brute-force oracle.
// ---------------------------------------------------------------------------

StatusSetCatalog brute_force_status_sets(const Program& prog, const ProbState& state,
                                         size_t bound, double p, ClosureVariant v) {
    StatusSetCatalog cat;
    // Mentioned ground status atoms of the grounded program, saturated so that
    // variable-carrying positive body literals can match everything seen so far.
    std::set<GroundStatusAtom> universe;
    StatusSet match;
    for (;;) {
        size_t before = universe.size();
        for (const auto& r : prog.rules) {
            for (const auto& gi : rule_instances(prog, state, r, match)) {
                universe.insert(gi.head);
                universe.insert(gi.body_pos.begin(), gi.body_pos.end());
                universe.insert(gi.body_neg.begin(), gi.body_neg.end());
            }
        }
        std::set<GroundAction> acts;
        for (const auto& a : universe) acts.insert(a.atom);
        match.clear();
        for (const auto& ga : acts)
            for (Modality m : {Modality::P, Modality::F, Modality::W, Modality::Do, Modality::O})
                match.insert({m, ga});
        if (universe.size() == before) break;
    }
    cat.universe.assign(universe.begin(), universe.end());
    if (cat.universe.size() > bound)
        throw PapError("brute-force bound exceeded: " + std::to_string(cat.universe.size()) +
                       " mentioned atoms");
    std::set<StatusSet> candidates;
    size_t n = cat.universe.size();
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        StatusSet x;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i)) x.insert(cat.universe[i]);
        candidates.insert(action_closure(x, v));
    }
    for (const auto& cand : candidates) {
        if (!check_feasible(prog, state, cand, p, v).feasible()) continue;
        cat.feasible.push_back(cand);
        if (!check_grounded(prog, state, cand, p, v)) continue;
        cat.rational.push_back(cand);
        if (check_reasonable(prog, state, cand, p, v)) cat.reasonable.push_back(cand);
    }
    return cat;
}

// ---------------------------------------------------------------------------
// Classical reduction.
// ---------------------------------------------------------------------------

Program red_reduce(const Program& prog) {
    Program out = prog;
    for (auto& r : out.rules)
        for (auto& ac : r.body_prob) {
            ac.ann.lo = AnnotationItem::constant(0.0);
            ac.ann.hi = AnnotationItem::constant(1.0);
            ac.strat = Strategy::Ig;
        }
    return out;
}

}  // namespace pap
