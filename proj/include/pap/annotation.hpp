#pragma once

#include <functional>
#include <map>

#include "pap/model.hpp"
#include "pap/state.hpp"

namespace pap {

// ---------------------------------------------------------------------------
// Bindings: ground substitutions for object and annotation variables.
// ---------------------------------------------------------------------------

struct Binding {
    std::map<std::string, Object> vars;
    std::map<std::string, double> ann_vars;  // values in [0,1]

    const Object* find(const std::string& name) const {
        auto it = vars.find(name);
        return it == vars.end() ? nullptr : &it->second;
    }
};

// Evaluates a term to a ground object. Throws on unbound variables, field
// access on a non-record, or non-numeric arithmetic.
Object eval_term(const TermPtr& t, const Binding& b);

// Ground comparison; int/real compare numerically.
bool eval_rel(const Object& a, Rel rel, const Object& o);

std::optional<GroundCall> ground_call(const CodeCall& c, const Binding& b);

// ---------------------------------------------------------------------------
// Conjunction strategies and annotation evaluation.
// ---------------------------------------------------------------------------

ProbInterval combine(Strategy s, ProbInterval a, ProbInterval b);

// Annotation function table: +, -, *, /, min, max, pow; results clamped to [0,1].
bool annotation_fn_known(const std::string& name, size_t arity);

double eval_annotation_item(const AnnotationItem& item, const Binding& b);
// Throws on unbound annotation variables or an inverted interval.
ProbInterval eval_annotation(const Annotation& a, const Binding& b);

// Axiom checker: evaluates the seven strategy axioms on sample intervals.
// `samples` supplies the interval lattice; triples are drawn from it.
struct AxiomReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};
AxiomReport check_strategy_axioms(Strategy s, const std::vector<ProbInterval>& samples,
                                  bool include_identity = true);

// ---------------------------------------------------------------------------
// Grounding and satisfaction.
// ---------------------------------------------------------------------------

// Left-to-right binding enumeration over a condition. An in-atom whose subject
// is an unbound variable binds it to each object across the call's RVs, in
// insertion order. All other conjuncts (and call arguments) must be ground by
// the time they are reached; otherwise the condition is unsafe (throws).
// The emitted bindings are NOT filtered by satisfaction of notin-atoms or
// comparisons unless `filter` is set.
std::vector<Binding> ground_condition(const ProbState& state, const CodeCallCondition& cond,
                                      const Binding& initial, bool filter = true);

// Tightest interval of one ground conjunct. in-atom: point interval of the
// unique RV containing the subject; comparison: [1,1] when true; notin-atom:
// [1,1] when satisfied at the query annotation `query`. nullopt = unsatisfied.
std::optional<ProbInterval> tightest_interval(const ProbState& state, const Conjunct& c,
                                              const Binding& b, const ProbInterval& query);

// Tightest interval of a ground condition: left fold of `combine` over the
// conjunct intervals. nullopt when any conjunct lacks one.
std::optional<ProbInterval> tightest_interval(const ProbState& state,
                                              const CodeCallCondition& cond, Strategy strat,
                                              const Binding& b,
                                              const ProbInterval& query = {0.0, 1.0});

// Satisfaction of a ground instance at [ai1,ai2]:
//  - single in-atom: some RV (Y,℘) with o ∈ Y and ℘(o) ∈ [ai1,ai2];
//  - single notin-atom: every RV has o ∉ Y or ℘(o) ∉ [ai1,ai2];
//  - single comparison: true regardless of annotation when the relation holds;
//  - conjunction: every conjunct has a tightest interval and [ai1,ai2] contains
//    their ⊗-combination.
bool satisfies_ground(const ProbState& state, const CodeCallCondition& cond, Strategy strat,
                      const ProbInterval& ann, const Binding& b);

// Non-ground conditions: true iff at least one ground instance exists and all
// of them satisfy the annotation.
bool satisfies(const ProbState& state, const AnnotatedCondition& ac, const Binding& b = {});

// Existential satisfaction at `level`: some ground instance satisfies.
// An empty condition holds trivially. Used for action preconditions and
// action-constraint guards.
bool holds_existential(const ProbState& state, const CodeCallCondition& cond,
                       const ProbInterval& level, const Binding& initial = {});

}  // namespace pap
