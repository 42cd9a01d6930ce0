#pragma once

#include "pap/annotation.hpp"
#include "pap/model.hpp"
#include "pap/state.hpp"

namespace pap {

// ---------------------------------------------------------------------------
// Closures.
// ---------------------------------------------------------------------------

// Classical: O ⇒ Do, Do ⇒ P, O ⇒ P. Extended additionally closes Do ⇒ O.
enum class ClosureVariant { Classical, Extended };

StatusSet deontic_closure(const StatusSet& ps);
StatusSet action_closure(const StatusSet& ps, ClosureVariant v = ClosureVariant::Extended);
bool is_action_closed(const StatusSet& ps, ClosureVariant v);

// ---------------------------------------------------------------------------
// Grounding of rules.
// ---------------------------------------------------------------------------

struct GroundRule {
    GroundStatusAtom head;
    std::vector<AnnotatedCondition> body_prob;  // ground under the binding already
    std::vector<GroundStatusAtom> body_pos;
    std::vector<GroundStatusAtom> body_neg;
    int id = 0;
};

// Enumerates ground instances of `r` whose annotated conditions are satisfied
// in `state` (annotation levels untouched). Variables are bound left-to-right
// by in-atom subjects; variables still free afterwards are bound by matching
// positive body status atoms against `match_against`.
std::vector<GroundRule> rule_instances(const Program& prog, const ProbState& state, const Rule& r,
                                       const StatusSet& match_against);

GroundStatusAtom ground_status_atom(const StatusAtom& a, const Binding& b);

// Static safety check: every variable of the head and of body_neg occurs in a
// binding position (in-atom subject of body_prob, or argument of a positive
// body status atom). Returns a diagnostic for each unsafe rule.
ValidationReport check_safety(const Program& prog);

// ---------------------------------------------------------------------------
// Operators and consistency checks. `p` relaxes the precondition entailment
// level from [1,1] to [p,1] (§8 semantics); the classical semantics is p = 1.
// ---------------------------------------------------------------------------

// Precondition of a ground action: existential satisfaction at [p,1].
bool pre_holds(const Program& prog, const ProbState& state, const GroundAction& a, double p = 1.0);

StatusSet app_operator(const Program& prog, const ProbState& state, const StatusSet& ps,
                       double p = 1.0);

struct Consistency {
    bool ok = true;
    std::vector<std::string> witnesses;
};

Consistency deontically_consistent(const Program& prog, const ProbState& state,
                                   const StatusSet& ps, double p = 1.0);
Consistency action_consistent(const Program& prog, const ProbState& state, const StatusSet& ps,
                              double p = 1.0);

// Concurrent execution of a set of ground actions: effect variables not fixed
// by the action arguments are bound by every precondition binding in the
// current state; delete-union applied before add-union. Throws when one
// action's adds intersect another's deletes.
ProbState conc_execute(const Program& prog, const ProbState& state,
                       const std::set<GroundAction>& actions);

struct StateConsistency {
    bool ok = true;
    ProbState result;
    std::vector<std::string> witnesses;
};

// Executes conc(Do(ps)) and checks each integrity constraint per antecedent
// binding at level [p,1].
StateConsistency state_consistent(const Program& prog, const ProbState& state,
                                  const StatusSet& ps, double p = 1.0);

bool ic_satisfied(const ProbState& state, const IntegrityConstraint& ic,
                  const ProbInterval& level = {1.0, 1.0});

// ---------------------------------------------------------------------------
// Feasibility / rationality / reasonableness.
// ---------------------------------------------------------------------------

struct FeasibilityReport {
    bool ps1_ok = true, ps2_ok = true, ps3_ok = true, ps4_ok = true;
    std::vector<std::string> witnesses;
    bool feasible() const { return ps1_ok && ps2_ok && ps3_ok && ps4_ok; }
};

FeasibilityReport check_feasible(const Program& prog, const ProbState& state, const StatusSet& ps,
                                 double p = 1.0, ClosureVariant v = ClosureVariant::Classical);

/// Groundedness: no proper subset of ps satisfies PS1–PS3. Exponential in |ps|.
bool check_grounded(const Program& prog, const ProbState& state, const StatusSet& ps,
                    double p = 1.0, ClosureVariant v = ClosureVariant::Classical);

bool check_rational(const Program& prog, const ProbState& state, const StatusSet& ps,
                    double p = 1.0, ClosureVariant v = ClosureVariant::Classical);

// ---------------------------------------------------------------------------
// Fixpoint computation (positive programs).
// ---------------------------------------------------------------------------

struct TraceEntry {
    int iteration = 0;
    int rule_id = 0;
    GroundStatusAtom head;
};
using Trace = std::vector<TraceEntry>;

struct SResult {
    bool ok = true;
    StatusSet set;
    std::string message;  // sentinel text when !ok
};

// One application of the S operator (ground-instance loop with per-fire
// closure accumulation and the O/W–P/F clash sentinel).
SResult compute_S(const Program& prog, const ProbState& state, const StatusSet& ps,
                  ClosureVariant v = ClosureVariant::Extended, double p = 1.0,
                  Trace* trace = nullptr, int iteration = 1);

// Iterates compute_S from ∅ to the fixpoint, then checks Do-preconditions,
// integrity constraints of the post-execution state, and action constraints.
SResult compute_lfp(const Program& prog, const ProbState& state,
                    ClosureVariant v = ClosureVariant::Extended, double p = 1.0,
                    Trace* trace = nullptr);

// ---------------------------------------------------------------------------
// Reduct and reasonableness.
// ---------------------------------------------------------------------------

// Ground reduct wrt ps: instances with B⁻ ∩ ps ≠ ∅ removed, negatives stripped.
Program reduct(const Program& prog, const StatusSet& ps, const ProbState& state);

bool check_reasonable(const Program& prog, const ProbState& state, const StatusSet& ps,
                      double p = 1.0, ClosureVariant v = ClosureVariant::Classical);

// ---------------------------------------------------------------------------
// Brute-force oracle.
// ---------------------------------------------------------------------------

struct StatusSetCatalog {
    std::vector<StatusSet> feasible;
    std::vector<StatusSet> rational;
    std::vector<StatusSet> reasonable;
    std::vector<GroundStatusAtom> universe;  // mentioned ground status atoms
};

// Candidates are the closures acl(X) for X ⊆ the ground status atoms mentioned
// in the grounded program (heads plus positive/negative body literals).
// Groundedness is still checked against every proper subset of a candidate.
// Throws when the universe exceeds `bound` atoms.
StatusSetCatalog brute_force_status_sets(const Program& prog, const ProbState& state,
                                         size_t bound = 20, double p = 1.0,
                                         ClosureVariant v = ClosureVariant::Classical);

// ---------------------------------------------------------------------------
// Reduction to the classical (annotation-free) semantics.
// ---------------------------------------------------------------------------

// Strips annotations/strategies: each condition group becomes [0,1] @ ig,
// which on a degenerate state is exactly classical satisfaction.
Program red_reduce(const Program& prog);

}  // namespace pap
