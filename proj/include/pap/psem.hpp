#pragma once

#include "pap/kripke.hpp"
#include "pap/lp.hpp"
#include "pap/semantics.hpp"

namespace pap {

// §8-style p-relaxed semantics: the [1,1] precondition entailments of App and
// of the consistency checks become [p,1]. These wrappers fix the level.

inline StatusSet p_app(const Program& prog, const ProbState& state, const StatusSet& ps,
                       double p) {
    return app_operator(prog, state, ps, p);
}

inline SResult compute_p_S(const Program& prog, const ProbState& state, const StatusSet& ps,
                           double p, ClosureVariant v = ClosureVariant::Extended,
                           Trace* trace = nullptr) {
    return compute_S(prog, state, ps, v, p, trace);
}

inline SResult compute_p_lfp(const Program& prog, const ProbState& state, double p,
                             ClosureVariant v = ClosureVariant::Extended,
                             Trace* trace = nullptr) {
    return compute_lfp(prog, state, v, p, trace);
}

enum class StateConsistencyMode { Weak, Strong };

// Weak p-PS4 replaces the [1,1] levels of the integrity-constraint check by
// [p,1]; strong additionally requires each constraint's guaranteed probability
// (LP minimum) not to drop below its pre-execution level.
FeasibilityReport check_p_feasible(const Program& prog, const ProbState& state,
                                   const StatusSet& ps, double p,
                                   StateConsistencyMode mode = StateConsistencyMode::Weak,
                                   ClosureVariant v = ClosureVariant::Classical);

// ---------------------------------------------------------------------------
// Integrity-constraint p-consistency via a generated linear program.
// ---------------------------------------------------------------------------

struct ActionExecution {
    ActionDef action;
    Binding theta_gamma;  // grounds the precondition and the effects
};

// Variables: one p_i per pre-execution product world, one p'_j per distinct
// post-execution world. Rows: Σp_i = 1; per (call, RV, object) marginals;
// p ≤ Σ_{O_i ⊨ ic'} p_i ≤ 1 for every constraint of `ics_all`; transfer rows
// p'_j = Σ_{O_i ↦ O'_j} p_i; Fréchet bounds per world from its choice masses.
// Objective: minimize Σ_{O'_j ⊨ ic} p'_j.
LPProblem generate_ic_lp(const ProbState& pstate_old, const ActionExecution& exec,
                         const IntegrityConstraint& ic,
                         const std::vector<IntegrityConstraint>& ics_all, double p);

struct ICVerdict {
    bool guaranteed = false;
    double min_prob = 0.0;
    bool lp_feasible = true;
};

// One verdict per constraint: guaranteed iff the LP minimum of the constraint's
// post-execution probability is ≥ p (within tolerance). An infeasible LP means
// no compatible structure exists at level p (reported, not guaranteed).
std::vector<ICVerdict> check_ic_p_consistency(const ProbState& pstate_old,
                                              const ActionExecution& exec,
                                              const std::vector<IntegrityConstraint>& ics,
                                              double p);

// Classical satisfaction of a constraint in one deterministic world.
bool ic_holds_in_world(const DetState& world, const IntegrityConstraint& ic);

}  // namespace pap
