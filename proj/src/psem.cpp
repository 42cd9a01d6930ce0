#include "pap/psem.hpp"

#include <algorithm>
#include <cmath>

namespace pap {

bool ic_holds_in_world(const DetState& world, const IntegrityConstraint& ic) {
    return ic_satisfied(lift_det_state(world), ic, {1.0, 1.0});
}

// ---------------------------------------------------------------------------
// p-feasibility.
// ---------------------------------------------------------------------------

FeasibilityReport check_p_feasible(const Program& prog, const ProbState& state,
                                   const StatusSet& ps, double p, StateConsistencyMode mode,
                                   ClosureVariant v) {
    FeasibilityReport rep = check_feasible(prog, state, ps, p, v);
    if (mode == StateConsistencyMode::Strong && rep.ps4_ok &&
        !prog.integrity_constraints.empty()) {
        std::set<GroundAction> done = op_projection(ps, Modality::Do);
        // Strong p-state-consistency: per executed action, no constraint's
        // guaranteed probability (LP minimum) may drop below its pre-execution
        // level.
        for (const auto& ga : done) {
            auto it = prog.actions.find(ga.name);
            if (it == prog.actions.end()) continue;
            ActionExecution exec;
            exec.action = it->second;
            for (size_t i = 0; i < it->second.params.size(); ++i)
                exec.theta_gamma.vars[it->second.params[i]] = ga.args[i];
            if (!it->second.pre.empty()) {
                auto gammas = ground_condition(state, it->second.pre, exec.theta_gamma, true);
                if (gammas.empty()) continue;
                exec.theta_gamma = gammas.front();
            }
            for (const auto& ic : prog.integrity_constraints) {
                // Baseline: the worst-case pre-execution level of this IC.
                LPProblem base = generate_ic_lp(state, exec, ic, {}, 0.0);
                // Objective over the old worlds instead of the new ones.
                KripkeStructure k = product_kripke(state);
                for (size_t j = 0; j < base.n(); ++j) base.objective[j] = 0.0;
                for (size_t i = 0; i < k.states.size(); ++i)
                    if (ic_holds_in_world(k.states[i], ic)) base.objective[i] = 1.0;
                LPSolution q = solve_lp(base);
                LPProblem full = generate_ic_lp(state, exec, ic, {}, 0.0);
                LPSolution m = solve_lp(full);
                if (q.status != LPSolution::Status::Optimal ||
                    m.status != LPSolution::Status::Optimal ||
                    m.objective < q.objective - 1e-7) {
                    rep.ps4_ok = false;
                    rep.witnesses.push_back("PS4(strong): guaranteed level of " + to_string(ic) +
                                            " drops after " + to_string(ga));
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// IC p-consistency LP.
// ---------------------------------------------------------------------------

LPProblem generate_ic_lp(const ProbState& pstate_old, const ActionExecution& exec,
                         const IntegrityConstraint& ic,
                         const std::vector<IntegrityConstraint>& ics_all, double p) {
    KripkeStructure k = product_kripke(pstate_old);
    const size_t n_old = k.states.size();

    // Post-execution image of each old world; non-witnesses map to themselves.
    std::vector<GroundEffect> dels, adds;
    for (const auto& atom : exec.action.del) {
        auto call = ground_call(atom.call, exec.theta_gamma);
        if (!call) throw PapError("non-ground delete atom of " + exec.action.name);
        dels.push_back({*call, eval_term(atom.subject, exec.theta_gamma)});
    }
    for (const auto& atom : exec.action.add) {
        auto call = ground_call(atom.call, exec.theta_gamma);
        if (!call) throw PapError("non-ground add atom of " + exec.action.name);
        adds.push_back({*call, eval_term(atom.subject, exec.theta_gamma)});
    }
    std::vector<DetState> new_states;
    std::vector<size_t> image(n_old);  // old world -> new world index
    for (size_t i = 0; i < n_old; ++i) {
        DetState target = k.states[i];
        if (holds_existential(lift_det_state(k.states[i]), exec.action.pre, {1.0, 1.0},
                              exec.theta_gamma))
            target = red_reduce_state(apply_effects(lift_det_state(k.states[i]), dels, adds));
        size_t idx = new_states.size();
        for (size_t j = 0; j < new_states.size(); ++j)
            if (new_states[j] == target) {
                idx = j;
                break;
            }
        if (idx == new_states.size()) new_states.push_back(std::move(target));
        image[i] = idx;
    }
    const size_t n_new = new_states.size();

    LPProblem lp;
    for (size_t i = 0; i < n_old; ++i) lp.vars.push_back("p_" + std::to_string(i + 1));
    for (size_t j = 0; j < n_new; ++j) lp.vars.push_back("q_" + std::to_string(j + 1));
    lp.objective.assign(n_old + n_new, 0.0);
    lp.lo.assign(n_old + n_new, 0.0);
    lp.hi.assign(n_old + n_new, 1.0);

    // Objective: mass of the new worlds satisfying the constraint.
    for (size_t j = 0; j < n_new; ++j)
        if (ic_holds_in_world(new_states[j], ic)) lp.objective[n_old + j] = 1.0;

    auto zero_row = [&]() { return std::vector<double>(n_old + n_new, 0.0); };

    // (K) total old mass.
    {
        LPRow row{zero_row(), '=', 1.0};
        for (size_t i = 0; i < n_old; ++i) row.a[i] = 1.0;
        lp.rows.push_back(std::move(row));
    }
    // (CK) marginals: per (call, RV, object) the worlds returning the object
    // carry exactly its probability.
    for (const auto& [call, rvs] : pstate_old.entries) {
        for (const auto& rv : rvs) {
            for (size_t oi = 0; oi < rv.objects.size(); ++oi) {
                if (rv.prob[oi] <= kEps) continue;  // zero-mass objects have no world
                LPRow row{zero_row(), '=', rv.prob[oi]};
                for (size_t i = 0; i < n_old; ++i) {
                    auto it = k.states[i].entries.find(call);
                    if (it != k.states[i].entries.end() && it->second.count(rv.objects[oi]))
                        row.a[i] = 1.0;
                }
                lp.rows.push_back(std::move(row));
            }
        }
    }
    // (IC) every constraint already holds on the old state at level p.
    for (const auto& other : ics_all) {
        LPRow lo_row{zero_row(), '>', p};
        LPRow hi_row{zero_row(), '<', 1.0};
        for (size_t i = 0; i < n_old; ++i)
            if (ic_holds_in_world(k.states[i], other)) lo_row.a[i] = hi_row.a[i] = 1.0;
        lp.rows.push_back(std::move(lo_row));
        lp.rows.push_back(std::move(hi_row));
    }
    // (K→K') transfer rows.
    for (size_t j = 0; j < n_new; ++j) {
        LPRow row{zero_row(), '=', 0.0};
        row.a[n_old + j] = 1.0;
        for (size_t i = 0; i < n_old; ++i)
            if (image[i] == j) row.a[i] -= 1.0;
        lp.rows.push_back(std::move(row));
    }
    // (IG) Fréchet bounds per old world from its choice masses.
    for (size_t i = 0; i < n_old; ++i) {
        double sum = 0.0, mn = 1.0;
        for (size_t f = 0; f < k.factors.size(); ++f) {
            double mass = k.choices[i][f] == 0 ? k.factors[f].eps_mass
                                               : k.factors[f].prob[k.choices[i][f] - 1];
            sum += mass;
            mn = std::min(mn, mass);
        }
        double lo = k.factors.empty()
                        ? 1.0
                        : std::max(0.0, sum + 1.0 - static_cast<double>(k.factors.size()));
        lp.lo[i] = lo;
        lp.hi[i] = k.factors.empty() ? 1.0 : mn;
    }
    return lp;
}

std::vector<ICVerdict> check_ic_p_consistency(const ProbState& pstate_old,
                                              const ActionExecution& exec,
                                              const std::vector<IntegrityConstraint>& ics,
                                              double p) {
    std::vector<ICVerdict> out;
    for (const auto& ic : ics) {
        LPProblem lp = generate_ic_lp(pstate_old, exec, ic, ics, p);
        LPSolution sol = solve_lp(lp);
        ICVerdict v;
        if (sol.status != LPSolution::Status::Optimal) {
            v.lp_feasible = false;
            v.guaranteed = false;
        } else {
            v.min_prob = sol.objective;
            v.guaranteed = sol.objective >= p - 1e-7;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace pap
