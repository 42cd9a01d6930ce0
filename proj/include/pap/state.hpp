#pragma once

#include <map>
#include <set>
#include <vector>

#include "pap/model.hpp"

namespace pap {

// ---------------------------------------------------------------------------
// Random variables and agent states.
// ---------------------------------------------------------------------------

struct RandomVariable {
    // Parallel vectors; insertion order is the deterministic enumeration order.
    std::vector<Object> objects;
    std::vector<double> prob;

    std::optional<double> prob_of(const Object& o) const {
        for (size_t i = 0; i < objects.size(); ++i)
            if (objects[i] == o) return prob[i];
        return std::nullopt;
    }
};
std::string to_string(const RandomVariable& rv);

using RVSet = std::vector<RandomVariable>;

struct ProbState {
    std::map<GroundCall, RVSet> entries;
};
std::string to_string(const ProbState& s);

struct DetState {
    std::map<GroundCall, std::set<Object>> entries;
};
std::string to_string(const DetState& s);
inline bool operator==(const DetState& a, const DetState& b) { return a.entries == b.entries; }
inline bool operator<(const DetState& a, const DetState& b) { return a.entries < b.entries; }

// ---------------------------------------------------------------------------
// Validation, coherence, and evaluation.
// ---------------------------------------------------------------------------

ValidationReport validate_random_variable(const RandomVariable& rv);

// Coherence: distinct RVs of one result set are object-disjoint.
ValidationReport check_coherent(const RVSet& rvs);
void assert_coherent(const RVSet& rvs);  // throws PapError naming the shared object

// Stored RV set for a ground call; empty set when the call is unregistered.
const RVSet& eval_prob_call(const ProbState& state, const GroundCall& call);

// ---------------------------------------------------------------------------
// Effects.
// ---------------------------------------------------------------------------

struct GroundEffect {
    GroundCall call;
    Object obj;
};
inline bool operator<(const GroundEffect& a, const GroundEffect& b) {
    int c = compare(a.call, b.call);
    if (c != 0) return c < 0;
    return a.obj < b.obj;
}
inline bool operator==(const GroundEffect& a, const GroundEffect& b) {
    return compare(a.call, b.call) == 0 && a.obj == b.obj;
}

// Pure: deletes applied before adds; adds insert a certainty-1 singleton RV.
// Throws when an add would break coherence of the target entry.
ProbState apply_effects(const ProbState& state, const std::vector<GroundEffect>& dels,
                        const std::vector<GroundEffect>& adds);

// ---------------------------------------------------------------------------
// Degenerate states and the RED reductions.
// ---------------------------------------------------------------------------

// Every object becomes a certainty-1 singleton RV.
ProbState lift_det_state(const DetState& s);

// True when every RV is a certainty-1 singleton.
bool is_degenerate(const ProbState& s);

// Collapses a degenerate state; throws on a non-degenerate RV.
DetState red_reduce_state(const ProbState& s);

// Text diff: objects added/removed per call between two states.
std::string state_diff(const ProbState& before, const ProbState& after);

}  // namespace pap
