#pragma once

#include "pap/annotation.hpp"
#include "pap/model.hpp"
#include "pap/state.hpp"

namespace pap {

inline constexpr size_t kDefaultProductCap = 1000000;

// Honors the PAP_PRODUCT_CAP environment variable, else kDefaultProductCap.
size_t product_cap();

// ---------------------------------------------------------------------------
// Normalized random variables and the product construction.
// ---------------------------------------------------------------------------

struct NormalizedRV {
    GroundCall call;
    std::vector<Object> objects;  // zero-probability objects dropped
    std::vector<double> prob;
    double eps_mass = 0.0;  // "none of the above"; may be 0
};
NormalizedRV normalize_rv(const GroundCall& call, const RandomVariable& rv);

struct KripkeStructure {
    std::vector<DetState> states;
    std::vector<double> prob;                  // Σ = 1 ± ε
    // Product bookkeeping (empty for hand-built structures): per state, the
    // per-factor choice index (0 = none, k = objects[k-1]).
    std::vector<std::vector<size_t>> choices;
    std::vector<NormalizedRV> factors;
};
std::string to_string(const KripkeStructure& k);  // "#i p=<prob> {call=obj,...}" lines

// All states compatible with pstate: one choice (an object or "none") per RV,
// calls in map order, first factor cycling fastest. Throws past `cap`.
std::vector<DetState> compatible_states(const ProbState& pstate, size_t cap = product_cap());

// Same enumeration with wp*(O) = Π of the normalized choice masses.
KripkeStructure product_kripke(const ProbState& pstate, size_t cap = product_cap());

struct CompatReport {
    bool ok = true;
    std::vector<std::string> residuals;
};
// For every (call, RV, object): Σ of the masses of states returning the object
// equals ℘(object) ± ε.
CompatReport check_compatibility(const KripkeStructure& k, const ProbState& pstate);

// ±δ rebalancing over a 2×2 choice block of two qualifying factors; keeps the
// structure compatible. Throws when no qualifying pair exists or δ exceeds the
// min-product bound. Requires product bookkeeping (a product_kripke result).
KripkeStructure perturb_kripke(const KripkeStructure& k, const ProbState& pstate, double delta);

// ---------------------------------------------------------------------------
// Executability and execution.
// ---------------------------------------------------------------------------

// The ground precondition of `action` under `theta` is checked classically
// (at [1,1] over the degenerate lift) on each positive-mass product state.
struct ExecutabilityReport {
    bool possible = false;
    std::vector<size_t> witnesses;  // product state indices
};
ExecutabilityReport possibly_executable(const ProbState& pstate, const ActionDef& action,
                                        const Binding& theta, size_t cap = product_cap());

// Witness states of `k` under the ground precondition.
std::vector<size_t> witness_states(const KripkeStructure& k, const ActionDef& action,
                                   const Binding& theta);

// min { wp(O) | O witnesses executability in k }; nullopt when no witness.
std::optional<double> executability_probability(const KripkeStructure& k, const ActionDef& action,
                                                const Binding& theta);

/// (θ,γ)-execution: witness states transformed by the action's ground effects,
// non-witnesses unchanged; equal resulting states merge with summed mass in
// first-occurrence order.
KripkeStructure execute_action_kripke(const KripkeStructure& k, const ActionDef& action,
                                      const Binding& theta_gamma);

}  // namespace pap
