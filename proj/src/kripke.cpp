#include "pap/kripke.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace pap {

size_t product_cap() {
    if (const char* env = std::getenv("PAP_PRODUCT_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return kDefaultProductCap;
}

NormalizedRV normalize_rv(const GroundCall& call, const RandomVariable& rv) {
    NormalizedRV out;
    out.call = call;
    double sum = 0.0;
    for (size_t i = 0; i < rv.objects.size(); ++i) {
        if (rv.prob[i] <= kEps) continue;  // zero-probability objects dropped
        out.objects.push_back(rv.objects[i]);
        out.prob.push_back(rv.prob[i]);
        sum += rv.prob[i];
    }
    out.eps_mass = std::max(0.0, 1.0 - sum);
    return out;
}

namespace {

std::vector<NormalizedRV> normalized_factors(const ProbState& pstate) {
    std::vector<NormalizedRV> factors;
    for (const auto& [call, rvs] : pstate.entries)
        for (const auto& rv : rvs) factors.push_back(normalize_rv(call, rv));
    return factors;
}

size_t product_size(const std::vector<NormalizedRV>& factors, size_t cap) {
    size_t total = 1;
    for (const auto& f : factors) {
        size_t choices = f.objects.size() + 1;  // the "none" choice is always enumerated
        if (total > cap / choices) throw PapError("compatible-state product exceeds cap");
        total *= choices;
    }
    return total;
}

DetState state_of_choices(const ProbState& pstate, const std::vector<NormalizedRV>& factors,
                          const std::vector<size_t>& choice) {
    DetState st;
    for (size_t f = 0; f < factors.size(); ++f)
        if (choice[f] > 0) st.entries[factors[f].call].insert(factors[f].objects[choice[f] - 1]);
    return st;
}

}  // namespace

std::vector<DetState> compatible_states(const ProbState& pstate, size_t cap) {
    return product_kripke(pstate, cap).states;
}

KripkeStructure product_kripke(const ProbState& pstate, size_t cap) {
    KripkeStructure k;
    k.factors = normalized_factors(pstate);
    size_t total = product_size(k.factors, cap);
    std::vector<size_t> choice(k.factors.size(), 0);
    for (size_t idx = 0; idx < total; ++idx) {
        double mass = 1.0;
        for (size_t f = 0; f < k.factors.size(); ++f)
            mass *= choice[f] == 0 ? k.factors[f].eps_mass : k.factors[f].prob[choice[f] - 1];
        k.states.push_back(state_of_choices(pstate, k.factors, choice));
        k.prob.push_back(mass);
        k.choices.push_back(choice);
        // First factor cycles fastest.
        for (size_t f = 0; f < k.factors.size(); ++f) {
            if (++choice[f] <= k.factors[f].objects.size()) break;
            choice[f] = 0;
        }
    }
    if (k.factors.empty()) {
        // No random variables: the single empty (or fully empty-entried) state.
        if (k.states.empty()) {
            k.states.push_back(state_of_choices(pstate, k.factors, {}));
            k.prob.push_back(1.0);
            k.choices.push_back({});
        }
    }
    return k;
}

std::string to_string(const KripkeStructure& k) {
    std::ostringstream out;
    for (size_t i = 0; i < k.states.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", k.prob[i]);
        out << "#" << (i + 1) << " p=" << buf << " {";
        bool first = true;
        for (const auto& [call, objs] : k.states[i].entries) {
            for (const auto& o : objs) {
                if (!first) out << ",";
                first = false;
                out << to_string(call) << "=" << to_string(o);
            }
        }
        out << "}\n";
    }
    return out.str();
}

CompatReport check_compatibility(const KripkeStructure& k, const ProbState& pstate) {
    CompatReport rep;
    double total = 0.0;
    for (double p : k.prob) total += p;
    if (std::abs(total - 1.0) > 1e-7) {
        rep.ok = false;
        rep.residuals.push_back("total mass " + std::to_string(total) + " != 1");
    }
    for (const auto& [call, rvs] : pstate.entries) {
        for (const auto& rv : rvs) {
            for (size_t i = 0; i < rv.objects.size(); ++i) {
                double sum = 0.0;
                for (size_t s = 0; s < k.states.size(); ++s) {
                    auto it = k.states[s].entries.find(call);
                    if (it != k.states[s].entries.end() && it->second.count(rv.objects[i]))
                        sum += k.prob[s];
                }
                if (std::abs(sum - rv.prob[i]) > 1e-7) {
                    rep.ok = false;
                    rep.residuals.push_back(to_string(call) + " / " + to_string(rv.objects[i]) +
                                            ": mass " + std::to_string(sum) + " vs " +
                                            std::to_string(rv.prob[i]));
                }
            }
        }
    }
    return rep;
}

KripkeStructure perturb_kripke(const KripkeStructure& k, const ProbState& pstate, double delta) {
    if (k.choices.size() != k.states.size() || k.factors.empty())
        throw PapError("perturbation requires a product-construction structure");
    if (delta < 0) throw PapError("negative delta");
    // Two qualifying factors: each with at least two positive-mass choices.
    auto positive_choices = [&](size_t f) {
        std::vector<size_t> ch;
        if (k.factors[f].eps_mass > kEps) ch.push_back(0);
        for (size_t i = 0; i < k.factors[f].objects.size(); ++i)
            if (k.factors[f].prob[i] > kEps) ch.push_back(i + 1);
        return ch;
    };
    size_t f1 = SIZE_MAX, f2 = SIZE_MAX;
    for (size_t f = 0; f < k.factors.size(); ++f) {
        if (positive_choices(f).size() < 2) continue;
        if (f1 == SIZE_MAX)
            f1 = f;
        else {
            f2 = f;
            break;
        }
    }
    if (f2 == SIZE_MAX) throw PapError("no qualifying random-variable pair for perturbation");
    auto c1 = positive_choices(f1), c2 = positive_choices(f2);
    auto mass_of = [&](size_t f, size_t choice) {
        return choice == 0 ? k.factors[f].eps_mass : k.factors[f].prob[choice - 1];
    };
    double bound = 1.0;
    for (size_t a : {c1[0], c1[1]})
        for (size_t b : {c2[0], c2[1]}) bound = std::min(bound, mass_of(f1, a) * mass_of(f2, b));
    if (delta > bound + kEps)
        throw PapError("delta exceeds the min-product bound " + std::to_string(bound));
    // Fix the remaining factors to the maximum-mass choice so the adjusted
    // block carries positive mass.
    std::vector<size_t> rest(k.factors.size(), 0);
    for (size_t f = 0; f < k.factors.size(); ++f) {
        if (f == f1 || f == f2) continue;
        size_t best = 0;
        double best_mass = mass_of(f, 0);
        for (size_t i = 1; i <= k.factors[f].objects.size(); ++i)
            if (mass_of(f, i) > best_mass) {
                best = i;
                best_mass = mass_of(f, i);
            }
        rest[f] = best;
    }
    KripkeStructure out = k;
    auto adjust = [&](size_t a, size_t b, double d) {
        for (size_t s = 0; s < out.states.size(); ++s) {
            bool hit = out.choices[s][f1] == a && out.choices[s][f2] == b;
            for (size_t f = 0; f < k.factors.size() && hit; ++f)
                if (f != f1 && f != f2 && out.choices[s][f] != rest[f]) hit = false;
            if (hit) {
                out.prob[s] += d;
                if (out.prob[s] < -kEps || out.prob[s] > 1.0 + kEps)
                    throw PapError("delta exceeds the min-product bound");
                return;
            }
        }
    };
    adjust(c1[0], c2[0], +delta);
    adjust(c1[0], c2[1], -delta);
    adjust(c1[1], c2[0], -delta);
    adjust(c1[1], c2[1], +delta);
    return out;
}

// ---------------------------------------------------------------------------
// Executability and execution.
// ---------------------------------------------------------------------------

namespace {
bool pre_satisfied_in_world(const DetState& world, const ActionDef& action,
                            const Binding& theta) {
    return holds_existential(lift_det_state(world), action.pre, {1.0, 1.0}, theta);
}
}  // namespace

std::vector<size_t> witness_states(const KripkeStructure& k, const ActionDef& action,
                                   const Binding& theta) {
    std::vector<size_t> out;
    for (size_t i = 0; i < k.states.size(); ++i)
        if (pre_satisfied_in_world(k.states[i], action, theta)) out.push_back(i);
    return out;
}

ExecutabilityReport possibly_executable(const ProbState& pstate, const ActionDef& action,
                                        const Binding& theta, size_t cap) {
    ExecutabilityReport rep;
    KripkeStructure k = product_kripke(pstate, cap);
    for (size_t i : witness_states(k, action, theta)) {
        if (k.prob[i] > kEps) {
            rep.possible = true;
            rep.witnesses.push_back(i);
        }
    }
    return rep;
}

std::optional<double> executability_probability(const KripkeStructure& k, const ActionDef& action,
                                                const Binding& theta) {
    std::optional<double> best;
    for (size_t i : witness_states(k, action, theta)) {
        if (k.prob[i] <= kEps) continue;
        if (!best || k.prob[i] < *best) best = k.prob[i];
    }
    return best;
}

KripkeStructure execute_action_kripke(const KripkeStructure& k, const ActionDef& action,
                                      const Binding& theta_gamma) {
    std::vector<GroundEffect> dels, adds;
    for (const auto& atom : action.del) {
        auto call = ground_call(atom.call, theta_gamma);
        if (!call) throw PapError("non-ground delete atom of " + action.name);
        dels.push_back({*call, eval_term(atom.subject, theta_gamma)});
    }
    for (const auto& atom : action.add) {
        auto call = ground_call(atom.call, theta_gamma);
        if (!call) throw PapError("non-ground add atom of " + action.name);
        adds.push_back({*call, eval_term(atom.subject, theta_gamma)});
    }
    KripkeStructure out;
    auto add_state = [&](const DetState& st, double p) {
        for (size_t i = 0; i < out.states.size(); ++i)
            if (out.states[i] == st) {
                out.prob[i] += p;
                return;
            }
        out.states.push_back(st);
        out.prob.push_back(p);
    };
    for (size_t i = 0; i < k.states.size(); ++i) {
        if (pre_satisfied_in_world(k.states[i], action, theta_gamma)) {
            ProbState next = apply_effects(lift_det_state(k.states[i]), dels, adds);
            add_state(red_reduce_state(next), k.prob[i]);
        } else {
            add_state(k.states[i], k.prob[i]);
        }
    }
    return out;
}

}  // namespace pap
