#include "pap/state.hpp"

#include <algorithm>
#include <sstream>

namespace pap {

std::string to_string(const RandomVariable& rv) {
    std::ostringstream out;
    out << "rv{";
    for (size_t i = 0; i < rv.objects.size(); ++i) {
        if (i) out << ", ";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", rv.prob[i]);
        out << to_string(rv.objects[i]) << ": " << buf;
    }
    out << "}";
    return out.str();
}

std::string to_string(const ProbState& s) {
    std::ostringstream out;
    for (const auto& [call, rvs] : s.entries) {
        out << to_string(call) << " = { ";
        for (size_t i = 0; i < rvs.size(); ++i) {
            if (i) out << ", ";
            out << to_string(rvs[i]);
        }
        out << " }\n";
    }
    return out.str();
}

std::string to_string(const DetState& s) {
    std::ostringstream out;
    for (const auto& [call, objs] : s.entries) {
        out << to_string(call) << " = { ";
        bool first = true;
        for (const auto& o : objs) {
            if (!first) out << ", ";
            first = false;
            out << to_string(o);
        }
        out << " }\n";
    }
    return out.str();
}

ValidationReport validate_random_variable(const RandomVariable& rv) {
    ValidationReport rep;
    if (rv.objects.size() != rv.prob.size()) {
        rep.violations.push_back("objects/probability arity mismatch");
        return rep;
    }
    double sum = 0.0;
    for (size_t i = 0; i < rv.objects.size(); ++i) {
        double p = rv.prob[i];
        if (p < -kEps || p > 1.0 + kEps)
            rep.violations.push_back("probability of " + to_string(rv.objects[i]) + " is " +
                                     std::to_string(p) + ", outside [0,1]");
        for (size_t j = i + 1; j < rv.objects.size(); ++j)
            if (rv.objects[i] == rv.objects[j])
                rep.violations.push_back("duplicate object " + to_string(rv.objects[i]));
        sum += p;
    }
    if (sum > 1.0 + kEps)
        rep.violations.push_back("sum " + std::to_string(sum) + " > 1");
    return rep;
}

ValidationReport check_coherent(const RVSet& rvs) {
    ValidationReport rep;
    for (size_t i = 0; i < rvs.size(); ++i) {
        auto sub = validate_random_variable(rvs[i]);
        rep.violations.insert(rep.violations.end(), sub.violations.begin(), sub.violations.end());
        for (size_t j = i + 1; j < rvs.size(); ++j)
            for (const auto& o : rvs[i].objects)
                if (rvs[j].prob_of(o))
                    rep.violations.push_back("object " + to_string(o) +
                                             " occurs in two random variables");
    }
    return rep;
}

void assert_coherent(const RVSet& rvs) {
    auto rep = check_coherent(rvs);
    if (!rep.ok()) throw PapError("incoherent result set: " + rep.violations.front());
}

const RVSet& eval_prob_call(const ProbState& state, const GroundCall& call) {
    static const RVSet empty;
    auto it = state.entries.find(call);
    return it == state.entries.end() ? empty : it->second;
}

ProbState apply_effects(const ProbState& state, const std::vector<GroundEffect>& dels,
                        const std::vector<GroundEffect>& adds) {
    ProbState out = state;
    for (const auto& d : dels) {
        auto it = out.entries.find(d.call);
        if (it == out.entries.end()) continue;
        RVSet& rvs = it->second;
        for (auto rv = rvs.begin(); rv != rvs.end();) {
            bool erased_any = false;
            for (size_t i = 0; i < rv->objects.size();) {
                if (rv->objects[i] == d.obj) {
                    rv->objects.erase(rv->objects.begin() + i);
                    rv->prob.erase(rv->prob.begin() + i);
                    erased_any = true;
                } else {
                    ++i;
                }
            }
            if (erased_any && rv->objects.empty())
                rv = rvs.erase(rv);
            else
                ++rv;
        }
        if (rvs.empty()) out.entries.erase(it);
    }
    for (const auto& a : adds) {
        RVSet& rvs = out.entries[a.call];
        bool present = false;
        for (const auto& rv : rvs) {
            if (auto p = rv.prob_of(a.obj)) {
                // Re-adding an established certainty is a no-op; anything else
                // would break coherence of the entry.
                if (rv.objects.size() == 1 && *p >= 1.0 - kEps) {
                    present = true;
                    break;
                }
                throw PapError("add of " + to_string(a.obj) + " into " + to_string(a.call) +
                               " breaks coherence: object already present");
            }
        }
        if (!present) rvs.push_back(RandomVariable{{a.obj}, {1.0}});
    }
    return out;
}

ProbState lift_det_state(const DetState& s) {
    ProbState out;
    for (const auto& [call, objs] : s.entries) {
        if (objs.empty()) continue;
        RVSet rvs;
        for (const auto& o : objs) rvs.push_back(RandomVariable{{o}, {1.0}});
        out.entries[call] = std::move(rvs);
    }
    return out;
}

bool is_degenerate(const ProbState& s) {
    for (const auto& [call, rvs] : s.entries)
        for (const auto& rv : rvs)
            if (rv.objects.size() != 1 || std::abs(rv.prob[0] - 1.0) > kEps) return false;
    return true;
}

DetState red_reduce_state(const ProbState& s) {
    DetState out;
    for (const auto& [call, rvs] : s.entries) {
        if (rvs.empty()) continue;
        auto& objs = out.entries[call];
        for (const auto& rv : rvs) {
            if (rv.objects.size() != 1 || std::abs(rv.prob[0] - 1.0) > kEps)
                throw PapError("non-degenerate random variable in " + to_string(call) +
                               ": " + to_string(rv));
            objs.insert(rv.objects[0]);
        }
    }
    return out;
}

namespace {
std::set<GroundEffect> objects_of(const ProbState& s) {
    std::set<GroundEffect> out;
    for (const auto& [call, rvs] : s.entries)
        for (const auto& rv : rvs)
            for (const auto& o : rv.objects) out.insert(GroundEffect{call, o});
    return out;
}
}  // namespace

std::string state_diff(const ProbState& before, const ProbState& after) {
    auto b = objects_of(before), a = objects_of(after);
    std::ostringstream out;
    for (const auto& e : a)
        if (!b.count(e)) out << "+ " << to_string(e.obj) << " in " << to_string(e.call) << "\n";
    for (const auto& e : b)
        if (!a.count(e)) out << "- " << to_string(e.obj) << " in " << to_string(e.call) << "\n";
    return out.str();
}

}  // namespace pap
