#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "pap/kripke.hpp"

using namespace pap;

namespace {
Object obj(const char* s) { return Object(std::string(s)); }
GroundCall identify() { return {"surv", "identify", {obj("image1")}}; }
GroundCall location() { return {"surv", "location", {obj("image1")}}; }

// The hand-picked compatible distribution over the six product states.
KripkeStructure hand_structure(const ProbState& s) {
    KripkeStructure k = product_kripke(s);
    k.prob = {0.0, 0.1, 0.1, 0.0, 0.2, 0.6};
    return k;
}
}  // namespace

TEST_CASE("normalization drops zero-probability objects") {
    RandomVariable rv{{obj("t80"), obj("t72"), obj("t70")}, {0.3, 0.7, 0.0}};
    NormalizedRV n = normalize_rv(identify(), rv);
    CHECK(n.objects.size() == 2);
    CHECK(n.eps_mass == doctest::Approx(0.0));

    NormalizedRV loose = normalize_rv(location(), {{obj("loc2")}, {0.8}});
    CHECK(loose.eps_mass == doctest::Approx(0.2));
}

TEST_CASE("product structure of the two-call state") {
    ProbState s = testutil::load_state("kripke.pst");
    KripkeStructure k = product_kripke(s);
    REQUIRE(k.states.size() == 6);

    // first factor (identify) cycles fastest; choice 0 is "none of the above"
    CHECK(k.states[0].entries.empty());
    CHECK(k.states[1].entries.at(identify()) == std::set<Object>{obj("t80")});
    CHECK(k.states[2].entries.at(identify()) == std::set<Object>{obj("t72")});
    CHECK(k.states[3].entries.at(location()) == std::set<Object>{obj("loc2")});
    CHECK(k.states[4].entries.count(identify()) == 1);
    CHECK(k.states[4].entries.count(location()) == 1);

    std::vector<double> expected{0.0, 0.06, 0.14, 0.0, 0.24, 0.56};
    REQUIRE(k.prob.size() == 6);
    for (size_t i = 0; i < 6; ++i) CHECK(k.prob[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(std::accumulate(k.prob.begin(), k.prob.end(), 0.0) == doctest::Approx(1.0));

    CHECK(compatible_states(s).size() == 6);
    CHECK(check_compatibility(k, s).ok);
}

TEST_CASE("hand distributions can be compatible without being the product") {
    ProbState s = testutil::load_state("kripke.pst");
    KripkeStructure k = hand_structure(s);
    CHECK(check_compatibility(k, s).ok);
    k.prob = {0.0, 0.3, 0.1, 0.0, 0.0, 0.6};  // loc2 marginal becomes 0.6 != 0.8
    CHECK_FALSE(check_compatibility(k, s).ok);
}

TEST_CASE("perturbation keeps compatibility") {
    ProbState s = testutil::load_state("kripke.pst");
    KripkeStructure k = product_kripke(s);
    KripkeStructure k0 = perturb_kripke(k, s, 0.0);
    for (size_t i = 0; i < k.prob.size(); ++i) CHECK(k0.prob[i] == doctest::Approx(k.prob[i]));

    KripkeStructure k1 = perturb_kripke(k, s, 0.05);
    CHECK(check_compatibility(k1, s).ok);
    bool changed = false;
    for (size_t i = 0; i < k.prob.size(); ++i)
        if (std::abs(k1.prob[i] - k.prob[i]) > 1e-12) changed = true;
    CHECK(changed);

    CHECK_THROWS_AS(perturb_kripke(k, s, 0.5), PapError);  // beyond the min-product bound
}

TEST_CASE("executability on the example structure") {
    ProbState s = testutil::load_state("kripke.pst");
    KripkeStructure k = hand_structure(s);

    ActionDef a1{"alpha1", {}, std::get<AnnotatedCondition>(
        parse_query("in(t70, surv.identify(image1)) : [1,1] @ ig")).cond, {}, {}};
    ActionDef a2{"alpha2", {}, std::get<AnnotatedCondition>(
        parse_query("in(t80, surv.identify(image1)) & in(t72, surv.identify(image1)) : [1,1] @ ig"))
                     .cond, {}, {}};
    ActionDef a3{"alpha3", {}, std::get<AnnotatedCondition>(
        parse_query("in(t80, surv.identify(image1)) & in(loc2, surv.location(image1)) : [1,1] @ ig"))
                     .cond, {}, {}};

    Binding none;
    CHECK_FALSE(possibly_executable(s, a1, none).possible);
    CHECK_FALSE(possibly_executable(s, a2, none).possible);
    CHECK(possibly_executable(s, a3, none).possible);
    auto p = executability_probability(k, a3, none);
    REQUIRE(p.has_value());
    CHECK(*p == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_FALSE(executability_probability(k, a1, none).has_value());
}

TEST_CASE("erase execution merges equal successor states") {
    ProbState s = testutil::load_state("kripke.pst");
    Program prog = testutil::load_program("erase.pap");
    KripkeStructure k = hand_structure(s);
    Binding tg;
    tg.vars["X"] = obj("t80");
    KripkeStructure after = execute_action_kripke(k, prog.actions.at("erase"), tg);
    REQUIRE(after.states.size() == 4);
    std::vector<double> expected{0.1, 0.1, 0.2, 0.6};
    for (size_t i = 0; i < 4; ++i) CHECK(after.prob[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(std::accumulate(after.prob.begin(), after.prob.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("product cap guards blow-ups") {
    ProbState s;
    RVSet rvs;
    for (int i = 0; i < 1; ++i) rvs.push_back({{obj("x")}, {0.5}});
    for (int c = 0; c < 25; ++c)
        s.entries[{"d", "f" + std::to_string(c), {}}] = rvs;  // 2^25 product states
    CHECK_THROWS_AS(product_kripke(s, 1000), PapError);
}
