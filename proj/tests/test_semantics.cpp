#include "doctest.h"
#include "helpers.hpp"
#include "pap/semantics.hpp"

using namespace pap;
using testutil::atom;

namespace {
Object obj(const char* s) { return Object(std::string(s)); }
}  // namespace

TEST_CASE("closures") {
    StatusSet s{atom(Modality::O, "a")};
    StatusSet classical = action_closure(s, ClosureVariant::Classical);
    CHECK(classical == StatusSet{atom(Modality::O, "a"), atom(Modality::Do, "a"),
                                 atom(Modality::P, "a")});
    StatusSet d{atom(Modality::Do, "a")};
    CHECK(action_closure(d, ClosureVariant::Classical) ==
          StatusSet{atom(Modality::Do, "a"), atom(Modality::P, "a")});
    CHECK(action_closure(d, ClosureVariant::Extended) ==
          StatusSet{atom(Modality::O, "a"), atom(Modality::Do, "a"), atom(Modality::P, "a")});

    // idempotence
    for (auto v : {ClosureVariant::Classical, ClosureVariant::Extended}) {
        StatusSet once = action_closure(s, v);
        CHECK(action_closure(once, v) == once);
        CHECK(is_action_closed(once, v));
    }

    CHECK(deontic_closure(StatusSet{atom(Modality::O, "a")}) ==
          StatusSet{atom(Modality::O, "a"), atom(Modality::P, "a")});
    CHECK(deontic_closure({}).empty());
}

TEST_CASE("app operator on the plant program") {
    Program prog = testutil::load_program("power_warn.pap");
    ProbState state = testutil::load_state("power_warn.pst");
    StatusSet app = app_operator(prog, state, {});
    CHECK(app == StatusSet{atom(Modality::O, "warn", {Object(95LL)}),
                           atom(Modality::F, "warn", {Object(80LL)})});
}

TEST_CASE("rule instances match positive body literals against the status set") {
    Program prog = testutil::load_program("allocator.pap");
    ProbState state = testutil::load_state("allocator.pst");
    const Rule& grant = prog.rules.front();
    auto inst = rule_instances(prog, state, grant, {});
    CHECK(inst.size() == 2);  // cpu and disk requests
    for (const auto& gi : inst) CHECK(gi.body_neg.size() == 1);
}

TEST_CASE("conc moves the vehicle forward") {
    Program prog = testutil::load_program("vehicle.pap");
    ProbState state = testutil::load_state("vehicle.pst");
    ProbState next = conc_execute(prog, state, {{"move_forward", {obj("a")}}});
    GroundCall pos_a{"geo", "getposition", {obj("a")}};
    REQUIRE(next.entries.count(pos_a) == 1);
    CHECK(next.entries.at(pos_a).front().objects == std::vector<Object>{Object(201LL)});

    // ... and the move violates the two-vehicle integrity constraint
    CHECK(ic_satisfied(state, prog.integrity_constraints.front()));
    CHECK_FALSE(ic_satisfied(next, prog.integrity_constraints.front()));
    StateConsistency sc =
        state_consistent(prog, state, {atom(Modality::Do, "move_forward", {obj("a")})});
    CHECK_FALSE(sc.ok);
}

TEST_CASE("one S step from the empty set") {
    Program prog = testutil::load_program("surveillance.pap");
    ProbState state = testutil::load_state("surveillance.pst");
    Trace trace;
    SResult r = compute_S(prog, state, {}, ClosureVariant::Extended, 1.0, &trace);
    REQUIRE(r.ok);
    CHECK(r.set == StatusSet{atom(Modality::O, "send_warn", {obj("t80")}),
                             atom(Modality::Do, "send_warn", {obj("t80")}),
                             atom(Modality::P, "send_warn", {obj("t80")})});
    REQUIRE_FALSE(trace.empty());
    CHECK(trace.front().rule_id == 3);
}

TEST_CASE("least fixpoint of the surveillance program") {
    Program prog = testutil::load_program("surveillance.pap");
    ProbState state = testutil::load_state("surveillance.pst");
    SResult r = compute_lfp(prog, state);
    REQUIRE(r.ok);
    StatusSet expected;
    for (const char* t : {"t80", "t72"})
        for (auto m : {Modality::O, Modality::Do, Modality::P})
            expected.insert(atom(m, "send_warn", {obj(t)}));
    expected.insert(atom(Modality::F, "move"));
    CHECK(r.set == expected);
}

TEST_CASE("clashes yield the sentinel") {
    Program prog = testutil::load_program("clash.pap");
    SResult r = compute_lfp(prog, {});
    CHECK_FALSE(r.ok);
    CHECK(r.message.find("no consistent set exists") == 0);
}

TEST_CASE("compute_S requires a positive program") {
    Program prog = testutil::load_program("allocator.pap");
    ProbState state = testutil::load_state("allocator.pst");
    CHECK_THROWS_AS(compute_S(prog, state, {}), PapError);
}

TEST_CASE("monotonicity of the S operator") {
    Program prog = testutil::load_program("surveillance.pap");
    ProbState state = testutil::load_state("surveillance.pst");
    SResult lo = compute_S(prog, state, {});
    StatusSet seed{atom(Modality::O, "send_warn", {obj("t80")})};
    SResult hi = compute_S(prog, state, seed);
    REQUIRE(lo.ok);
    REQUIRE(hi.ok);
    CHECK(std::includes(hi.set.begin(), hi.set.end(), lo.set.begin(), lo.set.end()));
}

TEST_CASE("feasibility of warn_ag candidates") {
    Program prog = testutil::load_program("warn_ag.pap");
    ProbState state = testutil::load_state("warn_ag.pst");

    StatusSet da{atom(Modality::Do, "warn_ag", {obj("a")}), atom(Modality::P, "warn_ag", {obj("a")})};
    CHECK(check_feasible(prog, state, da).feasible());
    CHECK(check_grounded(prog, state, da));
    CHECK(check_rational(prog, state, da));
    CHECK(check_reasonable(prog, state, da));

    // doing both warnings violates the action constraint
    StatusSet both = da;
    both.insert(atom(Modality::Do, "warn_ag", {obj("b")}));
    both.insert(atom(Modality::P, "warn_ag", {obj("b")}));
    auto rep = check_feasible(prog, state, both);
    CHECK_FALSE(rep.feasible());
    CHECK_FALSE(rep.ps2_ok);

    // an open set misses App(PS)
    CHECK_FALSE(check_feasible(prog, state, {}).ps1_ok);
}

TEST_CASE("brute force catalog of warn_ag") {
    Program prog = testutil::load_program("warn_ag.pap");
    ProbState state = testutil::load_state("warn_ag.pst");
    StatusSetCatalog cat = brute_force_status_sets(prog, state);
    CHECK(cat.feasible.size() == 3);
    CHECK(cat.rational.size() == 2);
    CHECK(cat.reasonable.size() == 1);
    for (const auto& r : cat.reasonable) CHECK(check_reasonable(prog, state, r));
}

TEST_CASE("reduct removes refuted rules and drops negative bodies") {
    Program prog = testutil::load_program("allocator.pap");
    StatusSet ps{atom(Modality::Do, "reserve", {obj("cpu")})};
    Program red = reduct(prog, ps, testutil::load_state("allocator.pst"));
    CHECK(red.positive());
    // the grant rule survives only for bindings avoiding Do reserve(cpu)
    for (const auto& r : red.rules) CHECK(r.body_neg.empty());
}

TEST_CASE("RED reduction strips annotations") {
    Program prog = testutil::load_program("surveillance.pap");
    Program red = red_reduce(prog);
    for (const auto& r : red.rules)
        for (const auto& ac : r.body_prob) {
            Binding b;
            ProbInterval iv = eval_annotation(ac.ann, b);
            CHECK(iv.lo == doctest::Approx(0.0));
            CHECK(iv.hi == doctest::Approx(1.0));
            CHECK(ac.strat == Strategy::Ig);
        }
}
