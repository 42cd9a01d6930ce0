#include "doctest.h"
#include "helpers.hpp"
#include "pap/annotation.hpp"
#include "pap/parser.hpp"

using namespace pap;

TEST_CASE("empty program parses") {
    Program p = parse_program("");
    CHECK(p.rules.empty());
    CHECK(p.actions.empty());
}

TEST_CASE("rule with several annotated groups") {
    Program p = parse_program(
        "O send_warn(Y) <- in(F, surv.file(imagedb)) & in(Y, surv.identify(F)) : [0.5, 1.0] @ ig "
        "& O send_warn(X).\n");
    REQUIRE(p.rules.size() == 1);
    const Rule& r = p.rules.front();
    CHECK(r.head.op == Modality::O);
    REQUIRE(r.body_prob.size() == 1);
    CHECK(r.body_prob.front().cond.size() == 2);
    CHECK(r.body_prob.front().strat == Strategy::Ig);
    CHECK(r.body_pos.size() == 1);
    CHECK(r.body_neg.empty());
    // implicit declaration for the undeclared action
    CHECK(p.actions.count("send_warn") == 1);
    CHECK(p.actions.at("send_warn").params.size() == 1);
}

TEST_CASE("negative literal and default annotation") {
    Program p = parse_program("P a() <- not P a().");
    REQUIRE(p.rules.size() == 1);
    CHECK(p.rules.front().body_neg.size() == 1);
    CHECK(p.rules.front().body_prob.empty());
    CHECK_FALSE(p.positive());
}

TEST_CASE("unannotated groups get [1,1] at the default strategy") {
    Program p = parse_program("Do grant(R) <- in(R, pool.requests()).", "<input>", Strategy::Pc);
    REQUIRE(p.rules.front().body_prob.size() == 1);
    const AnnotatedCondition& ac = p.rules.front().body_prob.front();
    CHECK(ac.strat == Strategy::Pc);
    Binding b;
    ProbInterval iv = eval_annotation(ac.ann, b);
    CHECK(iv.lo == doctest::Approx(1.0));
    CHECK(iv.hi == doctest::Approx(1.0));
}

TEST_CASE("annotation arithmetic and functions") {
    Program p = parse_program(
        "P a() <- in(X, d.f()) : [V * 0.5, min(1, V + 0.25)] @ in_.");
    const Annotation& ann = p.rules.front().body_prob.front().ann;
    Binding b;
    b.ann_vars["V"] = 0.5;
    ProbInterval iv = eval_annotation(ann, b);
    CHECK(iv.lo == doctest::Approx(0.25));
    CHECK(iv.hi == doctest::Approx(0.75));
    CHECK(p.rules.front().body_prob.front().strat == Strategy::In);
}

TEST_CASE("action blocks with pre/add/del") {
    Program p = parse_program(testutil::slurp(testutil::data_path("vehicle.pap")), "vehicle.pap");
    REQUIRE(p.actions.count("move_forward") == 1);
    const ActionDef& a = p.actions.at("move_forward");
    CHECK(a.params == std::vector<std::string>{"X"});
    CHECK(a.pre.size() == 1);
    CHECK(a.add.size() == 1);
    CHECK(a.del.size() == 1);
    CHECK(p.integrity_constraints.size() == 1);
}

TEST_CASE("action constraints") {
    Program p = parse_program(testutil::slurp(testutil::data_path("warn_ag.pap")), "warn_ag.pap");
    REQUIRE(p.action_constraints.size() == 1);
    CHECK(p.action_constraints.front().blocked.size() == 2);
    CHECK(p.action_constraints.front().guard.empty());
    CHECK(p.rules.size() == 3);
}

TEST_CASE("state files parse with coherence validation") {
    ProbState s = parse_state("d.f() = { rv{ a: 0.7, b: 0.3 } }");
    GroundCall call{"d", "f", {}};
    REQUIRE(s.entries.count(call) == 1);
    CHECK(s.entries.at(call).front().prob_of(Object(std::string("a"))) == doctest::Approx(0.7));

    // overlapping RVs are incoherent
    CHECK_THROWS_AS(parse_state("d.f() = { rv{ a: 0.5 }, rv{ a: 0.5 } }"), ParseError);
    // mass above one inside a single RV is invalid
    CHECK_THROWS_AS(parse_state("d.f() = { rv{ a: 0.8, b: 0.7 } }"), ParseError);
    // probability outside [0,1] is invalid
    CHECK_THROWS_AS(parse_state("d.f() = { rv{ a: 1.5 } }"), ParseError);
}

TEST_CASE("syntax errors carry source positions") {
    try {
        parse_program("O warn( <- .");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span.line == 1);
        CHECK(e.span.col > 1);
    }
    CHECK_THROWS_AS(parse_program("P a() <- in(X, d.f()) : [0.5] @ ig."), ParseError);
    CHECK_THROWS_AS(parse_program("P a() <- in(X, d.f()) : [0.5, 1] @ zz."), ParseError);
}

TEST_CASE("unsafe rules are rejected") {
    // Y occurs only in the head
    CHECK_THROWS_AS(parse_program("O warn(Y) <- in(X, d.f())."), ParseError);
    // negative literal variable never bound
    CHECK_THROWS_AS(parse_program("O warn(a) <- not P warn(Z)."), ParseError);
    // bound through a positive body literal: fine
    CHECK_NOTHROW(parse_program("O warn(Y) <- P warn(Y)."));
}

TEST_CASE("program rendering round-trips") {
    for (const char* name : {"surveillance.pap", "warn_ag.pap", "vehicle.pap", "allocator.pap",
                             "pivot.pap", "power_warn.pap", "erase.pap", "clash.pap"}) {
        Program p1 = parse_program(testutil::slurp(testutil::data_path(name)), name);
        std::string text = to_string(p1);
        CAPTURE(name);
        CAPTURE(text);
        Program p2 = parse_program(text, "round-trip");
        CHECK(to_string(p2) == text);
    }
}

TEST_CASE("state rendering round-trips") {
    for (const char* name : {"surveillance.pst", "warn_ag.pst", "vehicle.pst", "allocator.pst",
                             "pivot.pst", "power_warn.pst", "kripke.pst"}) {
        ProbState s1 = parse_state(testutil::slurp(testutil::data_path(name)), name);
        std::string text = to_string(s1);
        CAPTURE(name);
        ProbState s2 = parse_state(text, "round-trip");
        CHECK(to_string(s2) == text);
    }
}

TEST_CASE("queries, status sets, invocations") {
    Query q = parse_query("in(t80, surv.identify(image1)) : [0.4, 0.8] @ ig");
    CHECK(std::holds_alternative<AnnotatedCondition>(q));
    Query q2 = parse_query("Do send_warn(t80)");
    CHECK(std::holds_alternative<StatusAtom>(q2));

    StatusSet s = parse_status_set("Do warn_ag(a), P warn_ag(a)");
    CHECK(s.size() == 2);

    GroundAction ga = parse_action_invocation("move_forward(a)");
    CHECK(ga.name == "move_forward");
    REQUIRE(ga.args.size() == 1);
    CHECK(ga.args.front() == Object(std::string("a")));
}

TEST_CASE("record objects and field access in terms") {
    ProbState s = parse_state("geo.city() = { rv{ {pop: 500, name: rome}: 1.0 } }");
    const auto& rv = s.entries.begin()->second.front();
    REQUIRE(rv.objects.size() == 1);
    CHECK(rv.objects.front().is_record());
    CHECK(rv.objects.front().as_record().at("pop") == Object(500LL));

    Program p = parse_program("O pick(C) <- in(C, geo.city()) & C.pop > 100.");
    CHECK(p.rules.front().body_prob.front().cond.size() == 2);
}
