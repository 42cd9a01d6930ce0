#include "doctest.h"
#include "helpers.hpp"
#include "pap/annotation.hpp"
#include "pap/parser.hpp"

using namespace pap;

namespace {
std::vector<ProbInterval> lattice(double step) {
    std::vector<ProbInterval> out;
    int n = static_cast<int>(1.0 / step + 0.5);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) out.push_back({i * step, j * step});
    return out;
}

AnnotatedCondition query_cond(const std::string& text) {
    return std::get<AnnotatedCondition>(parse_query(text));
}
}  // namespace

TEST_CASE("combine: the four strategies on point intervals") {
    ProbInterval a{0.4, 0.4}, b{0.3, 0.3};
    auto ig = combine(Strategy::Ig, a, b);
    CHECK(ig.lo == doctest::Approx(0.0));
    CHECK(ig.hi == doctest::Approx(0.3));
    auto pc = combine(Strategy::Pc, a, b);
    CHECK(pc.lo == doctest::Approx(0.3));
    CHECK(pc.hi == doctest::Approx(0.3));
    auto nc = combine(Strategy::Nc, a, b);
    CHECK(nc.lo == doctest::Approx(0.0));
    CHECK(nc.hi == doctest::Approx(0.0));
    auto in = combine(Strategy::In, a, b);
    CHECK(in.lo == doctest::Approx(0.12));
    CHECK(in.hi == doctest::Approx(0.12));
}

TEST_CASE("strategy axioms hold on a coarse lattice") {
    auto grid = lattice(0.25);
    CHECK(check_strategy_axioms(Strategy::Ig, grid).ok());
    CHECK(check_strategy_axioms(Strategy::Pc, grid).ok());
    CHECK(check_strategy_axioms(Strategy::In, grid).ok());
    CHECK(check_strategy_axioms(Strategy::Nc, grid, /*include_identity=*/false).ok());
}

TEST_CASE("annotation evaluation clamps and validates") {
    Binding b;
    b.ann_vars["V"] = 0.9;
    auto item = AnnotationItem::apply("+", {AnnotationItem::variable("V"), AnnotationItem::variable("V")});
    CHECK(eval_annotation_item(item, b) == doctest::Approx(1.0));  // clamped
    CHECK(annotation_fn_known("min", 2));
    CHECK(annotation_fn_known("pow", 2));
    CHECK_FALSE(annotation_fn_known("sin", 1));

    Annotation inverted{AnnotationItem::constant(0.8), AnnotationItem::constant(0.2)};
    CHECK_THROWS_AS(eval_annotation(inverted, b), PapError);
}

TEST_CASE("single in-atom satisfaction is point membership") {
    ProbState s = testutil::load_state("surveillance.pst");
    auto ac = query_cond("in(t80, surv.identify(image1)) : [0.2, 0.6] @ ig");
    CHECK(satisfies(s, ac));
    CHECK(satisfies(s, query_cond("in(t80, surv.identify(image1)) : [0.6, 0.6] @ ig")));
    CHECK_FALSE(satisfies(s, query_cond("in(t80, surv.identify(image1)) : [0.7, 1.0] @ ig")));
    CHECK_FALSE(satisfies(s, query_cond("in(t99, surv.identify(image1)) : [0.0, 1.0] @ ig")));
}

TEST_CASE("notin and comparisons") {
    ProbState s = testutil::load_state("surveillance.pst");
    // t99 never appears: notin holds at any annotation
    CHECK(satisfies(s, query_cond("notin(t99, surv.identify(image1)) : [0.9, 1.0] @ ig")));
    // t80 appears with 0.6: notin holds only at annotations excluding 0.6
    CHECK(satisfies(s, query_cond("notin(t80, surv.identify(image1)) : [0.7, 1.0] @ ig")));
    CHECK_FALSE(satisfies(s, query_cond("notin(t80, surv.identify(image1)) : [0.5, 0.7] @ ig")));
    // a true ground comparison satisfies regardless of annotation
    CHECK(satisfies(s, query_cond("3 > 2 : [0.0, 0.0] @ ig")));
    CHECK_FALSE(satisfies(s, query_cond("2 > 3 : [0.0, 1.0] @ ig")));
}

TEST_CASE("conjunctions fold tightest intervals under the strategy") {
    ProbState s = testutil::load_state("surveillance.pst");
    // [1,1] ig [0.6,0.6] = [0.6,0.6]
    auto ac = query_cond(
        "in(image1, surv.file(imagedb)) & in(t80, surv.identify(image1)) : [0.5, 1.0] @ ig");
    CHECK(satisfies(s, ac));
    CHECK_FALSE(satisfies(
        s, query_cond(
               "in(image1, surv.file(imagedb)) & in(t80, surv.identify(image1)) : [0.7, 1.0] @ ig")));
    Binding b;
    auto iv = tightest_interval(s, ac.cond, Strategy::Ig, b);
    REQUIRE(iv.has_value());
    CHECK(iv->lo == doctest::Approx(0.6));
    CHECK(iv->hi == doctest::Approx(0.6));
}

TEST_CASE("non-ground conditions quantify universally over instances") {
    ProbState s = testutil::load_state("surveillance.pst");
    // instances t80 (0.6) and t72 (0.5): all satisfy [0.5, 1.0]
    CHECK(satisfies(s, query_cond("in(X, surv.identify(image1)) : [0.5, 1.0] @ ig")));
    // t72 fails [0.6, 1.0]
    CHECK_FALSE(satisfies(s, query_cond("in(X, surv.identify(image1)) : [0.6, 1.0] @ ig")));
    // no instance at all: unsatisfied
    CHECK_FALSE(satisfies(s, query_cond("in(X, surv.missing()) : [0.0, 1.0] @ ig")));
}

TEST_CASE("existential satisfaction for preconditions") {
    ProbState s = testutil::load_state("pivot.pst");
    auto cond = query_cond("in(a, d.f()) : [1.0, 1.0] @ ig").cond;
    CHECK(holds_existential(s, cond, {0.6, 1.0}));
    CHECK_FALSE(holds_existential(s, cond, {0.8, 1.0}));
    CHECK(holds_existential(s, {}, {1.0, 1.0}));  // empty condition is trivially true

    auto open_cond = query_cond("in(X, d.f()) : [1.0, 1.0] @ ig").cond;
    CHECK(holds_existential(s, open_cond, {0.7, 1.0}));  // a qualifies even though b does not
}

TEST_CASE("ground_condition binds in-atom subjects left to right") {
    ProbState s = testutil::load_state("surveillance.pst");
    auto cond =
        query_cond("in(F, surv.file(imagedb)) & in(Y, surv.identify(F)) : [0, 1] @ ig").cond;
    Binding init;
    auto bindings = ground_condition(s, cond, init, true);
    REQUIRE(bindings.size() == 2);
    CHECK(*bindings[0].find("Y") == Object(std::string("t80")));
    CHECK(*bindings[1].find("Y") == Object(std::string("t72")));

    // comparisons filter bindings when requested
    auto cond2 = query_cond("in(X, plant.pressure(turbine)) & X > 90 : [0,1] @ ig").cond;
    ProbState plant = testutil::load_state("power_warn.pst");
    CHECK(ground_condition(plant, cond2, init, true).size() == 1);
    CHECK(ground_condition(plant, cond2, init, false).size() == 2);
}

TEST_CASE("annotation widening preserves satisfaction") {
    ProbState s = testutil::load_state("surveillance.pst");
    auto base = query_cond(
        "in(image1, surv.file(imagedb)) & in(t80, surv.identify(image1)) : [0.6, 0.6] @ ig");
    REQUIRE(satisfies(s, base));
    for (double widen : {0.1, 0.2, 0.4}) {
        AnnotatedCondition wider = base;
        wider.ann.lo = AnnotationItem::constant(0.6 - widen);
        wider.ann.hi = AnnotationItem::constant(std::min(1.0, 0.6 + widen));
        CHECK(satisfies(s, wider));
    }
}
