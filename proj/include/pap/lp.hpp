#pragma once

#include <string>
#include <vector>

namespace pap {

// ---------------------------------------------------------------------------
// Dense LP: minimize c·x subject to rows a·x {<=,=,>=} b and box bounds.
// ---------------------------------------------------------------------------

struct LPRow {
    std::vector<double> a;
    char rel = '<';  // '<' = ≤, '=' , '>' = ≥
    double b = 0.0;
};

struct LPProblem {
    std::vector<std::string> vars;
    std::vector<double> objective;  // minimized
    std::vector<LPRow> rows;
    std::vector<double> lo, hi;  // box bounds per variable

    size_t n() const { return vars.size(); }
};

struct LPSolution {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

// Two-phase dense simplex with Bland's rule; pivot tolerance 1e-7, iteration
// cap 10^4 (throws past the cap).
LPSolution solve_lp(const LPProblem& p);

// Text form: "min: ...", one "row: ..." per constraint, one "bounds: ..." per
// variable, in declaration order.
std::string render_lp(const LPProblem& p);

}  // namespace pap
