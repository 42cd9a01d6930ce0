#pragma once

// Brute-force LP oracle: enumerate basic feasible points (vertices) of a small
// bounded polytope and minimize the objective over them. Equality rows are
// always active; the remaining degrees of freedom are pinned by choosing
// active inequality rows and bounds. Intended for problems with ~12 variables.

#include <cmath>
#include <optional>
#include <vector>

#include "pap/lp.hpp"

namespace testutil {

inline constexpr double kVtxTol = 1e-6;

struct LinearSystem {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
};

// Gaussian elimination; returns the unique solution when the active system has
// full column rank, nullopt otherwise.
inline std::optional<std::vector<double>> solve_square(LinearSystem sys, size_t n) {
    size_t m = sys.a.size();
    size_t row = 0;
    std::vector<size_t> pivot_col(m, SIZE_MAX);
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t best = row;
        for (size_t r = row + 1; r < m; ++r)
            if (std::abs(sys.a[r][col]) > std::abs(sys.a[best][col])) best = r;
        if (std::abs(sys.a[best][col]) < 1e-9) continue;
        std::swap(sys.a[row], sys.a[best]);
        std::swap(sys.b[row], sys.b[best]);
        for (size_t r = 0; r < m; ++r) {
            if (r == row) continue;
            double f = sys.a[r][col] / sys.a[row][col];
            if (f == 0.0) continue;
            for (size_t c = col; c < n; ++c) sys.a[r][c] -= f * sys.a[row][c];
            sys.b[r] -= f * sys.b[row];
        }
        pivot_col[row] = col;
        ++row;
    }
    if (row < n) return std::nullopt;  // rank-deficient: not a vertex
    std::vector<double> x(n, 0.0);
    for (size_t r = 0; r < row; ++r)
        if (pivot_col[r] != SIZE_MAX) x[pivot_col[r]] = sys.b[r] / sys.a[r][pivot_col[r]];
    // consistency of the dependent rows
    for (size_t r = row; r < m; ++r) {
        double lhs = 0.0;
        for (size_t c = 0; c < n; ++c) lhs += sys.a[r][c] * x[c];
        if (std::abs(lhs - sys.b[r]) > kVtxTol) return std::nullopt;
    }
    return x;
}

inline bool vertex_feasible(const pap::LPProblem& p, const std::vector<double>& x) {
    for (size_t i = 0; i < p.n(); ++i)
        if (x[i] < p.lo[i] - kVtxTol || x[i] > p.hi[i] + kVtxTol) return false;
    for (const auto& r : p.rows) {
        double lhs = 0.0;
        for (size_t i = 0; i < p.n(); ++i) lhs += r.a[i] * x[i];
        if (r.rel == '=' && std::abs(lhs - r.b) > kVtxTol) return false;
        if (r.rel == '<' && lhs > r.b + kVtxTol) return false;
        if (r.rel == '>' && lhs < r.b - kVtxTol) return false;
    }
    return true;
}

// Minimum of the objective over all enumerable vertices; nullopt when no
// feasible vertex exists (infeasible within this enumeration).
inline std::optional<double> vertex_minimum(const pap::LPProblem& p) {
    size_t n = p.n();
    LinearSystem eq;
    std::vector<std::pair<std::vector<double>, double>> ineq;  // candidate active rows
    for (const auto& r : p.rows) {
        if (r.rel == '=')
            eq.a.push_back(r.a), eq.b.push_back(r.b);
        else
            ineq.push_back({r.a, r.b});
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> unit(n, 0.0);
        unit[i] = 1.0;
        if (std::isfinite(p.lo[i])) ineq.push_back({unit, p.lo[i]});
        if (std::isfinite(p.hi[i])) ineq.push_back({unit, p.hi[i]});
    }

    std::optional<double> best;
    auto try_point = [&](const std::vector<double>& x) {
        if (!vertex_feasible(p, x)) return;
        double obj = 0.0;
        for (size_t i = 0; i < n; ++i) obj += p.objective[i] * x[i];
        if (!best || obj < *best) best = obj;
    };

    // degrees of freedom left after the (possibly redundant) equality rows
    size_t max_extra = n > eq.a.size() ? n - eq.a.size() + 2 : 2;
    std::vector<size_t> pick;
    auto recurse = [&](auto&& self, size_t start, size_t remaining) -> void {
        LinearSystem sys = eq;
        for (size_t idx : pick) {
            sys.a.push_back(ineq[idx].first);
            sys.b.push_back(ineq[idx].second);
        }
        if (auto x = solve_square(std::move(sys), n)) try_point(*x);
        if (remaining == 0) return;
        for (size_t i = start; i < ineq.size(); ++i) {
            pick.push_back(i);
            self(self, i + 1, remaining - 1);
            pick.pop_back();
        }
    };
    recurse(recurse, 0, max_extra);
    return best;
}

}  // namespace testutil
