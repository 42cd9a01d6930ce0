#include "pap/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pap {

namespace {
constexpr double kTol = 1e-7;
constexpr int kMaxIter = 10000;

struct Tableau {
    // rows x (cols + 1); last column is the RHS. Last row is the cost row
    // (reduced costs; its RHS holds the negated objective value).
    std::vector<std::vector<double>> t;
    std::vector<int> basis;  // basic variable per constraint row
    size_t m, n;

    double& at(size_t i, size_t j) { return t[i][j]; }

    void pivot(size_t pr, size_t pc) {
        double piv = t[pr][pc];
        for (size_t j = 0; j <= n; ++j) t[pr][j] /= piv;
        for (size_t i = 0; i <= m; ++i) {
            if (i == pr) continue;
            double f = t[i][pc];
            if (std::abs(f) < 1e-12) continue;
            for (size_t j = 0; j <= n; ++j) t[i][j] -= f * t[pr][j];
        }
        basis[pr] = static_cast<int>(pc);
    }

    // Bland's rule; `allowed` masks columns permitted to enter.
    // Returns false on optimality, throws on unboundedness/iteration cap.
    void run(const std::vector<bool>& allowed) {
        for (int iter = 0; iter < kMaxIter; ++iter) {
            size_t enter = n;
            for (size_t j = 0; j < n; ++j)
                if (allowed[j] && t[m][j] < -kTol) {
                    enter = j;
                    break;
                }
            if (enter == n) return;  // optimal
            size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= kTol) continue;
                double ratio = t[i][n] / t[i][enter];
                if (ratio < best - kTol ||
                    (ratio < best + kTol && (leave == m || basis[i] < basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m) throw std::domain_error("unbounded");
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex iteration cap exceeded");
    }
};

}  // namespace

LPSolution solve_lp(const LPProblem& p) {
    const size_t nx = p.n();
    // Shift x = lo + y with y >= 0; finite upper bounds become extra rows.
    struct Row {
        std::vector<double> a;
        char rel;
        double b;
    };
    std::vector<Row> rows;
    for (const auto& r : p.rows) {
        double shift = 0.0;
        for (size_t j = 0; j < nx; ++j) shift += r.a[j] * p.lo[j];
        rows.push_back({r.a, r.rel, r.b - shift});
    }
    for (size_t j = 0; j < nx; ++j) {
        if (!std::isfinite(p.hi[j])) continue;
        std::vector<double> a(nx, 0.0);
        a[j] = 1.0;
        rows.push_back({a, '<', p.hi[j] - p.lo[j]});
    }
    const size_t m = rows.size();
    // Columns: y variables, then one slack/surplus per inequality, then one
    // artificial per >= or = row.
    size_t n_slack = 0, n_art = 0;
    for (const auto& r : rows) {
        // Normalize the RHS sign first.
        char rel = r.rel;
        double b = r.b;
        if (b < 0) rel = rel == '<' ? '>' : rel == '>' ? '<' : '=';
        if (rel != '=') ++n_slack;
        if (rel != '<') ++n_art;
    }
    const size_t n = nx + n_slack + n_art;
    Tableau tab;
    tab.m = m;
    tab.n = n;
    tab.t.assign(m + 1, std::vector<double>(n + 1, 0.0));
    tab.basis.assign(m, -1);
    size_t slack_at = nx, art_at = nx + n_slack;
    std::vector<bool> artificial(n, false);
    for (size_t i = 0; i < m; ++i) {
        double sign = rows[i].b < 0 ? -1.0 : 1.0;
        char rel = rows[i].rel;
        if (sign < 0) rel = rel == '<' ? '>' : rel == '>' ? '<' : '=';
        for (size_t j = 0; j < nx; ++j) tab.t[i][j] = sign * rows[i].a[j];
        tab.t[i][n] = sign * rows[i].b;
        if (rel == '<') {
            tab.t[i][slack_at] = 1.0;
            tab.basis[i] = static_cast<int>(slack_at++);
        } else if (rel == '>') {
            tab.t[i][slack_at++] = -1.0;
            tab.t[i][art_at] = 1.0;
            artificial[art_at] = true;
            tab.basis[i] = static_cast<int>(art_at++);
        } else {
            tab.t[i][art_at] = 1.0;
            artificial[art_at] = true;
            tab.basis[i] = static_cast<int>(art_at++);
        }
    }

    LPSolution sol;
    std::vector<bool> allow_all(n, true);
    try {
        if (n_art > 0) {
            // Phase 1: minimize the artificial mass.
            for (size_t j = 0; j < n; ++j) tab.t[m][j] = artificial[j] ? 1.0 : 0.0;
            tab.t[m][n] = 0.0;
            for (size_t i = 0; i < m; ++i)
                if (artificial[tab.basis[i]])
                    for (size_t j = 0; j <= n; ++j) tab.t[m][j] -= tab.t[i][j];
            tab.run(allow_all);
            if (-tab.t[m][n] > 1e-6) {
                sol.status = LPSolution::Status::Infeasible;
                return sol;
            }
            // Drive leftover artificials out of the basis where possible.
            for (size_t i = 0; i < m; ++i) {
                if (!artificial[tab.basis[i]]) continue;
                for (size_t j = 0; j < nx + n_slack; ++j)
                    if (std::abs(tab.t[i][j]) > kTol) {
                        tab.pivot(i, j);
                        break;
                    }
            }
        }
        // Phase 2: the real objective over y (the lo-shift is constant).
        std::vector<bool> allowed(n, true);
        for (size_t j = 0; j < n; ++j)
            if (artificial[j]) allowed[j] = false;
        for (size_t j = 0; j < n; ++j) tab.t[m][j] = j < nx ? p.objective[j] : 0.0;
        tab.t[m][n] = 0.0;
        for (size_t i = 0; i < m; ++i) {
            int bj = tab.basis[i];
            double c = bj >= 0 && static_cast<size_t>(bj) < nx ? p.objective[bj] : 0.0;
            if (c != 0.0)
                for (size_t j = 0; j <= n; ++j) tab.t[m][j] -= c * tab.t[i][j];
        }
        tab.run(allowed);
    } catch (const std::domain_error&) {
        sol.status = LPSolution::Status::Unbounded;
        return sol;
    }

    sol.status = LPSolution::Status::Optimal;
    sol.x.assign(nx, 0.0);
    for (size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= 0 && static_cast<size_t>(tab.basis[i]) < nx)
            sol.x[tab.basis[i]] = tab.t[i][n];
    double obj = 0.0;
    for (size_t j = 0; j < nx; ++j) {
        sol.x[j] += p.lo[j];
        obj += p.objective[j] * sol.x[j];
    }
    sol.objective = obj;
    return sol;
}

std::string render_lp(const LPProblem& p) {
    std::ostringstream out;
    auto coef = [&](const std::vector<double>& a) {
        std::ostringstream line;
        bool first = true;
        for (size_t j = 0; j < a.size(); ++j) {
            if (a[j] == 0.0) continue;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", a[j]);
            if (!first) line << " + ";
            first = false;
            line << buf << "*" << p.vars[j];
        }
        if (first) line << "0";
        return line.str();
    };
    out << "min: " << coef(p.objective) << "\n";
    for (const auto& r : p.rows) {
        const char* rel = r.rel == '<' ? "<=" : r.rel == '>' ? ">=" : "=";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", r.b);
        out << "row: " << coef(r.a) << " " << rel << " " << buf << "\n";
    }
    for (size_t j = 0; j < p.n(); ++j) {
        char lo[64], hi[64];
        std::snprintf(lo, sizeof lo, "%.12g", p.lo[j]);
        std::snprintf(hi, sizeof hi, "%.12g", p.hi[j]);
        out << "bounds: " << lo << " <= " << p.vars[j] << " <= " << hi << "\n";
    }
    return out.str();
}

}  // namespace pap
