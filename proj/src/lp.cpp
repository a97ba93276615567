#include "shadowmt/lp.hpp"

#include <algorithm>
#include <cmath>

#include "shadowmt/error.hpp"

namespace shadowmt {

namespace {

constexpr double kPivot = 1e-10;
constexpr double kReduced = 1e-11;

class Tableau {
public:
    Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), t_(m * cols, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }

    void pivot(std::size_t r, std::size_t c, std::vector<double>& obj) {
        const double inv = 1.0 / at(r, c);
        for (std::size_t j = 0; j < cols_; ++j) at(r, j) *= inv;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        const double f = obj[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j < cols_; ++j) obj[j] -= f * at(r, j);
            obj[c] = 0.0;
        }
    }

private:
    std::size_t m_, cols_;
    std::vector<double> t_;
};

enum class Outcome { Optimal, Unbounded };

// Bland's rule: lowest-index improving column, lowest-index basic variable
// among ratio-test ties.
Outcome run(Tableau& t, std::vector<double>& obj, std::vector<std::size_t>& basis,
            const std::vector<bool>& active, std::size_t allowed, std::size_t rhs) {
    const std::size_t m = basis.size();
    for (;;) {
        std::size_t enter = allowed;
        for (std::size_t j = 0; j < allowed; ++j)
            if (obj[j] < -kReduced) {
                enter = j;
                break;
            }
        if (enter == allowed) return Outcome::Optimal;
        std::size_t leave = m;
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i]) continue;
            const double a = t.at(i, enter);
            if (a <= kPivot) continue;
            const double ratio = t.at(i, rhs) / a;
            if (leave == m || ratio < best - 1e-14 ||
                (ratio <= best + 1e-14 && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) return Outcome::Unbounded;
        t.pivot(leave, enter, obj);
        basis[leave] = enter;
    }
}

// Solves M^T y = v for square M by Gaussian elimination with partial pivoting.
std::vector<double> solve_transposed(std::vector<std::vector<double>> mt, std::vector<double> v) {
    const std::size_t k = v.size();
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(mt[r][c]) > std::abs(mt[piv][c])) piv = r;
        std::swap(mt[c], mt[piv]);
        std::swap(v[c], v[piv]);
        const double d = mt[c][c];
        if (d == 0.0) continue;
        for (std::size_t r = c + 1; r < k; ++r) {
            const double f = mt[r][c] / d;
            if (f == 0.0) continue;
            for (std::size_t j = c; j < k; ++j) mt[r][j] -= f * mt[c][j];
            v[r] -= f * v[c];
        }
    }
    std::vector<double> y(k, 0.0);
    for (std::size_t c = k; c-- > 0;) {
        double s = v[c];
        for (std::size_t j = c + 1; j < k; ++j) s -= mt[c][j] * y[j];
        y[c] = mt[c][c] == 0.0 ? 0.0 : s / mt[c][c];
    }
    return y;
}

} // namespace

LpSolution solve_lp(const LpProblem& p) {
    const std::size_t n = p.num_vars, m = p.rows.size();
    if (p.cost.size() != n || p.rhs.size() != m)
        throw Error(ErrorKind::DimensionMismatch, "cost or rhs size does not match the problem");

    // dense copy with rows signed so that rhs >= 0
    std::vector<std::vector<double>> a(m, std::vector<double>(n, 0.0));
    std::vector<double> b(p.rhs), sign(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& term : p.rows[i]) {
            if (term.var >= n) throw Error(ErrorKind::DimensionMismatch, "row refers to a missing variable");
            a[i][term.var] += term.coef;
        }
        if (b[i] < 0.0) {
            sign[i] = -1.0;
            b[i] = -b[i];
            for (double& v : a[i]) v = -v;
        }
    }

    const std::size_t rhs = n + m;
    Tableau t(m, n + m + 1);
    std::vector<std::size_t> basis(m);
    std::vector<bool> active(m, true);
    std::vector<double> obj(n + m + 1, 0.0);
    double bscale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            t.at(i, j) = a[i][j];
            obj[j] -= a[i][j];
        }
        t.at(i, n + i) = 1.0;
        t.at(i, rhs) = b[i];
        obj[rhs] -= b[i];
        basis[i] = n + i;
        bscale = std::max(bscale, b[i]);
    }

    LpSolution sol;
    run(t, obj, basis, active, n, rhs);
    if (-obj[rhs] > 1e-9 * (1.0 + bscale)) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }

    // drive artificial variables out of the basis; rows where that is
    // impossible are linear combinations of the others
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(t.at(i, j)) > 1e-9) {
                col = j;
                break;
            }
        if (col == n) {
            active[i] = false;
            continue;
        }
        t.pivot(i, col, obj);
        basis[i] = col;
    }

    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) obj[j] = p.cost[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (!active[i]) continue;
        const double cb = p.cost[basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= rhs; ++j) obj[j] -= cb * t.at(i, j);
    }
    if (run(t, obj, basis, active, n, rhs) == Outcome::Unbounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (active[i]) sol.x[basis[i]] = std::max(0.0, t.at(i, rhs));
    for (std::size_t j = 0; j < n; ++j) sol.objective += p.cost[j] * sol.x[j];

    // duals from the final basis on the non-redundant rows
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < m; ++i)
        if (active[i]) live.push_back(i);
    const std::size_t k = live.size();
    std::vector<std::vector<double>> bt(k, std::vector<double>(k, 0.0));
    std::vector<double> cb(k);
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t var = basis[live[r]];
        cb[r] = p.cost[var];
        for (std::size_t c = 0; c < k; ++c) bt[r][c] = a[live[c]][var];
    }
    const std::vector<double> y = solve_transposed(std::move(bt), std::move(cb));
    sol.duals.assign(m, 0.0);
    for (std::size_t r = 0; r < k; ++r) sol.duals[live[r]] = sign[live[r]] * y[r];
    for (std::size_t i = 0; i < m; ++i) sol.dual_objective += sol.duals[i] * p.rhs[i];

    for (std::size_t j = 0; j < n; ++j) {
        double red = p.cost[j];
        for (std::size_t r = 0; r < k; ++r) red -= y[r] * a[live[r]][j];
        sol.min_reduced_cost = std::min(sol.min_reduced_cost, red);
        sol.complementary_slackness = std::max(sol.complementary_slackness, std::abs(sol.x[j] * red));
    }
    for (std::size_t i = 0; i < m; ++i) {
        double s = -p.rhs[i];
        for (const auto& term : p.rows[i]) s += term.coef * sol.x[term.var];
        sol.primal_residual = std::max(sol.primal_residual, std::abs(s));
    }
    return sol;
}

} // namespace shadowmt
