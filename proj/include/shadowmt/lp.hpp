#pragma once

#include <cstddef>
#include <vector>

namespace shadowmt {

/// min cost . x  subject to  rows x = rhs, x >= 0.
struct LpProblem {
    struct Term {
        std::size_t var;
        double coef;
    };

    std::size_t num_vars = 0;
    std::vector<double> cost;
    std::vector<std::vector<Term>> rows;
    std::vector<double> rhs;

    explicit LpProblem(std::size_t n = 0) : num_vars(n), cost(n, 0.0) {}
    void add_row(std::vector<Term> terms, double b) {
        rows.push_back(std::move(terms));
        rhs.push_back(b);
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    /// Row multipliers (zero on redundant rows) and the checks built on them.
    std::vector<double> duals;
    double dual_objective = 0.0;
    double min_reduced_cost = 0.0;
    double complementary_slackness = 0.0;
    double primal_residual = 0.0;
};

/// Two-phase primal simplex on a dense tableau with Bland's rule.
/// Throws DimensionMismatch for ill-formed problems.
LpSolution solve_lp(const LpProblem& p);

} // namespace shadowmt
