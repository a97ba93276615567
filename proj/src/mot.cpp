#include "shadowmt/mot.hpp"

#include <algorithm>
#include <cmath>

#include "shadowmt/coupling.hpp"
#include "shadowmt/error.hpp"

namespace shadowmt {

namespace {

struct Block {
    DiscreteMeasure x;  // x-mass of the block
    double weight;      // u-weight per unit mass
};

struct BlockSolution {
    std::vector<Coupling> plans;
    double value;
    LpSolution lp;
};

void check_inputs(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost) {
    if (!leq_convex(mu, nu)) throw Error(ErrorKind::NotInConvexOrder, "mu is not below nu in convex order");
    std::vector<double> ys;
    for (const Atom& a : nu.atoms()) ys.push_back(a.x);
    if (!cost.y_convex_on(ys)) throw Error(ErrorKind::InvalidCost, "y-factor is not convex on the atoms of nu");
}

BlockSolution solve_blocks(const std::vector<Block>& blocks, const DiscreteMeasure& nu, const CostSpec& cost,
                           Sense sense) {
    const auto ys = nu.atoms();
    const std::size_t ny = ys.size();
    std::size_t n = 0;
    for (const Block& b : blocks) n += b.x.size() * ny;

    LpProblem lp(n);
    std::vector<std::vector<LpProblem::Term>> col_rows(ny);
    const double flip = sense == Sense::Maximize ? -1.0 : 1.0;
    std::size_t var = 0;
    for (const Block& b : blocks) {
        for (const Atom& x : b.x.atoms()) {
            std::vector<LpProblem::Term> mass, mart;
            for (std::size_t j = 0; j < ny; ++j, ++var) {
                lp.cost[var] = flip * b.weight * cost.xy(x.x, ys[j].x);
                mass.push_back({var, 1.0});
                mart.push_back({var, ys[j].x - x.x});
                col_rows[j].push_back({var, 1.0});
            }
            lp.add_row(std::move(mass), x.m);
            lp.add_row(std::move(mart), 0.0);
        }
    }
    for (std::size_t j = 0; j < ny; ++j) lp.add_row(std::move(col_rows[j]), ys[j].m);

    BlockSolution out{{}, 0.0, solve_lp(lp)};
    if (out.lp.status != LpStatus::Optimal)
        throw Error(ErrorKind::NotInConvexOrder, "martingale transport problem has no optimal solution");
    out.value = flip * out.lp.objective;
    var = 0;
    for (const Block& b : blocks) {
        std::vector<PlanEntry> e;
        for (const Atom& x : b.x.atoms())
            for (std::size_t j = 0; j < ny; ++j, ++var) e.push_back({x.x, ys[j].x, out.lp.x[var]});
        out.plans.emplace_back(std::move(e));
    }
    return out;
}

} // namespace

MotResult mot_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost, Sense sense) {
    check_inputs(mu, nu, cost);
    BlockSolution s = solve_blocks({{mu, cost.u_weight(0.0, 1.0)}}, nu, cost, sense);
    return {s.value, std::move(s.plans.front()), std::move(s.lp)};
}

LiftedMotResult lifted_mot_lp(const Lift& l, const DiscreteMeasure& nu, const CostSpec& cost, Sense sense) {
    check_inputs(l.marginal(), nu, cost);
    const auto pieces = l.pieces();

    std::vector<double> weight(pieces.size());
    if (cost.kind() == CostSpec::Kind::Cpq) {
        const auto bounds = l.boundaries();
        const bool on_boundary = std::any_of(bounds.begin(), bounds.end(),
                                             [&](double b) { return std::abs(b - cost.p()) <= 1e-12; });
        if (!on_boundary) throw Error(ErrorKind::BoundaryMismatch, "p is not a slab boundary of the lift");
        for (std::size_t k = 0; k < pieces.size(); ++k) weight[k] = pieces[k].u1 <= cost.p() + 1e-12 ? 1.0 : 0.0;
    } else {
        for (std::size_t k = 0; k < pieces.size(); ++k) weight[k] = cost.u_weight(pieces[k].u0, pieces[k].u1);
    }

    // pool consecutive slabs of equal weight
    std::vector<Block> blocks;
    std::vector<std::size_t> block_of(pieces.size());
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const DiscreteMeasure mass = scale(pieces[k].conditional, pieces[k].u1 - pieces[k].u0);
        if (k > 0 && std::abs(weight[k] - weight[k - 1]) <= 1e-15) {
            blocks.back().x = add(blocks.back().x, mass);
        } else {
            blocks.push_back({mass, weight[k]});
        }
        block_of[k] = blocks.size() - 1;
    }

    BlockSolution s = solve_blocks(blocks, nu, cost, sense);

    std::vector<Slice> slices;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const Block& b = blocks[block_of[k]];
        const Coupling& plan = s.plans[block_of[k]];
        const double len = pieces[k].u1 - pieces[k].u0;
        std::vector<PlanEntry> e;
        for (const PlanEntry& pe : plan.entries()) {
            double px = 0.0;
            for (const Atom& a : pieces[k].conditional.atoms())
                if (std::abs(a.x - pe.x) < kEps) px = a.m;
            if (px == 0.0) continue;
            double bx = 0.0;
            for (const Atom& a : b.x.atoms())
                if (std::abs(a.x - pe.x) < kEps) bx = a.m;
            e.push_back({pe.x, pe.y, pe.mass * len * px / bx});
        }
        slices.push_back({pieces[k].u0, pieces[k].u1, Coupling(std::move(e))});
    }
    return {s.value, LiftedCoupling(std::move(slices)), std::move(s.lp)};
}

CertReport certify_optimal(const LiftedCoupling& lc, const Lift& l, const DiscreteMeasure& nu, double tol) {
    const std::vector<double> bounds = lc.boundaries();
    const Lift fine = split(l, bounds);
    const auto fine_bounds = fine.boundaries();
    CertReport r;
    for (double p : fine_bounds) {
        if (p <= 0.0) continue;
        for (const Atom& q : nu.atoms()) {
            const CostSpec c = CostSpec::cpq(p, q.x);
            const double lpv = lifted_mot_lp(fine, nu, c).value;
            const double cc = cost(lc, c);
            const bool ok = cc <= lpv + tol * (1.0 + std::abs(lpv));
            r.checks.push_back({p, q.x, cc, lpv, ok});
            r.pass = r.pass && ok;
        }
    }
    return r;
}

} // namespace shadowmt
