#include "helpers.hpp"
#include "shadowmt/coupling.hpp"
#include "shadowmt/lp.hpp"
#include "shadowmt/mot.hpp"
#include "support/oracles.hpp"

namespace {

const DiscreteMeasure two = M({{-1, 0.5}, {1, 0.5}});
const DiscreteMeasure pm2 = M({{-2, 0.5}, {2, 0.5}});
const DiscreteMeasure four = M({{-2, 0.25}, {-1, 0.25}, {1, 0.25}, {2, 0.25}});

void check_duality(const LpSolution& s) {
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(s.dual_objective).epsilon(1e-9));
    CHECK(s.complementary_slackness <= 1e-8);
    CHECK(s.min_reduced_cost >= -1e-9);
    CHECK(s.primal_residual <= 1e-9);
}

} // namespace

TEST_CASE("one-variable problem") {
    LpProblem p(1);
    p.cost = {1.0};
    p.add_row({{0, 1.0}}, 1.0);
    const LpSolution s = solve_lp(p);
    CHECK(s.status == LpStatus::Optimal);
    CHECK(s.objective == 1.0);
    CHECK(s.x[0] == 1.0);
    check_duality(s);
}

TEST_CASE("infeasible and unbounded problems") {
    LpProblem p(1);
    p.add_row({{0, 1.0}}, 1.0);
    p.add_row({{0, 1.0}}, 2.0);
    CHECK(solve_lp(p).status == LpStatus::Infeasible);

    LpProblem q(2);
    q.cost = {-1.0, 0.0};
    q.add_row({{0, 1.0}, {1, -1.0}}, 0.0);
    CHECK(solve_lp(q).status == LpStatus::Unbounded);

    LpProblem neg(1);
    neg.add_row({{0, 1.0}}, -1.0);
    CHECK(solve_lp(neg).status == LpStatus::Infeasible);
}

TEST_CASE("ill-formed problems") {
    LpProblem p(2);
    p.cost = {1.0};
    CHECK(kind_of([&] { (void)solve_lp(p); }) == ErrorKind::DimensionMismatch);
    LpProblem q(1);
    q.add_row({{3, 1.0}}, 1.0);
    CHECK(kind_of([&] { (void)solve_lp(q); }) == ErrorKind::DimensionMismatch);
    LpProblem r(1);
    r.rows.push_back({{0, 1.0}});
    CHECK(kind_of([&] { (void)solve_lp(r); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("2x2 transport polytope") {
    // supplies (0.6, 0.4), demands (0.5, 0.5); vertices x11 = t in {0.1, 0.5}
    const double c[2][2] = {{1, 3}, {2, 1}};
    LpProblem p(4);
    p.cost = {c[0][0], c[0][1], c[1][0], c[1][1]};
    p.add_row({{0, 1}, {1, 1}}, 0.6);
    p.add_row({{2, 1}, {3, 1}}, 0.4);
    p.add_row({{0, 1}, {2, 1}}, 0.5);
    p.add_row({{1, 1}, {3, 1}}, 0.5);
    double best = INFINITY;
    for (double t : {0.1, 0.5})
        best = std::min(best, c[0][0] * t + c[0][1] * (0.6 - t) + c[1][0] * (0.5 - t) + c[1][1] * (t - 0.1));
    const LpSolution s = solve_lp(p);
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-12));
    check_duality(s);
}

TEST_CASE("random transport problems satisfy strong duality") {
    oracle::Generator g(51);
    for (int i = 0; i < 40; ++i) {
        const DiscreteMeasure a = g.measure(g.integer(1, 6), 0, 20), b = g.measure(g.integer(1, 6), 0, 20);
        const std::size_t n = a.size(), m = b.size();
        LpProblem p(n * m);
        for (std::size_t k = 0; k < n * m; ++k) p.cost[k] = g.real(-1, 1);
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<LpProblem::Term> row;
            for (std::size_t c = 0; c < m; ++c) row.push_back({r * m + c, 1.0});
            p.add_row(row, a[r].m);
        }
        for (std::size_t c = 0; c < m; ++c) {
            std::vector<LpProblem::Term> col;
            for (std::size_t r = 0; r < n; ++r) col.push_back({r * m + c, 1.0});
            p.add_row(col, b[c].m);
        }
        const LpSolution s = solve_lp(p);
        check_duality(s);
        // the north-west corner plan is feasible, so it cannot beat the optimum
        const Coupling nw = quantile_coupling(a, b);
        double nw_cost = 0.0;
        for (const PlanEntry& e : nw.entries()) {
            std::size_t r = 0, c = 0;
            while (a[r].x != e.x) ++r;
            while (b[c].x != e.y) ++c;
            nw_cost += e.mass * p.cost[r * m + c];
        }
        CHECK(s.objective <= nw_cost + 1e-12);
    }
}

TEST_CASE("martingale transport LP") {
    const Coupling only({{0, -1, 0.5}, {0, 1, 0.5}});
    for (int k = 0; k < 3; ++k) {
        const auto spec = CostSpec::plain([k](double x, double y) { return std::cos(k * y) + x; });
        CHECK(same(mot_lp(M({{0, 1}}), two, spec).coupling, only, 1e-12));
    }
    CHECK(mot_lp(two, four, CostSpec::plain([](double, double) { return 0.0; })).value == 0.0);

    const auto spec = CostSpec::plain([](double x, double y) { return std::exp(-x) * y * y; });
    const MotResult r = mot_lp(two, pm2, spec);
    const Coupling lc = project(shadow_coupling(lift_quantile(two), pm2));
    CHECK(coupling_distance(r.coupling, lc) <= 1e-9);
    CHECK(r.value == doctest::Approx(cost(lc, spec)).epsilon(1e-12));
    check_duality(r.lp);

    CHECK(kind_of([&] { (void)mot_lp(pm2, two, spec); }) == ErrorKind::NotInConvexOrder);
}

TEST_CASE("left curtain minimizes decreasing-convex costs") {
    oracle::Generator g(52);
    const auto spec = CostSpec::plain([](double x, double y) { return std::exp(-x) * std::sqrt(1 + y * y); });
    for (int i = 0; i < 30; ++i) {
        const auto [mu, nu] = g.convex_pair(6, 6);
        const MotResult r = mot_lp(mu, nu, spec);
        const Coupling lc = project(shadow_coupling(lift_quantile(mu), nu));
        CHECK(coupling_distance(r.coupling, lc) <= 1e-6);
        CHECK(std::abs(r.value - cost(lc, spec)) <= 1e-8);
        check_duality(r.lp);
    }
}

TEST_CASE("lifted LP with c_pq costs") {
    const Lift l = lift_quantile(two);
    for (double q : {-2.0, 0.0, 1.0})
        CHECK(lifted_mot_lp(l, pm2, CostSpec::cpq(1.0, q)).value ==
              doctest::Approx(0.5 * std::abs(-2 - q) + 0.5 * std::abs(2 - q)).epsilon(1e-12));
    // window {(-2, 3/8), (2, 1/8)} under |y|
    CHECK(lifted_mot_lp(l, pm2, CostSpec::cpq(0.5, 0.0)).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kind_of([&] { (void)lifted_mot_lp(l, pm2, CostSpec::cpq(0.3, 0.0)); }) == ErrorKind::BoundaryMismatch);
    CHECK(kind_of([&] { (void)lifted_mot_lp(lift_quantile(pm2), two, CostSpec::cpq(1.0, 0.0)); }) ==
          ErrorKind::NotInConvexOrder);
    const auto concave = CostSpec::separable(PiecewiseLinear({{0, 1}, {1, 0}}), [](double y) { return -y * y; });
    CHECK(kind_of([&] { (void)lifted_mot_lp(l, four, concave); }) == ErrorKind::InvalidCost);
}

TEST_CASE("lifted LP with a separable cost") {
    oracle::Generator g(53);
    const auto spec =
        CostSpec::separable(PiecewiseLinear({{0, 1}, {1, 0}}), [](double y) { return std::sqrt(1 + y * y); });
    for (int i = 0; i < 5; ++i) {
        const auto [mu, nu] = g.convex_pair(4, 6);
        double prev_gap = INFINITY;
        for (int k : {4, 8, 16, 32}) {
            const Lift l = refine(lift_product(mu), k);
            const LiftedMotResult r = lifted_mot_lp(l, nu, spec);
            check_duality(r.lp);
            // slab-constant shadow coupling is feasible for the LP
            CHECK(r.value <= cost(shadow_coupling(l, nu, 1, SlabRule::Atomwise), spec) + 1e-9);
            // the event-resolved coupling is the continuous optimum, below every slab-constant plan
            const double exact = cost(shadow_coupling(l, nu), spec);
            CHECK(exact <= r.value + 1e-9);
            CHECK(r.value - exact <= prev_gap + 1e-12);
            prev_gap = r.value - exact;
        }
        CHECK(prev_gap <= 1e-2);
    }
}

TEST_CASE("optimality certificate") {
    const Lift l = lift_quantile(two);
    const CertReport ok = certify_optimal(shadow_coupling(l, four), l, four);
    CHECK(ok.pass);
    const LiftedCoupling lc = shadow_coupling(l, four);
    CHECK(ok.checks.size() == (lc.boundaries().size() - 1) * four.size());

    // maximizing a decreasing-convex cost leaves the shadow coupling
    const auto spec = CostSpec::plain([](double x, double y) { return std::exp(-x) * (1 + y * y); });
    const Coupling other = mot_lp(two, four, spec, Sense::Maximize).coupling;
    std::vector<Slice> slices;
    slices.push_back({0.0, 0.5, Coupling(std::vector<PlanEntry>{})});
    slices.push_back({0.5, 1.0, Coupling(std::vector<PlanEntry>{})});
    std::vector<PlanEntry> lo, hi;
    for (const PlanEntry& e : other.entries()) (e.x < 0 ? lo : hi).push_back(e);
    slices[0].plan = Coupling(lo);
    slices[1].plan = Coupling(hi);
    const CertReport bad = certify_optimal(LiftedCoupling(slices), l, four);
    CHECK_FALSE(bad.pass);

    // a single martingale coupling certifies trivially
    const LiftedCoupling unique({{0, 1, Coupling({{0, -1, 0.5}, {0, 1, 0.5}})}});
    CHECK(certify_optimal(unique, lift_product(M({{0, 1}})), two).pass);
}

TEST_CASE("certificates for the canonical lifts") {
    oracle::Generator g(54);
    for (int i = 0; i < 10; ++i) {
        const auto [mu, nu] = g.convex_pair(4, 6);
        for (const std::string name : {"left-curtain", "right-curtain", "sunset", "middle"}) {
            const Lift l = name == "sunset" ? refine(lift_product(mu), 8) : lift_preset(name, mu);
            const CertReport r = certify_optimal(shadow_coupling(l, nu), l, nu);
            CHECK(r.pass);
        }
    }
}
