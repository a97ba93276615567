#include "helpers.hpp"
#include "shadowmt/barrier_sim.hpp"
#include "shadowmt/coupling.hpp"
#include "shadowmt/philox.hpp"

namespace {

constexpr double inf = INFINITY;

Barrier constant(const ClosedSet& s) { return Barrier{{0.0}, {s}}; }

SimConfig config(std::uint64_t paths, double step = 1e-2) {
    SimConfig c;
    c.paths = paths;
    c.step = step;
    return c;
}

} // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and independent of order") {
    PhiloxStream a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 10; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x != c.uniform());
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
    PhiloxStream n(1, 0);
    double s = 0.0, s2 = 0.0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double z = n.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / count) < 0.01);
    CHECK(std::abs(s2 / count - 1.0) < 0.02);
}

TEST_CASE("configuration validation") {
    SimConfig c;
    c.paths = 0;
    CHECK(kind_of([&] { c.validate(); }) == ErrorKind::OutOfRange);
    c.paths = 1;
    c.step = 0;
    CHECK(kind_of([&] { c.validate(); }) == ErrorKind::OutOfRange);
    const Lift l = lift_product(M({{0, 1}}));
    CHECK(kind_of([&] { (void)simulate(l, constant(ClosedSet::from_points(std::vector<double>{-1, 1})), config(10)); }) ==
          ErrorKind::OutOfRange);
}

TEST_CASE("a full-line barrier stops at once") {
    const DiscreteMeasure mu = M({{-1, 0.5}, {1, 0.5}});
    const Lift l = lift_quantile(mu);
    const Barrier b = constant(ClosedSet::real_line());
    for (StopRule rule : {StopRule::Closed, StopRule::Open}) {
        SimConfig c = config(2000);
        c.rule = rule;
        const SimResult r = simulate(l, b, c);
        for (const Slice& s : r.coupling.slices())
            for (const PlanEntry& e : s.plan.entries()) CHECK(e.x == e.y);
        CHECK(r.mean_steps == 0.0);
    }
    CHECK(open_vs_closed(l, b, config(2000)).distance == 0.0);
}

TEST_CASE("symmetric exit from an interval") {
    const Lift l = lift_product(M({{0, 1}}));
    const Barrier b = constant(ClosedSet({{-inf, -1}, {1, inf}}));
    SimConfig c = config(20000, 1e-3);
    const SimResult r = simulate(l, b, c);
    const DiscreteMeasure y = project(r.coupling).y_marginal();
    REQUIRE(y.size() == 2);
    CHECK(y[0].x == -1);
    CHECK(y[1].x == 1);
    // binomial standard error is 0.0035
    CHECK(std::abs(y[0].m - 0.5) < 0.015);
    CHECK(std::abs(r.mean_stop) <= 3 * r.stderr_stop + 1e-12);
    // expected exit time of the unit interval is 1, i.e. 1/h steps
    CHECK(r.mean_steps == doctest::Approx(1000).epsilon(0.1));
    const OpenClosedReport oc = open_vs_closed(l, b, c);
    CHECK(oc.distance <= 2 * 0.015);
}

TEST_CASE("results do not depend on the thread count") {
    const DiscreteMeasure mu = M({{-1, 0.5}, {1, 0.5}});
    const DiscreteMeasure nu = M({{-2, 0.5}, {2, 0.5}});
    const Lift l = lift_quantile(mu);
    const Barrier b = exact_barrier(l, nu);
    SimConfig c = config(3000);
    const SimResult one = simulate(l, b, c);
    c.threads = 4;
    const SimResult many = simulate(l, b, c);
    CHECK(same(project(one.coupling), project(many.coupling), 0.0));
    CHECK(one.mean_stop == many.mean_stop);
    CHECK(one.mean_steps == many.mean_steps);
    c.seed = 1;
    CHECK_FALSE(same(project(simulate(l, b, c).coupling), project(one.coupling), 0.0));
}

TEST_CASE("step cap") {
    const Lift l = lift_product(M({{0, 1}}));
    const Barrier b = constant(ClosedSet({{-inf, -10}, {10, inf}}));
    SimConfig c = config(100, 1e-3);
    c.max_steps = 10;
    CHECK(kind_of([&] { (void)simulate(l, b, c); }) == ErrorKind::MaxStepsExceeded);
}

TEST_CASE("open stopping from a level") {
    // start on the isolated level 0: the closed rule stops, the open rule leaves it
    const Lift l = lift_product(M({{0, 1}}));
    const Barrier b = constant(ClosedSet({{-inf, -1}, {0, 0}, {1, inf}}));
    SimConfig c = config(2000, 1e-3);
    const SimResult closed = simulate(l, b, c);
    c.rule = StopRule::Open;
    const SimResult open = simulate(l, b, c);
    CHECK(closed.mean_steps == 0.0);
    CHECK(open.mean_steps > 0.0);
    const DiscreteMeasure y = project(open.coupling).y_marginal();
    CHECK(y.size() == 3);
    CHECK(y.cdf(0) - y.cdf(-0.5) > 0.9);
}

TEST_CASE("comparison report") {
    const LiftedCoupling a({{0, 0.5, Coupling({{-1, -2, 0.375}, {-1, 2, 0.125}})},
                            {0.5, 1, Coupling({{1, -2, 0.125}, {1, 2, 0.375}})}});
    const CompareReport same_rep = compare(a, a, 4);
    CHECK(same_rep.projected == 0.0);
    CHECK(same_rep.worst_bin == 0.0);
    CHECK(same_rep.bins.size() == 4);
    const LiftedCoupling b({{0, 1, Coupling({{-1, 5, 0.5}, {1, 7, 0.5}})}});
    const CompareReport diff = compare(a, b, 2);
    CHECK(diff.projected > 1.0);
    CHECK(diff.worst_bin > 1.0);
    CHECK(kind_of([&] { (void)compare(a, a, 0); }) == ErrorKind::OutOfRange);
}
