#include <algorithm>

#include "helpers.hpp"
#include "shadowmt/mot.hpp"
#include "shadowmt/shadow.hpp"
#include "support/oracles.hpp"

namespace {
ClosedSet points(std::vector<double> p) { return ClosedSet::from_points(p); }

const DiscreteMeasure four = M({{-2, 0.25}, {-1, 0.25}, {1, 0.25}, {2, 0.25}});
} // namespace

TEST_CASE("Kellerer dilation") {
    CHECK(same(dilation(points({-1, 1}), 0), M({{-1, 0.5}, {1, 0.5}})));
    CHECK(same(dilation(points({-1, 1}), 1), M({{1, 1}})));
    CHECK(same(dilation(points({-2, 2}), 1), M({{-2, 0.25}, {2, 0.75}})));
    CHECK(kind_of([] { (void)dilation(points({-1, 1}), 3); }) == ErrorKind::OutsideHull);
    CHECK(same(dilation(ClosedSet({{-1, 1}}), 0.3), M({{0.3, 1}})));
}

TEST_CASE("dilation has barycenter x and fixes t") {
    oracle::Generator g(21);
    for (int i = 0; i < 50; ++i) {
        const DiscreteMeasure m = g.measure(g.integer(2, 6), -8, 8);
        const ClosedSet t = closed_support(m);
        for (const Atom& a : m.atoms()) CHECK(same(dilation(t, a.x), M({{a.x, 1}})));
        for (int k = 0; k < 10; ++k) {
            const double x = g.real(t.inf(), t.sup());
            const DiscreteMeasure d = dilation(t, x);
            CHECK(d.mass() == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(d.barycenter() == doctest::Approx(x).epsilon(1e-13));
            CHECK(d.size() <= 2);
        }
    }
}

TEST_CASE("dilation coupling") {
    CHECK(same(dilation_coupling(M({{0, 1}}), points({-1, 1})), Coupling({{0, -1, 0.5}, {0, 1, 0.5}})));
    CHECK(same(dilation_coupling(four, points({-2, -1, 1, 2})),
               Coupling({{-2, -2, 0.25}, {-1, -1, 0.25}, {1, 1, 0.25}, {2, 2, 0.25}})));
    CHECK(same(dilation_coupling(M({{-1, 0.5}, {1, 0.5}}), points({-2, 0, 2})),
               Coupling({{-1, -2, 0.25}, {-1, 0, 0.25}, {1, 0, 0.25}, {1, 2, 0.25}})));
    CHECK(kind_of([] { (void)dilation_coupling(M({{5, 1}}), points({-1, 1})); }) == ErrorKind::OutsideHull);
}

TEST_CASE("shadow of a single atom") {
    CHECK(same(shadow_atom(four, 0, 1), four));
    CHECK(same(shadow_atom(four, 0, 0.5), M({{-1, 0.25}, {1, 0.25}})));
    CHECK(same(shadow_atom(M({{-1, 0.5}, {1, 0.5}}), -1, 0.5), M({{-1, 0.5}})));
    CHECK(kind_of([] { (void)shadow_atom(four, 0, 1.5); }) == ErrorKind::NotDominated);
    CHECK(kind_of([] { (void)shadow_atom(four, 3, 0.1); }) == ErrorKind::NotDominated);
}

TEST_CASE("single-atom shadow is the min-variance window") {
    oracle::Generator g(22);
    for (int i = 0; i < 60; ++i) {
        const DiscreteMeasure target = g.measure(g.integer(1, 7), -6, 6);
        const double a = g.real(0.05, 1.0);
        const double s = g.real(0.0, 1.0 - a);
        const double x = oracle::slice(target, s, a).barycenter();
        const DiscreteMeasure w = shadow_atom(target, x, a);
        CHECK(w.mass() == doctest::Approx(a).epsilon(1e-12));
        CHECK(w.barycenter() == doctest::Approx(x).epsilon(1e-12));
        CHECK(same(w, oracle::window_scan(target, x, a), 1e-9));
        CHECK(w1(w, oracle::shadow_lp(M({{x, a}}), target)) <= 1e-7);
    }
}

TEST_CASE("shadow and residual examples") {
    const DiscreteMeasure pm2 = M({{-2, 0.5}, {2, 0.5}});
    CHECK(same(shadow(four, four), four));
    CHECK(same(shadow(pm2, M({{-1, 0.5}})), M({{-2, 0.375}, {2, 0.125}})));
    CHECK(same(shadow(four, M({{0, 1}})), four));
    CHECK(residual(four, four).empty());
    CHECK(same(residual(pm2, M({{-1, 0.5}})), M({{-2, 0.125}, {2, 0.375}})));
    CHECK(same(residual(four, DiscreteMeasure()), four));
    CHECK(kind_of([&] { (void)shadow(M({{-1, 0.5}, {1, 0.5}}), pm2); }) == ErrorKind::NotDominated);
}

TEST_CASE("shadow properties and the min-second-moment oracle") {
    oracle::Generator g(23);
    for (int i = 0; i < 60; ++i) {
        const auto [source, target] = g.dominated_pair(5, 8);
        const DiscreteMeasure s = shadow(target, source);
        CHECK(s.mass() == doctest::Approx(source.mass()).epsilon(1e-12));
        CHECK(s.first_moment() == doctest::Approx(source.first_moment()).epsilon(1e-10));
        CHECK(leq_convex_positive(s, target));
        CHECK(leq_convex(source, s));
        CHECK(w1(s, oracle::shadow_lp(source, target)) <= 1e-7);
    }
}

TEST_CASE("iterated shadows do not depend on the decomposition") {
    oracle::Generator g(24);
    for (int i = 0; i < 30; ++i) {
        const auto [source, target] = g.dominated_pair(5, 8);
        const DiscreteMeasure whole = shadow(target, source);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<Atom> fragments;
            for (const Atom& a : source.atoms()) {
                const double cut = g.real(0.1, 0.9);
                fragments.push_back({a.x, a.m * cut});
                fragments.push_back({a.x, a.m * (1 - cut)});
            }
            std::shuffle(fragments.begin(), fragments.end(), g.engine());
            ShadowResidual r(target);
            DiscreteMeasure acc;
            for (const Atom& f : fragments) acc = add(acc, r.take_atom(f.x, f.m));
            CHECK(w1(acc, whole) <= 1e-7);
            CHECK(w1(r.measure(), residual(target, source)) <= 1e-7);
        }
    }
}

TEST_CASE("residual keeps its total mass under compaction") {
    ShadowResidual r(M({{-3, 1.0 / 3}, {0, 1.0 / 3}, {3, 1.0 / 3}}));
    double taken = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double a = 1.0 / 400;
        taken += r.take_atom(0.0, a).mass();
    }
    CHECK(r.mass() + taken == doctest::Approx(1.0).epsilon(1e-13));
    for (const Atom& a : r.atoms()) CHECK(a.m >= kEps);
}

TEST_CASE("shadows of dilated targets approach the dilation") {
    oracle::Generator g(25);
    for (int i = 0; i < 10; ++i) {
        const DiscreteMeasure ups = g.measure(g.integer(2, 5), -6, 6);
        const ClosedSet t = closed_support(ups);
        double lightest = 1.0;
        for (const Atom& a : ups.atoms()) lightest = std::min(lightest, a.m);
        // total mass at most 2 * lightest keeps eta P_T below 2 ups, so every H is admissible
        std::vector<Atom> eta;
        const int n = g.integer(1, 3);
        for (int k = 0; k < n; ++k) eta.push_back({g.real(t.inf(), t.sup()), 2.0 * lightest * g.real(0.2, 1.0) / n});
        const DiscreteMeasure e(eta);
        const DiscreteMeasure limit = dilation_coupling(e, t).y_marginal();
        double prev = INFINITY;
        for (int h = 2; h <= 4096; h *= 2) {
            const double d = w1(shadow(scale(ups, h), e), limit);
            CHECK(d <= prev + 1e-10);
            prev = d;
        }
        CHECK(prev <= 1e-3);
    }
}

TEST_CASE("a dilated target admits a single martingale coupling") {
    oracle::Generator g(26);
    for (int i = 0; i < 5; ++i) {
        const DiscreteMeasure ups = g.measure(g.integer(3, 5), -6, 6);
        const ClosedSet t = closed_support(ups);
        std::vector<Atom> m;
        for (int k = 0; k < 3; ++k) m.push_back({static_cast<double>(g.integer(int(t.inf()), int(t.sup()))), 1.0 / 3});
        const DiscreteMeasure mu(m);
        const Coupling expected = dilation_coupling(mu, t);
        const DiscreteMeasure nu = expected.y_marginal();
        for (int c = 0; c < 20; ++c) {
            const double a = g.real(-2, 2), b = g.real(-2, 2), d = g.real(-1, 1);
            const auto spec = CostSpec::plain([=](double x, double y) { return std::sin(a * x + b * y) + d * x * y; });
            CHECK(coupling_distance(mot_lp(mu, nu, spec).coupling, expected) <= 1e-7);
        }
    }
}
