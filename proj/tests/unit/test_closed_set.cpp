#include "helpers.hpp"
#include "shadowmt/closed_set.hpp"
#include "shadowmt/shadow.hpp"

namespace {
constexpr double inf = INFINITY;

ClosedSet points(std::vector<double> p) { return ClosedSet::from_points(p); }
} // namespace

TEST_CASE("components are sorted, merged and maximal") {
    const ClosedSet s({{3, 4}, {-1, -1}, {0, 2}, {2, 3}, {-inf, -5}});
    REQUIRE(s.components().size() == 3);
    CHECK(s.components()[0] == Component{-inf, -5});
    CHECK(s.components()[1] == Component{-1, -1});
    CHECK(s.components()[2] == Component{0, 4});
    CHECK(s.inf() == -inf);
    CHECK(s.sup() == 4);
    CHECK(kind_of([] { (void)ClosedSet().inf(); }) == ErrorKind::EmptySet);
}

TEST_CASE("membership and neighbours") {
    const ClosedSet s({{-inf, -2}, {0, 0}, {1, 3}});
    CHECK(s.contains(-7));
    CHECK(s.contains(0));
    CHECK_FALSE(s.contains(0.5));
    CHECK(s.interior_contains(2));
    CHECK_FALSE(s.interior_contains(0));
    CHECK_FALSE(s.interior_contains(1));
    CHECK(s.left_of(-1) == -2);
    CHECK(s.right_of(-1) == 0);
    CHECK(s.left_of(0.5) == 0);
    CHECK(s.right_of(0.5) == 1);
    CHECK(s.left_of(2) == 2);
    CHECK(s.right_of(4) == inf);
    CHECK(s.level_below(2) == 1);
    CHECK(s.level_above(2) == 3);
    CHECK(s.level_above(3) == inf);
    CHECK_FALSE(s.in_class_I());
}

TEST_CASE("closed support") {
    CHECK(closed_support(M({{-1, 0.5}, {1, 0.5}})) == points({-1, 1}));
    CHECK(closed_support(DiscreteMeasure()).empty());
    CHECK(closed_support(M({{0, 1e-12}})).empty());
}

TEST_CASE("extension to class I") {
    const ClosedSet e = extend_to_I(points({-1, 1}));
    CHECK(e == ClosedSet({{-inf, -1}, {1, inf}}));
    CHECK(e.in_class_I());
    const ClosedSet already({{-inf, 0}, {1, inf}});
    CHECK(extend_to_I(already) == already);
    CHECK(extend_to_I(points({0})) == ClosedSet::real_line());
    CHECK(kind_of([] { (void)extend_to_I(ClosedSet()); }) == ErrorKind::EmptySet);
    CHECK(extend_to_I(ClosedSet(), -2, 2) == ClosedSet({{-inf, -2}, {2, inf}}));
    CHECK(extend_to_I(points({0, 1}), -2, 2) == ClosedSet({{-inf, -2}, {0, 0}, {1, 1}, {2, inf}}));
    CHECK(extend_to_I(points({-1, 1}), -1, 1) == extend_to_I(points({-1, 1})));
}

TEST_CASE("extension leaves the dilation of hull points unchanged") {
    const ClosedSet t = points({-3, -1, 0.5, 2});
    const ClosedSet e = extend_to_I(t);
    for (double x = -3; x <= 2; x += 0.125) CHECK(same(dilation(t, x), dilation(e, x)));
}

TEST_CASE("subsets and barrier nesting") {
    CHECK(points({0}).subset_of(ClosedSet({{-1, 1}})));
    CHECK_FALSE(ClosedSet({{-1, 1}}).subset_of(points({-1, 1})));
    Barrier b{{0.0, 0.5}, {ClosedSet::real_line(), ClosedSet({{-inf, -2}, {2, inf}})}};
    CHECK(b.nested());
    CHECK(b.section_at(0.25) == ClosedSet::real_line());
    CHECK(b.section_at(0.5) == b.sections[1]);
    CHECK(b.section_at(1.0) == b.sections[1]);
    std::swap(b.sections[0], b.sections[1]);
    CHECK_FALSE(b.nested());
}
