#include "shadowmt/closed_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shadowmt/error.hpp"

namespace shadowmt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ClosedSet::ClosedSet(std::vector<Component> components) {
    for (const Component& c : components)
        if (std::isnan(c.lo) || std::isnan(c.hi) || c.lo > c.hi || c.lo == kInf || c.hi == -kInf)
            throw Error(ErrorKind::OutOfRange, "malformed closed-set component");
    std::sort(components.begin(), components.end(),
              [](const Component& a, const Component& b) { return a.lo < b.lo; });
    for (const Component& c : components) {
        if (!components_.empty() && c.lo <= components_.back().hi + kEps) {
            components_.back().hi = std::max(components_.back().hi, c.hi);
        } else {
            components_.push_back(c);
        }
    }
}

ClosedSet ClosedSet::from_points(std::span<const double> points) {
    std::vector<Component> c;
    c.reserve(points.size());
    for (double p : points) c.push_back({p, p});
    return ClosedSet(std::move(c));
}

ClosedSet ClosedSet::real_line() { return ClosedSet({{-kInf, kInf}}); }

double ClosedSet::inf() const {
    if (empty()) throw Error(ErrorKind::EmptySet, "inf of the empty set");
    return components_.front().lo;
}

double ClosedSet::sup() const {
    if (empty()) throw Error(ErrorKind::EmptySet, "sup of the empty set");
    return components_.back().hi;
}

bool ClosedSet::contains(double x) const {
    for (const Component& c : components_)
        if (x >= c.lo - kEps && x <= c.hi + kEps) return true;
    return false;
}

bool ClosedSet::interior_contains(double x) const {
    for (const Component& c : components_)
        if (x > c.lo && x < c.hi) return true;
    return false;
}

double ClosedSet::left_of(double x) const {
    double best = -kInf;
    for (const Component& c : components_) {
        if (c.lo > x + kEps) break;
        if (c.hi >= x - kEps) return x;
        best = c.hi;
    }
    return best;
}

double ClosedSet::right_of(double x) const {
    for (const Component& c : components_) {
        if (c.hi < x - kEps) continue;
        return c.lo <= x + kEps ? x : c.lo;
    }
    return kInf;
}

double ClosedSet::level_below(double x) const {
    double best = -kInf;
    for (const Component& c : components_) {
        if (c.lo < x) best = std::max(best, c.lo);
        if (c.hi < x) best = std::max(best, c.hi);
    }
    return best;
}

double ClosedSet::level_above(double x) const {
    double best = kInf;
    for (const Component& c : components_) {
        if (c.lo > x) best = std::min(best, c.lo);
        if (c.hi > x) best = std::min(best, c.hi);
    }
    return best;
}

bool ClosedSet::subset_of(const ClosedSet& other) const {
    for (const Component& c : components_) {
        const bool covered = std::any_of(
            other.components_.begin(), other.components_.end(),
            [&](const Component& o) { return c.lo >= o.lo - kEps && c.hi <= o.hi + kEps; });
        if (!covered) return false;
    }
    return true;
}

bool ClosedSet::in_class_I() const { return !empty() && inf() == -kInf && sup() == kInf; }

ClosedSet extend_to_I(const ClosedSet& t) {
    if (t.empty()) throw Error(ErrorKind::EmptySet, "cannot extend the empty set");
    std::vector<Component> c(t.components().begin(), t.components().end());
    if (t.inf() > -kInf) c.push_back({-kInf, t.inf()});
    if (t.sup() < kInf) c.push_back({t.sup(), kInf});
    return ClosedSet(std::move(c));
}

ClosedSet extend_to_I(const ClosedSet& t, double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw Error(ErrorKind::OutOfRange, "outer levels must be numbers");
    std::vector<Component> c(t.components().begin(), t.components().end());
    c.push_back({-kInf, lo});
    c.push_back({hi, kInf});
    return ClosedSet(std::move(c));
}

const ClosedSet& Barrier::section_at(double u) const {
    if (sections.empty()) throw Error(ErrorKind::EmptySet, "barrier without sections");
    const auto it = std::upper_bound(grid.begin(), grid.end(), u);
    const std::size_t k = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    return sections[std::min(k, sections.size() - 1)];
}

bool Barrier::nested() const {
    for (std::size_t k = 1; k < sections.size(); ++k)
        if (!sections[k].subset_of(sections[k - 1])) return false;
    return true;
}

} // namespace shadowmt
