#pragma once

#include <span>
#include <vector>

namespace shadowmt {

/// One component of a closed set: a point (lo == hi), an interval, or a ray
/// (lo == -inf or hi == +inf).
struct Component {
    double lo;
    double hi;

    bool is_point() const { return lo == hi; }
    friend bool operator==(const Component&, const Component&) = default;
};

/// Finite union of points, closed intervals and rays, stored as sorted,
/// disjoint, maximal components.
class ClosedSet {
public:
    ClosedSet() = default;
    explicit ClosedSet(std::vector<Component> components);

    static ClosedSet from_points(std::span<const double> points);
    static ClosedSet real_line();

    std::span<const Component> components() const& { return components_; }
    std::vector<Component> components() && { return std::move(components_); }
    bool empty() const { return components_.empty(); }

    /// Infimum / supremum; may be infinite. Throw EmptySet on the empty set.
    double inf() const;
    double sup() const;

    bool contains(double x) const;
    bool interior_contains(double x) const;

    /// sup(T n ]-inf, x]) and inf(T n [x, +inf[); -inf / +inf when absent.
    double left_of(double x) const;
    double right_of(double x) const;

    /// Nearest component endpoint strictly below / above x (+-inf if none).
    double level_below(double x) const;
    double level_above(double x) const;

    /// True if every component lies inside some component of `other`.
    bool subset_of(const ClosedSet& other) const;

    /// Unbounded on both sides.
    bool in_class_I() const;

    friend bool operator==(const ClosedSet&, const ClosedSet&) = default;

private:
    std::vector<Component> components_;
};

/// ]-inf, inf T] u T u [sup T, +inf[. Throws EmptySet when t is empty.
ClosedSet extend_to_I(const ClosedSet& t);
/// t u ]-inf, lo] u [hi, +inf[ with fixed outer levels; agrees with the
/// one-argument form whenever lo = inf t and hi = sup t.
ClosedSet extend_to_I(const ClosedSet& t, double lo, double hi);

/// u-indexed family of sections. Section k applies to u in [grid[k], grid[k+1]).
struct Barrier {
    std::vector<double> grid;
    std::vector<ClosedSet> sections;

    const ClosedSet& section_at(double u) const;
    /// R_v is a subset of R_u whenever u <= v.
    bool nested() const;
};

} // namespace shadowmt
