#pragma once

#include <span>
#include <vector>

#include "shadowmt/measure.hpp"

namespace shadowmt {

struct PlanEntry {
    double x;
    double y;
    double mass;
};

/// Sparse transport plan on R x R. Entries are sorted by (x, y); entries
/// closer than kEps in both coordinates are merged and zero masses dropped.
class Coupling {
public:
    Coupling() = default;
    explicit Coupling(std::vector<PlanEntry> entries);

    std::span<const PlanEntry> entries() const& { return entries_; }
    std::vector<PlanEntry> entries() && { return std::move(entries_); }
    bool empty() const { return entries_.empty(); }
    double mass() const;

    DiscreteMeasure x_marginal() const;
    DiscreteMeasure y_marginal() const;
    /// Conditional law of y given x, normalized to mass 1. Empty if x is not an atom.
    DiscreteMeasure kernel(double x) const;
    /// Unnormalized restriction of the plan to {x} x R.
    DiscreteMeasure row(double x) const;

private:
    std::vector<PlanEntry> entries_;
};

Coupling add(const Coupling& a, const Coupling& b);
Coupling scale(const Coupling& c, double factor);

/// Distance between couplings of equal total mass: w1 of the x-marginals
/// plus the x-marginal-weighted w1 between conditional kernels. Upper-bounds
/// the Wasserstein-1 distance on R^2 with the l1 ground metric.
double coupling_distance(const Coupling& a, const Coupling& b);

struct Slice {
    double u0;
    double u1;
    Coupling plan;
};

/// u-sliced plan on [0,1] x R x R. Slice plans carry their own mass
/// (length times conditional mass), so prefixes are plain sums.
class LiftedCoupling {
public:
    LiftedCoupling() = default;
    explicit LiftedCoupling(std::vector<Slice> slices);

    std::span<const Slice> slices() const& { return slices_; }
    std::vector<Slice> slices() && { return std::move(slices_); }
    std::vector<double> boundaries() const;

    /// Plan restricted to [0, u] (u-uniform within each slice).
    Coupling prefix(double u) const;
    DiscreteMeasure y_prefix(double u) const;

private:
    std::vector<Slice> slices_;
};

/// Projection onto the (x, y) coordinates.
Coupling project(const LiftedCoupling& lc);

/// Re-bins a lifted coupling onto an arbitrary increasing u-grid, assuming
/// mass is u-uniform within each original slice.
LiftedCoupling rebin(const LiftedCoupling& lc, std::span<const double> grid);

} // namespace shadowmt
