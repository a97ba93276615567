#pragma once

#include <vector>

#include "shadowmt/closed_set.hpp"
#include "shadowmt/measure.hpp"
#include "shadowmt/plan.hpp"

namespace shadowmt {

/// Atom positions carrying more than kEps mass.
ClosedSet closed_support(const DiscreteMeasure& m);

/// Kellerer dilation P_T(x, .). Requires x in [inf t, sup t].
DiscreteMeasure dilation(const ClosedSet& t, double x);

/// m(id x P_T). Requires supp(m) inside [inf t, sup t].
Coupling dilation_coupling(const DiscreteMeasure& m, const ClosedSet& t);

/// Shadow of the atom a * delta_x in `target`: the quantile window of mass a
/// whose barycenter is x (smallest left edge on ties).
DiscreteMeasure shadow_atom(const DiscreteMeasure& target, double x, double a);

/// S^target(source), built atom by atom in increasing position.
DiscreteMeasure shadow(const DiscreteMeasure& target, const DiscreteMeasure& source);

/// target - S^target(source).
DiscreteMeasure residual(const DiscreteMeasure& target, const DiscreteMeasure& source);

/// Running residual nu - S^nu(gamma_1 + ... + gamma_k) for iterated shadows.
///
/// Each take() shadows a measure into what is left and removes the result.
/// Residual fragments lighter than kEps are deleted and their mass spread
/// proportionally over the surviving atoms, so the total stays exact.
class ShadowResidual {
public:
    explicit ShadowResidual(const DiscreteMeasure& target);

    /// Window of a * delta_x in the current residual; removed from it.
    DiscreteMeasure take_atom(double x, double a);
    /// Shadow of `source` in the current residual; removed from it.
    DiscreteMeasure take(const DiscreteMeasure& source);

    const std::vector<Atom>& atoms() const { return rest_; }
    DiscreteMeasure measure() const { return DiscreteMeasure(rest_); }
    double mass() const;

private:
    void compact();

    std::vector<Atom> rest_;
};

} // namespace shadowmt
