#pragma once

#include <vector>

#include "shadowmt/cost.hpp"
#include "shadowmt/lift.hpp"
#include "shadowmt/lp.hpp"
#include "shadowmt/measure.hpp"
#include "shadowmt/plan.hpp"

namespace shadowmt {

enum class Sense { Minimize, Maximize };

struct MotResult {
    double value = 0.0;
    Coupling coupling;
    LpSolution lp;
};

/// Optimal martingale transport between mu and nu for a cost whose u-factor is
/// averaged over [0, 1].
MotResult mot_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost,
                 Sense sense = Sense::Minimize);

struct LiftedMotResult {
    double value = 0.0;
    LiftedCoupling coupling;
    LpSolution lp;
};

/// Optimal lifted martingale transport over slab-constant couplings of l.
///
/// Consecutive slabs with the same u-weight are pooled into one block of
/// variables; the optimal block plan is spread back over its slabs in
/// proportion to their x-masses, so pooling loses nothing. For c_{p,q} the
/// level p must be a slab boundary (BoundaryMismatch otherwise).
LiftedMotResult lifted_mot_lp(const Lift& l, const DiscreteMeasure& nu, const CostSpec& cost,
                              Sense sense = Sense::Minimize);

struct CertCheck {
    double p;
    double q;
    double coupling_cost;
    double lp_value;
    bool pass;
};

struct CertReport {
    std::vector<CertCheck> checks;
    bool pass = true;
};

/// cost(lc, c_{p,q}) <= lifted LP value + tol (1 + |value|) for every slice
/// boundary p > 0 of lc and every atom q of nu.
CertReport certify_optimal(const LiftedCoupling& lc, const Lift& l, const DiscreteMeasure& nu,
                           double tol = 1e-7);

} // namespace shadowmt
