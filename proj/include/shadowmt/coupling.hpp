#pragma once

#include <span>
#include <string>
#include <vector>

#include "shadowmt/closed_set.hpp"
#include "shadowmt/cost.hpp"
#include "shadowmt/lift.hpp"
#include "shadowmt/measure.hpp"
#include "shadowmt/plan.hpp"

namespace shadowmt {

/// How a slab's mass is assigned inside the running residual.
///
/// Atomwise shadows the slab's atoms one at a time, in increasing position,
/// into the residual. Dilation follows the continuous-time construction:
/// inside a slab the residual is consumed through the Kellerer dilation onto
/// its current support, re-split whenever a residual atom runs out. Both give
/// the same y-marginal at every slab boundary; Dilation is the exact
/// continuous-u limit for piecewise-constant lifts.
enum class SlabRule { Dilation, Atomwise };

/// Lifted shadow coupling of l and nu, each lift piece split into k slabs.
LiftedCoupling shadow_coupling(const Lift& l, const DiscreteMeasure& nu, int k = 1,
                               SlabRule rule = SlabRule::Dilation);

/// nu_[0,u] = S^nu(mu_[0,u]) for each u of the grid.
std::vector<DiscreteMeasure> shadow_curve(const Lift& l, const DiscreteMeasure& nu,
                                          std::span<const double> grid);

/// R_u = supp(nu - nu_[0,u]) u ]-inf, min supp nu] u [max supp nu, +inf[ for
/// each u of the grid. The outer rays are fixed, so the family is nested.
Barrier barrier_family(const Lift& l, const DiscreteMeasure& nu, std::span<const double> grid);

/// u at which each atom of nu is used up by the shadow curve (1 if never
/// before the end), in atom order.
std::vector<double> exhaustion_times(const Lift& l, const DiscreteMeasure& nu);

/// Barrier whose grid is 0 plus the exhaustion times: the sections are
/// exactly constant in between.
Barrier exact_barrier(const Lift& l, const DiscreteMeasure& nu);

struct CheckReport {
    bool pass = true;
    double worst = 0.0;
    std::vector<std::string> details;
};

CheckReport check_martingale(const Coupling& c, double tol);
CheckReport check_martingale(const LiftedCoupling& lc, double tol);

/// Slice s sends x to y_minus and y_plus, a later slice t sends x_prime to
/// y_prime strictly in between.
struct MonotoneViolation {
    std::size_t s;
    std::size_t t;
    double x;
    double y_minus;
    double y_plus;
    double x_prime;
    double y_prime;
};

std::vector<MonotoneViolation> monotone_violations(const LiftedCoupling& lc, double tol = 1e-6);
CheckReport check_monotone(const LiftedCoupling& lc, double tol = 1e-6);

/// w1 of the y-prefix against the shadow curve at every slice boundary.
CheckReport check_shadow_property(const LiftedCoupling& lc, const Lift& l, const DiscreteMeasure& nu,
                                  double tol);

DiscreteMeasure kernel(const Coupling& c, double x);
/// w1(kernel(x), kernel(x')) <= |x - x'| + tol over all pairs of x-atoms.
CheckReport check_lipschitz(const Coupling& c, double tol);

/// Two-graph structure of a left-curtain coupling, read slice by slice: at most
/// two targets T_down <= x <= T_up per (slice, x), T_up nondecreasing along the
/// slices and T_down of a later slice never strictly inside an earlier
/// [T_down, T_up].
CheckReport check_two_graph(const LiftedCoupling& lc, double tol);

DiscreteMeasure stochastic_shadow(const DiscreteMeasure& nu, double u);
/// North-west corner coupling of the quantile functions. Masses must agree.
Coupling quantile_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
/// Slab by slab, conditional (x) independent of the next quantile window of
/// nu (y). Not a martingale coupling in general.
LiftedCoupling stochastic_shadow_coupling(const Lift& l, const DiscreteMeasure& nu);

/// Middle-curtain slice at a single u: mass a at f and 1 - a at g, sent to the
/// outer points f_out <= f <= g <= g_out with martingale weights.
Coupling middle_slice_formula(double f, double g, double f_out, double g_out, double a);

/// Integral of the cost against lc with the u-factor averaged exactly per slice.
double cost(const LiftedCoupling& lc, const CostSpec& c);
/// Integral of c against a plain coupling, u-factor averaged over [0, 1].
double cost(const Coupling& pi, const CostSpec& c);

} // namespace shadowmt
