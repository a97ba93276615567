"""Shadow martingale couplings between finitely-atomic measures on the line."""

from ._core import (
    Coupling,
    LiftedCoupling,
    Lift,
    Measure,
    ShadowError,
    certify_optimal,
    check_lipschitz,
    check_martingale,
    check_monotone,
    check_shadow_property,
    leq_convex,
    leq_convex_positive,
    leq_diatomic,
    leq_stochastic,
    lift,
    mot_lp,
    project,
    shadow,
    shadow_coupling,
    simulate,
    w1,
)

__all__ = [
    "Coupling",
    "LiftedCoupling",
    "Lift",
    "Measure",
    "ShadowError",
    "certify_optimal",
    "check_lipschitz",
    "check_martingale",
    "check_monotone",
    "check_shadow_property",
    "leq_convex",
    "leq_convex_positive",
    "leq_diatomic",
    "leq_stochastic",
    "lift",
    "mot_lp",
    "project",
    "shadow",
    "shadow_coupling",
    "simulate",
    "w1",
]
