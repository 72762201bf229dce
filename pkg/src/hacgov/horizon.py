"""Collective autonomy index, accountability horizons, and classification.

The structural horizon depends only on the smallest mixed-cycle size, so it
is immune to profile measurement error; the combined horizon additionally
caps it at one minus the non-triviality threshold. Classification compares
the minimum compound autonomy against the combined horizon inside an
explicit margin band: measurement error widens the band downward by twice
the per-component allowance, model error widens it upward.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import HacSpec, aggregate_autonomy, compound_autonomy
from .errors import ValidationError

GOVERNABLE = "Governable"
UNGOVERNABLE = "Ungovernable"
NO_MIXED_CYCLE = "NoMixedCycle"
INDETERMINATE = "Indeterminate"

# Boundary comparisons allow this much slack: sitting exactly on the
# horizon is classified Governable because the impossibility needs a strict
# exceedance.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class HorizonReport:
    """Everything the governability verdict rests on, in one record."""

    cai: float
    lambda_hat: float | None
    c_min_size: int | None
    horizon: float | None
    combined_horizon: float | None
    budget: float | None
    deficit: float
    classification: str
    margin_used: float
    centrality_warning: bool = False


def collective_autonomy_index(hac: HacSpec):
    """Mean aggregate autonomy weighted by normalized out-degree centrality.

    Returns ``(value, warning)``; the warning flags the degenerate case
    where every artificial agent has zero out-degree, in which case the
    index is zero by the centrality convention rather than a division.
    """
    artificials = hac.artificials()
    if not artificials:
        raise ValidationError([("agents", "no artificial agents")])
    degrees = {a.id: hac.graph.out_degree(a.id) for a in artificials}
    max_degree = max(degrees.values())
    if max_degree == 0:
        return 0.0, True
    total = 0.0
    for a in artificials:
        eta = degrees[a.id] / max_degree
        total += aggregate_autonomy(a.profile, hac.weights) * eta
    return total / len(artificials), False


def min_compound_autonomy(hac: HacSpec, m_star) -> float | None:
    """Minimum compound autonomy over the mixed-cycle agents, if any."""
    values = [
        compound_autonomy(a.profile) for a in hac.artificials() if a.id in m_star
    ]
    return min(values) if values else None


def accountability_horizon(c_min_size: int) -> float:
    """Structural horizon 1 - 1/|smallest mixed cycle|."""
    if c_min_size < 2:
        raise ValidationError(
            [("c_min_size", f"mixed cycles have at least 2 agents, got {c_min_size}")]
        )
    return 1.0 - 1.0 / c_min_size


def relaxed_horizon(c_min_size: int, gamma: float) -> float:
    """Diagnostic horizon 1 - gamma/|C_min| for partial allocation gamma.

    Report-only: classification always uses full allocation (gamma = 1).
    """
    if not 0.0 < gamma <= 1.0:
        raise ValidationError([("gamma", f"gamma out of range (0,1]: {gamma!r}")])
    if c_min_size < 2:
        raise ValidationError(
            [("c_min_size", f"mixed cycles have at least 2 agents, got {c_min_size}")]
        )
    return 1.0 - gamma / c_min_size


def combined_horizon(c_min_size: int, tau: float) -> float:
    """min(structural horizon, 1 - tau): the binding impossibility threshold."""
    if not 0.0 < tau < 1.0:
        raise ValidationError([("tau", f"tau out of range (0,1): {tau!r}")])
    return min(accountability_horizon(c_min_size), 1.0 - tau)


def deficit_and_budget(lambda_hat: float, c_min_size: int):
    """Epistemic budget and the unallocatable deficit above the horizon."""
    if not 0.0 <= lambda_hat <= 1.0:
        raise ValidationError(
            [("lambda_hat", f"compound autonomy out of range [0,1]: {lambda_hat!r}")]
        )
    budget = c_min_size * (1.0 - lambda_hat)
    deficit = max(0.0, 1.0 - budget)
    return budget, deficit


def classify(hac: HacSpec, cycle_report, lambda_hat: float | None) -> HorizonReport:
    """Assemble the full report and the governability verdict.

    ``cycle_report`` may be any object exposing ``c_min_size`` (a full
    :class:`~hacgov.cycles.CycleReport` or the fast summary). With zero
    error allowances the comparison is sharp and the boundary itself is
    Governable; otherwise values inside the band
    [combined - 2*delta_meas, combined + delta_model] are Indeterminate.
    """
    cai, warning = collective_autonomy_index(hac)
    margin = 2.0 * hac.delta_meas + hac.delta_model
    c_min = cycle_report.c_min_size

    if c_min is None:
        return HorizonReport(
            cai=cai,
            lambda_hat=None,
            c_min_size=None,
            horizon=None,
            combined_horizon=None,
            budget=None,
            deficit=0.0,
            classification=NO_MIXED_CYCLE,
            margin_used=margin,
            centrality_warning=warning,
        )

    if lambda_hat is None:
        raise ValidationError(
            [("lambda_hat", "mixed cycles present but no compound autonomy supplied")]
        )

    horizon = accountability_horizon(c_min)
    combined = combined_horizon(c_min, hac.tau)
    budget, deficit = deficit_and_budget(lambda_hat, c_min)

    if margin <= BOUNDARY_TOL:
        if lambda_hat <= combined + BOUNDARY_TOL:
            verdict = GOVERNABLE
        else:
            verdict = UNGOVERNABLE
    else:
        low = combined - 2.0 * hac.delta_meas
        high = combined + hac.delta_model
        if lambda_hat > high + BOUNDARY_TOL:
            verdict = UNGOVERNABLE
        elif lambda_hat < low - BOUNDARY_TOL:
            verdict = GOVERNABLE
        else:
            verdict = INDETERMINATE

    return HorizonReport(
        cai=cai,
        lambda_hat=lambda_hat,
        c_min_size=c_min,
        horizon=horizon,
        combined_horizon=combined,
        budget=budget,
        deficit=deficit,
        classification=verdict,
        margin_used=margin,
        centrality_warning=warning,
    )


def analyze(hac: HacSpec, cycle_info) -> HorizonReport:
    """Convenience wrapper: derive the compound autonomy and classify."""
    lam = min_compound_autonomy(hac, cycle_info.m_star)
    return classify(hac, cycle_info, lam)
