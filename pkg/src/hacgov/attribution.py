"""Responsibility attributions and their audit against the four axioms.

An attribution assigns nonnegative responsibility shares per outcome type;
nothing else is presumed, because summing to one is itself one of the
axioms under audit. The four checks are:

* attributability  - positive share requires positive causal effect
* foreseeability   - share bounded by the agent's epistemic access
* non_vacuity      - some agent's share reaches the governance threshold
* completeness     - shares sum to one

Tolerances: completeness allows 1e-9 on the sum, foreseeability 1e-12
pointwise; the contracts are exact but finite arithmetic needs slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError

ATTRIBUTABILITY = "attributability"
FORESEEABILITY = "foreseeability"
NON_VACUITY = "non_vacuity"
COMPLETENESS = "completeness"

AXIOMS = (ATTRIBUTABILITY, FORESEEABILITY, NON_VACUITY, COMPLETENESS)

SUM_TOL = 1e-9
POINT_TOL = 1e-12

SACRIFICE_COMPLETENESS = "sacrifice_T3"
SACRIFICE_FORESIGHT = "sacrifice_T2"


@dataclass(frozen=True)
class OutcomeTypeTable:
    """Per outcome type: each agent's epistemic access and causal effect.

    ``types`` maps outcome type -> agent -> (epistemic_access, causal_effect).
    ``kinds`` optionally labels agents human/artificial for constructions
    that need to single out a human overseer.
    """

    types: dict
    kinds: dict | None = None

    def __post_init__(self):
        issues = []
        if not self.types:
            issues.append(("types", "no outcome types"))
        agent_sets = {frozenset(row) for row in self.types.values()}
        if len(agent_sets) > 1:
            issues.append(("types", "outcome types cover different agent sets"))
        for otype, row in self.types.items():
            for agent, (kappa, ce) in row.items():
                if not 0.0 <= kappa <= 1.0:
                    issues.append(
                        (otype, f"epistemic access out of range [0,1] for {agent!r}: {kappa!r}")
                    )
                if ce < 0.0:
                    issues.append((otype, f"negative causal effect for {agent!r}: {ce!r}"))
        if issues:
            raise ValidationError(issues)

    def agents(self):
        first = next(iter(self.types.values()))
        return tuple(sorted(first))

    def faithfulness_warnings(self):
        """Agents whose access and causal effect disagree about being zero.

        Faithfulness is a modeling premise, not a hard invariant, so
        violations warn rather than reject.
        """
        warnings = []
        for otype in sorted(self.types):
            for agent in self.agents():
                kappa, ce = self.types[otype][agent]
                if (kappa > 0.0) != (ce > 0.0):
                    warnings.append(
                        f"{otype}/{agent}: epistemic access {kappa:g} vs causal effect {ce:g}"
                    )
        return warnings


@dataclass(frozen=True)
class Attribution:
    """Nonnegative responsibility shares per outcome type, plus a remedy.

    The remedy table is carried through untouched; no constraint beyond
    nonnegativity applies to it.
    """

    shares: dict
    remedy: dict | None = None

    def __post_init__(self):
        issues = []
        for otype, row in self.shares.items():
            for agent, share in row.items():
                if share < 0.0:
                    issues.append((otype, f"negative share for {agent!r}: {share!r}"))
        if self.remedy is not None:
            for otype, row in self.remedy.items():
                for agent, value in row.items():
                    if value < 0.0:
                        issues.append((otype, f"negative remedy for {agent!r}: {value!r}"))
        if issues:
            raise ValidationError(issues)


@dataclass(frozen=True)
class AxiomCheck:
    passed: bool
    witness: str | None = None
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    """Per-outcome-type verdicts for each axiom plus the overall result."""

    per_type: dict
    legitimate: bool

    def failed_axioms(self, otype):
        return tuple(a for a in AXIOMS if not self.per_type[otype][a].passed)


def check_axioms(attr: Attribution, table: OutcomeTypeTable, tau: float) -> AxiomReport:
    """Audit an attribution against all four axioms on every outcome type."""
    if set(attr.shares) != set(table.types):
        raise ValidationError(
            [("types", "attribution and table cover different outcome types")]
        )
    agents = table.agents()
    per_type = {}
    legit = True
    for otype in sorted(table.types):
        row = attr.shares[otype]
        if set(row) != set(agents):
            raise ValidationError(
                [(otype, "attribution and table cover different agents")]
            )
        checks = {}

        witness = detail = None
        for agent in agents:
            kappa, ce = table.types[otype][agent]
            if row[agent] > 0.0 and ce == 0.0:
                witness = agent
                detail = f"share {row[agent]:g} with zero causal effect"
                break
        checks[ATTRIBUTABILITY] = AxiomCheck(witness is None, witness, detail or "")

        witness = detail = None
        for agent in agents:
            kappa, _ = table.types[otype][agent]
            if row[agent] > kappa + POINT_TOL:
                witness = agent
                detail = f"share {row[agent]:g} exceeds epistemic access {kappa:g}"
                break
        checks[FORESEEABILITY] = AxiomCheck(witness is None, witness, detail or "")

        top = max(agents, key=lambda a: row[a])
        ok = row[top] >= tau
        checks[NON_VACUITY] = AxiomCheck(
            ok,
            None if ok else top,
            "" if ok else f"largest share {row[top]:g} below threshold {tau:g}",
        )

        total = math.fsum(row[a] for a in agents)
        ok = abs(total - 1.0) <= SUM_TOL
        checks[COMPLETENESS] = AxiomCheck(
            ok, None, "" if ok else f"shares sum to {total:g}"
        )

        per_type[otype] = checks
        legit = legit and all(c.passed for c in checks.values())
    return AxiomReport(per_type=per_type, legitimate=legit)


def proportional_attribution(table: OutcomeTypeTable) -> Attribution:
    """Shares proportional to epistemic access; complete by construction."""
    shares = {}
    for otype in sorted(table.types):
        row = table.types[otype]
        total = math.fsum(kappa for kappa, _ in row.values())
        if total <= 0.0:
            raise ValidationError(
                [(otype, "no epistemically positioned agent (all access zero)")]
            )
        shares[otype] = {agent: kappa / total for agent, (kappa, _) in row.items()}
    return Attribution(shares=shares)


def _overseer(table: OutcomeTypeTable, otype):
    """The human with maximal epistemic access, falling back to any agent."""
    row = table.types[otype]
    candidates = sorted(row)
    if table.kinds:
        humans = [a for a in candidates if table.kinds.get(a) == "human"]
        if humans:
            candidates = humans
    return max(candidates, key=lambda a: (row[a][0], a))


def trilemma_frameworks(table: OutcomeTypeTable, tau: float, mode: str):
    """Build the attribution that keeps two axiom groups by dropping one.

    ``sacrifice_T3``: shares proportional to causal effect, capped at each
    agent's epistemic access. Causal grounding and the foreseeability bound
    hold; above the horizon the capped sum falls short of one.

    ``sacrifice_T2``: a designated overseer takes exactly ``tau`` and the
    remainder is spread uniformly so shares sum to one. Non-vacuity and
    completeness hold; the spread can push agents past their access or onto
    zero-effect agents.

    Returns the attribution together with its own axiom report so the
    violated group is demonstrated rather than asserted.
    """
    if mode not in (SACRIFICE_COMPLETENESS, SACRIFICE_FORESIGHT):
        raise ValidationError([("mode", f"unknown trilemma mode {mode!r}")])
    shares = {}
    for otype in sorted(table.types):
        row = table.types[otype]
        agents = sorted(row)
        if mode == SACRIFICE_COMPLETENESS:
            ce_total = math.fsum(ce for _, ce in row.values())
            out = {}
            for agent in agents:
                kappa, ce = row[agent]
                raw = ce / ce_total if ce_total > 0.0 else 0.0
                out[agent] = min(raw, kappa)
            shares[otype] = out
        else:
            head = _overseer(table, otype)
            rest = [a for a in agents if a != head]
            out = {head: tau if rest else 1.0}
            remainder = 1.0 - out[head]
            for agent in rest:
                out[agent] = remainder / len(rest)
            shares[otype] = out
    attr = Attribution(shares=shares)
    return attr, check_axioms(attr, table, tau)


def human_accountability_bound(n: int, lambda_hat: float) -> float:
    """Upper bound on total human responsibility: n * (1 - lambda_hat)."""
    if n < 1:
        raise ValidationError([("n", f"need at least one human, got {n}")])
    if not 0.0 <= lambda_hat <= 1.0:
        raise ValidationError(
            [("lambda_hat", f"compound autonomy out of range [0,1]: {lambda_hat!r}")]
        )
    return n * (1.0 - lambda_hat)
