"""Plug-in estimators for the four autonomy components and related margins.

All estimators work on finite alphabets with empirical-frequency (plug-in)
entropy and mutual information in bits. Sampling noise can push a ratio
estimate slightly outside its interval, so results are clamped into the
declared range; the clamp never hides a modeling error because the
underlying quantities are provably inside the interval in expectation.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .errors import DegenerateDistributionError, ValidationError

POLICY_ROW_TOL = 1e-9


def entropy(symbols) -> float:
    """Plug-in Shannon entropy in bits of an observed symbol sequence."""
    counts = Counter(symbols)
    n = sum(counts.values())
    if n == 0:
        raise ValidationError([("samples", "empty sample sequence")])
    h = 0.0
    for c in counts.values():
        p = c / n
        h -= p * math.log2(p)
    return h


def mutual_information(xs, ys) -> float:
    """Plug-in mutual information in bits between two paired sequences."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise ValidationError([("samples", "paired sequences differ in length")])
    joint = entropy(zip(xs, ys))
    return max(0.0, entropy(xs) + entropy(ys) - joint)


def conditional_mutual_information(xs, ys, zs) -> float:
    """Plug-in I(X;Y|Z) in bits via the four-entropy identity."""
    xs, ys, zs = list(xs), list(ys), list(zs)
    if not len(xs) == len(ys) == len(zs):
        raise ValidationError([("samples", "sequences differ in length")])
    value = (
        entropy(zip(xs, zs))
        + entropy(zip(ys, zs))
        - entropy(zs)
        - entropy(zip(xs, ys, zs))
    )
    return max(0.0, value)


def _clamp(value, lo=0.0, hi=1.0):
    return min(hi, max(lo, value))


@dataclass(frozen=True)
class BeliefSamplePairs:
    """Paired (agent belief, supervisor belief) symbol observations."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))
        if not self.pairs:
            raise ValidationError([("pairs", "no belief samples")])


@dataclass(frozen=True)
class ActionLog:
    """Observed (state, action) events plus the human policy table."""

    events: tuple
    policy: dict
    action_count: int

    def __post_init__(self):
        object.__setattr__(self, "events", tuple((s, a) for s, a in self.events))
        issues = []
        if self.action_count < 1:
            issues.append(("action_count", f"need at least one action, got {self.action_count}"))
        if not self.events:
            issues.append(("events", "no logged events"))
        for state, row in self.policy.items():
            total = sum(row.values())
            if abs(total - 1.0) > POLICY_ROW_TOL:
                issues.append(
                    ("policy", f"policy row for state {state!r} sums to {total!r}")
                )
        if issues:
            raise ValidationError(issues)


@dataclass(frozen=True)
class UtilityPair:
    """Agent and supervisor utilities over a shared finite outcome set."""

    agent: dict
    supervisor: dict

    def __post_init__(self):
        issues = []
        if set(self.agent) != set(self.supervisor):
            issues.append(("outcomes", "agent and supervisor utilities cover different outcomes"))
        for name, table in (("agent", self.agent), ("supervisor", self.supervisor)):
            for o, v in table.items():
                if not 0.0 <= v <= 1.0:
                    issues.append((name, f"utility out of range [0,1] at {o!r}: {v!r}"))
        if issues:
            raise ValidationError(issues)


@dataclass(frozen=True)
class CommCounts:
    """Counts of self-initiated and human-directed communications."""

    self_initiated: int
    human_directed: int

    def __post_init__(self):
        issues = []
        if self.self_initiated < 0:
            issues.append(("self_initiated", "negative count"))
        if self.human_directed < 0:
            issues.append(("human_directed", "negative count"))
        if issues:
            raise ValidationError(issues)


def estimate_epistemic_autonomy(samples: BeliefSamplePairs) -> float:
    """1 - I(agent;supervisor)/H(agent) from paired belief observations.

    Undefined for a degenerate (single-symbol) agent belief stream: with
    zero entropy the normalization has no meaning, so this errors instead
    of inventing a convention.
    """
    agent = [a for a, _ in samples.pairs]
    supervisor = [b for _, b in samples.pairs]
    h = entropy(agent)
    if h == 0.0:
        raise DegenerateDistributionError("degenerate belief distribution")
    return _clamp(1.0 - mutual_information(agent, supervisor) / h)


def estimate_executive_autonomy(log: ActionLog) -> float:
    """Fraction of logged actions falling outside the human approval set.

    The approval set keeps actions the human policy plays with probability
    above 1/(2|A|); actions the policy would never take always count as
    unapproved.
    """
    threshold = 1.0 / (2.0 * log.action_count)
    outside = 0
    for state, action in log.events:
        if state not in log.policy:
            raise ValidationError(
                [("events", f"no policy row for logged state {state!r}")]
            )
        if log.policy[state].get(action, 0.0) <= threshold:
            outside += 1
    return _clamp(outside / len(log.events))


def evaluative_autonomy(u: UtilityPair) -> float:
    """Normalized objective divergence between agent and supervisor.

    Euclidean distance divided by its exact supremum over feasible agent
    utilities, attained coordinatewise at whichever of 0 or 1 is farther
    from the supervisor's value.
    """
    if not u.agent:
        raise ValidationError([("outcomes", "empty outcome set")])
    dist_sq = 0.0
    sup_sq = 0.0
    for o, uh in u.supervisor.items():
        ua = u.agent[o]
        dist_sq += (ua - uh) ** 2
        sup_sq += max(uh, 1.0 - uh) ** 2
    return _clamp(math.sqrt(dist_sq) / math.sqrt(sup_sq))


def social_autonomy(c: CommCounts) -> float:
    """Smoothed share of self-initiated communications, always below one."""
    return c.self_initiated / (c.self_initiated + c.human_directed + 1)


def estimate_info_autonomy(action_samples, supervisor_state_samples, agent_state_samples) -> float:
    """Information-autonomy coefficient 1 - I(A;sup|own)/H(A).

    Measures how little of the action stream's entropy the supervisor's
    epistemic state explains once the agent's own state is accounted for.
    """
    actions = list(action_samples)
    sup = list(supervisor_state_samples)
    own = list(agent_state_samples)
    if not len(actions) == len(sup) == len(own):
        raise ValidationError([("samples", "sequences differ in length")])
    h = entropy(actions)
    if h == 0.0:
        raise DegenerateDistributionError("degenerate action distribution")
    return _clamp(1.0 - conditional_mutual_information(actions, sup, own) / h)


def measurement_margin(delta: float) -> float:
    """Compound-autonomy error bound under per-component error ``delta``."""
    if delta < 0.0:
        raise ValidationError([("delta", f"delta negative: {delta!r}")])
    return 2.0 * delta
