"""Domain types for human-agent collectives and scalar autonomy aggregation.

A collective is described by its agents (humans carry no autonomy profile,
artificial agents carry exactly one), a directed interaction graph, a
strictly positive weight vector summing to one, and governance parameters.
All values are immutable after construction; component types validate their
own invariants eagerly, while :func:`validate_hac` performs the cross-field
checks and normalizes ordering for reproducible downstream output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ValidationError

HUMAN = "human"
ARTIFICIAL = "artificial"

WEIGHT_SUM_TOL = 1e-9

PROFILE_FIELDS = ("epistemic", "executive", "evaluative", "social")


@dataclass(frozen=True)
class AutonomyProfile:
    """Four-component autonomy vector of an artificial agent.

    epistemic, executive and evaluative lie in [0, 1]; social lies in [0, 1)
    because its estimator is a smoothed ratio that never reaches one.
    """

    epistemic: float
    executive: float
    evaluative: float
    social: float

    def __post_init__(self):
        issues = []
        for name in ("epistemic", "executive", "evaluative"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                issues.append((name, f"{name} out of range [0,1]: {v!r}"))
        if not 0.0 <= self.social < 1.0:
            issues.append(("social", f"social out of range [0,1): {self.social!r}"))
        if issues:
            raise ValidationError(issues)

    def as_tuple(self):
        return (self.epistemic, self.executive, self.evaluative, self.social)


@dataclass(frozen=True)
class AgentDecl:
    """An agent declaration: unique id, kind, and profile iff artificial."""

    id: str
    kind: str
    profile: AutonomyProfile | None = None

    def __post_init__(self):
        if self.kind not in (HUMAN, ARTIFICIAL):
            raise ValidationError([("kind", f"unknown agent kind {self.kind!r}")])
        if self.kind == HUMAN and self.profile is not None:
            raise ValidationError(
                [("profile", f"human agent {self.id!r} must not carry a profile")]
            )
        if self.kind == ARTIFICIAL and self.profile is None:
            raise ValidationError(
                [("profile", f"artificial agent {self.id!r} missing profile")]
            )


@dataclass(frozen=True)
class InteractionGraph:
    """Directed interaction graph over agent ids.

    Self-loops are rejected: a one-agent loop can never involve both kinds,
    so admitting them would only blur cycle-size accounting.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple((s, t) for s, t in self.edges))
        issues = []
        seen_nodes = set()
        for n in self.nodes:
            if n in seen_nodes:
                issues.append(("nodes", f"duplicate node {n!r}"))
            seen_nodes.add(n)
        seen = set()
        for s, t in self.edges:
            if s == t:
                issues.append(("edges", f"self-loop on {s!r} rejected"))
            if s not in seen_nodes:
                issues.append(("edges", f"dangling edge source {s!r}"))
            if t not in seen_nodes:
                issues.append(("edges", f"dangling edge target {t!r}"))
            if (s, t) in seen:
                issues.append(("edges", f"duplicate edge {s!r} -> {t!r}"))
            seen.add((s, t))
        if issues:
            raise ValidationError(issues)

    def successors(self):
        """Adjacency map node -> tuple of successor nodes (declaration order)."""
        adj = {n: [] for n in self.nodes}
        for s, t in self.edges:
            adj[s].append(t)
        return {n: tuple(vs) for n, vs in adj.items()}

    def out_degree(self, node):
        return sum(1 for s, _ in self.edges if s == node)


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive aggregation weights that sum to one.

    The sum is checked within 1e-9: the contract asks for an exact unit sum,
    which floating-point input can only meet up to a tolerance.
    """

    epistemic: float
    executive: float
    evaluative: float
    social: float

    def __post_init__(self):
        issues = []
        for name in PROFILE_FIELDS:
            v = getattr(self, name)
            if not v > 0.0:
                issues.append((name, f"weight not strictly positive: {name}={v!r}"))
        total = sum(self.as_tuple())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            issues.append(("sum", f"weights sum to {total!r}, expected 1"))
        if issues:
            raise ValidationError(issues)

    def as_tuple(self):
        return (self.epistemic, self.executive, self.evaluative, self.social)

    @classmethod
    def from_sequence(cls, values):
        values = tuple(values)
        if len(values) != 4:
            raise ValidationError([("weights", f"expected 4 weights, got {len(values)}")])
        return cls(*values)


@dataclass(frozen=True)
class HacSpec:
    """A full collective: agents, interaction graph, weights, governance knobs.

    ``tau`` is the non-triviality threshold used by the combined horizon;
    ``delta_meas`` and ``delta_model`` are the measurement and model error
    allowances that widen the classification margin.
    """

    agents: tuple[AgentDecl, ...]
    graph: InteractionGraph
    weights: WeightVector
    tau: float
    delta_meas: float = 0.0
    delta_model: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))

    def humans(self):
        return tuple(a for a in self.agents if a.kind == HUMAN)

    def artificials(self):
        return tuple(a for a in self.agents if a.kind == ARTIFICIAL)

    def kinds(self):
        return {a.id: a.kind for a in self.agents}

    def agent(self, agent_id):
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(agent_id)


def validate_hac(raw: HacSpec) -> HacSpec:
    """Check all cross-field invariants and return a normalized spec.

    Every violation is collected before raising, so a bad document reports
    all its problems at once. Normalization orders agents humans-first then
    lexicographically by id, sorts edges, and aligns graph nodes with the
    agent ordering; validating an already-validated spec is the identity.
    """
    issues = []

    ids = [a.id for a in raw.agents]
    dup = {i for i in ids if ids.count(i) > 1}
    for d in sorted(dup):
        issues.append(("agents", f"duplicate agent id {d!r}"))

    if not any(a.kind == HUMAN for a in raw.agents):
        issues.append(("agents", "no human agents"))
    if not any(a.kind == ARTIFICIAL for a in raw.agents):
        issues.append(("agents", "no artificial agents"))

    declared = set(ids)
    graph_nodes = set(raw.graph.nodes)
    for n in sorted(graph_nodes - declared):
        issues.append(("graph", f"graph node {n!r} is not a declared agent"))
    for s, t in raw.graph.edges:
        for endpoint in (s, t):
            if endpoint not in declared:
                issues.append(("graph", f"edge endpoint {endpoint!r} is not a declared agent"))

    if not 0.0 < raw.tau < 1.0:
        issues.append(("tau", f"tau out of range (0,1): {raw.tau!r}"))
    if raw.delta_meas < 0.0:
        issues.append(("delta_meas", f"delta_meas negative: {raw.delta_meas!r}"))
    if raw.delta_model < 0.0:
        issues.append(("delta_model", f"delta_model negative: {raw.delta_model!r}"))

    if issues:
        raise ValidationError(issues)

    order = {HUMAN: 0, ARTIFICIAL: 1}
    agents = tuple(sorted(raw.agents, key=lambda a: (order[a.kind], a.id)))
    # The graph is re-anchored on all declared agents so isolated ones report
    # a zero out-degree instead of a lookup error.
    nodes = tuple(a.id for a in agents)
    edges = tuple(sorted(raw.graph.edges))
    graph = InteractionGraph(nodes=nodes, edges=edges)
    return replace(raw, agents=agents, graph=graph)


def aggregate_autonomy(profile: AutonomyProfile, w: WeightVector) -> float:
    """Weighted aggregate autonomy: the dot product of profile and weights."""
    return sum(p * q for p, q in zip(profile.as_tuple(), w.as_tuple()))


def compound_autonomy(profile: AutonomyProfile) -> float:
    """Compound autonomy: executive times epistemic.

    This is the quantity the horizon comparison consumes; it is at most
    min(executive, epistemic) and vanishes whenever either factor does.
    """
    return profile.executive * profile.epistemic
