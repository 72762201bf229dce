"""Linear cyclic structural-model laboratory and discrete mixture simulator.

The linear lab solves equilibria of damped feedback systems, estimates
do-intervention causal effects by Monte Carlo with common random numbers,
and measures the interaction residual both in closed form (for a single
three-agent loop) and empirically. The mixture simulator drives a discrete
cycle of convex-mixture agents and checks the epistemic-dilution bound by
conditioning outcome frequencies on simulated epistemic states.

Interventions replace an agent's structural equation with a constant, so a
severed system is never less contractive than the base one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ARTIFICIAL, HUMAN, InteractionGraph
from .cycles import DEFAULT_CYCLE_BUDGET, enumerate_elementary_cycles
from .errors import DegenerateDistributionError, ValidationError

DIST_TOL = 1e-9
MIN_CE_SAMPLES = 100

_NORMAL = "normal"
_FINITE = "finite"


@dataclass(frozen=True)
class NoiseSpec:
    """Per-agent exogenous noise: standard normal or a finite distribution."""

    kind: str = _NORMAL
    values: tuple = ()
    probs: tuple = ()

    def __post_init__(self):
        if self.kind not in (_NORMAL, _FINITE):
            raise ValidationError([("noise", f"unknown noise kind {self.kind!r}")])
        if self.kind == _FINITE:
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
            if len(self.values) != len(self.probs) or not self.values:
                raise ValidationError([("noise", "finite noise needs matching values/probs")])
            if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > DIST_TOL:
                raise ValidationError([("noise", "finite noise probs must sum to 1")])

    def sample(self, rng, size):
        if self.kind == _NORMAL:
            return rng.standard_normal(size)
        return rng.choice(np.asarray(self.values), size=size, p=np.asarray(self.probs))


@dataclass(frozen=True)
class OutcomeEvent:
    """Threshold predicate over the equilibrium profile: sum of weighted
    actions at least ``threshold``."""

    coeffs: dict
    threshold: float

    def __post_init__(self):
        if not self.coeffs:
            raise ValidationError([("outcome", "outcome event references no agents")])

    def indicator(self, agents, profiles):
        """Vectorized event indicator for profiles shaped (samples, agents)."""
        weights = np.array([self.coeffs.get(a, 0.0) for a in agents])
        return (profiles @ weights >= self.threshold).astype(float)


@dataclass(frozen=True)
class LinearCyclicScm:
    """Linear structural equations A_i = sum_j B[i][j] A_j + gain_i * Z_i.

    ``coefficients`` maps target agent -> {source agent: weight}; a nonzero
    weight is what puts the edge (source, target) in the implied interaction
    graph. Self-weights are rejected along with self-loops.
    """

    agents: tuple
    coefficients: dict
    noise_gain: dict
    noise: dict
    outcome: OutcomeEvent

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        issues = []
        known = set(self.agents)
        for target, row in self.coefficients.items():
            if target not in known:
                issues.append(("coefficients", f"unknown agent {target!r}"))
                continue
            for source, w in row.items():
                if source not in known:
                    issues.append(("coefficients", f"unknown agent {source!r}"))
                if source == target and w != 0.0:
                    issues.append(("coefficients", f"self-coefficient on {target!r}"))
        for a in self.agents:
            if a not in self.noise_gain:
                issues.append(("noise_gain", f"missing gain for {a!r}"))
            if a not in self.noise:
                issues.append(("noise", f"missing noise spec for {a!r}"))
        for a in self.outcome.coeffs:
            if a not in known:
                issues.append(("outcome", f"unknown agent {a!r}"))
        if issues:
            raise ValidationError(issues)

    def index(self):
        return {a: i for i, a in enumerate(self.agents)}

    def matrix(self):
        n = len(self.agents)
        idx = self.index()
        b = np.zeros((n, n))
        for target, row in self.coefficients.items():
            for source, w in row.items():
                b[idx[target], idx[source]] = w
        return b

    def gains(self):
        return np.array([self.noise_gain[a] for a in self.agents])

    def implied_graph(self) -> InteractionGraph:
        edges = []
        for target, row in self.coefficients.items():
            for source, w in row.items():
                if w != 0.0:
                    edges.append((source, target))
        return InteractionGraph(nodes=self.agents, edges=tuple(sorted(edges)))

    def sample_noise(self, rng, size):
        cols = [self.noise[a].sample(rng, size) for a in self.agents]
        return np.column_stack(cols)


@dataclass(frozen=True)
class ContractionReport:
    passed: bool
    inf_norm: float
    worst_cycle: tuple | None
    worst_product: float

    @property
    def binding_cycle(self):
        return self.worst_cycle


def contraction_check(scm: LinearCyclicScm, budget=DEFAULT_CYCLE_BUDGET) -> ContractionReport:
    """Damped-feedback check: matrix inf-norm and every cycle gain below one.

    The cycle-gain condition is what uniqueness of the equilibrium needs;
    the inf-norm additionally certifies the whole linear solve globally.
    Both are reported, and both must hold to pass.
    """
    b = scm.matrix()
    inf_norm = float(np.abs(b).sum(axis=1).max()) if b.size else 0.0
    idx = scm.index()
    worst_cycle = None
    worst_product = 0.0
    for cycle in enumerate_elementary_cycles(scm.implied_graph(), budget=budget):
        product = 1.0
        for pos, node in enumerate(cycle):
            nxt = cycle[(pos + 1) % len(cycle)]
            product *= b[idx[nxt], idx[node]]
        if abs(product) > abs(worst_product):
            worst_product = product
            worst_cycle = cycle
    passed = inf_norm < 1.0 and abs(worst_product) < 1.0
    return ContractionReport(
        passed=passed,
        inf_norm=inf_norm,
        worst_cycle=worst_cycle,
        worst_product=worst_product,
    )


def _require_contraction(scm):
    report = contraction_check(scm)
    if not report.passed:
        raise ValidationError(
            [
                (
                    "contraction",
                    "contraction failure: inf-norm "
                    f"{report.inf_norm:g}, binding cycle {report.worst_cycle} "
                    f"with gain {report.worst_product:g}",
                )
            ]
        )


def _noise_vector(scm, noise_draw):
    if isinstance(noise_draw, dict):
        missing = [a for a in scm.agents if a not in noise_draw]
        if missing:
            raise ValidationError(
                [("noise_draw", f"missing noise value for {a!r}") for a in missing]
            )
        return np.array([float(noise_draw[a]) for a in scm.agents])
    vec = np.asarray(noise_draw, dtype=float)
    if vec.shape != (len(scm.agents),):
        raise ValidationError(
            [("noise_draw", f"expected {len(scm.agents)} values, got shape {vec.shape}")]
        )
    return vec


def solve_equilibrium(scm: LinearCyclicScm, noise_draw):
    """Unique fixed point of the linear system for one noise draw."""
    _require_contraction(scm)
    z = _noise_vector(scm, noise_draw)
    b = scm.matrix()
    rhs = scm.gains() * z
    n = len(scm.agents)
    solution = np.linalg.solve(np.eye(n) - b, rhs)
    return dict(zip(scm.agents, solution))


def solve_equilibrium_fixed_point(scm: LinearCyclicScm, noise_draw, tol=1e-12, max_iter=100_000):
    """Fixed-point iteration from zero; cross-checks the direct solve."""
    _require_contraction(scm)
    z = _noise_vector(scm, noise_draw)
    b = scm.matrix()
    rhs = scm.gains() * z
    x = np.zeros(len(scm.agents))
    for _ in range(max_iter):
        nxt = b @ x + rhs
        if np.max(np.abs(nxt - x)) <= tol:
            return dict(zip(scm.agents, nxt))
        x = nxt
    raise ValidationError([("iteration", "fixed-point iteration did not converge")])


def _solve_intervened(scm, b, agent_idx, value, noise_matrix):
    """Equilibrium profiles (samples, agents) under do(agent = value)."""
    n = b.shape[0]
    m = np.eye(n) - b
    m[agent_idx, :] = 0.0
    m[agent_idx, agent_idx] = 1.0
    rhs = noise_matrix * scm.gains()
    rhs[:, agent_idx] = value
    return np.linalg.solve(m, rhs.T).T


@dataclass(frozen=True)
class CausalEffectEstimate:
    value: float
    half_width: float
    p_intervened: float
    p_reference: float


def causal_effect(scm: LinearCyclicScm, agent, a, a0, samples, seed) -> CausalEffectEstimate:
    """Monte-Carlo |P(event | do(A=a)) - P(event | do(A=a0))|.

    Both arms share one noise draw (common random numbers), and the
    half-width is the 95% normal-approximation bound on the paired
    difference. Severing the agent's equation only removes feedback, so the
    base contraction check covers the intervened system too.
    """
    if samples < MIN_CE_SAMPLES:
        raise ValidationError(
            [("samples", f"need at least {MIN_CE_SAMPLES} samples, got {samples}")]
        )
    if agent not in scm.agents:
        raise ValidationError([("agent", f"unknown agent {agent!r}")])
    _require_contraction(scm)
    rng = np.random.default_rng(seed)
    noise = scm.sample_noise(rng, samples)
    b = scm.matrix()
    idx = scm.index()[agent]
    ind_a = scm.outcome.indicator(scm.agents, _solve_intervened(scm, b, idx, a, noise))
    ind_a0 = scm.outcome.indicator(scm.agents, _solve_intervened(scm, b, idx, a0, noise))
    diff = ind_a - ind_a0
    mean = float(diff.mean())
    spread = float(diff.std(ddof=1)) if samples > 1 else 0.0
    half_width = 1.96 * spread / math.sqrt(samples)
    return CausalEffectEstimate(
        value=abs(mean),
        half_width=half_width,
        p_intervened=float(ind_a.mean()),
        p_reference=float(ind_a0.mean()),
    )


def interaction_residual_closed_form(b1: float, b2: float, b3: float) -> float:
    """Closed-form residual for a single three-agent loop with gains b1..b3."""
    product = b1 * b2 * b3
    if abs(product) >= 1.0:
        raise ValidationError(
            [("gains", f"loop gain {product!r} not below 1 in magnitude")]
        )
    return product / (1.0 - product)


def residual_lower_bound(lambda_hat: float, mixed_cycle_count: int) -> float:
    """Reported-only residual floor from compound autonomy and cycle count."""
    if lambda_hat < 0.0:
        raise ValidationError([("lambda_hat", f"negative compound autonomy: {lambda_hat!r}")])
    if mixed_cycle_count < 0:
        raise ValidationError([("mixed_cycle_count", f"negative count: {mixed_cycle_count!r}")])
    c = mixed_cycle_count
    return lambda_hat * lambda_hat * c / (1.0 + c)


@dataclass(frozen=True)
class ResidualEstimate:
    """Empirical residual: event probability minus summed causal effects.

    The subtraction mixes a probability with effect magnitudes exactly as
    its defining expression does; ``arm_gap`` records the intervention arms
    the effect magnitudes refer to, since the value depends on them.
    """

    zeta: float
    sigma: float
    p_outcome: float
    ce_by_agent: dict
    arm_high: float
    arm_low: float


def interaction_residual_mc(
    scm: LinearCyclicScm, samples, seed, arm_high=0.1, arm_low=-0.1
) -> ResidualEstimate:
    """Monte-Carlo residual over all agents of the (cyclic) system."""
    if samples < MIN_CE_SAMPLES:
        raise ValidationError(
            [("samples", f"need at least {MIN_CE_SAMPLES} samples, got {samples}")]
        )
    _require_contraction(scm)
    root = np.random.default_rng(seed)
    base_rng, *agent_rngs = root.spawn(1 + len(scm.agents))

    noise = scm.sample_noise(base_rng, samples)
    b = scm.matrix()
    n = len(scm.agents)
    profiles = np.linalg.solve(np.eye(n) - b, (noise * scm.gains()).T).T
    indicator = scm.outcome.indicator(scm.agents, profiles)
    p_outcome = float(indicator.mean())
    var = p_outcome * (1.0 - p_outcome) / samples

    ce_by_agent = {}
    for agent, rng in zip(scm.agents, agent_rngs):
        est = causal_effect(
            scm, agent, arm_high, arm_low, samples, seed=rng
        )
        ce_by_agent[agent] = est.value
        var += (est.half_width / 1.96) ** 2

    zeta = p_outcome - math.fsum(ce_by_agent.values())
    return ResidualEstimate(
        zeta=zeta,
        sigma=math.sqrt(var),
        p_outcome=p_outcome,
        ce_by_agent=ce_by_agent,
        arm_high=arm_high,
        arm_low=arm_low,
    )


def _dist_entropy(probs):
    return -math.fsum(p * math.log2(p) for p in probs if p > 0.0)


def _validate_policy(policy, alphabet_size, field, issues):
    for state, row in policy.items():
        total = math.fsum(row.values())
        if abs(total - 1.0) > DIST_TOL:
            issues.append((field, f"policy row for {state!r} sums to {total!r}"))
        for action in row:
            if not 0 <= action < alphabet_size:
                issues.append((field, f"action {action!r} outside alphabet"))


@dataclass(frozen=True)
class MixtureAgentSim:
    """Convex-mixture agent: aligned response or autonomous private policy.

    ``executive`` is the probability of the autonomous branch. The private
    state is drawn from ``private_dist``; ``shared_view`` maps it to the
    symbol other agents can observe, and the implied epistemic autonomy is
    one minus the shared fraction of the private state's entropy.
    """

    executive: float
    aligned_policy: dict
    autonomous_policy: dict
    private_dist: dict
    shared_view: dict

    def __post_init__(self):
        issues = []
        if not 0.0 <= self.executive <= 1.0:
            issues.append(("executive", f"mixture weight out of range [0,1]: {self.executive!r}"))
        total = math.fsum(self.private_dist.values())
        if abs(total - 1.0) > DIST_TOL or any(p < 0 for p in self.private_dist.values()):
            issues.append(("private_dist", f"private-state probabilities sum to {total!r}"))
        if set(self.shared_view) != set(self.private_dist):
            issues.append(("shared_view", "shared view must cover exactly the private states"))
        if set(self.autonomous_policy) != set(self.private_dist):
            issues.append(("autonomous_policy", "autonomous policy must cover the private states"))
        if issues:
            raise ValidationError(issues)

    def epistemic(self) -> float:
        """1 - H(shared view)/H(private state), both from the declared dist."""
        h_state = _dist_entropy(self.private_dist.values())
        if h_state == 0.0:
            raise DegenerateDistributionError("degenerate private-state distribution")
        view_probs = {}
        for state, p in self.private_dist.items():
            view_probs[self.shared_view[state]] = view_probs.get(self.shared_view[state], 0.0) + p
        return 1.0 - _dist_entropy(view_probs.values()) / h_state

    def compound(self) -> float:
        return self.executive * self.epistemic()


@dataclass(frozen=True)
class MixtureCycle:
    """A mixed feedback loop of mixture agents over a finite action alphabet.

    The first agent must be human and seeds the round with a uniform action;
    every later agent responds to its predecessor (humans echo, artificial
    agents mix an aligned response with an autonomous draw). The outcome
    event is a drift predicate: the last action minus the seed, modulo the
    alphabet, hitting ``drift_target``.
    """

    order: tuple
    kinds: dict
    agents: dict
    alphabet_size: int
    drift_target: int = 0

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        issues = []
        if len(self.order) < 2:
            issues.append(("order", "cycle needs at least two agents"))
        for name in self.order:
            if name not in self.kinds:
                issues.append(("kinds", f"no kind declared for {name!r}"))
        kinds = [self.kinds.get(n) for n in self.order]
        if HUMAN not in kinds or ARTIFICIAL not in kinds:
            issues.append(("order", "cycle must contain both kinds"))
        if kinds and kinds[0] != HUMAN:
            issues.append(("order", "the seeding (first) agent must be human"))
        if self.alphabet_size < 2:
            issues.append(("alphabet_size", "alphabet needs at least two symbols"))
        if not 0 <= self.drift_target < max(self.alphabet_size, 1):
            issues.append(("drift_target", f"target {self.drift_target!r} outside alphabet"))
        for name in self.order:
            if self.kinds.get(name) == ARTIFICIAL:
                sim = self.agents.get(name)
                if sim is None:
                    issues.append(("agents", f"missing mixture agent for {name!r}"))
                    continue
                _validate_policy(sim.aligned_policy, self.alphabet_size, f"agents[{name}]", issues)
                missing = [s for s in range(self.alphabet_size) if s not in sim.aligned_policy]
                if missing:
                    issues.append(
                        (f"agents[{name}]", f"aligned policy missing observed inputs {missing}")
                    )
                for state, row in sim.autonomous_policy.items():
                    for action in row:
                        if not 0 <= action < self.alphabet_size:
                            issues.append(
                                (f"agents[{name}]", f"autonomous action {action!r} outside alphabet")
                            )
        if issues:
            raise ValidationError(issues)

    def artificial_members(self):
        return tuple(n for n in self.order if self.kinds[n] == ARTIFICIAL)

    def min_compound(self) -> float:
        return min(self.agents[n].compound() for n in self.artificial_members())


def _policy_sampler(policy, alphabet_size):
    """Row-indexed cumulative policy matrix for vectorized categorical draws."""
    states = sorted(policy)
    state_index = {s: i for i, s in enumerate(states)}
    matrix = np.zeros((len(states), alphabet_size))
    for s, row in policy.items():
        for action, p in row.items():
            matrix[state_index[s], action] = p
    return states, state_index, matrix.cumsum(axis=1)


def _draw(cdf_matrix, rows, rng):
    u = rng.random(rows.shape[0])
    picks = (u[:, None] > cdf_matrix[rows]).sum(axis=1)
    # Guard against a row whose cumulative sum rounds below 1.
    return np.minimum(picks, cdf_matrix.shape[1] - 1)


def _simulate_cycle(cycle: MixtureCycle, n, rng, do_agent=None, do_value=0):
    """One synchronous pass around the loop; returns actions and observations.

    Under an intervention the targeted agent's action is forced and its own
    draw skipped; everything upstream and downstream runs unchanged.
    """
    q = cycle.alphabet_size
    actions = {}
    observed = {}

    for name in cycle.artificial_members():
        sim = cycle.agents[name]
        states = sorted(sim.private_dist)
        probs = np.array([sim.private_dist[s] for s in states])
        z_idx = rng.choice(len(states), size=n, p=probs)
        _, st_idx, auto_cdf = _policy_sampler(sim.autonomous_policy, q)
        z_rows = np.array([st_idx[s] for s in states])[z_idx]
        actions[f"_auto_{name}"] = _draw(auto_cdf, z_rows, rng)

    prev = None
    for pos, name in enumerate(cycle.order):
        if pos == 0:
            act = rng.integers(0, q, size=n)
        else:
            observed[name] = prev
            if cycle.kinds[name] == HUMAN:
                act = prev.copy()
            else:
                sim = cycle.agents[name]
                _, _, aligned_cdf = _policy_sampler(sim.aligned_policy, q)
                aligned = _draw(aligned_cdf, prev, rng)
                autonomous = actions[f"_auto_{name}"]
                branch = rng.random(n) < sim.executive
                act = np.where(branch, autonomous, aligned)
        if name == do_agent:
            act = np.full(n, do_value, dtype=int)
        actions[name] = act
        prev = act

    first = actions[cycle.order[0]]
    last = actions[cycle.order[-1]]
    outcome = ((last - first) % q == cycle.drift_target).astype(float)
    return actions, observed, outcome


@dataclass(frozen=True)
class AgentDilution:
    max_kappa: float
    sigma: float
    cell_count: int
    cells_used: int
    passed: bool


@dataclass(frozen=True)
class DilutionReport:
    lambda_hat: float
    bound: float
    per_agent: dict
    max_kappa: float
    passed: bool
    samples: int


def verify_dilution(cycle: MixtureCycle, samples, seed, min_cell=30) -> DilutionReport:
    """Check the dilution bound max kappa <= 1 - min compound + 3 sigma.

    For every cycle agent the collective is re-simulated under do(action=0);
    outcome frequencies are grouped by that agent's epistemic state (what it
    observes in the loop: its input action) and each cell with enough
    support must stay below the bound at three standard errors.

    The one-round loop satisfies the bound whenever the alphabet is large
    enough that a chance hit on the autonomous branch costs less than the
    epistemic slack, i.e. alphabet_size >= 1/(1 - epistemic) for every
    artificial member; the shipped fixture meets this with a wide margin.
    """
    if samples < MIN_CE_SAMPLES:
        raise ValidationError(
            [("samples", f"need at least {MIN_CE_SAMPLES} samples, got {samples}")]
        )
    lam = cycle.min_compound()
    bound = 1.0 - lam
    root = np.random.default_rng(seed)

    baseline_rng = root.spawn(1)[0]
    _, _, baseline = _simulate_cycle(cycle, min(samples, 10_000), baseline_rng)
    p_base = float(baseline.mean())
    if p_base in (0.0, 1.0):
        raise ValidationError(
            [("outcome", f"degenerate outcome event (baseline probability {p_base:g})")]
        )

    per_agent = {}
    arm_probs = []
    passed = True
    for name in cycle.order:
        rng = root.spawn(1)[0]
        _, observed, outcome = _simulate_cycle(
            cycle, samples, rng, do_agent=name, do_value=0
        )
        arm_probs.append(float(outcome.mean()))

        if name in observed:
            key = observed[name].astype(np.int64)
        else:
            key = np.zeros(samples, dtype=np.int64)

        cells, inverse = np.unique(key, return_inverse=True)
        counts = np.bincount(inverse)
        sums = np.bincount(inverse, weights=outcome)
        max_kappa = 0.0
        sigma_at_max = 0.0
        used = 0
        agent_pass = True
        for i in range(len(cells)):
            if counts[i] < min_cell:
                continue
            used += 1
            p = sums[i] / counts[i]
            sigma = math.sqrt(max(p * (1.0 - p), 0.0) / counts[i])
            if p > max_kappa:
                max_kappa = p
                sigma_at_max = sigma
            if p > bound + 3.0 * sigma:
                agent_pass = False
        per_agent[name] = AgentDilution(
            max_kappa=max_kappa,
            sigma=sigma_at_max,
            cell_count=int(counts.max()) if len(counts) else 0,
            cells_used=used,
            passed=agent_pass,
        )
        passed = passed and agent_pass

    if all(p in (0.0, 1.0) for p in arm_probs):
        raise ValidationError([("outcome", "degenerate outcome event")])

    return DilutionReport(
        lambda_hat=lam,
        bound=bound,
        per_agent=per_agent,
        max_kappa=max(a.max_kappa for a in per_agent.values()),
        passed=passed,
        samples=samples,
    )


@dataclass(frozen=True)
class MixtureLogs:
    """Sampled logs from a single supervised mixture agent.

    ``branch_states`` records which policy component produced each action
    (the agent's own epistemic state for conditional-information purposes);
    ``beliefs`` is the private belief symbol, drawn whether or not the
    autonomous branch was taken.
    """

    actions: tuple
    supervisor_states: tuple
    branch_states: tuple
    beliefs: tuple


def simulate_mixture_logs(alpha_x, total_bits, shared_bits, n, seed) -> MixtureLogs:
    """Sample a mixture agent whose belief shares ``shared_bits`` with the
    supervisor out of ``total_bits``.

    The aligned branch copies the supervisor's state; the autonomous branch
    plays the private belief, whose top bits mirror the supervisor's state
    and whose remaining bits are private fair coins. The implied epistemic
    autonomy is 1 - shared_bits/total_bits.
    """
    if not 0.0 <= alpha_x <= 1.0:
        raise ValidationError([("alpha_x", f"mixture weight out of range [0,1]: {alpha_x!r}")])
    if not 0 <= shared_bits <= total_bits or total_bits < 1:
        raise ValidationError([("bits", f"invalid bit split {shared_bits}/{total_bits}")])
    rng = np.random.default_rng(seed)
    q = 1 << total_bits
    private_width = total_bits - shared_bits
    sup = rng.integers(0, q, size=n)
    private = rng.integers(0, 1 << private_width, size=n) if private_width else np.zeros(n, dtype=int)
    beliefs = ((sup >> private_width) << private_width) | private
    branch = (rng.random(n) < alpha_x).astype(int)
    actions = np.where(branch == 1, beliefs, sup)
    return MixtureLogs(
        actions=tuple(int(a) for a in actions),
        supervisor_states=tuple(int(s) for s in sup),
        branch_states=tuple(int(b) for b in branch),
        beliefs=tuple(int(z) for z in beliefs),
    )
