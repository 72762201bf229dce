"""Programmatic builders for the shipped example systems.

These are the objects behind the files in ``fixtures/``; a test pins the
serialized copies to these builders so both stay in sync. The clinical,
trading, and governance collectives exercise the three governability
regimes (comfortably below the horizon, just below it, and cycle-free).
"""

from __future__ import annotations

from .attribution import OutcomeTypeTable
from .core import (
    ARTIFICIAL,
    HUMAN,
    AgentDecl,
    AutonomyProfile,
    HacSpec,
    InteractionGraph,
    WeightVector,
    validate_hac,
)
from .scm import LinearCyclicScm, MixtureAgentSim, MixtureCycle, NoiseSpec, OutcomeEvent


def clinical_hac() -> HacSpec:
    """Five physicians and three assistants; one mixed loop, one pure one.

    The review loop h1 -> m1 -> m2 -> h1 is the only mixed cycle; m2 and m3
    also feed each other in a purely artificial loop, which keeps m3 out of
    the mixed-cycle agent set. The two extra m1 edges give the out-degree
    ratio 3:2:1 behind the centrality column.
    """
    agents = (
        AgentDecl("h1", HUMAN),
        AgentDecl("h2", HUMAN),
        AgentDecl("h3", HUMAN),
        AgentDecl("h4", HUMAN),
        AgentDecl("h5", HUMAN),
        AgentDecl("m1", ARTIFICIAL, AutonomyProfile(0.85, 0.30, 0.60, 0.70)),
        AgentDecl("m2", ARTIFICIAL, AutonomyProfile(0.70, 0.25, 0.50, 0.60)),
        AgentDecl("m3", ARTIFICIAL, AutonomyProfile(0.40, 0.80, 0.70, 0.30)),
    )
    edges = (
        ("m1", "m2"),
        ("m2", "h1"),
        ("h1", "m1"),
        ("m2", "m3"),
        ("m3", "m2"),
        ("m1", "h2"),
        ("m1", "h3"),
    )
    graph = InteractionGraph(nodes=tuple(a.id for a in agents), edges=edges)
    return validate_hac(
        HacSpec(
            agents=agents,
            graph=graph,
            weights=WeightVector(0.30, 0.30, 0.20, 0.20),
            tau=0.05,
        )
    )


_TRADING_PROFILES = {
    # epistemic, executive, evaluative, social; m1 carries the binding
    # compound autonomy 0.675 * 0.92 = 0.621.
    "m1": (0.675, 0.92, 0.60, 0.80),
    "m2": (0.70, 0.93, 0.62, 0.83),
    "m3": (0.72, 0.90, 0.65, 0.85),
    "m4": (0.75, 0.94, 0.58, 0.90),
    "m5": (0.78, 0.91, 0.70, 0.86),
    "m6": (0.76, 0.92, 0.68, 0.88),
    "m7": (0.80, 0.93, 0.72, 0.79),
    "m8": (0.83, 0.89, 0.63, 0.89),
}


def trading_hac() -> HacSpec:
    """Ten traders supervising eight strategy agents in interlocking loops.

    Every artificial agent sits on a three-agent mixed loop (its supervisor,
    itself, and the next agent on the ring), so the smallest mixed cycle has
    three agents and the binding compound autonomy is 0.621 - close under
    the horizon 2/3.
    """
    humans = tuple(AgentDecl(f"h{i}", HUMAN) for i in range(1, 11))
    machines = tuple(
        AgentDecl(m, ARTIFICIAL, AutonomyProfile(*_TRADING_PROFILES[m]))
        for m in sorted(_TRADING_PROFILES)
    )
    edges = []
    for i in range(1, 9):
        nxt = i % 8 + 1
        edges.append((f"m{i}", f"m{nxt}"))
        edges.append((f"h{i}", f"m{i}"))
        edges.append((f"m{nxt}", f"h{i}"))
    edges.append(("h9", "m1"))
    edges.append(("h10", "m5"))
    graph = InteractionGraph(
        nodes=tuple(a.id for a in humans + machines), edges=tuple(edges)
    )
    return validate_hac(
        HacSpec(
            agents=humans + machines,
            graph=graph,
            weights=WeightVector(0.25, 0.25, 0.25, 0.25),
            tau=0.05,
        )
    )


def governance_hac() -> HacSpec:
    """Twenty officials reviewing four drafting systems, strictly feedforward.

    The systems are highly autonomous, but nothing they emit feeds back into
    them within a decision round, so no mixed cycle can exist.
    """
    humans = tuple(AgentDecl(f"h{i:02d}", HUMAN) for i in range(1, 21))
    profile = AutonomyProfile(0.95, 0.95, 0.80, 0.85)
    machines = tuple(
        AgentDecl(f"m{i}", ARTIFICIAL, profile) for i in range(1, 5)
    )
    edges = []
    for i in range(1, 5):
        for j in range(1, 6):
            edges.append((f"m{i}", f"h{(i - 1) * 5 + j:02d}"))
    edges.append(("h01", "h06"))
    edges.append(("h06", "h11"))
    graph = InteractionGraph(
        nodes=tuple(a.id for a in humans + machines), edges=tuple(edges)
    )
    return validate_hac(
        HacSpec(
            agents=humans + machines,
            graph=graph,
            weights=WeightVector(0.25, 0.25, 0.25, 0.25),
            tau=0.05,
        )
    )


def independence_tables():
    """The four single-axiom-violation constructions with their shares.

    Each entry is (name, table, shares, tau, violated axiom): the shares
    satisfy the other three axioms and break exactly the named one.
    """
    from .attribution import (
        ATTRIBUTABILITY,
        COMPLETENESS,
        FORESEEABILITY,
        NON_VACUITY,
    )

    cases = []

    table = OutcomeTypeTable(
        {"o": {"a1": (0.3, 0.5), "a2": (0.9, 0.5)}}
    )
    cases.append(("overreach", table, {"o": {"a1": 0.5, "a2": 0.5}}, 0.1, FORESEEABILITY))

    crowd = {f"a{i:03d}": (0.01, 0.1) for i in range(100)}
    table = OutcomeTypeTable({"o": crowd})
    shares = {"o": {a: 0.01 for a in crowd}}
    cases.append(("dilution", table, shares, 0.02, NON_VACUITY))

    table = OutcomeTypeTable(
        {"o": {"a1": (0.6, 0.4), "a2": (0.4, 0.0)}}
    )
    cases.append(("phantom", table, {"o": {"a1": 0.6, "a2": 0.4}}, 0.1, ATTRIBUTABILITY))

    table = OutcomeTypeTable(
        {"o": {"a1": (0.6, 0.4), "a2": (0.5, 0.4)}}
    )
    cases.append(("shortfall", table, {"o": {"a1": 0.3, "a2": 0.3}}, 0.1, COMPLETENESS))

    return tuple(cases)


def above_horizon_table(c_min_size=3, lambda_hat=0.7, tau=0.1) -> OutcomeTypeTable:
    """Critical-type table with every access pinned at 1 - lambda_hat.

    With c_min_size * (1 - lambda_hat) < 1 no grid attribution can be
    causally grounded, foresight-bounded, and complete at once.
    """
    kappa = 1.0 - lambda_hat
    agents = {f"a{i}": (kappa, 0.5) for i in range(1, c_min_size + 1)}
    return OutcomeTypeTable({"critical": agents})


def three_cycle_scm(b1=0.5, b2=0.5, b3=0.5, threshold=0.0) -> LinearCyclicScm:
    """The canonical damped loop h -> m1 -> m2 -> h with unit noise gains.

    The outcome event is a threshold on the summed equilibrium profile of
    the loop agents, which only the loop influences.
    """
    agents = ("h", "m1", "m2")
    return LinearCyclicScm(
        agents=agents,
        coefficients={
            "m1": {"h": b1},
            "m2": {"m1": b2},
            "h": {"m2": b3},
        },
        noise_gain={a: 1.0 for a in agents},
        noise={a: NoiseSpec() for a in agents},
        outcome=OutcomeEvent(coeffs={a: 1.0 for a in agents}, threshold=threshold),
    )


def _follow_policy(q):
    return {s: {s: 1.0} for s in range(q)}


def _identity_autonomous(q):
    return {z: {z: 1.0} for z in range(q)}


def _uniform_private(q):
    return {z: 1.0 / q for z in range(q)}


def _top_bit_view(q, revealed):
    block = q // (1 << revealed)
    return {z: z // block for z in range(q)}


def mixture_agent(executive, q=32, revealed_bits=1) -> MixtureAgentSim:
    """Follow-or-play-private agent over a 2^bits alphabet.

    The private state is uniform; observers see its top ``revealed_bits``,
    so the epistemic autonomy is 1 - revealed/total bits.
    """
    return MixtureAgentSim(
        executive=executive,
        aligned_policy=_follow_policy(q),
        autonomous_policy=_identity_autonomous(q),
        private_dist=_uniform_private(q),
        shared_view=_top_bit_view(q, revealed_bits),
    )


def dilution_cycle(binding_executive=0.8, other_executive=0.9, q=32) -> MixtureCycle:
    """Mixed loop h -> m1 -> m2 with the binding agent at compound 0.64.

    Both agents reveal one of five private bits (epistemic 0.8); m1's lower
    executive weight makes it the binding agent, so the dilution bound sits
    at 1 - 0.8 * 0.8 = 0.36.
    """
    return MixtureCycle(
        order=("h1", "m1", "m2"),
        kinds={"h1": HUMAN, "m1": ARTIFICIAL, "m2": ARTIFICIAL},
        agents={
            "m1": mixture_agent(binding_executive, q=q),
            "m2": mixture_agent(other_executive, q=q),
        },
        alphabet_size=q,
        drift_target=0,
    )
