"""Elementary directed cycles and the mixed-cycle quantities built on them.

Two routes are provided:

* :func:`enumerate_elementary_cycles` / :func:`analyze_cycles` list every
  elementary circuit (Johnson-style enumeration) under a configurable
  budget and derive the full cycle report.
* :func:`summarize_mixed_cycles` computes only the smallest mixed-cycle
  size and the set of artificial agents on mixed cycles, without listing
  circuits. The shortest mixed cycle comes from a BFS over kind-crossing
  edges; membership uses a pruned simple-path search with early exit. Both
  are exact and agree with the enumeration route (property-tested), but the
  summary stays fast on dense graphs whose circuit count explodes.

Cycles are rotation-normalized to begin at their lexicographically smallest
node and reported in a deterministic order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx

from .core import ARTIFICIAL, HUMAN, InteractionGraph
from .errors import BudgetExceededError, ValidationError

DEFAULT_CYCLE_BUDGET = 10**6


@dataclass(frozen=True)
class CycleReport:
    """Every elementary cycle plus the derived mixed-cycle quantities."""

    all_cycles: tuple[tuple[str, ...], ...]
    mixed_cycles: tuple[tuple[str, ...], ...]
    c_min_size: int | None
    m_star: frozenset[str]

    @property
    def mixed_count(self):
        return len(self.mixed_cycles)


@dataclass(frozen=True)
class MixedCycleSummary:
    """The two mixed-cycle quantities the horizon needs, nothing more."""

    c_min_size: int | None
    m_star: frozenset[str]


def _normalize_rotation(cycle):
    """Rotate a cycle so it starts at its lexicographically smallest node."""
    pivot = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[pivot:]) + tuple(cycle[:pivot])


def _as_digraph(graph: InteractionGraph) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from(graph.edges)
    return g


def enumerate_elementary_cycles(graph: InteractionGraph, budget=DEFAULT_CYCLE_BUDGET):
    """Return every elementary circuit exactly once, in deterministic order.

    Raises :class:`BudgetExceededError` once more than ``budget`` circuits
    have been produced, converting pathological inputs into a clean error.
    """
    found = []
    for cycle in nx.simple_cycles(_as_digraph(graph)):
        if len(found) >= budget:
            raise BudgetExceededError(
                f"cycle budget exceeded (cap {budget})", budget=budget
            )
        found.append(_normalize_rotation(cycle))
    found.sort(key=lambda c: (len(c), c))
    return tuple(found)


def _check_kinds(graph, kinds):
    missing = [n for n in graph.nodes if n not in kinds]
    if missing:
        raise ValidationError(
            [("kinds", f"no kind declared for node {n!r}") for n in missing]
        )


def analyze_cycles(graph: InteractionGraph, kinds, budget=DEFAULT_CYCLE_BUDGET) -> CycleReport:
    """Enumerate all cycles and split out the mixed ones.

    A cycle is mixed when it contains at least one human and one artificial
    agent; ``m_star`` collects the artificial agents appearing in at least
    one mixed cycle and ``c_min_size`` is the length of the smallest.
    """
    _check_kinds(graph, kinds)
    all_cycles = enumerate_elementary_cycles(graph, budget=budget)
    mixed = tuple(
        c
        for c in all_cycles
        if any(kinds[n] == HUMAN for n in c) and any(kinds[n] == ARTIFICIAL for n in c)
    )
    c_min = min((len(c) for c in mixed), default=None)
    m_star = frozenset(n for c in mixed for n in c if kinds[n] == ARTIFICIAL)
    return CycleReport(
        all_cycles=all_cycles, mixed_cycles=mixed, c_min_size=c_min, m_star=m_star
    )


def _bfs_distance(adj, source, target):
    """Length of the shortest directed path source -> target, or None."""
    if source == target:
        return 0
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                if v == target:
                    return dist[v]
                queue.append(v)
    return None


def _smallest_mixed_cycle(graph, kinds):
    """Size of the smallest mixed cycle via kind-crossing edges.

    Every mixed cycle changes kind along at least one edge, and closing any
    crossing edge (u, v) with a shortest v -> u path yields an elementary
    mixed cycle, so the minimum over crossing edges is exact.
    """
    adj = graph.successors()
    best = None
    for u, v in graph.edges:
        if kinds[u] == kinds[v]:
            continue
        back = _bfs_distance(adj, v, u)
        if back is None:
            continue
        size = back + 1
        if best is None or size < best:
            best = size
            if best == 2:
                break
    return best


def _ancestors(graph, target):
    """All nodes with a directed path to ``target`` (including itself)."""
    radj = {n: [] for n in graph.nodes}
    for s, t in graph.edges:
        radj[t].append(s)
    seen = {target}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in radj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


class _StepBudget:
    def __init__(self, budget):
        self.remaining = budget
        self.budget = budget

    def spend(self):
        self.remaining -= 1
        if self.remaining < 0:
            raise BudgetExceededError(
                f"cycle budget exceeded (cap {self.budget})", budget=self.budget
            )


def _on_mixed_cycle(adj, kinds, start, allowed, steps):
    """Does some elementary cycle through ``start`` visit a human?

    Iterative DFS over simple paths restricted to ancestors of ``start``;
    returns as soon as a path carrying at least one human closes. The step
    budget guards against adversarial dense graphs.
    """
    on_path = {start}
    humans_on_path = 0
    stack = [(start, iter(adj[start]))]
    while stack:
        node, successors = stack[-1]
        advanced = False
        for nxt in successors:
            steps.spend()
            if nxt == start and humans_on_path > 0:
                return True
            if nxt in on_path or nxt not in allowed:
                continue
            on_path.add(nxt)
            if kinds[nxt] == HUMAN:
                humans_on_path += 1
            stack.append((nxt, iter(adj[nxt])))
            advanced = True
            break
        if not advanced:
            stack.pop()
            if node != start:
                on_path.discard(node)
                if kinds[node] == HUMAN:
                    humans_on_path -= 1
    return False


def summarize_mixed_cycles(graph: InteractionGraph, kinds, budget=DEFAULT_CYCLE_BUDGET) -> MixedCycleSummary:
    """Exact ``c_min_size`` and ``m_star`` without listing all circuits."""
    _check_kinds(graph, kinds)
    c_min = _smallest_mixed_cycle(graph, kinds)
    if c_min is None:
        return MixedCycleSummary(c_min_size=None, m_star=frozenset())

    adj = graph.successors()
    steps = _StepBudget(budget)
    members = []
    scc_of = {}
    for comp in nx.strongly_connected_components(_as_digraph(graph)):
        for n in comp:
            scc_of[n] = frozenset(comp)
    for node in graph.nodes:
        if kinds[node] != ARTIFICIAL:
            continue
        comp = scc_of[node]
        # A mixed cycle through `node` needs a mutually-reachable human.
        if len(comp) < 2 or not any(kinds[n] == HUMAN for n in comp):
            continue
        if _on_mixed_cycle(adj, kinds, node, _ancestors(graph, node), steps):
            members.append(node)
    return MixedCycleSummary(c_min_size=c_min, m_star=frozenset(members))
