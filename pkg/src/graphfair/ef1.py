"""EF1 allocations with welfare guarantees.

Envy graphs, EF1 graphs, the EF1 checker, envy-cycle elimination and the
four welfare-aware EF1 algorithms (heterogeneous, binary, two agents,
homogeneous).  Agents are 0-indexed; "agent n" in the usual write-up of the
homogeneous algorithm is index ``n - 1`` here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .core import Allocation, Instance, WeightProfile, utility
from .matching import max_weight_matching
from .mms import GreedyPartition, greedy_partition
from .oracle import max_metric_profile, max_social_welfare_matching

logger = logging.getLogger(__name__)


# -- agent digraphs ------------------------------------------------------------


@dataclass(frozen=True)
class AgentDigraph:
    """Directed graph on agents ``0..n-1``; ``(i, j)`` means i envies j."""

    n: int
    arcs: frozenset[tuple[int, int]]

    def successors(self, i: int) -> list[int]:
        return sorted(j for a, j in self.arcs if a == i)

    def in_degree(self, j: int) -> int:
        return sum(1 for _, b in self.arcs if b == j)

    def unenvied(self) -> list[int]:
        targets = {j for _, j in self.arcs}
        return [i for i in range(self.n) if i not in targets]

    def find_cycle(self) -> list[int] | None:
        """First cycle met by DFS from the lowest-index envied agent, as a vertex list."""
        targets = sorted({j for _, j in self.arcs})
        roots = targets + [i for i in range(self.n) if i not in set(targets)]
        state = [0] * self.n  # 0 new, 1 on stack, 2 done
        stack: list[int] = []

        def dfs(u: int) -> list[int] | None:
            state[u] = 1
            stack.append(u)
            for w in self.successors(u):
                if state[w] == 1:
                    return stack[stack.index(w):]
                if state[w] == 0:
                    found = dfs(w)
                    if found:
                        return found
            stack.pop()
            state[u] = 2
            return None

        for r in roots:
            if state[r] == 0:
                found = dfs(r)
                if found:
                    return found
        return None

    def is_acyclic(self) -> bool:
        return self.find_cycle() is None


class EnvyGraph(AgentDigraph):
    pass


class EF1Graph(AgentDigraph):
    pass


def envies(instance: Instance, i: int, own: frozenset, other: frozenset) -> bool:
    return utility(instance, i, own) < utility(instance, i, other)


def ef1_witness_for(
    instance: Instance, i: int, own_value: Fraction, other: frozenset
) -> int | None:
    """Smallest ``g`` in ``other`` with ``own_value >= u_i(other - g)``, else None."""
    for g in sorted(other):
        if own_value >= utility(instance, i, other - {g}):
            return g
    return None


def envies_beyond_one(instance: Instance, i: int, own: frozenset, other: frozenset) -> bool:
    own_value = utility(instance, i, own)
    if own_value >= utility(instance, i, other):
        return False
    return ef1_witness_for(instance, i, own_value, other) is None


def envy_graph(instance: Instance, allocation: Allocation) -> EnvyGraph:
    X = allocation.bundles
    arcs = frozenset(
        (i, j)
        for i in range(instance.n)
        for j in range(instance.n)
        if i != j and envies(instance, i, X[i], X[j])
    )
    return EnvyGraph(instance.n, arcs)


def ef1_graph(instance: Instance, allocation: Allocation) -> EF1Graph:
    X = allocation.bundles
    arcs = frozenset(
        (i, j)
        for i in range(instance.n)
        for j in range(instance.n)
        if i != j and envies_beyond_one(instance, i, X[i], X[j])
    )
    return EF1Graph(instance.n, arcs)


# -- EF1 checker ---------------------------------------------------------------


@dataclass(frozen=True)
class PairVerdict:
    envious: bool
    witness: int | None
    ok: bool

    def to_dict(self) -> dict:
        return {"envious": self.envious, "witness": self.witness, "ok": self.ok}


@dataclass(frozen=True)
class EF1Witness:
    """Verdict for every ordered pair ``(i, j)``, ``i != j``.

    ``witness`` is the removed vertex that clears i's envy of j; it is None
    when i does not envy j at all or when no vertex works (a violation).
    """

    pairs: dict[tuple[int, int], PairVerdict]

    @property
    def holds(self) -> bool:
        return all(v.ok for v in self.pairs.values())

    def __bool__(self) -> bool:
        return self.holds

    def violations(self) -> list[tuple[int, int]]:
        return sorted(p for p, v in self.pairs.items() if not v.ok)

    def to_dict(self) -> dict:
        return {
            "ef1": self.holds,
            "pairs": [
                {"i": i, "j": j, **self.pairs[(i, j)].to_dict()} for i, j in sorted(self.pairs)
            ],
        }


def is_ef1(instance: Instance, allocation: Allocation) -> EF1Witness:
    """Check envy-freeness up to one item for the bundles as they stand."""
    X = allocation.bundles
    pairs = {}
    for i in range(instance.n):
        own = utility(instance, i, X[i])
        for j in range(instance.n):
            if i == j:
                continue
            if own >= utility(instance, i, X[j]):
                pairs[(i, j)] = PairVerdict(False, None, True)
                continue
            g = ef1_witness_for(instance, i, own, X[j])
            pairs[(i, j)] = PairVerdict(True, g, g is not None)
    return EF1Witness(pairs)


def _ef1_toward(instance: Instance, X: Sequence[frozenset], target: int) -> bool:
    """EF1 of every other agent toward ``target``'s bundle."""
    return not any(
        envies_beyond_one(instance, j, X[j], X[target])
        for j in range(instance.n)
        if j != target
    )


# -- envy-cycle elimination ------------------------------------------------------


def _rotate(bundles: list, cycle: list[int]) -> None:
    # Each agent on the cycle takes the bundle of the agent it envies.
    taken = [bundles[cycle[(k + 1) % len(cycle)]] for k in range(len(cycle))]
    for agent, b in zip(cycle, taken):
        bundles[agent] = b


def envy_cycle_steps(
    instance: Instance,
    start: Allocation,
    item_order: Iterable[int] | None = None,
    pick: str = "lowest",
) -> Iterator[Allocation]:
    """Yield the allocation after every rotation and every placed item."""
    start.validate(instance)
    if not is_ef1(instance, start):
        raise ValueError("envy-cycle elimination needs an EF1 starting allocation")
    order = sorted(start.pool) if item_order is None else list(item_order)
    if sorted(order) != sorted(start.pool):
        raise ValueError("item_order must be a permutation of the pool")
    if pick not in ("lowest", "fewest"):
        raise ValueError(f"unknown pick rule {pick!r}")
    bundles = list(start.bundles)
    pool = set(start.pool)
    for item in order:
        while True:
            g = envy_graph(instance, Allocation(tuple(bundles), frozenset(pool)))
            free = g.unenvied()
            if free:
                break
            cycle = g.find_cycle()
            logger.debug("rotating envy cycle %s", cycle)
            _rotate(bundles, cycle)
            yield Allocation(tuple(bundles), frozenset(pool))
        agent = free[0] if pick == "lowest" else min(free, key=lambda a: (len(bundles[a]), a))
        bundles[agent] = bundles[agent] | {item}
        pool.discard(item)
        yield Allocation(tuple(bundles), frozenset(pool))


def envy_cycle_elimination(
    instance: Instance,
    start: Allocation,
    item_order: Iterable[int] | None = None,
    pick: str = "lowest",
) -> Allocation:
    """Complete an EF1 partial allocation by envy-cycle elimination.

    Each pool item goes to an unenvied agent; when every agent is envied,
    bundles rotate along an envy cycle first.  ``pick`` selects among
    unenvied agents: ``"lowest"`` index, or ``"fewest"`` items (then lowest
    index).
    """
    result = start
    for result in envy_cycle_steps(instance, start, item_order, pick):
        pass
    return result


# -- heterogeneous agents ------------------------------------------------------------


@dataclass(frozen=True)
class Alg3State:
    """Partial allocation when the edge-dispensing loop exits."""

    allocation: Allocation
    pending: tuple[int | None, ...]
    remaining: tuple[int, ...]
    unenvied: tuple[int, ...]
    designated: int


@dataclass(frozen=True)
class Alg3Trace:
    designated: int
    loop_exit: Alg3State
    rotations: int


def alg3_ef1_heterogeneous_traced(instance: Instance) -> tuple[Allocation, Alg3Trace]:
    n = instance.n
    g = instance.graph
    V = g.vertices
    values = [utility(instance, i, V) for i in range(n)]
    istar = max(range(n), key=lambda i: (values[i], -i))
    w = instance.profiles[istar]
    M = sorted(max_weight_matching(g, w).matching.edges, key=lambda k: (-w[k], k))
    bundles = [frozenset()] * n
    pending: list[int | None] = [None] * n
    pool = set(V)
    R = list(M)
    if R:
        first = R.pop(0)
        bundles[istar] = frozenset(g.edges[first])
        pool -= bundles[istar]
    rotations = 0
    H: list[int] = []
    while R:
        eg = envy_graph(instance, Allocation(tuple(bundles)))
        H = eg.unenvied()
        if not H:
            # Everyone is envied: rotate bundles (with their pending
            # endpoints) along a cycle, which keeps EF1.
            cycle = eg.find_cycle()
            _rotate(bundles, cycle)
            _rotate(pending, cycle)
            rotations += 1
            continue
        i = H[0]
        if pending[i] is None:
            e = R.pop(0)
            v1, v2 = g.edges[e]
            bundles[i] = bundles[i] | {v1}
            pending[i] = v2
            pool -= {v1, v2}
        else:
            bundles[i] = bundles[i] | {pending[i]}
            pending[i] = None
    # Pending endpoints are not part of the partial allocation; count them
    # with the pool for the snapshot.
    pool |= {v for v in pending if v is not None}
    partial = Allocation(tuple(bundles), frozenset(pool))
    state = Alg3State(partial, tuple(pending), tuple(R), tuple(H), istar)
    final = envy_cycle_elimination(instance, partial)
    return final, Alg3Trace(istar, state, rotations)


def alg3_ef1_heterogeneous(instance: Instance) -> Allocation:
    """EF1 allocation with welfare at least ``sw* / (4 n^2)`` for any weights."""
    return alg3_ef1_heterogeneous_traced(instance)[0]


# -- binary weights ----------------------------------------------------------------


def _unit_matching(instance: Instance, agent: int, vertices: frozenset) -> list[int]:
    """Edge indices of a maximum matching of ``agent``'s unit edges inside ``vertices``."""
    w = instance.profiles[agent]
    g = instance.graph
    mask = WeightProfile(
        w[k] if (u in vertices and v in vertices) else 0 for k, (u, v) in enumerate(g.edges)
    )
    return list(max_weight_matching(g, mask).matching.edges)


def _edge_vertices(instance: Instance, edges: Iterable[int]) -> frozenset[int]:
    return frozenset(x for k in edges for x in instance.graph.edges[k])


@dataclass(frozen=True)
class Alg4Step:
    case: str
    agent: int
    other: int | None
    allocation: Allocation


@dataclass(frozen=True)
class Alg4Trace:
    steps: tuple[Alg4Step, ...]
    loop_exit: Allocation


def _groups(instance: Instance, bundles) -> list[list[int]]:
    vals = [(utility(instance, i, bundles[i]), i) for i in range(instance.n)]
    vals.sort()
    groups: list[list[int]] = []
    last = None
    for v, i in vals:
        if groups and v == last:
            groups[-1].append(i)
        else:
            groups.append([i])
            last = v
    return groups


def alg4_ef1_binary_traced(instance: Instance) -> tuple[Allocation, Alg4Trace]:
    if not instance.is_binary:
        raise ValueError("binary-weight EF1 algorithm needs every weight in {0, 1}")
    n = instance.n
    g = instance.graph
    bundles: list[frozenset] = [frozenset()] * n
    pool = set(g.vertices)
    steps: list[Alg4Step] = []
    groups = _groups(instance, bundles)
    t = 0
    while t < len(groups):
        group = groups[t]
        done = False
        # Case 1: hand a pool edge the agent values to it if EF1 survives.
        for i in group:
            w = instance.profiles[i]
            for k, (a, b) in enumerate(g.edges):
                if w[k] != 1 or a not in pool or b not in pool:
                    continue
                trial = list(bundles)
                trial[i] = bundles[i] | {a, b}
                if _ef1_toward(instance, trial, i):
                    bundles = trial
                    pool -= {a, b}
                    steps.append(Alg4Step("allocate", i, None,
                                          Allocation(tuple(bundles), frozenset(pool))))
                    done = True
                    break
            if done:
                break
        # Case 2: i rebuilds its value from the pool, an envious j takes a
        # better piece of i's old bundle.
        if not done:
            for i in group:
                k_i = utility(instance, i, bundles[i])
                pool_match = _unit_matching(instance, i, frozenset(pool))
                if len(pool_match) < k_i:
                    continue
                for j in range(n):
                    if j == i or not envies(instance, j, bundles[j], bundles[i]):
                        continue
                    need = utility(instance, j, bundles[j]) + 1
                    inside = _unit_matching(instance, j, bundles[i])
                    vstar = _edge_vertices(instance, pool_match[: int(k_i)])
                    vstar_j = _edge_vertices(instance, inside[: int(need)])
                    pool = (pool - vstar) | bundles[j] | (bundles[i] - vstar_j)
                    bundles[i] = vstar
                    bundles[j] = vstar_j
                    steps.append(Alg4Step("exchange", i, j,
                                          Allocation(tuple(bundles), frozenset(pool))))
                    done = True
                    break
                if done:
                    break
        if done:
            groups = _groups(instance, bundles)
            t = 0
        else:
            t += 1
    partial = Allocation(tuple(bundles), frozenset(pool))
    final = envy_cycle_elimination(instance, partial)
    return final, Alg4Trace(tuple(steps), partial)


def alg4_ef1_binary(instance: Instance) -> Allocation:
    """EF1 allocation with welfare at least ``sw* / 3`` for binary weights."""
    return alg4_ef1_binary_traced(instance)[0]


# -- two agents ---------------------------------------------------------------------


@dataclass(frozen=True)
class Alg5Trace:
    branch: str
    sw_star: Fraction
    start: Allocation
    moved: tuple[int, ...]


def alg5_ef1_two_traced(instance: Instance) -> tuple[Allocation, Alg5Trace]:
    if instance.n != 2:
        raise ValueError("the two-agent EF1 algorithm needs n == 2")
    g = instance.graph
    sw = max_social_welfare_matching(instance)
    best = None
    for k in range(g.edge_count):
        for i in range(2):
            wk = instance.profiles[i][k]
            if 3 * wk >= sw and (best is None or wk > best[0]):
                best = (wk, k, i)
    if best is not None:
        _, k, i = best
        start = Allocation.empty(2, g.vertex_count).give(i, g.edges[k])
        final = envy_cycle_elimination(instance, start)
        return final, Alg5Trace("heavy-edge", sw, start, ())

    prof = max_metric_profile(instance)
    res = max_weight_matching(g, prof)
    owned: list[list[int]] = [[], []]
    for k in res.matching.edges:
        # Ties go to the second agent.
        owned[0 if instance.profiles[0][k] > instance.profiles[1][k] else 1].append(k)
    value = [utility(instance, i, _edge_vertices(instance, owned[i])) for i in range(2)]
    # lo plays "agent 1" (smaller welfare share), hi plays "agent 2".
    lo, hi = (0, 1) if value[0] <= value[1] else (1, 0)
    X = [frozenset(), frozenset()]
    X[lo] = _edge_vertices(instance, owned[lo])
    X[hi] = g.vertices - X[lo]
    start = Allocation(tuple(X))
    w_hi = instance.profiles[hi]
    order = []
    for k in sorted(owned[hi], key=lambda k: (-w_hi[k], k)):
        order.extend(g.edges[k])
    order.extend(sorted(X[hi] - set(order)))
    moved = []
    for v in order:
        if not envies_beyond_one(instance, lo, X[lo], X[hi]):
            break
        X[hi] = X[hi] - {v}
        X[lo] = X[lo] | {v}
        moved.append(v)
    return Allocation(tuple(X)), Alg5Trace("welfare-split", sw, start, tuple(moved))


def alg5_ef1_two(instance: Instance) -> Allocation:
    """EF1 allocation for two agents with welfare at least ``sw* / 3``."""
    return alg5_ef1_two_traced(instance)[0]


# -- homogeneous agents ------------------------------------------------------------------


@dataclass(frozen=True)
class Alg6Trace:
    partition: GreedyPartition
    greedy_allocation: Allocation
    ef1_graph: EF1Graph | None
    envied: tuple[int, ...]
    removed: tuple[int, ...]
    repaired: Allocation | None
    early_exit: bool


def alg6_ef1_homogeneous_traced(instance: Instance) -> tuple[Allocation, Alg6Trace]:
    if not instance.homogeneous:
        raise ValueError("the homogeneous EF1 algorithm needs identical agents")
    n = instance.n
    g = instance.graph
    w = instance.profiles[0]
    res = max_weight_matching(g, w)
    gp = greedy_partition(res.matching, w, n)
    X = gp.vertex_bundles(g)
    greedy_alloc = Allocation(tuple(X), res.unmatched)
    if len(res.matching.edges) <= n:
        X[-1] = X[-1] | res.unmatched
        final = Allocation(tuple(X))
        return final, Alg6Trace(gp, greedy_alloc, None, (), (), None, True)
    graph = ef1_graph(instance, greedy_alloc)
    Q = tuple(j for j in range(n) if graph.in_degree(j) > 0)
    leftover = set(res.unmatched)
    removed = []
    for i in Q:
        last = gp.bundles[i][-1]
        v1 = min(g.edges[last])
        X[i] = X[i] - {v1}
        leftover.add(v1)
        removed.append(v1)
    repaired = Allocation(tuple(X), frozenset(leftover))
    for v in sorted(leftover):
        i = min(range(n), key=lambda a: (utility(instance, a, X[a]), a))
        X[i] = X[i] | {v}
    final = Allocation(tuple(X))
    return final, Alg6Trace(gp, greedy_alloc, graph, Q, tuple(removed), repaired, False)


def alg6_ef1_homogeneous(instance: Instance) -> Allocation:
    """EF1 allocation with welfare at least ``(2/3 + 2/(9n-3)) sw*`` for identical agents."""
    return alg6_ef1_homogeneous_traced(instance)[0]
