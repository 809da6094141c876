"""Kantorovich-Rubinstein norms and optimal transport plans for molecules.

The KR norm of a molecule equals the Wasserstein-1 cost between its
positive and negative parts. The primal is solved by successive shortest
paths on the bipartite transportation graph with Johnson potentials
(costs are distances, hence nonnegative; reduced costs stay nonnegative
after each Dijkstra pass). The dual certificate is then recomputed on the
support graph so that it is 1-Lipschitz across *all* pairs of support
points, not only along transport arcs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from . import config
from .currents import Molecule
from .errors import SolverError, SpaceError, ValidationError
from .geometry import AmbientSpace, Point

__all__ = [
    "TransportPlan",
    "kr_norm",
    "solve_plan",
    "dipole_decomposition",
    "kr_norm_1d",
    "f0_norm",
]


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling between the positive part (sources) and negative
    part (sinks) of a molecule, with a pairwise 1-Lipschitz dual potential
    over sources + sinks (concatenated in that order)."""

    space: AmbientSpace
    sources: tuple[tuple[Point, float], ...]
    sinks: tuple[tuple[Point, float], ...]
    flows: tuple[tuple[int, int, float], ...]  # (source idx, sink idx, amount>0)
    cost: float
    potentials: tuple[float, ...]

    @property
    def support_points(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.sources) + tuple(p for p, _ in self.sinks)

    def dual_value(self) -> float:
        ns = len(self.sources)
        return math.fsum(s * self.potentials[i] for i, (_, s) in enumerate(self.sources)) - \
            math.fsum(d * self.potentials[ns + j] for j, (_, d) in enumerate(self.sinks))

    def validate(self, tol: float | None = None) -> None:
        """Raise ValidationError unless all plan invariants hold."""
        tau = config.resolve(tol)
        ns = len(self.sources)
        out = [0.0] * ns
        inn = [0.0] * len(self.sinks)
        cost_terms = []
        for i, j, amt in self.flows:
            if amt <= 0:
                raise ValidationError("non-positive flow amount")
            out[i] += amt
            inn[j] += amt
            cost_terms.append(
                amt * self.space.distance(self.sources[i][0], self.sinks[j][0])
            )
        for i, (_, s) in enumerate(self.sources):
            if abs(out[i] - s) > tau:
                raise ValidationError(f"source {i} ships {out[i]} of supply {s}")
        for j, (_, d) in enumerate(self.sinks):
            if abs(inn[j] - d) > tau:
                raise ValidationError(f"sink {j} receives {inn[j]} of demand {d}")
        if abs(math.fsum(cost_terms) - self.cost) > tau * (1.0 + abs(self.cost)):
            raise ValidationError("cost does not match the flows")
        pts = self.support_points
        f = self.potentials
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if abs(f[a] - f[b]) > self.space.distance(pts[a], pts[b]) + tau:
                    raise ValidationError("dual potential is not 1-Lipschitz")
        for i, j, amt in self.flows:
            d = self.space.distance(self.sources[i][0], self.sinks[j][0])
            if abs((f[i] - f[ns + j]) - d) > tau:
                raise ValidationError("complementary slackness fails on a flow arc")
        if abs(self.dual_value() - self.cost) > tau * (1.0 + abs(self.cost)):
            raise ValidationError("duality gap exceeds tolerance")


def _empty_plan(space: AmbientSpace) -> TransportPlan:
    return TransportPlan(space, (), (), (), 0.0, ())


def solve_plan(m: Molecule, tol: float | None = None) -> TransportPlan:
    """Optimal transport plan between m+ and m-.

    Deterministic: ties among equal-cost matchings are broken by
    lexicographic (source index, sink index) order of the arcs considered.
    """
    tau = config.resolve(tol)
    if abs(m.total_weight()) > tau:
        raise ValidationError(f"molecule average {m.total_weight()} exceeds tolerance")
    sources = m.positive_part()
    sinks = m.negative_part()
    if not sources and not sinks:
        return _empty_plan(m.space)
    p, q = len(sources), len(sinks)
    dist = [
        [m.space.distance(sources[i][0], sinks[j][0]) for j in range(q)]
        for i in range(p)
    ]

    res_sup = [s for _, s in sources]
    res_dem = [d for _, d in sinks]
    flow: dict[tuple[int, int], float] = {}
    # node ids: 0..p-1 sources, p..p+q-1 sinks
    pot = [0.0] * (p + q)
    max_rounds = 8 * p * q + 64
    rounds = 0
    while max(res_dem, default=0.0) > tau:
        rounds += 1
        if rounds > max_rounds:
            raise SolverError("transport solver failed to converge")
        dvec, parent = _dijkstra(p, q, dist, pot, res_sup, flow)
        target = -1
        best = math.inf
        for j in range(q):
            if res_dem[j] > tau and dvec[p + j] < best - 0.0:
                best = dvec[p + j]
                target = j
        if target < 0:
            raise SolverError("no augmenting path to an unsaturated sink")
        # walk back to find the bottleneck
        path = []
        node = p + target
        while parent[node] is not None:
            prev = parent[node]
            path.append((prev, node))
            node = prev
        path.reverse()
        start = path[0][0]
        amt = min(res_sup[start], res_dem[target])
        for u, v in path:
            if v < p:  # backward arc sink->source carries existing flow
                amt = min(amt, flow[(v, u - p)])
        for u, v in path:
            if u < p:  # forward source->sink
                flow[(u, v - p)] = flow.get((u, v - p), 0.0) + amt
            else:  # backward: cancel flow on (v, u-p)
                key = (v, u - p)
                flow[key] -= amt
                if flow[key] <= 0.0:
                    del flow[key]
        res_sup[start] -= amt
        res_dem[target] -= amt
        if res_sup[start] < tau:
            res_sup[start] = 0.0
        if res_dem[target] < tau:
            res_dem[target] = 0.0
        cap = dvec[p + target]
        for v in range(p + q):
            pot[v] += min(dvec[v], cap)

    flows = tuple((i, j, amt) for (i, j), amt in sorted(flow.items()) if amt > tau)
    cost = math.fsum(amt * dist[i][j] for i, j, amt in flows)
    potentials = _support_potentials(m.space, sources, sinks, dist, flows)
    return TransportPlan(m.space, sources, sinks, flows, cost, potentials)


def _dijkstra(p, q, dist, pot, res_sup, flow):
    """Shortest reduced-cost distances from the unsaturated sources."""
    n = p + q
    INF = math.inf
    dvec = [INF] * n
    parent: list[int | None] = [None] * n
    heap = []
    for i in range(p):
        if res_sup[i] > 0.0:
            dvec[i] = 0.0
            heapq.heappush(heap, (0.0, i))
    seen = [False] * n
    back = {}  # source i -> sinks j with flow, for backward arcs
    for (i, j) in flow:
        back.setdefault(p + j, []).append(i)
    while heap:
        d0, u = heapq.heappop(heap)
        if seen[u]:
            continue
        seen[u] = True
        if u < p:
            for j in range(q):
                v = p + j
                rc = dist[u][j] + pot[u] - pot[v]
                if rc < 0.0:
                    rc = 0.0
                nd = d0 + rc
                if nd < dvec[v]:
                    dvec[v] = nd
                    parent[v] = u
                    heapq.heappush(heap, (nd, v))
        else:
            for i in sorted(back.get(u, ())):
                rc = -dist[i][u - p] + pot[u] - pot[i]
                if rc < 0.0:
                    rc = 0.0
                nd = d0 + rc
                if nd < dvec[i]:
                    dvec[i] = nd
                    parent[i] = u
                    heapq.heappush(heap, (nd, i))
    return dvec, parent


def _support_potentials(space, sources, sinks, dist, flows):
    """Pairwise 1-Lipschitz dual potential by Bellman-Ford on the support
    graph: metric arcs between all pairs plus reversed flow arcs of cost
    -d. At optimality there is no negative cycle, and f = -delta satisfies
    f(src) - f(snk) = d on flow arcs and |f(a) - f(b)| <= d(a, b) always."""
    pts = [s for s, _ in sources] + [t for t, _ in sinks]
    n = len(pts)
    p = len(sources)
    arcs = []
    for a in range(n):
        for b in range(n):
            if a != b:
                arcs.append((a, b, space.distance(pts[a], pts[b])))
    for i, j, _ in flows:
        arcs.append((p + j, i, -dist[i][j]))
    delta = [0.0] * n
    for _ in range(n + 1):
        changed = False
        for a, b, c in arcs:
            nd = delta[a] + c
            if nd < delta[b] - 1e-14:
                delta[b] = nd
                changed = True
        if not changed:
            break
    else:
        raise SolverError("negative cycle in optimality certificate")
    return tuple(-d for d in delta)


def kr_norm(m: Molecule, tol: float | None = None) -> float:
    """KR norm = W1(m+, m-): cost of an optimal plan; 0 iff m is empty."""
    if m.is_empty:
        return 0.0
    return solve_plan(m, tol).cost


def dipole_decomposition(plan: TransportPlan) -> tuple[tuple[Point, Point, float], ...]:
    """Optimal dipole representation m = sum eta_h (delta_y - delta_x):
    one dipole per flow arc, with y the source point (positive part) and
    x the sink point, so that sum eta d(x, y) equals the plan cost."""
    return tuple(
        (plan.sinks[j][0], plan.sources[i][0], amt) for i, j, amt in plan.flows
    )


def kr_norm_1d(m: Molecule, tol: float | None = None) -> float:
    """Exact KR norm on the Euclidean line: the integral of |F| where F is
    the cumulative weight function. Independent of the flow solver."""
    if not (m.space.is_rd and m.space.dim == 1):
        raise SpaceError("kr_norm_1d needs a 1-dimensional NormedRd molecule")
    atoms = sorted(((p[0], w) for p, w in m.atoms), key=lambda t: t[0])
    acc = []
    cum = 0.0
    for k in range(len(atoms) - 1):
        cum += atoms[k][1]
        acc.append(abs(cum) * (atoms[k + 1][0] - atoms[k][0]))
    return math.fsum(acc)


def f0_norm(m: Molecule, tol: float | None = None) -> float:
    """Least mass of a current with the given boundary. In a geodesic
    normed space this equals the KR norm; in a finite metric space the
    identity can fail, so the call is rejected there."""
    if not m.space.is_rd:
        raise SpaceError("f0_norm is only the KR norm in geodesic NormedRd spaces")
    return kr_norm(m, tol)
