"""Discrete Smirnov decomposition of polyhedral currents.

A canonical current is read as a flow graph (tau-snapped endpoints as
vertices, pieces as directed arcs with positive flow) and peeled into
weighted source-to-sink paths first, then cycles, picking the
lexicographically smallest options at every step. The peeling never
cancels mass: the weighted lengths of the output curves sum to the mass of
the input, open curves reproduce the boundary atoms, and summing the curve
currents back reproduces the input piece multiset.

Only shared endpoints join curves; a transverse crossing of two segments
is not a vertex (currents are not flows on an embedded graph).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import config
from .currents import Molecule, Piece, PolyhedralCurrent, boundary, canonicalize
from .errors import ValidationError
from .geometry import AmbientSpace, Coords

__all__ = ["FlowGraph", "WeightedCurve", "smirnov_decompose", "curve_current"]


@dataclass(frozen=True)
class WeightedCurve:
    """Polyline with a positive weight; closed curves repeat the first
    vertex at the end."""

    polyline: tuple[Coords, ...]
    weight: float
    closed: bool

    def __post_init__(self):
        if self.weight <= 0:
            raise ValidationError("curve weight must be positive")
        if len(self.polyline) < 2:
            raise ValidationError("polyline needs at least two vertices")
        if self.closed and self.polyline[0] != self.polyline[-1]:
            raise ValidationError("closed curve must end where it starts")

    def length(self, space: AmbientSpace) -> float:
        return math.fsum(
            space.distance(self.polyline[k], self.polyline[k + 1])
            for k in range(len(self.polyline) - 1)
        )


class FlowGraph:
    """Directed graph view of a canonical current: arcs carry positive
    flow (pieces with negative weight are reversed), and the divergence
    outflow - inflow at a vertex is minus the boundary atom weight there."""

    def __init__(self, T: PolyhedralCurrent, tol: float | None = None):
        tau = config.resolve(tol)
        C = T if T.canonical else canonicalize(T, tol)
        endpoints: list[Coords] = []
        for p in C.pieces:
            endpoints.append(p.a)
            endpoints.append(p.b)
        reps = _snap(endpoints, tau)
        self.space = C.space
        self.vertices: list[Coords] = sorted(set(reps.values()))
        index = {v: k for k, v in enumerate(self.vertices)}
        self.flow: dict[tuple[int, int], float] = {}
        for p in C.pieces:
            u = index[reps[p.a]]
            v = index[reps[p.b]]
            if p.w < 0:
                u, v = v, u
            key = (u, v)
            self.flow[key] = self.flow.get(key, 0.0) + abs(p.w)
        self.out: dict[int, list[int]] = {}
        for (u, v) in sorted(self.flow):
            self.out.setdefault(u, []).append(v)

    def divergence(self, v: int) -> float:
        return math.fsum(f for (a, _), f in self.flow.items() if a == v) - \
            math.fsum(f for (_, b), f in self.flow.items() if b == v)


def _snap(points: list[Coords], tau: float) -> dict[Coords, Coords]:
    """Map each endpoint to the representative of its tau-cluster."""
    uniq = sorted(set(points))
    parent = list(range(len(uniq)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(uniq)):
        for j in range(i + 1, len(uniq)):
            if all(abs(a - b) <= tau for a, b in zip(uniq[i], uniq[j])):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return {uniq[i]: uniq[find(i)] for i in range(len(uniq))}


def smirnov_decompose(
    T: PolyhedralCurrent, tol: float | None = None
) -> tuple[WeightedCurve, ...]:
    """Peel a canonical current into weighted paths and cycles without
    mass cancellation. Deterministic for identical input."""
    tau = config.resolve(tol)
    g = FlowGraph(T, tol)
    curves: list[WeightedCurve] = []

    div = {v: g.divergence(v) for v in range(len(g.vertices))}

    def next_arc(u: int):
        for v in g.out.get(u, ()):  # heads already sorted lexicographically
            if g.flow.get((u, v), 0.0) > tau:
                return v
        return None

    def peel(path: list[int], amount: float, closed: bool):
        for k in range(len(path) - 1):
            key = (path[k], path[k + 1])
            g.flow[key] -= amount
            if g.flow[key] <= tau:
                g.flow[key] = 0.0
        poly = tuple(g.vertices[i] for i in path)
        curves.append(WeightedCurve(poly, amount, closed))

    def walk_from(start: int, stop_at_sink: bool) -> list[int] | None:
        """Walk smallest positive out-arcs; peel any cycle met along the
        way; return the remaining path when a sink is reached (or None
        when the walk dissolved into cycles)."""
        path = [start]
        at = {start: 0}
        while True:
            nxt = next_arc(path[-1])
            if nxt is None:
                if stop_at_sink and len(path) > 1:
                    return path
                if not stop_at_sink and len(path) > 1:
                    # conservation dust: a circulation cannot dead-end, so
                    # the arc that led here is noise; drop it to terminate
                    g.flow[(path[-2], path[-1])] = 0.0
                return None
            if nxt in at:
                k = at[nxt]
                cyc = path[k:] + [nxt]
                amount = min(g.flow[(cyc[i], cyc[i + 1])] for i in range(len(cyc) - 1))
                peel(cyc, amount, closed=True)
                for v in path[k + 1:]:
                    del at[v]
                del path[k + 1:]
                if not stop_at_sink and len(path) == 1 and next_arc(path[0]) is None:
                    return None
                continue
            path.append(nxt)
            at[nxt] = len(path) - 1

    # 1) source-to-sink paths: sources are positive-divergence vertices,
    # taken in lexicographic order
    while True:
        source = None
        for v in range(len(g.vertices)):
            if div[v] > tau:
                source = v
                break
        if source is None:
            break
        path = walk_from(source, stop_at_sink=True)
        if path is None:
            # all outgoing flow of this source dissolved into cycles; its
            # residual divergence is numerical dust
            div[source] = 0.0
            continue
        end = path[-1]
        amount = min(g.flow[(path[k], path[k + 1])] for k in range(len(path) - 1))
        amount = min(amount, div[source], -div[end]) if div[end] < -tau else \
            min(amount, div[source])
        if amount <= tau:
            div[source] = 0.0
            continue
        peel(path, amount, closed=False)
        div[source] -= amount
        div[end] += amount

    # 2) remaining flow is a circulation: peel cycles
    while True:
        start = None
        for (u, v), f in sorted(g.flow.items()):
            if f > tau:
                start = u
                break
        if start is None:
            break
        walk_from(start, stop_at_sink=False)

    return tuple(curves)


def curve_current(
    c: WeightedCurve, space: AmbientSpace, tol: float | None = None
) -> PolyhedralCurrent:
    """The polyhedral current of a weighted curve: one piece per edge."""
    pieces = tuple(
        Piece(c.polyline[k], c.polyline[k + 1], c.weight)
        for k in range(len(c.polyline) - 1)
    )
    return PolyhedralCurrent(space, pieces)


def reassemble(
    curves, space: AmbientSpace, tol: float | None = None
) -> PolyhedralCurrent:
    """Canonical sum of the curve currents (round-trip helper)."""
    pieces: list[Piece] = []
    for c in curves:
        pieces.extend(curve_current(c, space, tol).pieces)
    return canonicalize(PolyhedralCurrent(space, tuple(pieces)), tol)


def validate_decomposition(
    T: PolyhedralCurrent, curves, tol: float | None = None
) -> None:
    """Check the no-cancellation identity, the round-trip and cycle
    purity; raise ValidationError on failure."""
    tau = config.resolve(tol)
    C = T if T.canonical else canonicalize(T, tol)
    total = math.fsum(c.weight * c.length(C.space) for c in curves)
    from .currents import mass

    m = mass(C, tol).total
    if abs(total - m) > tau * (1.0 + m):
        raise ValidationError(f"cancellation: curves carry {total}, mass is {m}")
    if not reassemble(curves, C.space, tol).same_as(C, tol):
        raise ValidationError("round-trip does not reproduce the current")
    b = boundary(C, tol)
    if b.is_empty and any(not c.closed for c in curves):
        raise ValidationError("open curve decomposing a cycle")
    open_atoms: list[tuple[Coords, float]] = []
    for c in curves:
        if not c.closed:
            open_atoms.append((c.polyline[0], -c.weight))
            open_atoms.append((c.polyline[-1], c.weight))
    from_curves = Molecule.from_atoms(C.space, open_atoms, tol=tau)
    if not from_curves.same_as(b, tol):
        raise ValidationError("open curve endpoints do not reproduce the boundary")
