"""SBV curves and the curve representation of polyhedral currents.

A monotone Cadlag map parametrizes a finite union of intervals at constant
speed with jumps over the gaps (the transport parametrization). Composing
it with a lifted loop and projecting to the base space turns every Smirnov
loop of a lifted cycle into an SBV curve whose continuous pieces are the
loop's base-hyperplane excursions and whose jumps bridge consecutive
excursion endpoints. Summing those curves over a lifted filling of T gives
the discrete curve representation: it reconstructs T without mass
cancellation, and the weighted jump total is controlled by the KR norm of
the boundary plus the filling slack.

Curves are stored structurally (pieces + jumps), not as samples; equality
is structural within tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import config
from .currents import (
    Molecule,
    Piece,
    PolyhedralCurrent,
    boundary,
    canonicalize,
    mass,
)
from .cyclefill import fill_lifted, x0_restriction
from .decompose import WeightedCurve, smirnov_decompose
from .errors import NoTraceError, SpaceError, ValidationError
from .geometry import AmbientSpace, Coords, drop_point
from .transport import kr_norm

__all__ = [
    "MonotoneCadlag",
    "CurvePiece",
    "SbvCurve",
    "Fragment",
    "CurveRepresentation",
    "transport_param",
    "cadlag_current_a",
    "cadlag_current_j",
    "interval_current",
    "sbv_current_a",
    "sbv_boundary",
    "fragment_of",
    "beta",
    "sbv_represent",
    "area_check",
    "pushforward_identity",
    "validate_representation",
]


# ---------------------------------------------------------------------------
# monotone Cadlag maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneCadlag:
    """Piecewise-affine monotone non-decreasing right-continuous map of
    [0,1] into [0,1]; pieces (t0, t1, v0, v1) tile [0,1] and jumps sit at
    interior breakpoints where one piece ends below the next one's start."""

    pieces: tuple[tuple[float, float, float, float], ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValidationError("at least one affine piece required")
        tau = config.get_tolerance()
        prev_t1 = 0.0
        prev_v1 = None
        if abs(self.pieces[0][0]) > tau or abs(self.pieces[-1][1] - 1.0) > tau:
            raise ValidationError("pieces must tile [0, 1]")
        for t0, t1, v0, v1 in self.pieces:
            if abs(t0 - prev_t1) > tau:
                raise ValidationError("pieces must be contiguous")
            if t1 - t0 <= tau:
                raise ValidationError("zero-width piece")
            if v1 < v0 - tau or (prev_v1 is not None and v0 < prev_v1 - tau):
                raise ValidationError("map must be non-decreasing")
            if v0 < -tau or v1 > 1.0 + tau:
                raise ValidationError("values must stay in [0, 1]")
            prev_t1, prev_v1 = t1, v1

    @property
    def jumps(self) -> tuple[tuple[float, float, float], ...]:
        """(t, left value, right value) at genuine discontinuities."""
        tau = config.get_tolerance()
        out = []
        for k in range(len(self.pieces) - 1):
            left = self.pieces[k][3]
            right = self.pieces[k + 1][2]
            if right - left > tau:
                out.append((self.pieces[k][1], left, right))
        return tuple(out)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(p[0] for p in self.pieces) + (1.0,)

    def value(self, t: float) -> float:
        """Right-continuous evaluation."""
        if t >= 1.0:
            return self.pieces[-1][3]
        for t0, t1, v0, v1 in self.pieces:
            if t0 <= t < t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return self.pieces[0][2]

    def left_value(self, t: float) -> float:
        if t <= 0.0:
            return self.pieces[0][2]
        for t0, t1, v0, v1 in self.pieces:
            if t0 < t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return self.pieces[-1][3]

    def total_variation(self) -> float:
        return self.pieces[-1][3] - self.pieces[0][2]

    def d_a_total(self) -> float:
        return math.fsum(v1 - v0 for _, _, v0, v1 in self.pieces)

    def d_j_total(self) -> float:
        return math.fsum(r - l for _, l, r in self.jumps)


def transport_param(
    intervals: Sequence[tuple[float, float]], tol: float | None = None
) -> MonotoneCadlag:
    """Constant-speed monotone Cadlag parametrization of a finite union of
    closed intervals: the pseudo-inverse of x -> |K|^-1 |K intersect [0,x]|.

    The slope on every continuity piece is |K| and the jumps traverse
    exactly the gaps of K between its essential inf and sup.
    """
    tau = config.resolve(tol)
    ivs = []
    for a, b in intervals:
        a, b = float(a), float(b)
        if b < a - tau:
            raise ValidationError(f"interval [{a}, {b}] is reversed")
        if b - a > tau:
            ivs.append((a, b))
    for k in range(len(ivs) - 1):
        if ivs[k + 1][0] < ivs[k][1] - tau:
            raise ValidationError("intervals must be sorted and disjoint")
    if not ivs:
        return MonotoneCadlag(((0.0, 1.0, 0.0, 0.0),))
    # merge touching neighbours
    merged = [list(ivs[0])]
    for a, b in ivs[1:]:
        if a - merged[-1][1] <= tau:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    size = math.fsum(b - a for a, b in merged)
    pieces = []
    acc = 0.0
    for k, (a, b) in enumerate(merged):
        s0 = acc / size
        acc += b - a
        s1 = acc / size if k < len(merged) - 1 else 1.0
        pieces.append((s0, s1, a, b))
    return MonotoneCadlag(tuple(pieces))


def _line() -> AmbientSpace:
    return AmbientSpace.rd(1, "euclidean")


def cadlag_current_a(u: MonotoneCadlag, tol: float | None = None) -> PolyhedralCurrent:
    """The 1-D current of the absolutely continuous part of u."""
    tau = config.resolve(tol)
    pieces = tuple(
        Piece((v0,), (v1,), 1.0) for _, _, v0, v1 in u.pieces if v1 - v0 > tau
    )
    return canonicalize(PolyhedralCurrent(_line(), pieces), tol)


def cadlag_current_j(u: MonotoneCadlag, tol: float | None = None) -> PolyhedralCurrent:
    """The 1-D current traversed by the jumps of u."""
    pieces = tuple(Piece((l,), (r,), 1.0) for _, l, r in u.jumps)
    return canonicalize(PolyhedralCurrent(_line(), pieces), tol)


def interval_current(
    intervals: Sequence[tuple[float, float]], tol: float | None = None
) -> PolyhedralCurrent:
    """The 1-D current of a union of intervals, each with weight one."""
    pieces = tuple(Piece((float(a),), (float(b),), 1.0) for a, b in intervals)
    return canonicalize(PolyhedralCurrent(_line(), pieces), tol)


# ---------------------------------------------------------------------------
# area formula for monotone piecewise-affine maps
# ---------------------------------------------------------------------------

def area_check(
    phi: MonotoneCadlag,
    g: tuple[float, float, float],
    U: tuple[float, float],
    tol: float | None = None,
) -> tuple[float, float]:
    """Both sides of the area formula for a monotone piecewise-affine map:
    the integral of g over U intersect im(phi) against Lebesgue measure,
    and the integral of g(phi(t)) against the diffuse derivative of phi
    over phi^-1(U). Each side is computed in closed form by its own route;
    jumps contribute to neither side and the Cantor part vanishes on this
    class. g = (c0, c1, c2) encodes c0 + c1 x + c2 x^2.
    """
    c0, c1, c2 = (float(c) for c in g)
    u0, u1 = (float(x) for x in U)
    if u1 < u0:
        raise ValidationError("interval U is reversed")

    def G(x: float) -> float:  # antiderivative in the value variable
        return c0 * x + c1 * x * x / 2.0 + c2 * x ** 3 / 3.0

    lhs_terms = []
    for _, _, v0, v1 in phi.pieces:
        lo, hi = max(v0, u0), min(v1, u1)
        if hi > lo:
            lhs_terms.append(G(hi) - G(lo))
    lhs = math.fsum(lhs_terms)

    rhs_terms = []
    for t0, t1, v0, v1 in phi.pieces:
        s = (v1 - v0) / (t1 - t0)
        if s <= 0.0:
            continue
        alpha = v0 - s * t0  # phi(t) = alpha + s t on the piece
        ta = max(t0, t0 + (u0 - v0) / s)
        tb = min(t1, t0 + (u1 - v0) / s)
        if tb <= ta:
            continue

        def H(t: float) -> float:  # antiderivative of g(alpha + s t)
            return (
                c0 * t
                + c1 * (alpha * t + s * t * t / 2.0)
                + c2 * (alpha * alpha * t + alpha * s * t * t + s * s * t ** 3 / 3.0)
            )

        rhs_terms.append(s * (H(tb) - H(ta)))
    rhs = math.fsum(rhs_terms)
    return lhs, rhs


def pushforward_identity(
    phi: MonotoneCadlag, U: tuple[float, float], tol: float | None = None
) -> tuple[float, float]:
    """Mass of the pushforward of the diffuse derivative inside U versus
    Lebesgue measure of im(phi) inside U (the g = 1 area identity)."""
    lhs, rhs = area_check(phi, (1.0, 0.0, 0.0), U, tol)
    return rhs, lhs


# ---------------------------------------------------------------------------
# SBV curves
# ---------------------------------------------------------------------------

class CurvePiece(NamedTuple):
    t0: float
    t1: float
    polyline: tuple[Coords, ...]


@dataclass(frozen=True)
class SbvCurve:
    """Piecewise-affine constant-speed curve with finitely many jumps.

    Piece parameter intervals tile [0,1]; at every interior boundary
    either a jump connects the adjacent polyline endpoints or the
    polylines touch and the curve is continuous there.
    """

    space: AmbientSpace
    pieces: tuple[CurvePiece, ...]
    jumps: tuple[tuple[float, Coords, Coords], ...]
    speed: float

    def length(self) -> float:
        return math.fsum(_poly_len(self.space, p.polyline) for p in self.pieces)

    def jump_total(self) -> float:
        return math.fsum(self.space.distance(l, r) for _, l, r in self.jumps)

    @property
    def start(self) -> Coords:
        return self.pieces[0].polyline[0]

    @property
    def end(self) -> Coords:
        return self.pieces[-1].polyline[-1]

    def validate(self, tol: float | None = None) -> None:
        tau = config.resolve(tol)
        if not self.pieces:
            raise ValidationError("curve has no pieces")
        if abs(self.pieces[0].t0) > tau or abs(self.pieces[-1].t1 - 1.0) > tau:
            raise ValidationError("piece parameters must tile [0, 1]")
        jump_at = {round(t, 12): (l, r) for t, l, r in self.jumps}
        for k, piece in enumerate(self.pieces):
            if piece.t1 - piece.t0 <= tau:
                raise ValidationError("zero-width parameter interval")
            plen = _poly_len(self.space, piece.polyline)
            if abs(plen / (piece.t1 - piece.t0) - self.speed) > tau * (1.0 + self.speed):
                raise ValidationError("piece speed differs from the curve speed")
            for i in range(len(piece.polyline) - 1):
                if self.space.distance(piece.polyline[i], piece.polyline[i + 1]) <= tau:
                    raise ValidationError("consecutive polyline vertices coincide")
            if k == 0:
                continue
            prev = self.pieces[k - 1]
            if abs(piece.t0 - prev.t1) > tau:
                raise ValidationError("piece parameters must be contiguous")
            key = round(prev.t1, 12)
            if key in jump_at:
                l, r = jump_at[key]
                if self.space.distance(l, prev.polyline[-1]) > tau or \
                        self.space.distance(r, piece.polyline[0]) > tau:
                    raise ValidationError("jump endpoints do not match the pieces")
            elif self.space.distance(prev.polyline[-1], piece.polyline[0]) > tau:
                raise ValidationError("discontinuity without a jump record")
        if _has_collinear_overlap(self.space, self.pieces, tau):
            raise ValidationError("image trace overlaps itself along a line")


def _poly_len(space: AmbientSpace, poly: tuple[Coords, ...]) -> float:
    return math.fsum(
        space.distance(poly[k], poly[k + 1]) for k in range(len(poly) - 1)
    )


def _has_collinear_overlap(space, pieces, tau) -> bool:
    # transversal crossings are H^1-null and permitted; only collinear
    # overlap of edge interiors violates the injective image trace
    edges = []
    for p in pieces:
        for i in range(len(p.polyline) - 1):
            edges.append((p.polyline[i], p.polyline[i + 1]))
    summed = math.fsum(space.distance(a, b) for a, b in edges)
    stacked = PolyhedralCurrent(space, tuple(Piece(a, b, 1.0) for a, b in edges))
    # opposite-orientation overlaps cancel mass; same-orientation overlaps
    # double weight on the shared part, so compare against both signals
    canon = canonicalize(stacked)
    if abs(mass(canon).total - summed) > tau * (1.0 + summed):
        return True
    return any(abs(p.w) > 1.0 + tau for p in canon.pieces)


def sbv_current_a(u: SbvCurve, tol: float | None = None) -> PolyhedralCurrent:
    """Current of the absolutely continuous part: one weighted polyline
    per piece, nothing across the jumps."""
    pieces = []
    for p in u.pieces:
        for i in range(len(p.polyline) - 1):
            pieces.append(Piece(p.polyline[i], p.polyline[i + 1], 1.0))
    return PolyhedralCurrent(u.space, tuple(pieces))


def sbv_boundary(u: SbvCurve, tol: float | None = None) -> Molecule:
    """Boundary of the absolutely continuous current: the endpoint dipole
    minus one dipole per jump."""
    atoms: list[tuple[Coords, float]] = [(u.end, 1.0), (u.start, -1.0)]
    for _, l, r in u.jumps:
        atoms.append((r, -1.0))
        atoms.append((l, 1.0))
    return Molecule.from_atoms(u.space, atoms, tol=tol)


@dataclass(frozen=True)
class Fragment:
    """Arclength reparametrization of an SBV curve: a 1-Lipschitz map from
    a finite union of intervals; the gaps have exactly the jump widths."""

    space: AmbientSpace
    intervals: tuple[tuple[float, float], ...]
    polylines: tuple[tuple[Coords, ...], ...]


def fragment_of(u: SbvCurve, tol: float | None = None) -> Fragment:
    """Reparametrize by cumulative variation (jumps included): the current
    of the fragment coincides with the curve's absolutely continuous
    current piece by piece."""
    tau = config.resolve(tol)
    if u.speed <= tau:
        raise SpaceError("fragment_of needs a curve of positive speed")
    jump_at = {}
    for t, l, r in u.jumps:
        jump_at[round(t, 12)] = u.space.distance(l, r)
    s = 0.0
    intervals = []
    polylines = []
    for p in u.pieces:
        plen = _poly_len(u.space, p.polyline)
        intervals.append((s, s + plen))
        polylines.append(p.polyline)
        s += plen
        s += jump_at.get(round(p.t1, 12), 0.0)
    return Fragment(u.space, tuple(intervals), tuple(polylines))


# ---------------------------------------------------------------------------
# beta: lifted loops to SBV curves
# ---------------------------------------------------------------------------

def beta(theta: WeightedCurve, lifted_space: AmbientSpace, tol: float | None = None) -> SbvCurve:
    """Trace of a closed lifted loop on the base hyperplane X0, as an SBV
    curve in the base space.

    The loop is rotated to start at an X0-excursion start, its X0 edge
    runs become the continuous pieces (reparametrized at constant speed by
    the transport parametrization of the X0 parameter set), and each gap
    between consecutive runs becomes a jump between the projected
    excursion endpoints. Raises NoTraceError when the loop never runs
    inside X0.
    """
    tau = config.resolve(tol)
    if not theta.closed:
        raise ValidationError("beta expects a closed loop")
    base = AmbientSpace.rd(lifted_space.dim - 1, lifted_space.norm)
    verts = list(theta.polyline[:-1])  # cyclic, without the repeated closer
    n = len(verts)

    def in_x0(v: Coords) -> bool:
        return abs(v[-1]) <= tau / 2.0

    edge_flags = [in_x0(verts[k]) and in_x0(verts[(k + 1) % n]) for k in range(n)]
    if not any(edge_flags):
        raise NoTraceError("loop never runs inside the base hyperplane")

    if all(edge_flags):
        poly = tuple(drop_point(v) for v in verts) + (drop_point(verts[0]),)
        length = _poly_len(base, poly)
        return SbvCurve(base, (CurvePiece(0.0, 1.0, poly),), (), length)

    start = next(
        k for k in range(n) if edge_flags[k] and not edge_flags[(k - 1) % n]
    )
    order = [(start + k) % n for k in range(n)]
    flags = [edge_flags[k] for k in order]
    edges = [(verts[k], verts[(k + 1) % n]) for k in order]

    # maximal X0 runs and their polylines
    runs: list[list[Coords]] = []
    k = 0
    while k < n:
        if not flags[k]:
            k += 1
            continue
        poly = [edges[k][0]]
        while k < n and flags[k]:
            poly.append(edges[k][1])
            k += 1
        runs.append(poly)

    lengths = [_poly_len(lifted_space, tuple(r)) for r in runs]
    ksize = math.fsum(lengths)
    # with the loop arclength-parametrized onto [0,1], |K_theta| equals
    # ksize / l(theta) and the curve speed |K| * l(theta) is just ksize

    pieces: list[CurvePiece] = []
    jumps: list[tuple[float, Coords, Coords]] = []
    acc = 0.0
    prev_end: Coords | None = None
    for idx, (run, rlen) in enumerate(zip(runs, lengths)):
        s0 = acc / ksize
        acc += rlen
        s1 = acc / ksize if idx < len(runs) - 1 else 1.0
        poly = tuple(drop_point(v) for v in run)
        if prev_end is not None and base.distance(prev_end, poly[0]) <= tau:
            # coincident excursion endpoints: the curve is continuous here
            prev = pieces[-1]
            pieces[-1] = CurvePiece(prev.t0, s1, prev.polyline + poly[1:])
        else:
            if prev_end is not None:
                jumps.append((s0, prev_end, poly[0]))
            pieces.append(CurvePiece(s0, s1, poly))
        prev_end = poly[-1]
    return SbvCurve(base, tuple(pieces), tuple(jumps), ksize)


# ---------------------------------------------------------------------------
# the curve representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveRepresentation:
    """Finite weighted list of SBV curves realizing a polyhedral current."""

    target: PolyhedralCurrent
    epsilon: float
    entries: tuple[tuple[SbvCurve, float], ...]

    def total_length(self) -> float:
        return math.fsum(w * u.length() for u, w in self.entries)

    def total_jump(self) -> float:
        return math.fsum(w * u.jump_total() for u, w in self.entries)

    def reconstruction(self, tol: float | None = None) -> PolyhedralCurrent:
        pieces: list[Piece] = []
        for u, w in self.entries:
            pieces.extend(
                Piece(p.a, p.b, w * p.w) for p in sbv_current_a(u, tol).pieces
            )
        return canonicalize(
            PolyhedralCurrent(self.target.space, tuple(pieces)), tol
        )


def sbv_represent(
    T: PolyhedralCurrent, eps: float, tol: float | None = None
) -> CurveRepresentation:
    """Curve representation of T at slack eps.

    Pipeline: lift and fill T into a cycle one level up, decompose the
    cycle into weighted loops, and trace every loop back on the base
    hyperplane. Loops without a base trace belong entirely to the filling
    and are dropped. The result reconstructs T, carries exactly its mass,
    and its weighted jump total is at most kr_norm(boundary(T)) + eps.
    """
    if eps <= 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    target = canonicalize(T, tol)
    C, _R = fill_lifted(target, eps, tol)
    entries = []
    for loop in smirnov_decompose(C, tol):
        if not loop.closed:
            raise ValidationError("filled current decomposed into an open curve")
        try:
            u = beta(loop, C.space, tol)
        except NoTraceError:
            continue
        entries.append((u, loop.weight))
    return CurveRepresentation(target=target, epsilon=eps, entries=tuple(entries))


def validate_representation(
    rep: CurveRepresentation, tol: float | None = None
) -> None:
    """Check reconstruction, the mass identity and the jump bound."""
    tau = config.resolve(tol)
    if not rep.reconstruction(tol).same_as(rep.target, tol):
        raise ValidationError("representation does not reconstruct the current")
    m = mass(rep.target, tol).total
    if abs(rep.total_length() - m) > tau * (1.0 + m):
        raise ValidationError(
            f"weighted curve length {rep.total_length()} differs from mass {m}"
        )
    bound = kr_norm(boundary(rep.target, tol), tol) + rep.epsilon
    if rep.total_jump() > bound + tau * (1.0 + bound):
        raise ValidationError(
            f"weighted jump total {rep.total_jump()} exceeds {bound}"
        )
    for u, _ in rep.entries:
        u.validate(tol)


def validate_transport_param(
    intervals: Sequence[tuple[float, float]],
    u: MonotoneCadlag,
    tol: float | None = None,
) -> None:
    """The three current identities of the transport parametrization plus
    the slope and variation bookkeeping."""
    tau = config.resolve(tol)
    ivs = [(float(a), float(b)) for a, b in intervals if float(b) - float(a) > tau]
    if not ivs:
        if u.d_a_total() > tau or u.d_j_total() > tau:
            raise ValidationError("parametrization of a null set must be constant")
        return
    size = math.fsum(b - a for a, b in ivs)
    lo = min(a for a, _ in ivs)
    hi = max(b for _, b in ivs)
    for t0, t1, v0, v1 in u.pieces:
        slope = (v1 - v0) / (t1 - t0)
        if abs(slope - size) > tau * (1.0 + size):
            raise ValidationError(f"piece slope {slope} differs from |K| = {size}")
    if not cadlag_current_a(u, tol).same_as(interval_current(ivs, tol), tol):
        raise ValidationError("absolutely continuous part does not equal [K]")
    gaps = interval_current([(lo, hi)], tol) - interval_current(ivs, tol)
    if not cadlag_current_j(u, tol).same_as(canonicalize(gaps, tol), tol):
        raise ValidationError("jump part does not traverse the gaps of K")
    if abs(u.total_variation() - (hi - lo)) > tau:
        raise ValidationError("total variation must be ess sup - ess inf")
    if abs(u.d_a_total() - size) > tau:
        raise ValidationError("diffuse variation must be |K|")
