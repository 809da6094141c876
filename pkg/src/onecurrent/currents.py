"""Molecules and polyhedral 1-currents.

A molecule is a finite signed atomic measure with zero total weight; a
polyhedral current is a finite family of weighted oriented segments. Both
are immutable values. The operations here are the current calculus:
boundary, canonicalization (interval overlay per supporting line, which
makes the mass of overlapping segments well defined), mass, restriction to
axis-aligned boxes, pushforward under affine maps, and evaluation on
metric forms (f, pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import config
from .errors import SpaceError, ValidationError
from .geometry import AmbientSpace, Coords, Point, Segment

__all__ = [
    "Molecule",
    "Piece",
    "PolyhedralCurrent",
    "MetricForm",
    "MassMeasure",
    "AffineMap",
    "boundary",
    "canonicalize",
    "mass",
    "restrict",
    "pushforward",
    "pushforward_molecule",
    "evaluate",
    "kr_norm_of_boundary",
    "form_mass_bound",
]


# ---------------------------------------------------------------------------
# small vector helpers (plain tuples; euclidean internals for line geometry)
# ---------------------------------------------------------------------------

def _sub(p: Coords, q: Coords) -> Coords:
    return tuple(a - b for a, b in zip(p, q))


def _add(p: Coords, q: Coords) -> Coords:
    return tuple(a + b for a, b in zip(p, q))


def _scale(p: Coords, s: float) -> Coords:
    return tuple(a * s for a in p)


def _dot(p: Coords, q: Coords) -> float:
    return math.fsum(a * b for a, b in zip(p, q))


def _eunorm(p: Coords) -> float:
    return math.sqrt(math.fsum(a * a for a in p))


def _point_line_dist(p: Coords, origin: Coords, unit: Coords) -> float:
    rel = _sub(p, origin)
    along = _dot(rel, unit)
    return _eunorm(_sub(rel, _scale(unit, along)))


def _merge_points(points: Sequence[Point], tau: float, metric) -> list[int]:
    """Union-find clustering of points within tau; returns root index per point."""
    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            ri, rj = find(i), find(j)
            if ri != rj and metric(points[i], points[j]) <= tau:
                parent[max(ri, rj)] = min(ri, rj)
    return [find(i) for i in range(len(points))]


# ---------------------------------------------------------------------------
# molecules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Molecule:
    """Finite signed atomic measure with zero average (the discrete
    Arens-Eells element). Construct through from_atoms(), which merges
    atoms within tau, drops negligible weights and checks the zero sum."""

    space: AmbientSpace
    atoms: tuple[tuple[Point, float], ...] = ()

    @staticmethod
    def from_atoms(
        space: AmbientSpace,
        atoms: Iterable[tuple[Point, float]],
        tol: float | None = None,
        require_zero_sum: bool = True,
    ) -> "Molecule":
        tau = config.resolve(tol)
        raw = [(p if isinstance(p, int) else tuple(float(x) for x in p), float(w))
               for p, w in atoms]
        for p, w in raw:
            space.check_point(p)
            if not math.isfinite(w):
                raise ValidationError(f"non-finite atom weight {w!r}")
        total = math.fsum(w for _, w in raw)
        if require_zero_sum and abs(total) > tau:
            raise ValidationError(f"molecule has non-zero average {total}")
        if not raw:
            return Molecule(space, ())
        roots = _merge_points([p for p, _ in raw], tau, space.distance)
        merged: dict[int, float] = {}
        for (p, w), r in zip(raw, roots):
            merged[r] = merged.get(r, 0.0) + w
        out = tuple(
            (raw[r][0], w) for r, w in sorted(merged.items()) if abs(w) > tau
        )
        return Molecule(space, out)

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    def total_weight(self) -> float:
        return math.fsum(w for _, w in self.atoms)

    def positive_part(self) -> tuple[tuple[Point, float], ...]:
        return tuple((p, w) for p, w in self.atoms if w > 0)

    def negative_part(self) -> tuple[tuple[Point, float], ...]:
        """Atoms of the negative part, with positive weights (demands)."""
        return tuple((p, -w) for p, w in self.atoms if w < 0)

    def __neg__(self) -> "Molecule":
        return Molecule(self.space, tuple((p, -w) for p, w in self.atoms))

    def __add__(self, other: "Molecule") -> "Molecule":
        if other.space != self.space:
            raise SpaceError("molecules live in different spaces")
        return Molecule.from_atoms(self.space, self.atoms + other.atoms)

    def __sub__(self, other: "Molecule") -> "Molecule":
        return self + (-other)

    def scaled(self, s: float) -> "Molecule":
        return Molecule(self.space, tuple((p, s * w) for p, w in self.atoms))

    def same_as(self, other: "Molecule", tol: float | None = None) -> bool:
        """Atom-wise equality within tau (difference molecule is empty)."""
        tau = config.resolve(tol)
        diff = Molecule.from_atoms(
            self.space,
            self.atoms + tuple((p, -w) for p, w in other.atoms),
            tol=tau,
            require_zero_sum=False,
        )
        return diff.is_empty


# ---------------------------------------------------------------------------
# polyhedral currents
# ---------------------------------------------------------------------------

class Piece(NamedTuple):
    a: Coords
    b: Coords
    w: float

    @property
    def segment(self) -> Segment:
        return Segment(self.a, self.b)


@dataclass(frozen=True)
class PolyhedralCurrent:
    """Finite weighted family of oriented segments in a NormedRd space.

    ``canonical`` marks values produced by canonicalize(): pieces grouped
    by supporting line, interior-disjoint per line, nonzero weights.
    """

    space: AmbientSpace
    pieces: tuple[Piece, ...] = ()
    canonical: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.space.is_rd:
            raise SpaceError("polyhedral currents require a NormedRd space")
        for p in self.pieces:
            self.space.check_point(p.a)
            self.space.check_point(p.b)
            if not math.isfinite(p.w):
                raise ValidationError(f"non-finite piece weight {p.w!r}")

    @staticmethod
    def from_pieces(space: AmbientSpace, triples: Iterable[Sequence]) -> "PolyhedralCurrent":
        pieces = tuple(
            Piece(tuple(float(x) for x in a), tuple(float(x) for x in b), float(w))
            for a, b, w in triples
        )
        return PolyhedralCurrent(space, pieces)

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def __add__(self, other: "PolyhedralCurrent") -> "PolyhedralCurrent":
        if other.space != self.space:
            raise SpaceError("currents live in different spaces")
        return PolyhedralCurrent(self.space, self.pieces + other.pieces)

    def __neg__(self) -> "PolyhedralCurrent":
        return PolyhedralCurrent(
            self.space, tuple(Piece(p.a, p.b, -p.w) for p in self.pieces)
        )

    def __sub__(self, other: "PolyhedralCurrent") -> "PolyhedralCurrent":
        return self + (-other)

    def scaled(self, s: float) -> "PolyhedralCurrent":
        return PolyhedralCurrent(
            self.space, tuple(Piece(p.a, p.b, s * p.w) for p in self.pieces)
        )

    def same_as(self, other: "PolyhedralCurrent", tol: float | None = None) -> bool:
        """Equality as currents: the canonical difference is empty."""
        return canonicalize(self - other, tol).is_empty


def boundary(T: PolyhedralCurrent, tol: float | None = None) -> Molecule:
    """The endpoint molecule: each piece contributes w(delta_b - delta_a),
    atoms merged within tau and negligible weights dropped."""
    atoms: list[tuple[Point, float]] = []
    for p in T.pieces:
        atoms.append((p.a, -p.w))
        atoms.append((p.b, p.w))
    return Molecule.from_atoms(T.space, atoms, tol=tol)


# ---------------------------------------------------------------------------
# canonicalization: interval overlay per supporting line
# ---------------------------------------------------------------------------

def canonicalize(T: PolyhedralCurrent, tol: float | None = None) -> PolyhedralCurrent:
    """Group pieces by oriented supporting line and overlay the intervals.

    The result acts identically on every metric form, has pairwise
    interior-disjoint pieces per line and no zero weights or zero-length
    pieces. Idempotent. Mass is only meaningful on the canonical form:
    transverse intersections are null for the mass measure, so only
    collinear overlaps need resolving.
    """
    tau = config.resolve(tol)
    pieces = [p for p in T.pieces
              if T.space.distance(p.a, p.b) > tau and abs(p.w) > tau]
    n = len(pieces)
    if n == 0:
        return PolyhedralCurrent(T.space, (), canonical=True)

    units = []
    for p in pieces:
        d = _sub(p.b, p.a)
        units.append(_scale(d, 1.0 / _eunorm(d)))

    # union-find on pieces: same supporting line iff both endpoints of one
    # lie within tau of the other's line
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            ri, rj = find(i), find(j)
            if ri == rj:
                continue
            if (_point_line_dist(pieces[j].a, pieces[i].a, units[i]) <= tau
                    and _point_line_dist(pieces[j].b, pieces[i].a, units[i]) <= tau):
                parent[max(ri, rj)] = min(ri, rj)

    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)

    out: list[Piece] = []
    for root in sorted(clusters):
        idxs = clusters[root]
        u = units[idxs[0]]
        # canonical orientation: first significant component positive
        for c in u:
            if abs(c) > 1e-12:
                if c < 0:
                    u = _scale(u, -1.0)
                break
        origin = pieces[idxs[0]].a
        out.extend(_overlay_line(pieces, idxs, origin, u, tau))

    out.sort(key=lambda p: (p.a, p.b))
    return PolyhedralCurrent(T.space, tuple(out), canonical=True)


def _overlay_line(pieces, idxs, origin, u, tau) -> list[Piece]:
    """1-D overlay of collinear pieces along unit direction u."""
    intervals = []  # (lo, hi, signed weight)
    coord_of: dict[float, Coords] = {}
    params = []
    for i in idxs:
        p = pieces[i]
        sa = _dot(_sub(p.a, origin), u)
        sb = _dot(_sub(p.b, origin), u)
        w = p.w if sb >= sa else -p.w
        lo, hi = (sa, sb) if sb >= sa else (sb, sa)
        lo_pt, hi_pt = (p.a, p.b) if sb >= sa else (p.b, p.a)
        intervals.append((lo, hi, w))
        params.extend((lo, hi))
        coord_of.setdefault(lo, lo_pt)
        coord_of.setdefault(hi, hi_pt)

    # snap breakpoints within tau to the first of each run
    params.sort()
    snapped = [params[0]]
    for s in params[1:]:
        if s - snapped[-1] > tau:
            snapped.append(s)

    def snap(s: float) -> float:
        # params are few at desk scale; linear scan keeps it simple
        for t in snapped:
            if abs(s - t) <= tau:
                return t
        return s

    intervals = [(snap(lo), snap(hi), w) for lo, hi, w in intervals]

    def point_at(s: float) -> Coords:
        best = coord_of.get(s)
        if best is None:
            for t, pt in coord_of.items():
                if abs(t - s) <= tau:
                    return pt
            return _add(origin, _scale(u, s))
        return best

    runs: list[tuple[float, float, float]] = []  # (lo, hi, net weight)
    for k in range(len(snapped) - 1):
        lo, hi = snapped[k], snapped[k + 1]
        mid = 0.5 * (lo + hi)
        net = math.fsum(w for l, h, w in intervals if l <= mid <= h)
        if abs(net) <= tau:
            continue
        if runs and abs(runs[-1][1] - lo) <= tau and abs(runs[-1][2] - net) <= tau:
            runs[-1] = (runs[-1][0], hi, runs[-1][2])
        else:
            runs.append((lo, hi, net))

    return [Piece(point_at(lo), point_at(hi), w) for lo, hi, w in runs]


# ---------------------------------------------------------------------------
# mass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MassMeasure:
    """The minimal measure dominating the current's action, stored as an
    interval decomposition per supporting line with densities |weight|."""

    total: float
    lines: tuple[tuple[Coords, Coords, tuple[tuple[float, float, float], ...]], ...]
    # each line: (origin, euclidean unit direction, ((s0, s1, density), ...))


def mass(T: PolyhedralCurrent, tol: float | None = None) -> MassMeasure:
    C = T if T.canonical else canonicalize(T, tol)
    space = T.space
    lines: dict[tuple, list] = {}
    total_terms = []
    tau = config.resolve(tol)
    for p in C.pieces:
        d = _sub(p.b, p.a)
        elen = _eunorm(d)
        if elen <= tau:
            continue
        u = _scale(d, 1.0 / elen)
        slen = space.distance(p.a, p.b)
        total_terms.append(abs(p.w) * slen)
        key = (tuple(round(c, 9) for c in u),)
        lines.setdefault(key, []).append((p.a, u, (0.0, elen, abs(p.w))))
    entries = []
    for key in sorted(lines):
        group = lines[key]
        origin, u, _ = group[0]
        ivals = tuple(iv for _, _, iv in group)
        entries.append((origin, u, ivals))
    return MassMeasure(total=math.fsum(total_terms), lines=tuple(entries))


# ---------------------------------------------------------------------------
# restriction to axis-aligned boxes
# ---------------------------------------------------------------------------

Box = tuple[tuple[float, float], ...]


def slab(dim: int, coord: int, center: float, halfwidth: float) -> Box:
    """Axis-aligned box bounding one coordinate, unbounded elsewhere."""
    inf = math.inf
    return tuple(
        (center - halfwidth, center + halfwidth) if i == coord else (-inf, inf)
        for i in range(dim)
    )


def restrict(
    T: PolyhedralCurrent,
    box: Box,
    complement: bool = False,
    tol: float | None = None,
) -> PolyhedralCurrent:
    """Clip the current to an axis-aligned box.

    Faces use the half-open convention: a piece resident in an upper face
    belongs to the complement, one resident in a lower face to the box, so
    shared faces never double-count. A box that is degenerate in some
    coordinate (width <= tau) acts as an exact slice there: only pieces
    resident in that slice are kept, transversal crossers meet it in a
    mass-null set and are dropped.
    """
    tau = config.resolve(tol)
    if len(box) != T.space.dim:
        raise ValidationError(f"box has {len(box)} sides for dimension {T.space.dim}")
    kept: list[Piece] = []
    for p in T.pieces:
        t0, t1 = 0.0, 1.0
        inside_possible = True
        for i, (lo, hi) in enumerate(box):
            ai, bi = p.a[i], p.b[i]
            di = bi - ai
            if hi - lo <= tau:  # degenerate: exact slice
                mid = 0.5 * (lo + hi)
                if abs(ai - mid) <= tau and abs(bi - mid) <= tau:
                    continue  # resident
                inside_possible = False
                break
            if abs(di) <= tau * max(1.0, abs(ai), abs(bi)):
                # parallel to this face pair
                if abs(ai - hi) <= tau:  # resident in upper face: excluded
                    inside_possible = False
                    break
                if abs(ai - lo) <= tau:  # resident in lower face: included
                    continue
                if not (lo < ai < hi):
                    inside_possible = False
                    break
                continue
            ta, tb = (lo - ai) / di, (hi - ai) / di
            if ta > tb:
                ta, tb = tb, ta
            t0, t1 = max(t0, ta), min(t1, tb)
            if t0 >= t1:
                inside_possible = False
                break
        if not inside_possible:
            t0, t1 = 1.0, 0.0  # empty clip
        if not complement:
            if t1 - t0 > 1e-15:
                a = _lerp(p.a, p.b, t0)
                b = _lerp(p.a, p.b, t1)
                kept.append(Piece(a, b, p.w))
        else:
            if t1 - t0 <= 1e-15:
                kept.append(p)
            else:
                if t0 > 1e-15:
                    kept.append(Piece(p.a, _lerp(p.a, p.b, t0), p.w))
                if t1 < 1.0 - 1e-15:
                    kept.append(Piece(_lerp(p.a, p.b, t1), p.b, p.w))
    return PolyhedralCurrent(T.space, tuple(kept))


def _lerp(a: Coords, b: Coords, t: float) -> Coords:
    if t <= 0.0:
        return a
    if t >= 1.0:
        return b
    return tuple(x + t * (y - x) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# pushforward under affine maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """x -> A x + v between NormedRd spaces."""

    matrix: tuple[tuple[float, ...], ...]
    offset: tuple[float, ...]

    def __post_init__(self):
        rows = len(self.matrix)
        if rows != len(self.offset):
            raise ValidationError("matrix rows and offset length differ")

    @property
    def source_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def target_dim(self) -> int:
        return len(self.offset)

    def __call__(self, p: Coords) -> Coords:
        return tuple(
            math.fsum(r[j] * p[j] for j in range(len(r))) + v
            for r, v in zip(self.matrix, self.offset)
        )

    @staticmethod
    def translation(v: Sequence[float]) -> "AffineMap":
        d = len(v)
        eye = tuple(tuple(1.0 if i == j else 0.0 for j in range(d)) for i in range(d))
        return AffineMap(eye, tuple(float(x) for x in v))

    @staticmethod
    def scaling(dim: int, s: float) -> "AffineMap":
        m = tuple(tuple(s if i == j else 0.0 for j in range(dim)) for i in range(dim))
        return AffineMap(m, (0.0,) * dim)

    @staticmethod
    def rotation_2d(angle: float) -> "AffineMap":
        c, s = math.cos(angle), math.sin(angle)
        return AffineMap(((c, -s), (s, c)), (0.0, 0.0))


def pushforward(
    T: PolyhedralCurrent, amap: AffineMap, target_space: AmbientSpace | None = None
) -> PolyhedralCurrent:
    """Map every segment endpoint-wise. Isometries preserve mass and the
    KR norm of the boundary; that is a property of the map, not enforced."""
    if amap.source_dim != T.space.dim:
        raise SpaceError(
            f"map expects dimension {amap.source_dim}, current lives in {T.space.dim}"
        )
    target = target_space or AmbientSpace.rd(amap.target_dim, T.space.norm)
    return PolyhedralCurrent(
        target, tuple(Piece(amap(p.a), amap(p.b), p.w) for p in T.pieces)
    )


def pushforward_molecule(
    m: Molecule, amap: AffineMap, target_space: AmbientSpace | None = None
) -> Molecule:
    if not m.space.is_rd:
        raise SpaceError("affine pushforward needs a NormedRd molecule")
    if amap.source_dim != m.space.dim:
        raise SpaceError("dimension mismatch")
    target = target_space or AmbientSpace.rd(amap.target_dim, m.space.norm)
    return Molecule.from_atoms(target, [(amap(p), w) for p, w in m.atoms])


# ---------------------------------------------------------------------------
# metric forms and evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricForm:
    """A metric 1-form (f, pi) built from tagged test functions.

    f:  ("const", c) | ("affine", grad, c) | ("poly2", Q, grad, c)
        | ("bump", center, r_in, r_out)
    pi: ("affine", grad, c) | ("coordinate", i) | ("dist", p)
        | ("dist_clamped", p, R)

    bump is 1 inside r_in, 0 outside r_out and affine in the distance in
    between; dist_clamped(p, R) = max(d(x, p), R) is 1-Lipschitz and
    constant on the ball of radius R, which makes locality testable.
    """

    f: tuple
    pi: tuple

    # -- constructors for the f slot
    @staticmethod
    def f_const(c: float = 1.0) -> tuple:
        return ("const", float(c))

    @staticmethod
    def f_affine(grad: Sequence[float], c: float = 0.0) -> tuple:
        return ("affine", tuple(float(g) for g in grad), float(c))

    @staticmethod
    def f_poly2(Q: Sequence[Sequence[float]], grad: Sequence[float], c: float = 0.0) -> tuple:
        q = tuple(tuple(float(x) for x in row) for row in Q)
        return ("poly2", q, tuple(float(g) for g in grad), float(c))

    @staticmethod
    def f_bump(center: Sequence[float], r_in: float, r_out: float) -> tuple:
        if not (0 <= r_in < r_out):
            raise ValidationError("bump needs 0 <= r_in < r_out")
        return ("bump", tuple(float(x) for x in center), float(r_in), float(r_out))

    # -- constructors for the pi slot
    @staticmethod
    def pi_affine(grad: Sequence[float], c: float = 0.0) -> tuple:
        return ("affine", tuple(float(g) for g in grad), float(c))

    @staticmethod
    def pi_coordinate(i: int) -> tuple:
        return ("coordinate", int(i))

    @staticmethod
    def pi_dist(p: Sequence[float]) -> tuple:
        return ("dist", tuple(float(x) for x in p))

    @staticmethod
    def pi_dist_clamped(p: Sequence[float], R: float) -> tuple:
        return ("dist_clamped", tuple(float(x) for x in p), float(R))


def _f_value(space: AmbientSpace, f: tuple, x: Coords) -> float:
    kind = f[0]
    if kind == "const":
        return f[1]
    if kind == "affine":
        return _dot(f[1], x) + f[2]
    if kind == "poly2":
        Q, g, c = f[1], f[2], f[3]
        return math.fsum(x[i] * Q[i][j] * x[j] for i in range(len(x)) for j in range(len(x))) \
            + _dot(g, x) + c
    if kind == "bump":
        center, r_in, r_out = f[1], f[2], f[3]
        d = space.distance(x, center)
        if d <= r_in:
            return 1.0
        if d >= r_out:
            return 0.0
        return (r_out - d) / (r_out - r_in)
    raise ValidationError(f"unknown f tag {kind!r}")


def _pi_deriv_along(space: AmbientSpace, pi: tuple, x: Coords, d: Coords) -> float:
    """Derivative of t -> pi(x + t d) at t = 0 (a.e. defined)."""
    kind = pi[0]
    if kind == "affine":
        return _dot(pi[1], d)
    if kind == "coordinate":
        return d[pi[1]]
    if kind in ("dist", "dist_clamped"):
        p = pi[1]
        rel = _sub(x, p)
        dist = space.norm_of(rel)
        if kind == "dist_clamped" and dist <= pi[2]:
            return 0.0
        if space.norm == "euclidean":
            return 0.0 if dist <= 1e-300 else _dot(rel, d) / _eunorm(rel)
        if space.norm == "l1":
            return math.fsum(math.copysign(1.0, r) * di for r, di in zip(rel, d) if r != 0.0)
        if space.norm == "linf":
            k = max(range(len(rel)), key=lambda i: abs(rel[i]))
            return math.copysign(1.0, rel[k]) * d[k] if rel[k] != 0.0 else 0.0
        raise SpaceError(f"distance derivative unsupported for norm {space.norm!r}")
    raise ValidationError(f"unknown pi tag {kind!r}")


def pi_lipschitz(space: AmbientSpace, pi: tuple) -> float:
    kind = pi[0]
    if kind == "affine":
        return space.dual_norm_of(pi[1])
    if kind == "coordinate":
        e = tuple(1.0 if j == pi[1] else 0.0 for j in range(space.dim))
        return space.dual_norm_of(e)
    if kind in ("dist", "dist_clamped"):
        return 1.0
    raise ValidationError(f"unknown pi tag {kind!r}")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GL01 = tuple((0.5 * (x + 1.0), 0.5 * w) for x, w in zip(_GL_NODES, _GL_WEIGHTS))


def _piece_integral(space: AmbientSpace, p: Piece, form: MetricForm) -> float:
    """Integral of f(theta(t)) (pi o theta)'(t) over the piece."""
    d = _sub(p.b, p.a)
    f, pi = form.f, form.pi
    if pi[0] in ("affine", "coordinate") and f[0] in ("const", "affine", "poly2"):
        kappa = _dot(pi[1], d) if pi[0] == "affine" else d[pi[1]]
        if kappa == 0.0:
            return 0.0
        if f[0] == "const":
            c0, c1, c2 = f[1], 0.0, 0.0
        elif f[0] == "affine":
            c0 = _dot(f[1], p.a) + f[2]
            c1 = _dot(f[1], d)
            c2 = 0.0
        else:
            Q, g, c = f[1], f[2], f[3]
            qa = tuple(math.fsum(Q[i][j] * p.a[j] for j in range(len(d))) for i in range(len(d)))
            qd = tuple(math.fsum(Q[i][j] * d[j] for j in range(len(d))) for i in range(len(d)))
            c0 = _dot(p.a, qa) + _dot(g, p.a) + c
            c1 = _dot(p.a, qd) + _dot(d, qa) + _dot(g, d)
            c2 = _dot(d, qd)
        return kappa * (c0 + c1 / 2.0 + c2 / 3.0)
    # Gauss-Legendre order 16 per segment otherwise
    acc = 0.0
    for t, w in _GL01:
        x = _lerp(p.a, p.b, t)
        acc += w * _f_value(space, f, x) * _pi_deriv_along(space, pi, x, d)
    return acc


def evaluate(T: PolyhedralCurrent, form: MetricForm) -> float:
    """Action of the current on the metric form (f, pi)."""
    return math.fsum(p.w * _piece_integral(T.space, p, form) for p in T.pieces)


def form_mass_bound(T: PolyhedralCurrent, form: MetricForm, tol: float | None = None) -> float:
    """Lip(pi) * integral of |f| against the mass measure (finite-mass bound)."""
    C = T if T.canonical else canonicalize(T, tol)
    lip = pi_lipschitz(C.space, form.pi)
    acc = 0.0
    for p in C.pieces:
        length = C.space.distance(p.a, p.b)
        avg = math.fsum(
            w * abs(_f_value(C.space, form.f, _lerp(p.a, p.b, t))) for t, w in _GL01
        )
        acc += abs(p.w) * length * avg
    return lip * acc


def kr_norm_of_boundary(T: PolyhedralCurrent, tol: float | None = None) -> float:
    """KR norm of the boundary molecule; always <= mass(T).total."""
    from . import transport  # local import: transport builds on this module

    return transport.kr_norm(boundary(T, tol), tol)
