"""Named fixtures and random generators used by the demo command and the
test suite. Random generators take an explicit random.Random so that runs
are reproducible; the algorithms themselves are seed-independent."""

from __future__ import annotations

import math
import random

from .currents import Molecule, Piece, PolyhedralCurrent
from .geometry import AmbientSpace

LINE = AmbientSpace.rd(1, "euclidean")
PLANE = AmbientSpace.rd(2, "euclidean")


def semicircle(n: int = 256, weight: float = 1.0) -> PolyhedralCurrent:
    """Inscribed n-gon polyline of the unit upper semicircle, oriented from
    (1,0) to (-1,0); its boundary is delta_(-1,0) - delta_(1,0)."""
    pts = [(math.cos(math.pi * k / n), math.sin(math.pi * k / n)) for k in range(n + 1)]
    pieces = tuple(Piece(pts[k], pts[k + 1], weight) for k in range(n))
    return PolyhedralCurrent(PLANE, pieces)


def semicircle_chord_total(n: int) -> float:
    """Closed-form mass of the semicircle fixture: 2 n sin(pi / 2n)."""
    return 2.0 * n * math.sin(math.pi / (2 * n))


def infinite_dipoles(j: int, k: int) -> Molecule:
    """Truncated tail m_k - m_j of the infinite-dipole family: atoms
    +1 at 2^(1-2i) and -1 at 2^(-2i) for i = j+1..k, on the line."""
    if not (0 <= j < k):
        raise ValueError("need 0 <= j < k")
    atoms = []
    for i in range(j + 1, k + 1):
        atoms.append(((2.0 ** (1 - 2 * i),), 1.0))
        atoms.append(((2.0 ** (-2 * i),), -1.0))
    return Molecule.from_atoms(LINE, atoms)


def infinite_dipoles_tail_value(j: int, k: int) -> float:
    return math.fsum(2.0 ** (-2 * i) for i in range(j + 1, k + 1))


def collinear_pair(dim: int = 1) -> PolyhedralCurrent:
    """Two aligned disjoint unit-third segments: [0,1/3] + [2/3,1]."""
    if dim == 1:
        space = LINE
        mk = lambda x: (x,)
    else:
        space = AmbientSpace.rd(dim, "euclidean")
        mk = lambda x: (x,) + (0.0,) * (dim - 1)
    pieces = (
        Piece(mk(0.0), mk(1.0 / 3.0), 1.0),
        Piece(mk(2.0 / 3.0), mk(1.0), 1.0),
    )
    return PolyhedralCurrent(space, pieces)


def square_loop(side: float = 1.0, weight: float = 1.0) -> PolyhedralCurrent:
    s = side
    corners = [(0.0, 0.0), (s, 0.0), (s, s), (0.0, s), (0.0, 0.0)]
    pieces = tuple(
        Piece(corners[k], corners[k + 1], weight) for k in range(4)
    )
    return PolyhedralCurrent(PLANE, pieces)


def figure_eight() -> PolyhedralCurrent:
    """Two unit squares sharing the origin, consistently oriented."""
    a = square_loop()
    corners = [(0.0, 0.0), (-1.0, 0.0), (-1.0, -1.0), (0.0, -1.0), (0.0, 0.0)]
    b = PolyhedralCurrent(
        PLANE, tuple(Piece(corners[k], corners[k + 1], 1.0) for k in range(4))
    )
    return a + b


def fat_cantor(depth: int, alpha: float = 1.0) -> list[tuple[float, float]]:
    """Finite-depth fat-Cantor interval union in [0,1]: at depth n every
    surviving interval loses a centered piece of length alpha * 4^-n."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    intervals = [(0.0, 1.0)]
    for n in range(1, depth + 1):
        cut = alpha * 4.0 ** (-n)
        nxt = []
        for a, b in intervals:
            mid = 0.5 * (a + b)
            if b - a <= cut:
                continue
            nxt.append((a, mid - cut / 2.0))
            nxt.append((mid + cut / 2.0, b))
        intervals = nxt
    return intervals


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

def random_metric_space(n: int, rng: random.Random) -> AmbientSpace:
    """Finite metric space drawn from a random point cloud in R^3 (the
    cloud guarantees the triangle inequality)."""
    pts = [(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(n)]
    # spread the cloud so off-diagonal distances stay clear of zero
    pts = [(3 * i + x, y, z) for i, (x, y, z) in enumerate(pts)]
    matrix = [
        [math.dist(p, q) for q in pts]
        for p in pts
    ]
    return AmbientSpace.finite(matrix)


def random_point(space: AmbientSpace, rng: random.Random, scale: float = 1.0):
    if space.is_rd:
        return tuple(rng.uniform(-scale, scale) for _ in range(space.dim))
    return rng.randrange(space.n_points)


def random_molecule(
    space: AmbientSpace, n_atoms: int, rng: random.Random, scale: float = 1.0
) -> Molecule:
    pts = [random_point(space, rng, scale) for _ in range(n_atoms)]
    ws = [rng.uniform(-1.0, 1.0) for _ in range(n_atoms)]
    mean = math.fsum(ws) / n_atoms
    atoms = [(p, w - mean) for p, w in zip(pts, ws)]
    return Molecule.from_atoms(space, atoms)


def random_unit_molecule(
    space: AmbientSpace, pairs: int, rng: random.Random, scale: float = 1.0
) -> Molecule:
    atoms = [(random_point(space, rng, scale), 1.0) for _ in range(pairs)]
    atoms += [(random_point(space, rng, scale), -1.0) for _ in range(pairs)]
    return Molecule.from_atoms(space, atoms)


def random_current(
    space: AmbientSpace, n_pieces: int, rng: random.Random, scale: float = 1.0
) -> PolyhedralCurrent:
    pieces = []
    for _ in range(n_pieces):
        a = random_point(space, rng, scale)
        b = random_point(space, rng, scale)
        w = rng.choice([-1, 1]) * rng.uniform(0.2, 2.0)
        pieces.append(Piece(a, b, w))
    return PolyhedralCurrent(space, tuple(pieces))


def random_chain_current(
    space: AmbientSpace, n_pieces: int, rng: random.Random, scale: float = 1.0
) -> PolyhedralCurrent:
    """Current whose pieces share endpoints, exercising graph structure."""
    pts = [random_point(space, rng, scale)]
    pieces = []
    for _ in range(n_pieces):
        if rng.random() < 0.3 and len(pts) > 2:
            a = rng.choice(pts)
        else:
            a = pts[-1]
        b = random_point(space, rng, scale)
        pts.append(b)
        pieces.append(Piece(a, b, rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)))
    return PolyhedralCurrent(space, tuple(pieces))


def random_interval_union(
    rng: random.Random, max_intervals: int = 6
) -> list[tuple[float, float]]:
    cuts = sorted(rng.uniform(0, 1) for _ in range(2 * rng.randint(1, max_intervals)))
    return [(cuts[2 * i], cuts[2 * i + 1]) for i in range(len(cuts) // 2)
            if cuts[2 * i + 1] - cuts[2 * i] > 1e-6]


def random_monotone_cadlag(rng: random.Random, max_pieces: int = 6):
    """Random piecewise-affine monotone Cadlag map of [0,1] into [0,1],
    with occasional flat pieces and jumps."""
    from .sbv import MonotoneCadlag

    n = rng.randint(1, max_pieces)
    ts = sorted(rng.uniform(0.05, 0.95) for _ in range(n - 1))
    ts = [0.0] + ts + [1.0]
    # strictly increasing value ladder with room for jumps and flats
    levels = sorted(rng.uniform(0, 1) for _ in range(2 * n))
    pieces = []
    for k in range(n):
        v0, v1 = levels[2 * k], levels[2 * k + 1]
        if rng.random() < 0.25:
            v1 = v0  # flat piece
        pieces.append((ts[k], ts[k + 1], v0, v1))
    # enforce monotonicity across jumps (levels already sorted)
    return MonotoneCadlag(tuple(pieces))
