"""Ambient spaces, points, segments and the Kuratowski embedding.

Two kinds of ambient space are supported: R^d with one of the euclidean /
l1 / linf norms, and finite metric spaces given by a distance matrix.
Points in R^d are plain tuples of floats; points of a finite metric space
are integer indices. All values are immutable and every operation here is
pure, so everything is safe to share across threads.

Polyhedral currents (weighted segments) only exist over normed R^d;
finite metric spaces admit molecules and KR computations, and can be moved
into (R^n, linf) by ``kuratowski_embed`` when segments are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from . import config
from .errors import SpaceError, ValidationError

Coords = tuple[float, ...]
Point = Union[Coords, int]

# Norm dispatch table; extensible by registering a new tag.
_NORMS = {
    "euclidean": lambda v: math.sqrt(math.fsum(x * x for x in v)),
    "l1": lambda v: math.fsum(abs(x) for x in v),
    "linf": lambda v: max((abs(x) for x in v), default=0.0),
}

# Dual norms, used for Lipschitz constants of linear test functions.
_DUAL = {"euclidean": "euclidean", "l1": "linf", "linf": "l1"}


def register_norm(tag: str, func, dual_tag: str) -> None:
    _NORMS[tag] = func
    _DUAL[tag] = dual_tag


def norm_tags() -> tuple[str, ...]:
    return tuple(_NORMS)


@dataclass(frozen=True)
class AmbientSpace:
    """Either NormedRd (kind='rd') or FiniteMetric (kind='finite')."""

    kind: str
    dim: int = 0
    norm: str = "euclidean"
    matrix: tuple[tuple[float, ...], ...] = ()

    # -- constructors -------------------------------------------------

    @staticmethod
    def rd(dim: int, norm: str = "euclidean") -> "AmbientSpace":
        if dim < 1:
            raise ValidationError(f"dimension must be >= 1, got {dim}")
        if norm not in _NORMS:
            raise ValidationError(f"unknown norm tag {norm!r}; known: {sorted(_NORMS)}")
        return AmbientSpace(kind="rd", dim=dim, norm=norm)

    @staticmethod
    def finite(matrix: Sequence[Sequence[float]], tol: float | None = None) -> "AmbientSpace":
        tau = config.resolve(tol)
        m = tuple(tuple(float(x) for x in row) for row in matrix)
        n = len(m)
        if n < 1:
            raise ValidationError("finite metric space needs at least one point")
        if any(len(row) != n for row in m):
            raise ValidationError("distance matrix must be square")
        for i in range(n):
            if abs(m[i][i]) > tau:
                raise ValidationError(f"nonzero diagonal entry D[{i}][{i}]={m[i][i]}")
            for j in range(n):
                if not math.isfinite(m[i][j]):
                    raise ValidationError(f"non-finite distance D[{i}][{j}]")
                if abs(m[i][j] - m[j][i]) > tau:
                    raise ValidationError(f"asymmetric distances D[{i}][{j}] != D[{j}][{i}]")
                if i != j and m[i][j] <= tau:
                    raise ValidationError(f"non-positive off-diagonal distance D[{i}][{j}]")
        # O(n^3) triangle check at load time; reject violations beyond tau.
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if m[i][j] > m[i][k] + m[k][j] + tau:
                        raise ValidationError(
                            f"triangle inequality violated at ({i},{j},{k})"
                        )
        return AmbientSpace(kind="finite", dim=n, matrix=m)

    # -- predicates ---------------------------------------------------

    @property
    def is_rd(self) -> bool:
        return self.kind == "rd"

    @property
    def n_points(self) -> int:
        return len(self.matrix)

    def check_point(self, p: Point) -> None:
        if self.is_rd:
            if isinstance(p, int) or len(p) != self.dim:
                raise SpaceError(f"point {p!r} does not belong to R^{self.dim}")
            if not all(math.isfinite(x) for x in p):
                raise ValidationError(f"non-finite coordinates in {p!r}")
        else:
            if not isinstance(p, int) or not (0 <= p < self.n_points):
                raise SpaceError(f"index {p!r} out of range [0, {self.n_points})")

    # -- metric -------------------------------------------------------

    def norm_of(self, v: Sequence[float]) -> float:
        if not self.is_rd:
            raise SpaceError("vectors only exist in NormedRd spaces")
        return _NORMS[self.norm](v)

    def dual_norm_of(self, v: Sequence[float]) -> float:
        return _NORMS[_DUAL[self.norm]](v)

    def distance(self, p: Point, q: Point) -> float:
        self.check_point(p)
        self.check_point(q)
        if self.is_rd:
            return self.norm_of(tuple(b - a for a, b in zip(p, q)))
        return self.matrix[p][q]

    # -- lift ---------------------------------------------------------

    def lifted(self) -> "AmbientSpace":
        """The direct sum X + R: one extra coordinate, same norm tag."""
        if not self.is_rd:
            raise SpaceError("only NormedRd spaces lift")
        return AmbientSpace.rd(self.dim + 1, self.norm)


def distance(space: AmbientSpace, p: Point, q: Point) -> float:
    return space.distance(p, q)


@dataclass(frozen=True)
class Segment:
    """Oriented segment from a to b; only defined in NormedRd spaces."""

    a: Coords
    b: Coords


def segment_length(space: AmbientSpace, s: Segment) -> float:
    if not space.is_rd:
        raise SpaceError("segments only exist in NormedRd spaces")
    return space.distance(s.a, s.b)


def lift_point(p: Coords, height: float = 0.0) -> Coords:
    return tuple(p) + (float(height),)


def drop_point(p: Coords) -> Coords:
    """Project X + R back to X by dropping the last coordinate."""
    return tuple(p[:-1])


def kuratowski_embed(space: AmbientSpace, basepoint: int = 0):
    """Isometric embedding of a finite metric space into (R^n, linf).

    Point i goes to (d(i, h) - d(basepoint, h))_h over all n points, which
    realizes every pairwise distance exactly in the max norm and sends the
    basepoint to the origin.

    Returns (target_space, points).
    """
    if space.is_rd:
        raise SpaceError("kuratowski_embed expects a FiniteMetric space")
    n = space.n_points
    if not isinstance(basepoint, int) or not (0 <= basepoint < n):
        raise SpaceError(f"basepoint {basepoint!r} out of range [0, {n})")
    target = AmbientSpace.rd(n, "linf")
    base = space.matrix[basepoint]
    points = tuple(
        tuple(space.matrix[i][h] - base[h] for h in range(n)) for i in range(n)
    )
    return target, points
