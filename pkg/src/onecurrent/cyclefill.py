"""Completing a polyhedral current into a cycle.

fill_flat closes T with the optimal primitive of -boundary(T) in the same
space: mass(R) equals the KR norm of the boundary, and the cycle mass is
bounded by mass(T) + kr + tau, with equality when R does not overlap T.
fill_lifted closes the lifted copy of T with a tent primitive one level up,
so that the added current R is mutually singular with T and the base
hyperplane recovers T by restriction.
"""

from __future__ import annotations

from .currents import PolyhedralCurrent, boundary, canonicalize, restrict, slab
from .errors import ValidationError
from .primitives import lift_current, optimal_primitive, tent_primitive
from . import config

__all__ = ["fill_flat", "fill_lifted", "x0_slab", "x0_restriction"]


def fill_flat(T: PolyhedralCurrent, tol: float | None = None):
    """Return (C, R) with C = T + R a cycle and mass(R) = kr_norm(boundary(T))."""
    b = boundary(T, tol)
    if b.is_empty:
        return canonicalize(T, tol), PolyhedralCurrent(T.space, (), canonical=True)
    R = optimal_primitive(-b, tol)
    C = canonicalize(T + R, tol)
    return C, R


def fill_lifted(T: PolyhedralCurrent, eps: float, tol: float | None = None):
    """Return (C, R) in X + R with C = lift(T) + R a cycle.

    R is the tent primitive of -boundary(T): its mass is at most
    kr_norm(boundary(T)) + eps, its support meets the base hyperplane X0
    only at the tent feet (finitely many points), and restricting C to the
    X0 slab recovers lift(T).
    """
    if eps <= 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    b = boundary(T, tol)
    lifted_T = canonicalize(lift_current(T), tol)
    if b.is_empty:
        return lifted_T, PolyhedralCurrent(T.space.lifted(), (), canonical=True)
    R = tent_primitive(-b, eps, tol)
    C = canonicalize(lift_current(T) + R, tol)
    return C, R


def x0_slab(lifted_dim: int, tol: float | None = None):
    """The box {|last coordinate| <= tau/2}, degenerate by construction."""
    tau = config.resolve(tol)
    return slab(lifted_dim, lifted_dim - 1, 0.0, tau / 2.0)


def x0_restriction(C: PolyhedralCurrent, tol: float | None = None) -> PolyhedralCurrent:
    """Pieces of C resident in the base hyperplane X0 (transversal pieces
    meet X0 in a mass-null set and are dropped)."""
    return restrict(C, x0_slab(C.space.dim, tol), tol=tol)


def support_hull(T: PolyhedralCurrent):
    """Axis-aligned bounding box of the support (reported, not asserted)."""
    if T.is_empty:
        return None
    pts = [p.a for p in T.pieces] + [p.b for p in T.pieces]
    dim = T.space.dim
    return tuple(
        (min(pt[i] for pt in pts), max(pt[i] for pt in pts)) for i in range(dim)
    )


def validate_flat_fill(T, C, R, tol: float | None = None) -> None:
    """Postconditions of fill_flat."""
    from . import config, transport
    from .currents import boundary, mass

    tau = config.resolve(tol)
    if not boundary(C, tol).is_empty:
        raise ValidationError("flat fill is not a cycle")
    if not C.same_as(T + R, tol):
        raise ValidationError("C differs from T + R")
    kr = transport.kr_norm(boundary(T, tol), tol)
    mr = mass(R, tol).total
    if abs(mr - kr) > tau * (1.0 + kr):
        raise ValidationError(f"fill mass {mr} differs from KR norm {kr}")
    mc = mass(C, tol).total
    bound = mass(T, tol).total + kr
    if mc > bound + tau * (1.0 + bound):
        raise ValidationError(f"cycle mass {mc} exceeds M(T) + KR = {bound}")


def validate_lifted_fill(T, C, R, eps: float, tol: float | None = None) -> None:
    """Postconditions of fill_lifted, including the slab identity."""
    from . import config, transport
    from .currents import boundary, canonicalize, mass
    from .primitives import lift_current

    tau = config.resolve(tol)
    if not boundary(C, tol).is_empty:
        raise ValidationError("lifted fill is not a cycle")
    kr = transport.kr_norm(boundary(T, tol), tol)
    mr = mass(R, tol).total
    if mr > kr + eps + tau * (1.0 + kr + eps):
        raise ValidationError(f"lifted fill mass {mr} exceeds {kr} + {eps}")
    slab_part = x0_restriction(C, tol)
    if not slab_part.same_as(lift_current(T), tol):
        raise ValidationError("slab restriction does not reproduce the lifted current")
    # mutual singularity: R meets X0 only at tent feet, so its resident mass is zero
    if mass(x0_restriction(R, tol), tol).total > tau:
        raise ValidationError("filling current has mass resident in X0")
