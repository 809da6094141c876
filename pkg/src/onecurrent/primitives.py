"""Rectifiable primitives of molecules.

optimal_primitive renders the optimal dipole decomposition as straight
segments: a current R with boundary m and mass exactly the KR norm of m
(segments are geodesics in a normed space, so the sharp bound is attained).
tent_primitive lifts each dipole into X + R through an apex above the
midpoint, producing a primitive whose mass exceeds the KR norm by at most
epsilon and whose restriction to the base hyperplane X0 vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config, transport
from .currents import Molecule, Piece, PolyhedralCurrent, canonicalize
from .errors import SpaceError, ValidationError
from .geometry import AmbientSpace, lift_point

__all__ = ["LiftedSpace", "optimal_primitive", "tent_primitive", "lift_current"]


@dataclass(frozen=True)
class LiftedSpace:
    """X + R with the base norm extended by one coordinate. The embedding
    x -> x + (0,) of X onto the hyperplane X0 = {last coordinate 0} is an
    isometry for all supported norms."""

    base: AmbientSpace
    lifted: AmbientSpace

    @staticmethod
    def over(base: AmbientSpace) -> "LiftedSpace":
        return LiftedSpace(base=base, lifted=base.lifted())

    @property
    def last(self) -> int:
        return self.lifted.dim - 1


def optimal_primitive(m: Molecule, tol: float | None = None) -> PolyhedralCurrent:
    """R with boundary(R) = m and mass(R) = kr_norm(m): one segment per
    flow arc of the optimal plan, oriented sink -> source."""
    if not m.space.is_rd:
        raise SpaceError("optimal_primitive needs a NormedRd molecule (segments)")
    if m.is_empty:
        return PolyhedralCurrent(m.space, (), canonical=True)
    plan = transport.solve_plan(m, tol)
    pieces = tuple(Piece(x, y, eta) for x, y, eta in transport.dipole_decomposition(plan))
    return PolyhedralCurrent(m.space, pieces)


def tent_primitive(m: Molecule, eps: float, tol: float | None = None) -> PolyhedralCurrent:
    """Lifted primitive through tent apexes.

    With the optimal dipoles (eta_h, x_h, y_h), h = 1..r, M = max eta_h and
    apex height t = eps / (2 M r), each dipole becomes the two legs
    x+0 -> mid+t -> y+0. The boundary is m lifted to X0, every leg interior
    lies strictly above X0, and the total mass is at most kr_norm(m) + eps.
    The output depends on the solver's (deterministic) choice among
    equal-cost plans. Collinear overlaps between legs are resolved by
    canonicalization.
    """
    if eps <= 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    if not m.space.is_rd:
        raise SpaceError("tent_primitive needs a NormedRd molecule")
    lifted = m.space.lifted()
    if m.is_empty:
        return PolyhedralCurrent(lifted, (), canonical=True)
    plan = transport.solve_plan(m, tol)
    dipoles = transport.dipole_decomposition(plan)
    r = len(dipoles)
    big = max(eta for _, _, eta in dipoles)
    t = eps / (2.0 * big * r)
    tau = config.resolve(tol)
    if t <= 2.0 * tau:
        raise ValidationError(
            f"apex height {t} collapses into the comparison tolerance; "
            "increase eps or lower the tolerance"
        )
    pieces = []
    for x, y, eta in dipoles:
        mid = tuple(0.5 * (xa + ya) for xa, ya in zip(x, y))
        apex = lift_point(mid, t)
        pieces.append(Piece(lift_point(x), apex, eta))
        pieces.append(Piece(apex, lift_point(y), eta))
    return canonicalize(PolyhedralCurrent(lifted, tuple(pieces)), tol)


def lift_current(T: PolyhedralCurrent, height: float = 0.0) -> PolyhedralCurrent:
    """Embed a current of X into X + R at the given height."""
    lifted = T.space.lifted()
    return PolyhedralCurrent(
        lifted,
        tuple(Piece(lift_point(p.a, height), lift_point(p.b, height), p.w) for p in T.pieces),
        canonical=T.canonical and height == 0.0,
    )


def validate_optimal_primitive(
    m: Molecule, R: PolyhedralCurrent, tol: float | None = None
) -> None:
    """boundary(R) = m atom-wise and mass(R) = kr_norm(m)."""
    from . import config
    from .currents import boundary, mass

    tau = config.resolve(tol)
    if not boundary(R, tol).same_as(m, tol):
        raise ValidationError("primitive boundary does not match the molecule")
    kr = transport.kr_norm(m, tol)
    got = mass(R, tol).total
    if abs(got - kr) > tau * (1.0 + kr):
        raise ValidationError(f"primitive mass {got} differs from KR norm {kr}")


def validate_tent_primitive(
    m: Molecule, R: PolyhedralCurrent, eps: float, tol: float | None = None
) -> None:
    """boundary(R) = m lifted, mass within kr + eps, nothing resident in X0."""
    from . import config
    from .currents import Molecule as _M, boundary, mass
    from .cyclefill import x0_restriction
    from .geometry import lift_point

    tau = config.resolve(tol)
    lifted_m = _M.from_atoms(
        R.space, [(lift_point(p), w) for p, w in m.atoms], tol
    )
    if not boundary(R, tol).same_as(lifted_m, tol):
        raise ValidationError("tent boundary does not match the lifted molecule")
    kr = transport.kr_norm(m, tol)
    got = mass(R, tol).total
    if got > kr + eps + tau * (1.0 + kr + eps):
        raise ValidationError(f"tent mass {got} exceeds {kr} + {eps}")
    trace = mass(x0_restriction(R, tol), tol).total
    if trace > tau:
        raise ValidationError(f"tent has mass {trace} resident in X0")
