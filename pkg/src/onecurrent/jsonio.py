"""Versioned JSON persistence for all artifact types.

JSON is the only persistence format (schema field "v": 1). Floats are
rounded to 12 significant digits on the way out; every artifact re-parses
to a value equal to the in-memory original within the global tolerance.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .currents import MetricForm, Molecule, Piece, PolyhedralCurrent
from .errors import ValidationError
from .geometry import AmbientSpace
from .sbv import CurvePiece, CurveRepresentation, MonotoneCadlag, SbvCurve
from .decompose import WeightedCurve
from .transport import TransportPlan

VERSION = 1


def _fmt(x: float) -> float:
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def _round_floats(obj: Any) -> Any:
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dumps(obj: dict) -> str:
    return json.dumps(_round_floats(obj), indent=1)


def _check_version(obj: dict, what: str) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(f"{what}: expected a JSON object")
    if obj.get("v", VERSION) != VERSION:
        raise ValidationError(f"{what}: unsupported schema version {obj.get('v')}")


# -- spaces -----------------------------------------------------------------

def space_to_obj(space: AmbientSpace) -> dict:
    if space.is_rd:
        return {"kind": "rd", "dim": space.dim, "norm": space.norm}
    return {"kind": "finite", "matrix": [list(r) for r in space.matrix]}


def space_from_obj(obj: dict) -> AmbientSpace:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("space: expected {'kind': ...}")
    if obj["kind"] == "rd":
        return AmbientSpace.rd(int(obj["dim"]), obj.get("norm", "euclidean"))
    if obj["kind"] == "finite":
        return AmbientSpace.finite(obj["matrix"])
    raise ValidationError(f"space: unknown kind {obj['kind']!r}")


# -- molecules and currents --------------------------------------------------

def molecule_to_obj(m: Molecule) -> dict:
    atoms = [
        {"p": p if isinstance(p, int) else list(p), "w": w} for p, w in m.atoms
    ]
    return {"v": VERSION, "space": space_to_obj(m.space), "atoms": atoms}


def molecule_from_obj(obj: dict) -> Molecule:
    _check_version(obj, "molecule")
    space = space_from_obj(obj["space"])
    atoms = []
    for a in obj.get("atoms", []):
        p = a["p"]
        atoms.append((p if isinstance(p, int) else tuple(float(x) for x in p), float(a["w"])))
    return Molecule.from_atoms(space, atoms)


def current_to_obj(T: PolyhedralCurrent) -> dict:
    return {
        "v": VERSION,
        "space": space_to_obj(T.space),
        "pieces": [{"a": list(p.a), "b": list(p.b), "w": p.w} for p in T.pieces],
    }


def current_from_obj(obj: dict) -> PolyhedralCurrent:
    _check_version(obj, "current")
    space = space_from_obj(obj["space"])
    return PolyhedralCurrent.from_pieces(
        space, [(p["a"], p["b"], p["w"]) for p in obj.get("pieces", [])]
    )


# -- transport plans ----------------------------------------------------------

def plan_to_obj(plan: TransportPlan) -> dict:
    def pt(p):
        return p if isinstance(p, int) else list(p)

    return {
        "v": VERSION,
        "space": space_to_obj(plan.space),
        "sources": [{"p": pt(p), "supply": s} for p, s in plan.sources],
        "sinks": [{"p": pt(p), "demand": d} for p, d in plan.sinks],
        "flows": [{"i": i, "j": j, "amount": a} for i, j, a in plan.flows],
        "cost": plan.cost,
        "potentials": list(plan.potentials),
    }


def potentials_to_obj(plan: TransportPlan) -> dict:
    def pt(p):
        return p if isinstance(p, int) else list(p)

    return {
        "v": VERSION,
        "space": space_to_obj(plan.space),
        "points": [pt(p) for p in plan.support_points],
        "values": list(plan.potentials),
    }


# -- curves -------------------------------------------------------------------

def curves_to_obj(curves, space: AmbientSpace) -> dict:
    return {
        "v": VERSION,
        "space": space_to_obj(space),
        "curves": [
            {
                "polyline": [list(p) for p in c.polyline],
                "weight": c.weight,
                "closed": c.closed,
            }
            for c in curves
        ],
    }


def curves_from_obj(obj: dict):
    _check_version(obj, "curves")
    space = space_from_obj(obj["space"])
    curves = tuple(
        WeightedCurve(
            tuple(tuple(float(x) for x in p) for p in c["polyline"]),
            float(c["weight"]),
            bool(c["closed"]),
        )
        for c in obj.get("curves", [])
    )
    return curves, space


# -- interval unions and Cadlag maps ------------------------------------------

def intervals_to_obj(intervals) -> dict:
    return {"v": VERSION, "intervals": [[a, b] for a, b in intervals]}


def intervals_from_obj(obj: dict) -> list[tuple[float, float]]:
    _check_version(obj, "intervals")
    return [(float(a), float(b)) for a, b in obj.get("intervals", [])]


def cadlag_to_obj(u: MonotoneCadlag) -> dict:
    return {
        "v": VERSION,
        "pieces": [[t0, t1, v0, v1] for t0, t1, v0, v1 in u.pieces],
        "jumps": [[t, l, r] for t, l, r in u.jumps],
    }


def cadlag_from_obj(obj: dict) -> MonotoneCadlag:
    _check_version(obj, "cadlag")
    return MonotoneCadlag(tuple(tuple(float(x) for x in p) for p in obj["pieces"]))


# -- SBV curves and representations --------------------------------------------

def sbv_curve_to_obj(u: SbvCurve) -> dict:
    return {
        "pieces": [
            {"t0": p.t0, "t1": p.t1, "polyline": [list(x) for x in p.polyline]}
            for p in u.pieces
        ],
        "jumps": [[t, list(l), list(r)] for t, l, r in u.jumps],
        "speed": u.speed,
    }


def sbv_curve_from_obj(obj: dict, space: AmbientSpace) -> SbvCurve:
    pieces = tuple(
        CurvePiece(
            float(p["t0"]),
            float(p["t1"]),
            tuple(tuple(float(x) for x in q) for q in p["polyline"]),
        )
        for p in obj["pieces"]
    )
    jumps = tuple(
        (float(t), tuple(float(x) for x in l), tuple(float(x) for x in r))
        for t, l, r in obj.get("jumps", [])
    )
    return SbvCurve(space, pieces, jumps, float(obj["speed"]))


def representation_to_obj(rep: CurveRepresentation) -> dict:
    return {
        "v": VERSION,
        "space": space_to_obj(rep.target.space),
        "epsilon": rep.epsilon,
        "target": current_to_obj(rep.target),
        "entries": [
            {"curve": sbv_curve_to_obj(u), "weight": w} for u, w in rep.entries
        ],
    }


def representation_from_obj(obj: dict) -> CurveRepresentation:
    _check_version(obj, "representation")
    target = current_from_obj(obj["target"])
    entries = tuple(
        (sbv_curve_from_obj(e["curve"], target.space), float(e["weight"]))
        for e in obj.get("entries", [])
    )
    return CurveRepresentation(target=target, epsilon=float(obj["epsilon"]), entries=entries)


# -- metric forms ---------------------------------------------------------------

def form_from_obj(obj: dict) -> MetricForm:
    _check_version(obj, "form")
    f = obj["f"]
    pi = obj["pi"]
    fk = f["kind"]
    if fk == "const":
        ff = MetricForm.f_const(f.get("c", 1.0))
    elif fk == "affine":
        ff = MetricForm.f_affine(f["grad"], f.get("c", 0.0))
    elif fk == "poly2":
        ff = MetricForm.f_poly2(f["Q"], f["grad"], f.get("c", 0.0))
    elif fk == "bump":
        ff = MetricForm.f_bump(f["center"], f["r_in"], f["r_out"])
    else:
        raise ValidationError(f"form: unknown f kind {fk!r}")
    pk = pi["kind"]
    if pk == "affine":
        pp = MetricForm.pi_affine(pi["grad"], pi.get("c", 0.0))
    elif pk == "coordinate":
        pp = MetricForm.pi_coordinate(pi["i"])
    elif pk == "dist":
        pp = MetricForm.pi_dist(pi["p"])
    elif pk == "dist_clamped":
        pp = MetricForm.pi_dist_clamped(pi["p"], pi["R"])
    else:
        raise ValidationError(f"form: unknown pi kind {pk!r}")
    return MetricForm(ff, pp)


# -- file helpers ------------------------------------------------------------------

def load(path_or_dash: str):
    import sys

    if path_or_dash == "-":
        return json.load(sys.stdin)
    with open(path_or_dash, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save(obj: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
        fh.write("\n")
