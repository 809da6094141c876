"""Command-line front end.

Subcommands: kr, primitive, fill, decompose, represent, param, eval, demo.
Artifacts are JSON ("-" reads stdin / writes stdout); numbers print with
12 significant digits. Exit codes: 0 ok, 1 parse or validation error,
2 invariant-check failure under --check. The environment variable
ONECURRENT_TOL overrides the comparison tolerance for the run; --seed only
randomizes fixtures, never algorithms.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import config, jsonio, svg
from .currents import boundary, canonicalize, evaluate, mass
from .cyclefill import (
    fill_flat,
    fill_lifted,
    validate_flat_fill,
    validate_lifted_fill,
)
from .decompose import smirnov_decompose, validate_decomposition
from .errors import CheckFailure, OneCurrentError, ValidationError
from .fixtures import (
    collinear_pair,
    fat_cantor,
    figure_eight,
    infinite_dipoles,
    random_metric_space,
    semicircle,
    square_loop,
)
from .geometry import kuratowski_embed
from .primitives import (
    optimal_primitive,
    tent_primitive,
    validate_optimal_primitive,
    validate_tent_primitive,
)
from .sbv import sbv_represent, transport_param, validate_representation, validate_transport_param
from .transport import kr_norm_1d, solve_plan


def _num(x: float) -> str:
    return f"{x:.12g}"


def _emit(obj: dict, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(jsonio.dumps(obj) + "\n")
    else:
        jsonio.save(obj, path)


def _parse_intervals(arg: str):
    if os.path.exists(arg):
        return jsonio.intervals_from_obj(jsonio.load(arg))
    try:  # literal form: "[0,0.3333],[0.6667,1]"
        data = json.loads(f"[{arg}]")
        return [(float(a), float(b)) for a, b in data]
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"cannot parse intervals {arg!r}: {exc}") from exc




def _check(fn, *fargs) -> None:
    try:
        fn(*fargs)
    except ValidationError as exc:
        raise CheckFailure(str(exc)) from exc


# -- subcommand handlers ------------------------------------------------------

def _cmd_kr(args) -> int:
    if args.batch:
        return _kr_batch(args)
    m = jsonio.molecule_from_obj(jsonio.load(args.molecule))
    plan = solve_plan(m)
    if args.check:
        _check(plan.validate)
        if m.space.is_rd and m.space.dim == 1:
            oracle = kr_norm_1d(m)
            if abs(plan.cost - oracle) > config.get_tolerance() * (1 + oracle):
                raise CheckFailure(
                    f"flow cost {plan.cost} disagrees with 1-D oracle {oracle}"
                )
    print(_num(plan.cost))
    if args.plan_out:
        _emit(jsonio.plan_to_obj(plan), args.plan_out)
    if args.dual_out:
        _emit(jsonio.potentials_to_obj(plan), args.dual_out)
    if args.svg:
        svg.render_molecule(m, args.svg)
    return 0


def _kr_batch(args) -> int:
    from concurrent.futures import ThreadPoolExecutor

    names = sorted(
        f for f in os.listdir(args.batch) if f.endswith(".json")
    )

    def one(name: str) -> str:
        m = jsonio.molecule_from_obj(jsonio.load(os.path.join(args.batch, name)))
        return f"{name}: {_num(solve_plan(m).cost)}"

    with ThreadPoolExecutor() as pool:
        for line in pool.map(one, names):
            print(line)
    return 0


def _cmd_primitive(args) -> int:
    m = jsonio.molecule_from_obj(jsonio.load(args.molecule))
    if args.tent is not None:
        R = tent_primitive(m, args.tent)
        if args.check:
            _check(validate_tent_primitive, m, R, args.tent)
    else:
        R = optimal_primitive(m)
        if args.check:
            _check(validate_optimal_primitive, m, R)
    print(f"mass {_num(mass(R).total)}")
    _emit(jsonio.current_to_obj(R), args.out)
    if args.svg:
        svg.render_current(R, args.svg)
    return 0


def _cmd_fill(args) -> int:
    T = jsonio.current_from_obj(jsonio.load(args.current))
    from .transport import kr_norm

    kr = kr_norm(boundary(T))
    if args.lift is not None:
        C, R = fill_lifted(T, args.lift)
        if args.check:
            _check(validate_lifted_fill, T, C, R, args.lift)
    else:
        C, R = fill_flat(T)
        if args.check:
            _check(validate_flat_fill, T, C, R)
    print(
        f"mass_T {_num(mass(T).total)} kr_boundary {_num(kr)} "
        f"mass_C {_num(mass(C).total)} mass_R {_num(mass(R).total)}"
    )
    if args.cycle_out:
        _emit(jsonio.current_to_obj(C), args.cycle_out)
    if args.rect_out:
        _emit(jsonio.current_to_obj(R), args.rect_out)
    if args.svg:
        svg.render_current(C, args.svg)
    return 0


def _cmd_decompose(args) -> int:
    T = canonicalize(jsonio.current_from_obj(jsonio.load(args.current)))
    curves = smirnov_decompose(T)
    if args.check:
        _check(validate_decomposition, T, curves)
    closed = sum(1 for c in curves if c.closed)
    print(f"curves {len(curves)} closed {closed} open {len(curves) - closed}")
    _emit(jsonio.curves_to_obj(curves, T.space), args.out)
    return 0


def _cmd_represent(args) -> int:
    T = jsonio.current_from_obj(jsonio.load(args.current))
    rep = sbv_represent(T, args.eps)
    if args.check:
        _check(validate_representation, rep)
    print(
        f"curves {len(rep.entries)} total_length {_num(rep.total_length())} "
        f"jump_total {_num(rep.total_jump())}"
    )
    _emit(jsonio.representation_to_obj(rep), args.out)
    return 0


def _cmd_param(args) -> int:
    intervals = _parse_intervals(args.intervals)
    u = transport_param(intervals)
    if args.check:
        _check(validate_transport_param, intervals, u)
    print(f"pieces {len(u.pieces)} jumps {len(u.jumps)}")
    _emit(jsonio.cadlag_to_obj(u), args.out)
    return 0


def _cmd_eval(args) -> int:
    T = jsonio.current_from_obj(jsonio.load(args.current))
    form = jsonio.form_from_obj(jsonio.load(args.form))
    print(_num(evaluate(T, form)))
    return 0


def _cmd_demo(args) -> int:
    rng = random.Random(args.seed)
    name = args.fixture
    if name == "semicircle":
        obj = jsonio.current_to_obj(semicircle(args.n))
    elif name == "infinite-dipoles":
        obj = jsonio.molecule_to_obj(infinite_dipoles(args.j, args.k))
    elif name == "collinear-pair":
        obj = jsonio.current_to_obj(collinear_pair(args.dim))
    elif name == "square-loop":
        obj = jsonio.current_to_obj(square_loop())
    elif name == "figure-eight":
        obj = jsonio.current_to_obj(figure_eight())
    elif name == "fat-cantor":
        obj = jsonio.intervals_to_obj(fat_cantor(args.depth, args.alpha))
    elif name == "kuratowski":
        if args.matrix:
            space = jsonio.space_from_obj(jsonio.load(args.matrix))
        else:
            space = random_metric_space(args.n_points, rng)
        target, points = kuratowski_embed(space, args.basepoint)
        obj = {
            "v": jsonio.VERSION,
            "space": jsonio.space_to_obj(space),
            "embedded_space": jsonio.space_to_obj(target),
            "points": [list(p) for p in points],
        }
    else:
        raise ValidationError(f"unknown fixture {name!r}")
    _emit(obj, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="onecurrent",
        description="Polyhedral metric 1-currents at desk scale",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    kr = sub.add_parser("kr", help="KR norm of a molecule")
    kr.add_argument("--molecule", default="-")
    kr.add_argument("--dual-out")
    kr.add_argument("--plan-out")
    kr.add_argument("--batch", help="directory of molecule JSON files")
    kr.add_argument("--check", action="store_true")
    kr.add_argument("--svg")
    kr.set_defaults(func=_cmd_kr)

    pr = sub.add_parser("primitive", help="rectifiable primitive of a molecule")
    pr.add_argument("--molecule", default="-")
    pr.add_argument("--tent", type=float, help="lifted tent primitive at slack eps")
    pr.add_argument("--out", default="-")
    pr.add_argument("--check", action="store_true")
    pr.add_argument("--svg")
    pr.set_defaults(func=_cmd_primitive)

    fl = sub.add_parser("fill", help="complete a current into a cycle")
    fl.add_argument("--current", default="-")
    fl.add_argument("--lift", type=float, help="lifted filling at slack eps")
    fl.add_argument("--cycle-out")
    fl.add_argument("--rect-out")
    fl.add_argument("--check", action="store_true")
    fl.add_argument("--svg")
    fl.set_defaults(func=_cmd_fill)

    de = sub.add_parser("decompose", help="Smirnov path/loop decomposition")
    de.add_argument("--current", default="-")
    de.add_argument("--out", default="-")
    de.add_argument("--check", action="store_true")
    de.set_defaults(func=_cmd_decompose)

    re_ = sub.add_parser("represent", help="SBV curve representation")
    re_.add_argument("--current", default="-")
    re_.add_argument("--eps", type=float, required=True)
    re_.add_argument("--out", default="-")
    re_.add_argument("--check", action="store_true")
    re_.set_defaults(func=_cmd_represent)

    pa = sub.add_parser("param", help="transport parametrization of intervals")
    pa.add_argument("--intervals", required=True, help="file or literal [a,b],[c,d]")
    pa.add_argument("--out", default="-")
    pa.add_argument("--check", action="store_true")
    pa.set_defaults(func=_cmd_param)

    ev = sub.add_parser("eval", help="evaluate a current on a metric form")
    ev.add_argument("--current", default="-")
    ev.add_argument("--form", required=True)
    ev.set_defaults(func=_cmd_eval)

    dm = sub.add_parser("demo", help="materialize a named fixture")
    dm.add_argument(
        "fixture",
        choices=[
            "semicircle",
            "infinite-dipoles",
            "collinear-pair",
            "square-loop",
            "figure-eight",
            "fat-cantor",
            "kuratowski",
        ],
    )
    dm.add_argument("--n", type=int, default=256, help="semicircle polyline pieces")
    dm.add_argument("--j", type=int, default=1)
    dm.add_argument("--k", type=int, default=4)
    dm.add_argument("--dim", type=int, default=1)
    dm.add_argument("--depth", type=int, default=4)
    dm.add_argument("--alpha", type=float, default=1.0)
    dm.add_argument("--n-points", type=int, default=5)
    dm.add_argument("--basepoint", type=int, default=0)
    dm.add_argument("--matrix", help="space JSON for the kuratowski fixture")
    dm.add_argument("--seed", type=int, default=0)
    dm.add_argument("--out", default="-")
    dm.set_defaults(func=_cmd_demo)

    return ap


def main(argv=None) -> int:
    if "ONECURRENT_TOL" in os.environ:
        try:
            config.set_tolerance(float(os.environ["ONECURRENT_TOL"]))
        except ValueError as exc:
            print(f"error: bad ONECURRENT_TOL: {exc}", file=sys.stderr)
            return 1
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 2
    except (OneCurrentError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
