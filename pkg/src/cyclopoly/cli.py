"""Command-line entry point.

Every subcommand prints (or writes with ``--out``) a JSON document with
sorted keys. Exit status: 0 on success, 2 on invalid input, 3 when a bounded
search runs out of budget (``CYCLOPOLY_BUDGET`` sets the budget).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import fields
from .arith import lcm
from .cyclotomic import CyclotomicNumber, embed, lift, try_lower, zeta
from .errors import Inconclusive
from .model_sets import ModelSetDescriptor, Patch, generate_patch
from .polygons import (
    Polygon,
    admissible_m,
    construct_polygon_in_field,
    exists_affinely_regular,
    inflate_into_model_set,
    verify_affinely_regular,
)
from .tomography import (
    DEFAULT_NODE_BUDGET,
    Direction,
    build_counterexample,
    determination_bruteforce,
    edge_directions,
    min_k_bound,
    witness_bound,
    xray,
)

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 2, 3

FINITE_NOTE = (
    "statements are relative to the generated patch; a collision shows these "
    "directions do not determine convex subsets, no collision proves nothing"
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    n: int | None = None
    m: int | None = None
    radius: Fraction | None = None
    window_circumradius: Fraction | None = None
    precision: int = 53
    seed: int = 0
    budget: int = DEFAULT_NODE_BUDGET
    out: str | None = None
    svg: str | None = None
    extra: dict = field(default_factory=dict)

    NEEDS_CONDUCTOR = ("patch", "polygon", "counterexample", "bound")

    def validate(self) -> "RunConfig":
        if self.precision < 53:
            raise UsageError("--precision must be at least 53")
        if self.radius is not None and self.radius <= 0:
            raise UsageError("--radius must be positive")
        if self.window_circumradius is not None and self.window_circumradius <= 0:
            raise UsageError("--window-circumradius must be positive")
        if self.budget <= 0:
            raise UsageError("search budget must be positive")
        if self.command in self.NEEDS_CONDUCTOR and self.n is not None:
            if self.n < 3 or self.n % 4 == 2:
                raise UsageError(f"--n must be >= 3 and not 2 mod 4, got {self.n}")
        if self.m is not None and self.m < 3 and self.command != "fields":
            raise UsageError("--m must be at least 3")
        return self


def _budget_from_env() -> int:
    raw = os.environ.get("CYCLOPOLY_BUDGET")
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CYCLOPOLY_BUDGET must be an integer, got {raw!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, obj, stdout) -> None:
    text = _dump(obj)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _write_svg(path: str | None, text_fn) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text_fn())


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from None


def _parse_direction(text: str, n: int) -> Direction:
    try:
        coeffs = [int(c) for c in text.replace(" ", "").split(",")]
    except ValueError:
        raise UsageError(f"direction must be comma-separated integers, got {text!r}") from None
    if len(coeffs) != len(CyclotomicNumber.zero(n).coeffs):
        raise UsageError(f"direction {text!r} needs {len(CyclotomicNumber.zero(n).coeffs)} coefficients for n = {n}")
    return Direction.from_coeffs(n, coeffs)


def _descriptor(cfg: RunConfig) -> ModelSetDescriptor:
    if cfg.window_circumradius is not None:
        if cfg.n in (3, 4):
            raise UsageError("lattices take no window")
        return ModelSetDescriptor.cut_and_project(cfg.n, circumradius=cfg.window_circumradius)
    return ModelSetDescriptor.default(cfg.n)


def _polygon_json(P: Polygon, precision: int) -> dict:
    out = P.to_json()
    digits = int(precision * math.log10(2))
    approx = []
    for v in P.vertices:
        val, _ = embed(v, precision)
        if precision == 53:
            approx.append([repr(val.real), repr(val.imag)])
        else:
            approx.append([mpmath.nstr(val.real, digits), mpmath.nstr(val.imag, digits)])
    out["approx"] = approx
    return out


# subcommands -----------------------------------------------------------------

_FIELD_PREDICATES = {
    "subset": fields.k_field_subset,
    "equal": fields.k_field_equal,
    "real-subset": fields.real_subfield_subset,
    "real-equal": fields.real_subfield_equal,
    "intersection": fields.intersection_conductor,
    "compositum": fields.compositum_conductor,
}


def cmd_fields(cfg: RunConfig) -> dict:
    a = cfg.action
    if a == "classify":
        if cfg.n is None:
            raise UsageError("classify needs --n")
        c = fields.classify_phi_half(cfg.n)
        return {"query": {"op": a, "n": cfg.n}, "result": c.kind.value, "witness": c.to_json()}
    if a == "sophie-germain":
        limit = cfg.extra.get("limit") or 200
        return {"query": {"op": a, "limit": limit}, "result": fields.sophie_germain_primes(limit), "witness": None}
    if cfg.m is None or cfg.n is None:
        raise UsageError(f"{a} needs --m and --n")
    m, n = cfg.m, cfg.n
    result = _FIELD_PREDICATES[a](m, n)
    witness = None
    if a == "subset" and result:
        witness = try_lower(lift(zeta(m), lcm(m, n)), n).to_json()
    elif a == "real-subset" and result:
        w = try_lower(lift(zeta(m) + zeta(m, -1), lcm(m, n)), n)
        witness = w.to_json()
    return {"query": {"op": a, "m": m, "n": n}, "result": result, "witness": witness}


def cmd_patch(cfg: RunConfig) -> dict:
    if cfg.n is None or cfg.radius is None:
        raise UsageError("patch needs --n and --radius")
    patch = generate_patch(_descriptor(cfg), cfg.radius)

    def picture():
        from .svg import render_patch

        return render_patch(patch)

    _write_svg(cfg.svg, picture)
    return patch.to_json()


def cmd_polygon(cfg: RunConfig) -> dict:
    a, n = cfg.action, cfg.n
    if n is None:
        raise UsageError("polygon needs --n")
    if a == "admissible":
        m_max = cfg.extra.get("m_max") or max(6, 2 * n)
        return {"n": n, "m_max": m_max, "admissible": admissible_m(n, m_max)}
    if cfg.m is None:
        raise UsageError(f"polygon {a} needs --m")
    m = cfg.m
    if a == "exists":
        return {"m": m, "n": n, "exists": exists_affinely_regular(m, n)}
    if not exists_affinely_regular(m, n):
        raise UsageError(f"no affinely regular {m}-gon over conductor {n}")
    P = construct_polygon_in_field(m, n)
    wit = verify_affinely_regular(P)
    out = {"m": m, "n": n, "polygon": _polygon_json(P, cfg.precision), "witness": wit.to_json()}
    if cfg.extra.get("inflate"):
        radius = cfg.radius if cfg.radius is not None else Fraction(15)
        patch = generate_patch(_descriptor(cfg), radius)
        inf = inflate_into_model_set(P, patch.descriptor, patch=patch, max_candidates=cfg.budget)
        out["inflation"] = inf.to_json()
        out["inflation"]["polygon"] = _polygon_json(inf.polygon, cfg.precision)
        out["inflation"]["patch"] = {"descriptor": patch.descriptor.to_json(), "region_radius": str(radius)}
        out["note"] = FINITE_NOTE
        shown, pts = inf.polygon, patch
    else:
        shown, pts = P, None

    def picture():
        from .svg import render_patch

        region = pts or Patch.from_points(
            ModelSetDescriptor.default(n), max(abs(v.approx) for v in P.vertices) * 1.2, P.vertices
        )
        return render_patch(region, [shown.vertices], shown.vertices)

    _write_svg(cfg.svg, picture)
    return out


def _read_points(data, n: int) -> list[CyclotomicNumber]:
    if isinstance(data, dict):
        for key in ("points", "F", "set"):
            if key in data:
                data = data[key]
                break
        else:
            raise UsageError("point set JSON needs a 'points' or 'F' list")
    try:
        return [CyclotomicNumber(n, [Fraction(c) for c in v]) for v in data]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed point list: {exc}") from None


def _load_patch(data) -> Patch:
    """A patch from ``patch`` output, or regenerated from the descriptor block
    embedded in ``counterexample``, ``polygon --inflate`` or ``bound`` output."""
    try:
        if "points" in data:
            return Patch.from_json(data)
        for path in (("patch",), ("inflation", "patch")):
            block = data
            for key in path:
                block = block.get(key) if isinstance(block, dict) else None
            if block:
                d = ModelSetDescriptor.from_json(block["descriptor"])
                return generate_patch(d, Fraction(block["region_radius"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"malformed patch JSON: {exc}") from None
    raise UsageError("JSON holds neither a patch nor a patch descriptor")


def cmd_xray(cfg: RunConfig) -> dict:
    patch = _load_patch(_load_json(cfg.extra["patch"]))
    n = patch.n
    F = _read_points(_load_json(cfg.extra["set"]), n) if cfg.extra.get("set") else list(patch.points)
    outside = [z for z in F if not patch.contains(z)]
    if outside:
        raise UsageError(f"{len(outside)} point(s) of the set are not in the patch")
    dirs = [_parse_direction(t, n) for t in cfg.extra.get("dirs") or []]
    if not dirs:
        raise UsageError("give at least one --dir")
    return {
        "n": n,
        "size": len(set(F)),
        "xrays": [xray(F, u).to_json() for u in dirs],
        "note": FINITE_NOTE,
    }


def cmd_counterexample(cfg: RunConfig) -> dict:
    if cfg.n is None or cfg.m is None:
        raise UsageError("counterexample needs --n and --m")
    n, m = cfg.n, cfg.m
    if m % 2:
        raise UsageError("U-polygons have an even number of vertices; pick an even --m")
    if not exists_affinely_regular(m, n):
        raise UsageError(f"no affinely regular {m}-gon over conductor {n}")
    radius = cfg.radius if cfg.radius is not None else Fraction(12)
    patch = generate_patch(_descriptor(cfg), radius)
    inf = inflate_into_model_set(
        construct_polygon_in_field(m, n), patch.descriptor, patch=patch, max_candidates=cfg.budget
    )
    U = edge_directions(inf.polygon)
    ce = build_counterexample(inf.polygon, patch, U)
    out = ce.to_json()
    out["patch"] = {"descriptor": patch.descriptor.to_json(), "region_radius": str(radius)}
    out["note"] = FINITE_NOTE

    def picture():
        from .svg import render_pair

        return render_pair(patch, ce.polygon.vertices, ce.F, ce.Fprime)

    _write_svg(cfg.svg, picture)
    return out


def cmd_bound(cfg: RunConfig) -> dict:
    if cfg.n is None:
        raise UsageError("bound needs --n")
    out = {"n": cfg.n, "k_must_exceed": min_k_bound(cfg.n)}
    if cfg.extra.get("witness"):
        radius = cfg.radius if cfg.radius is not None else Fraction(15)
        w = witness_bound(cfg.n, generate_patch(_descriptor(cfg), radius))
        out["witness"] = w.to_json()
        out["note"] = FINITE_NOTE
    return out


def cmd_demo(cfg: RunConfig) -> dict:
    """Small end-to-end run: square switching pair, a brute-force collision and an X-ray check."""
    lattice = generate_patch(ModelSetDescriptor.lattice(4), 2)
    axes = [Direction.from_coeffs(4, [1, 0]), Direction.from_coeffs(4, [0, 1])]
    square = Polygon.from_points([CyclotomicNumber(4, c) for c in ([0, 0], [1, 0], [1, 1], [0, 1])])
    pair = build_counterexample(square, lattice, axes)
    collision = determination_bruteforce(lattice, axes, 6, budget=cfg.budget)
    rng = random.Random(cfg.seed)
    sample = rng.sample(list(lattice.points), 6)
    conserved = all(xray(sample, u).total == len(sample) for u in axes)
    return {
        "square_pair": pair.to_json(),
        "bruteforce_collision": collision.to_json() if collision else None,
        "random_subset": [[str(c) for c in z.coeffs] for z in sample],
        "xray_conservation": conserved,
        "bounds": {str(n): min_k_bound(n) for n in (3, 4, 5, 8, 12)},
        "note": FINITE_NOTE,
    }


COMMANDS = {
    "fields": cmd_fields,
    "patch": cmd_patch,
    "polygon": cmd_polygon,
    "xray": cmd_xray,
    "counterexample": cmd_counterexample,
    "bound": cmd_bound,
    "demo": cmd_demo,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclopoly", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--precision", type=int, default=53, help="bits for printed approximations")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fields", parents=[common], help="cyclotomic field inclusion queries")
    f.add_argument("action", choices=[*_FIELD_PREDICATES, "classify", "sophie-germain"])
    f.add_argument("--m", type=int)
    f.add_argument("--n", type=int)
    f.add_argument("--limit", type=int)

    pa = sub.add_parser("patch", parents=[common], help="generate a model-set patch")
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--radius", type=_fraction, required=True)
    pa.add_argument("--window-circumradius", type=_fraction)
    pa.add_argument("--svg")

    po = sub.add_parser("polygon", parents=[common], help="affinely regular polygons")
    po.add_argument("action", choices=["exists", "construct", "admissible"])
    po.add_argument("--m", type=int)
    po.add_argument("--n", type=int, required=True)
    po.add_argument("--m-max", type=int)
    po.add_argument("--inflate", action="store_true", help="move the polygon into a model-set patch")
    po.add_argument("--patch-radius", dest="radius", type=_fraction)
    po.add_argument("--window-circumradius", type=_fraction)
    po.add_argument("--svg")

    x = sub.add_parser("xray", parents=[common], help="X-rays of a point set in a patch")
    x.add_argument("--patch", required=True, help="patch JSON from the patch subcommand")
    x.add_argument("--set", help="JSON list of coefficient vectors (default: the whole patch)")
    x.add_argument("--dir", dest="dirs", action="append", help='direction coefficients, e.g. "1,0"')

    c = sub.add_parser("counterexample", parents=[common], help="switching pair from a U-polygon")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--radius", type=_fraction)
    c.add_argument("--window-circumradius", type=_fraction)
    c.add_argument("--svg")

    b = sub.add_parser("bound", parents=[common], help="direction-count lower bound")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--witness", action="store_true", help="also build the certifying U-polygon")
    b.add_argument("--radius", type=_fraction)

    d = sub.add_parser("demo", parents=[common], help="small end-to-end run")
    d.add_argument("--seed", type=int, default=0)
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    known = {"command", "action", "n", "m", "radius", "window_circumradius", "precision", "seed", "out", "svg"}
    values = vars(ns)
    extra = {k: v for k, v in values.items() if k not in known}
    return RunConfig(
        command=ns.command,
        action=values.get("action"),
        n=values.get("n"),
        m=values.get("m"),
        radius=values.get("radius"),
        window_circumradius=values.get("window_circumradius"),
        precision=values.get("precision", 53),
        seed=values.get("seed") or 0,
        budget=_budget_from_env(),
        out=values.get("out"),
        svg=values.get("svg"),
        extra=extra,
    ).validate()


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
        result = COMMANDS[cfg.command](cfg)
        _emit(cfg, result, stdout)
    except Inconclusive as exc:
        stderr.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)
