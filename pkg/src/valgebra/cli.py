"""Batch CLI: parse a scene file, run one command, emit a machine-readable report.

Scenes are plain JSON naming bodies, densities and valuations:

    {
      "schema": "valgebra-scene/1",
      "dimension": 2,
      "bodies":     {"K": {"vertices": [["0","0"],["1","0"],["0","1"],["1","1"]]}},
      "densities":  {"one": {"monomials": [{"exponents": [0,0], "coeff": "1"}]}},
      "valuations": {"vol": {"terms": [{"coeff": "1", "density": "one", "bodies": []}]}}
    }

Reports are stable-ordered JSON (or plain text); exact rationals are emitted
as "p/q" strings and every approximate number carries a method tag and an
error bound.  Exit codes: 0 success, 1 violated invariant (check), 2 input
error, 3 unsatisfied precondition.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .approx import Approx, Value, error_of, to_float, val_close
from .density import PolyDensity
from .errors import ValgebraError
from .normal_cycle import build_normal_cycle, curvature_measure, intrinsic_volumes
from .oracle import RngSpec, mc_volume
from .polytope import Polytope, convex_hull, minkowski_sum
from .product import fubini_slice_estimate, valuation_product
from .ring import MultiPoly, format_rational, parse_rational
from .valuation import (MixedTerm, MixedValuation, default_probes,
                        homogeneous_decomposition, lower_dim_probes,
                        mixed_volume, scaling_component, scaling_curve,
                        vanishes_below_dim, vanishing_order)

SCENE_SCHEMA = "valgebra-scene/1"
REPORT_SCHEMA = "valgebra-report/1"
VERSION = "0.1.0"

COMMANDS = ["volume", "mixed-volume", "eval", "scaling-curve", "lambda", "wdegree",
            "gamma-check", "product", "fubini-check", "intrinsic", "curvature",
            "decompose", "check"]


class SceneError(Exception):
    """Input-level error with a machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Scene:
    dimension: int
    bodies: dict[str, Polytope]
    densities: dict[str, PolyDensity]
    valuations: dict[str, MixedValuation]
    digest: str
    path: str


def parse_scene(path: str) -> Scene:
    """Load and fully validate a scene file; the loader hulls redundant vertices."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SceneError("parse", f"cannot read scene file: {exc}")
    try:
        data = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise SceneError("parse", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise SceneError("parse", "scene must be a JSON object")
    n = data.get("dimension")
    if not isinstance(n, int) or n < 1:
        raise SceneError("parse", "scene needs a positive integer 'dimension'")
    digest = hashlib.sha256(raw).hexdigest()

    bodies: dict[str, Polytope] = {}
    for name, rec in (data.get("bodies") or {}).items():
        try:
            vertices = [[parse_rational(x) for x in row] for row in rec["vertices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneError("parse", f"body {name!r}: malformed vertices ({exc})")
        for row in vertices:
            if len(row) != n:
                raise SceneError("dimension",
                                 f"body {name!r}: vertex of length {len(row)}, scene dimension {n}")
        bodies[name] = convex_hull(vertices, n)

    densities: dict[str, PolyDensity] = {}
    for name, rec in (data.get("densities") or {}).items():
        try:
            monos = rec["monomials"]
            terms = {}
            for m in monos:
                exps = tuple(int(e) for e in m["exponents"])
                if len(exps) != n:
                    raise SceneError("dimension",
                                     f"density {name!r}: exponents of length {len(exps)}, "
                                     f"scene dimension {n}")
                terms[exps] = parse_rational(m["coeff"])
        except SceneError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneError("parse", f"density {name!r}: malformed monomials ({exc})")
        densities[name] = PolyDensity(n, MultiPoly(n, terms))

    valuations: dict[str, MixedValuation] = {}
    for name, rec in (data.get("valuations") or {}).items():
        terms = []
        try:
            term_records = rec["terms"]
        except (KeyError, TypeError) as exc:
            raise SceneError("parse", f"valuation {name!r}: malformed terms ({exc})")
        for t in term_records:
            try:
                coeff = parse_rational(t["coeff"])
                density_id = t["density"]
                body_ids = t.get("bodies", [])
            except (KeyError, TypeError, ValueError) as exc:
                raise SceneError("parse", f"valuation {name!r}: malformed term ({exc})")
            if density_id not in densities:
                raise SceneError("reference",
                                 f"valuation {name!r} references unknown density {density_id!r}")
            missing = [b for b in body_ids if b not in bodies]
            if missing:
                raise SceneError("reference",
                                 f"valuation {name!r} references unknown bodies {missing}")
            terms.append(MixedTerm(coeff, densities[density_id],
                                   tuple(bodies[b] for b in body_ids)))
        valuations[name] = MixedValuation(n, terms)

    return Scene(n, bodies, densities, valuations, digest, path)


# ---------------------------------------------------------------------------
# result encoding
# ---------------------------------------------------------------------------

def encode_value(v: Value) -> dict:
    if isinstance(v, Fraction):
        return {"exact": format_rational(v)}
    out = {"estimate": v.value, "error_bound": v.error, "method": v.method}
    for key, val in sorted(v.meta.items()):
        out[key] = val
    return out


def encode_curve(poly: MultiPoly) -> list[dict]:
    return poly.to_records()


def _resolve(scene: Scene, table: str, name: str):
    pool = getattr(scene, table)
    if name not in pool:
        raise SceneError("reference", f"unknown {table[:-1] if table.endswith('s') else table} {name!r}")
    return pool[name]


def _parse_point(text: str | None, n: int):
    if text is None:
        return (Fraction(0),) * n
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != n:
        raise SceneError("dimension", f"point {text!r} has {len(parts)} coordinates, expected {n}")
    return tuple(parse_rational(p) for p in parts)


def _probe_family(scene: Scene, spec: str):
    n = scene.dimension
    if spec in (None, "default"):
        return "default", default_probes(n)
    if spec == "small":
        return "small", default_probes(n, random_count=2)
    if spec == "boxes":
        return "boxes", default_probes(n, random_count=0)
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            records = json.load(fh)
        bodies = [Polytope.from_record(rec, n) for rec in records]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SceneError("parse", f"cannot load probe family from {spec!r}: {exc}")
    origin = (Fraction(0),) * n
    return spec, [(b, origin) for b in bodies]


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def _cmd_volume(scene, args, opts):
    body = _resolve(scene, "bodies", args.body)
    return {"volume": encode_value(body.volume())}


def _cmd_mixed_volume(scene, args, opts):
    bodies = [_resolve(scene, "bodies", b) for b in args.bodies]
    return {"mixed_volume": encode_value(mixed_volume(bodies))}


def _cmd_eval(scene, args, opts):
    phi = _resolve(scene, "valuations", args.valuation)
    body = _resolve(scene, "bodies", args.body)
    return {"value": encode_value(phi.evaluate(body))}


def _cmd_scaling_curve(scene, args, opts):
    phi = _resolve(scene, "valuations", args.valuation)
    body = _resolve(scene, "bodies", args.body)
    x = _parse_point(args.point, scene.dimension)
    return {"curve": encode_curve(scaling_curve(phi, body, x))}


def _cmd_lambda(scene, args, opts):
    phi = _resolve(scene, "valuations", args.valuation)
    body = _resolve(scene, "bodies", args.body)
    x = _parse_point(args.point, scene.dimension)
    comp = scaling_component(phi, args.k, x)
    return {"degree": args.k, "value": encode_value(comp.evaluate(body))}


def _cmd_wdegree(scene, args, opts):
    phi = _resolve(scene, "valuations", args.valuation)
    family_name, probes = _probe_family(scene, opts.probes)
    order = vanishing_order(phi, probes)
    return {"vanishing_order": order,
            "probe_family": family_name,
            "probe_count": len(probes)}


def _cmd_gamma_check(scene, args, opts):
    phi = _resolve(scene, "valuations", args.valuation)
    probes = lower_dim_probes(scene.dimension, args.index)
    ok = vanishes_below_dim(phi, args.index, probes)
    return {"index": args.index, "vanishes_below": ok, "probe_count": len(probes)}


def _cmd_product(scene, args, opts):
    phi = _resolve(scene, "valuations", args.phi)
    psi = _resolve(scene, "valuations", args.psi)
    body = _resolve(scene, "bodies", args.body)
    prod = valuation_product(phi, psi)
    return {"value": encode_value(prod.evaluate(body))}


def _cmd_fubini_check(scene, args, opts):
    phi = _resolve(scene, "valuations", args.phi)
    psi = _resolve(scene, "valuations", args.psi)
    body = _resolve(scene, "bodies", args.body)
    if len(phi.terms) != 1 or len(psi.terms) != 1:
        raise ValgebraError("fubini-check needs single-term valuations")
    from .product import exterior_product
    lhs = exterior_product(phi, psi).evaluate(body)
    rhs = fubini_slice_estimate(phi.terms[0], psi.terms[0], body,
                                samples=opts.mc_samples or 96, seed=opts.seed or 0)
    agree = val_close(lhs, rhs)
    return {"exterior_value": encode_value(lhs),
            "slice_integral": encode_value(rhs),
            "within_bound": agree}


def _cmd_intrinsic(scene, args, opts):
    body = _resolve(scene, "bodies", args.body)
    rng = RngSpec(opts.seed if opts.seed is not None else 20260810)
    vols = intrinsic_volumes(body, rng=rng, mc_samples=opts.mc_samples or 120_000)
    return {"intrinsic_volumes": [encode_value(v) for v in vols]}


def _cmd_curvature(scene, args, opts):
    body = _resolve(scene, "bodies", args.body)
    weight = _resolve(scene, "densities", args.weight).poly
    rng = RngSpec(opts.seed if opts.seed is not None else 20260810)
    val = curvature_measure(body, args.k, weight, rng=rng,
                            mc_samples=opts.mc_samples or 120_000)
    return {"degree": args.k, "value": encode_value(val)}


def _cmd_decompose(scene, args, opts):
    phi = _resolve(scene, "valuations", args.valuation)
    body = _resolve(scene, "bodies", args.body)
    comps = homogeneous_decomposition(phi, body)
    return {"components": [encode_value(c) for c in comps]}


def _split_planes(body: Polytope):
    n = body.ambient_dim
    lo, hi = body.bounding_box()
    for axis in range(n):
        if lo[axis] < hi[axis]:
            normal = tuple(Fraction(1 if i == axis else 0) for i in range(n))
            yield normal, (lo[axis] + hi[axis]) / 2


def _cmd_check(scene, args, opts):
    """Built-in identity suites; any failure flips the exit code to 1."""
    seed = opts.seed if opts.seed is not None else 20260810
    samples = opts.mc_samples or 50_000
    results = []

    def record(name, ok, detail=""):
        results.append({"check": name, "ok": bool(ok), "detail": detail})

    for name, body in sorted(scene.bodies.items()):
        record(f"hull-idempotent:{name}",
               convex_hull(body.vertices, scene.dimension) == body)
        tri = body.triangulate()
        total = sum((s.volume() for s in tri), Fraction(0))
        vol = body.volume()
        if body.is_full_dimensional():
            record(f"triangulation-volume:{name}", total == vol,
                   f"{format_rational(total)} vs {format_rational(vol)}")

    names = sorted(scene.bodies)
    for i in range(len(names)):
        for j in range(i, len(names)):
            p, q = scene.bodies[names[i]], scene.bodies[names[j]]
            s = minkowski_sum(p, q)
            direction = tuple(Fraction(k + 1, 1) for k in range(scene.dimension))
            ok = s.support(direction) == p.support(direction) + q.support(direction)
            record(f"support-additive:{names[i]}+{names[j]}", ok)

    for vname, phi in sorted(scene.valuations.items()):
        for bname, body in sorted(scene.bodies.items()):
            if not body.is_full_dimensional():
                continue
            for normal, offset in _split_planes(body):
                lo_part, hi_part, section = body._split3(normal, offset)
                lhs = phi.evaluate(body)
                rhs = phi.evaluate(lo_part) + phi.evaluate(hi_part) - phi.evaluate(section)
                record(f"valuation-identity:{vname}:{bname}", lhs == rhs,
                       f"{format_rational(lhs)} vs {format_rational(rhs)}")

    for bname, body in sorted(scene.bodies.items()):
        if not body.is_full_dimensional():
            continue
        cyc = build_normal_cycle(body, rng=RngSpec(seed), mc_samples=samples)
        total = cyc.vertex_angle_sum()
        ok = val_close(total, Fraction(1), slack=4 * error_of(total) + 1e-9)
        record(f"vertex-angle-sum:{bname}", ok, f"{to_float(total)}")
        est, se = mc_volume(body, samples, RngSpec(seed).derive("check", bname))
        exact = float(body.volume())
        record(f"mc-volume-4sigma:{bname}", abs(est - exact) <= 4 * se + 1e-12,
               f"{est} vs {exact} (se {se})")

    ok_all = all(r["ok"] for r in results)
    return {"checks": results, "all_ok": ok_all}


HANDLERS = {
    "volume": _cmd_volume,
    "mixed-volume": _cmd_mixed_volume,
    "eval": _cmd_eval,
    "scaling-curve": _cmd_scaling_curve,
    "lambda": _cmd_lambda,
    "wdegree": _cmd_wdegree,
    "gamma-check": _cmd_gamma_check,
    "product": _cmd_product,
    "fubini-check": _cmd_fubini_check,
    "intrinsic": _cmd_intrinsic,
    "curvature": _cmd_curvature,
    "decompose": _cmd_decompose,
    "check": _cmd_check,
}


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def emit(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"command: {report.get('command', '?')}"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for key in sorted(obj):
                walk(f"{prefix}{key}.", obj[key])
        elif isinstance(obj, list):
            for i, item in enumerate(obj):
                walk(f"{prefix}{i}.", item)
        else:
            lines.append(f"{prefix[:-1]} = {obj}")

    walk("", report.get("results", {}))
    return "\n".join(lines) + "\n"


def build_report(command: str, scene: Scene, arguments: dict, results: dict,
                 opts) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "version": VERSION,
        "command": command,
        "arguments": arguments,
        "scene": {"path": scene.path, "sha256": scene.digest,
                  "dimension": scene.dimension},
        "seed": opts.seed,
        "mc_samples": opts.mc_samples,
        "results": results,
    }


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def _make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", required=True, help="scene JSON file")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--seed", type=int, default=None, help="RNG seed for approximate paths")
    common.add_argument("--mc-samples", type=int, default=None, dest="mc_samples")
    common.add_argument("--probes", default=None,
                        help="probe family: default, small, boxes, or a JSON file")
    parser = argparse.ArgumentParser(
        prog="valgebra",
        description="exact valuation computations on convex polytopes")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name):
        return sub.add_parser(name, parents=[common])

    sp = add("volume");         sp.add_argument("body")
    sp = add("mixed-volume");   sp.add_argument("bodies", nargs="+")
    sp = add("eval");           sp.add_argument("valuation"); sp.add_argument("body")
    sp = add("scaling-curve");  sp.add_argument("valuation"); sp.add_argument("body")
    sp.add_argument("--point", default=None)
    sp = add("lambda");         sp.add_argument("valuation"); sp.add_argument("body")
    sp.add_argument("--k", type=int, required=True); sp.add_argument("--point", default=None)
    sp = add("wdegree");        sp.add_argument("valuation")
    sp = add("gamma-check");    sp.add_argument("valuation")
    sp.add_argument("--index", type=int, required=True)
    sp = add("product");        sp.add_argument("phi"); sp.add_argument("psi")
    sp.add_argument("body")
    sp = add("fubini-check");   sp.add_argument("phi"); sp.add_argument("psi")
    sp.add_argument("body")
    sp = add("intrinsic");      sp.add_argument("body")
    sp = add("curvature");      sp.add_argument("body")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--weight", required=True, help="density name used as weight")
    sp = add("decompose");      sp.add_argument("valuation"); sp.add_argument("body")
    add("check")
    return parser


def _emit_error(code: str, message: str, opts) -> None:
    payload = json.dumps({"error": {"code": code, "message": message}},
                         sort_keys=True) + "\n"
    if opts is not None and getattr(opts, "output", None):
        with open(opts.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    sys.stderr.write(payload)


def main(argv=None) -> int:
    parser = _make_parser()
    opts = parser.parse_args(argv)
    try:
        scene = parse_scene(opts.scene)
        handler = HANDLERS[opts.command]
        results = handler(scene, opts, opts)
    except SceneError as exc:
        _emit_error(exc.code, str(exc), opts)
        return 2
    except ValgebraError as exc:
        _emit_error("precondition", str(exc), opts)
        return 3
    arguments = {k: v for k, v in vars(opts).items()
                 if k not in {"scene", "output", "format"} and v is not None}
    report = build_report(opts.command, scene, arguments, results, opts)
    text = emit(report, opts.format)
    if opts.output:
        with open(opts.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if opts.command == "check" and not results.get("all_ok", False):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
