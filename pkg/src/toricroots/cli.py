"""Command-line front end.

Every command emits one report. ``--json`` prints it under the published
report schema; the default is a short text rendering. Exit status is 0 on
success, 1 on a domain error (bad input, violated precondition) and 2 when a
``verify`` suite fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

import jsonschema

from . import schemas
from .cones import Cone, ConeError, dual_cone
from .demazure import roots_by_ray, roots_within
from .lattice import LatticeError, vector
from .lnd import (
    AlgebraElement,
    OutsideWeightMonoid,
    PreconditionError,
    apply,
    decompose,
    from_descriptor,
    nilpotency_oracle,
)
from .restriction import (
    RestrictionError,
    SubtorusRestriction,
    classify,
    cremona_roots,
    fiber,
)
from .surface import CASE33, SurfaceData, SurfaceError, ah_invariants, case33_family, classify_surface
from .verify import DEFAULT_BOUNDS, SUITES, run_suite

FORMATS = ("text", "json", "svg")


class InputError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)  # role -> path
    bound: int | None = None
    fmt: str = "text"
    seed: int | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in schemas.COMMANDS:
            raise InputError("bad_command", f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise InputError("bad_format", f"format must be one of {FORMATS}")
        # cremona allows bound 0 (only the constant coefficients)
        least = 0 if self.command == "cremona" else 1
        if self.bound is not None and self.bound < least:
            raise InputError("bad_bound", f"bound must be >= {least}, got {self.bound}")


# input helpers -----------------------------------------------------------


def _load(path: str, schema: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError("io_error", f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError("bad_json", f"{path}: {exc}") from None
    try:
        schemas.validate(data, schema)
    except jsonschema.ValidationError as exc:
        raise InputError("schema_violation", f"{path}: {exc.message}") from None
    return data


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return vector(int(x) for x in text.split(","))
    except ValueError:
        raise InputError("bad_vector", f"expected comma-separated integers, got {text!r}") from None


def _cone(cfg: RunConfig) -> Cone:
    return Cone.from_dict(_load(cfg.inputs["cone"], "cone"))


def _subtorus(cfg: RunConfig) -> SubtorusRestriction:
    return SubtorusRestriction.from_dict(_load(cfg.inputs["subtorus"], "subtorus"))


def _need(cfg: RunConfig, *roles: str) -> None:
    for role in roles:
        if role not in cfg.inputs:
            raise InputError("missing_input", f"--{role} is required for {cfg.command}")


# commands ----------------------------------------------------------------


def _roots(cfg: RunConfig) -> dict:
    _need(cfg, "cone")
    c = _cone(cfg)
    bound = cfg.bound or 3
    by_ray = roots_by_ray(c, bound)
    return {"cone": c.to_dict(), "bound": bound,
            "roots": [r.to_dict() for r in roots_within(c, bound)],
            "by_ray": [{"ray": list(ray), "count": len(es)} for ray, es in by_ray.items()]}


def _classify(cfg: RunConfig) -> dict:
    _need(cfg, "cone", "subtorus")
    c, s = _cone(cfg), _subtorus(cfg)
    return classify(s, c, cfg.bound or 3).to_dict()


def _fibers(cfg: RunConfig) -> dict:
    _need(cfg, "cone", "subtorus")
    c, s = _cone(cfg), _subtorus(cfg)
    t_roots = cfg.options.get("t_roots") or []
    if not t_roots:
        raise InputError("missing_input", "give at least one --t-root")
    out = []
    for text in t_roots:
        f = fiber(s, c, _int_list(text), cfg.bound)
        out.append(f.to_dict())
    return {"subtorus": s.to_dict(), "fibers": out}


def _surface(cfg: RunConfig) -> dict:
    o = cfg.options
    sd = SurfaceData(o["a"], o["b"], o["r"], o["q"])
    bound = cfg.bound or 12
    case = classify_surface(sd, bound)
    out = {"surface": sd.to_dict(), **case.to_dict()}
    if case.lam is not None:
        inv = ah_invariants(sd)
        out["p1"], out["p2"] = str(inv["p1"]), str(inv["p2"])
        out["p1_integral"], out["p2_integral"] = inv["p1_integral"], inv["p2_integral"]
    if o.get("family"):
        family = []
        if case.tag == CASE33:
            for e in case.lam.members:
                d = case33_family(sd, e, 1, 1)
                desc = {k: v for k, v in d.descriptor.items() if k not in ("alpha", "beta")}
                family.append({"t_degree": e, "descriptor": desc, "parameters": "(alpha:beta)"})
        out["family"] = family
    return out


def _cremona(cfg: RunConfig) -> dict:
    n = cfg.options["n"]
    bound = 3 if cfg.bound is None else cfg.bound
    roots = cremona_roots(n, bound)
    return {"n": n, "bound": bound, "count": len(roots), "roots": [r.to_dict() for r in roots]}


def _probes(cfg: RunConfig, c: Cone) -> list[AlgebraElement]:
    chars = cfg.options.get("probes") or []
    if chars:
        return [AlgebraElement.chi(_int_list(t)) for t in chars]
    return [AlgebraElement.chi(m) for m in dual_cone(c).rays]


def _lnd(cfg: RunConfig) -> dict:
    _need(cfg, "cone", "derivation")
    c = _cone(cfg)
    desc = _load(cfg.inputs["derivation"], "derivation")
    d = from_descriptor(c, desc)
    action = cfg.options["action"]
    max_iter = cfg.options.get("max_iter") or 50
    out: dict = {"action": action, "derivation": d.descriptor}
    if action == "apply":
        if "element" in cfg.inputs:
            f = AlgebraElement.from_dict(_load(cfg.inputs["element"], "element"))
        else:
            f = sum(_probes(cfg, c), AlgebraElement())
        out["input"] = f.to_dict()
        out["output"] = apply(d, f).to_dict()
    elif action == "nilpotency":
        verdict = nilpotency_oracle(d, _probes(cfg, c), max_iter)
        out["verdict"] = verdict.to_dict()
        out["known_lnd"] = d.known_lnd
    else:
        gens = [_int_list(t) for t in cfg.options.get("generators") or []]
        gens = gens or list(dual_cone(c).rays)
        out["decomposition"] = decompose(d, gens, max_iter).to_dict()
    return out


def _verify(cfg: RunConfig) -> dict:
    name = cfg.options["suite"]
    names = sorted(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise InputError("unknown_suite", f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    seed = cfg.seed or 0
    results = [run_suite(n, cfg.bound if cfg.bound is not None else DEFAULT_BOUNDS.get(n), seed)
               for n in names]
    return {"passed": all(r.passed for r in results), "suites": [r.to_dict() for r in results]}


HANDLERS = {"roots": _roots, "classify": _classify, "fibers": _fibers, "surface": _surface,
            "cremona": _cremona, "lnd": _lnd, "verify": _verify}

DOMAIN_ERRORS = (InputError, ConeError, LatticeError, RestrictionError, SurfaceError,
                 PreconditionError, OutsideWeightMonoid)


def _error_code(exc: Exception) -> str:
    if isinstance(exc, (InputError, PreconditionError)):
        return exc.code
    return {ConeError: "cone_invariant", LatticeError: "lattice_invariant",
            RestrictionError: "subtorus_invariant", SurfaceError: "surface_input",
            OutsideWeightMonoid: "outside_weight_monoid"}.get(type(exc), "domain_error")


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; returns ``(exit_status, report)``."""
    report: dict = {"command": cfg.command, "status": "ok", "bound": cfg.bound,
                    "seed": cfg.seed}
    try:
        result = HANDLERS[cfg.command](cfg)
    except DOMAIN_ERRORS as exc:
        report["status"] = "error"
        report["error"] = {"code": _error_code(exc), "message": str(exc)}
        return 1, report
    report["result"] = result
    if cfg.command == "verify" and not result["passed"]:
        report["status"] = "fail"
        return 2, report
    return 0, report


# rendering ---------------------------------------------------------------


def render_svg(c: Cone, bound: int, cell: int = 24) -> str:
    """Rank-2 root diagram: filled dots for the first ray's roots, hollow for the second."""
    if c.rank != 2:
        raise InputError("svg_rank", "SVG root diagrams need a rank-2 cone")
    by_ray = roots_by_ray(c, bound)
    size = (2 * bound + 2) * cell

    def xy(m):
        return (m[0] + bound + 1) * cell, (bound + 1 - m[1]) * cell

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             '<rect width="100%" height="100%" fill="white"/>']
    for i in range(-bound, bound + 1):
        for j in range(-bound, bound + 1):
            x, y = xy((i, j))
            parts.append(f'<circle cx="{x}" cy="{y}" r="1.5" fill="#bbb"/>')
    ox, oy = xy((0, 0))
    parts.append(f'<line x1="{cell // 2}" y1="{oy}" x2="{size - cell // 2}" y2="{oy}" '
                 'stroke="#888"/>')
    parts.append(f'<line x1="{ox}" y1="{cell // 2}" x2="{ox}" y2="{size - cell // 2}" '
                 'stroke="#888"/>')
    for k, (ray, es) in enumerate(by_ray.items()):
        fill = "black" if k == 0 else "white"
        parts.append(f'<g data-ray="{ray[0]},{ray[1]}">')
        for e in es:
            x, y = xy(e)
            parts.append(f'<circle cx="{x}" cy="{y}" r="{cell // 4}" fill="{fill}" '
                         'stroke="black" stroke-width="1.5"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_text(report: dict) -> str:
    if report["status"] == "error":
        return f"error [{report['error']['code']}]: {report['error']['message']}\n"
    res, cmd = report["result"], report["command"]
    lines: list[str] = []
    if cmd == "roots":
        lines.append(f"{len(res['roots'])} roots within bound {res['bound']}")
        lines += [f"  ray {r['ray']}: {r['e']}" for r in res["roots"]]
    elif cmd == "cremona":
        lines.append(f"{res['count']} root vectors for n={res['n']}, |alpha| <= {res['bound']}")
        lines += [f"  {r['derivation']}  [{r['character']}]" for r in res["roots"]]
    elif cmd == "surface":
        lines.append(f"{res['case']}  (a, b, r, q) = "
                     + ", ".join(str(res["surface"][k]) for k in "abrq"))
        lines += [f"  {k}: {v}" for k, v in res["rows"].items()]
        if "lambda" in res:
            lam = res["lambda"]
            lines.append(f"  Lambda: first={lam['first']} period={lam['period']} "
                         f"members={lam['members']}")
            lines.append(f"  p1={res['p1']} p2={res['p2']}")
    elif cmd == "verify":
        lines += [f"[{'PASS' if s['passed'] else 'FAIL'}] {s['suite']}" for s in res["suites"]]
    elif cmd == "fibers":
        for f in res["fibers"]:
            lines.append(f"{f['t_root']}: {f['cardinality']} count={f['count']} "
                         f"root_vectors={f['root_vectors']}")
    else:
        lines.append(json.dumps(res, indent=2))
    return "\n".join(lines) + "\n"


# argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricroots", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, svg=False):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", dest="fmt", action="store_const", const="json")
        if svg:
            g.add_argument("--svg", dest="fmt", action="store_const", const="svg")
        sp.add_argument("--bound", type=int)
        sp.set_defaults(fmt="text")

    sp = sub.add_parser("roots", help="Demazure roots within a sup-norm box")
    sp.add_argument("--cone", required=True)
    common(sp, svg=True)

    sp = sub.add_parser("classify", help="restriction report for a subtorus")
    sp.add_argument("--cone", required=True)
    sp.add_argument("--subtorus", required=True)
    common(sp)

    sp = sub.add_parser("fibers", help="certified fibers over given T-roots")
    sp.add_argument("--cone", required=True)
    sp.add_argument("--subtorus", required=True)
    sp.add_argument("--t-root", action="append", dest="t_roots", metavar="C1,C2,...")
    common(sp)

    sp = sub.add_parser("surface", help="surface classification row")
    for name in ("a", "b", "r", "q"):
        sp.add_argument(f"--{name}", type=int, required=True)
    sp.add_argument("--family", action="store_true", help="list two-parameter family descriptors")
    common(sp)

    sp = sub.add_parser("cremona", help="root vectors for volume-preserving automorphisms")
    sp.add_argument("--n", type=int, required=True)
    common(sp)

    sp = sub.add_parser("lnd", help="apply, test or decompose a derivation")
    sp.add_argument("action", choices=["apply", "nilpotency", "decompose"])
    sp.add_argument("--cone", required=True)
    sp.add_argument("--derivation", required=True)
    sp.add_argument("--element", help="JSON algebra element (apply)")
    sp.add_argument("--char", action="append", dest="probes", metavar="M1,M2,...")
    sp.add_argument("--generator", action="append", dest="generators", metavar="M1,M2,...")
    sp.add_argument("--max-iter", type=int, default=50)
    common(sp)

    sp = sub.add_parser("verify", help="run a property suite")
    sp.add_argument("--suite", required=True, help=f"one of {sorted(SUITES)} or 'all'")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = {k: getattr(args, k) for k in ("cone", "subtorus", "derivation", "element")
              if getattr(args, k, None)}
    skip = set(inputs) | {"command", "fmt", "bound", "seed", "cone", "subtorus",
                          "derivation", "element"}
    options = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(args.command, inputs, args.bound, args.fmt, getattr(args, "seed", None),
                     options)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except InputError as exc:
        report = {"command": args.command, "status": "error", "bound": args.bound,
                  "seed": getattr(args, "seed", None),
                  "error": {"code": exc.code, "message": str(exc)}}
        status = 1
        cfg = None
    else:
        status, report = run(cfg)
    fmt = cfg.fmt if cfg is not None else args.fmt
    if fmt == "svg" and status == 0:
        try:
            sys.stdout.write(render_svg(_cone(cfg), cfg.bound or 3))
            return 0
        except DOMAIN_ERRORS as exc:
            status = 1
            report = {**report, "status": "error",
                      "error": {"code": _error_code(exc), "message": str(exc)}}
            report.pop("result", None)
    if fmt in ("json", "svg"):
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        (sys.stdout if status != 1 else sys.stderr).write(render_text(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
