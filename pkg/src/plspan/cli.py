"""Command-line front end. JSON reports go to --report (or stdout); summaries to stderr."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import BoundsReport, gamma_report, lb_writhe
from .diagram import ExhaustedAttempts, find_diagram, gauss_code, writhe
from .families import (ConstructionFailedValidation, gen_planar_ngon, gen_random_polygon,
                       gen_torus_stick, gen_writhe_family)
from .higher import annulus4, cone, embed4_via_projection
from .mesh import (Mesh, UnsupportedDimensionForOFF, check_embedded, export_exact_json,
                   export_off, topology)
from .planar import NotPlanar, NotSimple, triangulate_planar
from .polygon import (InvalidPolygon, PolygonParseError, check_polygon, parse_polygon_text,
                      read_polygon, write_polygon)
from .seifert import ValidationFailed, seifert_surface

log = logging.getLogger("plspan")

OK, FINDINGS, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    out: Optional[str] = None
    report: Optional[str] = None
    seed: int = 0
    max_attempts: int = 200
    strategy: str = "white"
    precision: int = 6
    merge_collinear: bool = False
    format: Optional[str] = None


def _config(args) -> RunConfig:
    return RunConfig(**{k: getattr(args, k, None) for k in RunConfig.__dataclass_fields__
                        if getattr(args, k, None) is not None})


def _read_text(path: Optional[str]) -> str:
    if path is None:
        raise UsageError("--input is required")
    try:
        return Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load(cfg: RunConfig):
    return read_polygon(_read_text(cfg.input), merge=cfg.merge_collinear)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit_report(cfg: RunConfig, report: dict) -> None:
    text = _dump(report)
    if cfg.report:
        Path(cfg.report).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_mesh(cfg: RunConfig, M: Mesh) -> None:
    if not cfg.out:
        return
    fmt_ = cfg.format or ("off" if cfg.out.endswith(".off") else "json")
    if fmt_ == "off":
        text = export_off(M, cfg.precision)
    else:
        text = export_exact_json(M) + "\n"
    Path(cfg.out).write_text(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- subcommands ------------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    raw = parse_polygon_text(_read_text(cfg.input))
    issues = check_polygon(raw)
    _emit_report(cfg, {"valid": not issues, "n": len(raw), "dim": len(raw[0]) if raw else 0,
                       "issues": [i.to_json() for i in issues]})
    _note("valid" if not issues else "invalid: " + ", ".join(map(str, issues)))
    return FINDINGS if issues else OK


def cmd_diagram(cfg: RunConfig) -> int:
    P = _load(cfg)
    D = find_diagram(P, seed=cfg.seed, max_attempts=cfg.max_attempts)
    rep = D.to_json()
    rep["gauss_code"] = [f"{s}{k}" for k, s in gauss_code(D)]
    _emit_report(cfg, rep)
    _note(f"n={D.n} c={D.c} writhe={writhe(D)}")
    return OK


def cmd_seifert(cfg: RunConfig) -> int:
    P = _load(cfg)
    try:
        res = seifert_surface(P, strategy=cfg.strategy, seed=cfg.seed, max_attempts=cfg.max_attempts)
    except ValidationFailed as exc:
        _emit_report(cfg, {"ok": False, "failure": exc.args[0]})
        return FINDINGS
    _emit_mesh(cfg, res.mesh)
    rep = res.to_json()
    rep["topology"] = res.topology.to_json()
    rep["ok"] = True
    _emit_report(cfg, rep)
    _note(f"t={res.mesh.t} (ledger {res.ledger.total}) genus={rep['genus']} strategy={res.strategy}")
    return OK


def cmd_triangulate_planar(cfg: RunConfig) -> int:
    P = _load(cfg)
    try:
        M = triangulate_planar(P)
    except (NotPlanar, NotSimple) as exc:
        _emit_report(cfg, {"ok": False, "error": str(exc)})
        return FINDINGS
    rep = topology(M)
    bad = check_embedded(M) if M.dim >= 3 else []
    _emit_mesh(cfg, M)
    ok = not bad and rep.chi == 1
    _emit_report(cfg, {"ok": ok, "n": P.n, "triangle_count": M.t, "chi": rep.chi,
                       "embedded": not bad})
    return OK if ok else FINDINGS


def _higher(cfg: RunConfig, build) -> int:
    P = _load(cfg)
    res = build(P)
    _emit_mesh(cfg, res.mesh)
    rep = res.to_json()
    rep["ok"] = res.ok
    _emit_report(cfg, rep)
    _note(f"{res.kind}: t={res.mesh.t} after {res.attempts} attempt(s)")
    return OK if res.ok else FINDINGS


def cmd_cone(cfg):
    return _higher(cfg, lambda P: cone(P, seed=cfg.seed, max_attempts=cfg.max_attempts))


def cmd_annulus4(cfg):
    return _higher(cfg, lambda P: annulus4(P, seed=cfg.seed, max_attempts=cfg.max_attempts))


def cmd_embed4(cfg):
    return _higher(cfg, lambda P: embed4_via_projection(P, seed=cfg.seed,
                                                         max_attempts=min(cfg.max_attempts, 50)))


def cmd_gen(cfg: RunConfig, args) -> int:
    fam = args.family
    if fam == "torus":
        P = gen_torus_stick(args.m)
    elif fam == "writhe":
        P = gen_writhe_family(args.m)
    elif fam == "ngon":
        P = gen_planar_ngon(args.n, dim=args.d)
    else:
        P = gen_random_polygon(args.n, args.d, cfg.seed, box=args.box)
    text = write_polygon(P)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_bounds(cfg: RunConfig, args) -> int:
    P = _load(cfg)
    c = w = None
    tags = []
    if P.dim == 3:
        D = find_diagram(P, seed=cfg.seed, max_attempts=cfg.max_attempts)
        c, w = D.c, writhe(D)
        tags.append(f"frame_w={','.join(map(str, D.frame.w))}")
    g = Fraction(args.genus) if args.genus is not None else None
    rep = BoundsReport(P.n, c, w, g, tags)
    _emit_report(cfg, rep.to_json())
    return OK


def parse_range(text: str) -> list[int]:
    """'1..4' -> [1, 2, 3, 4]; '5' -> [5]; '1,3' -> [1, 3]."""
    out = []
    for part in text.split(","):
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def cmd_bench_gamma(cfg: RunConfig, args) -> int:
    try:
        ms = parse_range(args.m)
    except ValueError:
        raise UsageError(f"bad --m range {args.m!r}") from None
    runs, checks = [], []
    for m in ms:
        if args.family == "writhe":
            P = gen_writhe_family(m)
        elif args.family == "torus":
            P = gen_torus_stick(m)
        else:
            P = gen_random_polygon(m, 3, cfg.seed)
        res = seifert_surface(P, strategy=cfg.strategy, seed=cfg.seed, max_attempts=cfg.max_attempts)
        w = sum(x.sign for x in res.diagram.crossings)
        runs.append((f"{args.family}:{m}", P.n, res.mesh.t))
        checks.append({"m": m, "n": P.n, "t": res.mesh.t, "writhe": w,
                       "t_at_least_lb_writhe": res.mesh.t >= lb_writhe(w)})
        _note(f"{args.family} m={m}: n={P.n} t={res.mesh.t}")
    rep = gamma_report(runs)
    rep["runs"] = checks
    _emit_report(cfg, rep)
    return OK if rep["all_within_upper"] else FINDINGS


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="polygon file ('-' for stdin)")
    common.add_argument("--out", help="mesh or polygon output path")
    common.add_argument("--report", help="JSON report path (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-attempts", type=int, default=200)
    common.add_argument("--strategy", choices=["white", "orientation"], default="white")
    common.add_argument("--precision", type=int, default=6, help="OFF decimal digits")
    common.add_argument("--merge-collinear", action="store_true")
    common.add_argument("--format", choices=["off", "json"])
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="plspan", description="Spanning surfaces for polygonal knots.")
    p.add_argument("--version", action="version", version=f"plspan {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("validate", "check that a polygon is closed and embedded"),
                        ("diagram", "general-position projection and crossings"),
                        ("seifert", "triangulated Seifert surface of a polygon in R^3"),
                        ("triangulate-planar", "n - 2 triangles for a planar polygon"),
                        ("cone", "cone a polygon in R^d, d >= 5"),
                        ("annulus4", "immersed disk with interior missing P (R^4)"),
                        ("embed4", "embedded spanning surface in R^4")]:
        sub.add_parser(name, parents=[common], help=help_)
    g = sub.add_parser("gen", parents=[common], help="generate a polygon")
    g.add_argument("family", choices=["torus", "writhe", "ngon", "random"])
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--box", type=int, default=10)
    b = sub.add_parser("bounds", parents=[common], help="closed-form triangle bounds")
    b.add_argument("--genus", help="knot genus (integer or half-integer)")
    bg = sub.add_parser("bench-gamma", parents=[common], help="t/n^2 table over a family")
    bg.add_argument("--family", choices=["writhe", "torus", "random"], default="writhe")
    bg.add_argument("--m", default="1..4", help="range such as 1..4")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = _config(args)
    handlers = {
        "validate": cmd_validate, "diagram": cmd_diagram, "seifert": cmd_seifert,
        "triangulate-planar": cmd_triangulate_planar, "cone": cmd_cone,
        "annulus4": cmd_annulus4, "embed4": cmd_embed4,
    }
    try:
        if args.command in handlers:
            return handlers[args.command](cfg)
        if args.command == "gen":
            return cmd_gen(cfg, args)
        if args.command == "bounds":
            return cmd_bounds(cfg, args)
        return cmd_bench_gamma(cfg, args)
    except (UsageError, PolygonParseError, UnsupportedDimensionForOFF, ValueError) as exc:
        if isinstance(exc, InvalidPolygon):
            _emit_report(cfg, {"ok": False, "issues": [i.to_json() for i in exc.issues]})
            _note(f"invalid polygon: {exc}")
            return FINDINGS
        _note(f"error: {exc}")
        return USAGE
    except (ExhaustedAttempts, ConstructionFailedValidation) as exc:
        _emit_report(cfg, {"ok": False, "error": str(exc)})
        _note(f"failed: {exc}")
        return FINDINGS


if __name__ == "__main__":
    sys.exit(main())
