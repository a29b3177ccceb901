"""Command-line interface.

    nervetower nerve COVER.json [--kind cech|vietoris]
    nervetower homology COMPLEX.json [--max-degree N]
    nervetower tower TOWER.json
    nervetower steenrod SPACE|TOWER.json [--param k=v ...] [--max-degree N]
    nervetower spaces

Exit codes: 0 success, 2 invalid input, 3 (with --strict) when a result is
inconclusive or truncated.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .formats import (
    FormatError,
    dumps,
    load,
    parse_complex,
    parse_cover,
    parse_group_tower,
    parse_nerve_tower,
)
from .nerve import DEFAULT_DIM_CAP, cech_nerve, vietoris_nerve
from .simplicial import homology
from .steenrod import SPACES, builtin_space, steenrod_report
from .tower import DEFAULT_WINDOW, analyze, direct_limit, DirectedSystem

EXIT_OK, EXIT_INVALID, EXIT_INEXACT = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    dim_cap: int = DEFAULT_DIM_CAP
    window: int = DEFAULT_WINDOW
    modulus: int = 0
    reduced: bool = True
    out: Path | None = None
    strict: bool = False

    def __post_init__(self):
        if self.dim_cap < 1:
            raise ValueError("--dim-cap must be >= 1")
        if self.window < 1:
            raise ValueError("--window must be >= 1")
        if self.modulus == 1 or self.modulus < 0:
            raise ValueError("--mod must be 0 (integers) or >= 2")

    def header(self) -> dict:
        return {"dim_cap": self.dim_cap, "window": self.window, "coefficients": self.modulus,
                "reduced": self.reduced}


def _config(args: argparse.Namespace, reduced_default: bool) -> RunConfig:
    reduced = reduced_default if args.reduced is None else args.reduced
    return RunConfig(args.dim_cap, args.window, args.mod, reduced, args.out, args.strict)


def _emit(obj: Any, cfg: RunConfig) -> None:
    text = dumps(obj)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)


def _max_degree(K, requested: int | None) -> int:
    if requested is not None:
        return requested
    top = K.dimension
    if K.truncated:
        top = min(top, K.dim_cap - 1)
    return max(top, 0)


def cmd_nerve(args: argparse.Namespace) -> int:
    cfg = _config(args, True)
    cover = parse_cover(load(args.cover))
    build = cech_nerve if args.kind == "cech" else vietoris_nerve
    K = build(cover, cfg.dim_cap)
    _emit({"kind": args.kind, "complex": K.to_dict(), "counts": K.counts(),
           "dim_cap": cfg.dim_cap, "truncated": K.truncated}, cfg)
    return EXIT_OK


def cmd_homology(args: argparse.Namespace) -> int:
    cfg = _config(args, False)
    K = parse_complex(load(args.complex), dim_cap=cfg.dim_cap)
    top = _max_degree(K, args.max_degree)
    K.check_degree(top)
    groups = [homology(K, n, cfg.modulus, cfg.reduced) for n in range(top + 1)]
    _emit({**cfg.header(), "groups": [{"n": n, "group": g.to_dict(), "text": str(g)}
                                       for n, g in enumerate(groups)]}, cfg)
    return EXIT_OK


def cmd_tower(args: argparse.Namespace) -> int:
    cfg = _config(args, True)
    t = parse_group_tower(load(args.tower))
    a = analyze(t, cfg.window)
    out = {"window": cfg.window, "analysis": a.to_dict()}
    if args.colim:
        # the bonds read backwards are not a directed system; colimit only of the tail
        if t.tail is None:
            raise ValueError("--colim needs a periodic tail")
        out["colim_of_tail"] = direct_limit(DirectedSystem((t.stages[-1],), (), t.tail), cfg.window).to_dict()
    _emit(out, cfg)
    inexact = a.ml.kind == "inconclusive" or not a.lim.exact
    return EXIT_INEXACT if cfg.strict and inexact else EXIT_OK


def _params(items: Sequence[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValueError(f"--param expects key=value, got {item!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def cmd_steenrod(args: argparse.Namespace) -> int:
    cfg = _config(args, True)
    params = _params(args.param)
    if args.space in SPACES:
        if "dim_cap" in params:
            raise ValueError("use --dim-cap rather than --param dim_cap")
        if "dim_cap" in inspect.signature(SPACES[args.space][0]).parameters:
            params_cap = {**params, "dim_cap": cfg.dim_cap}
        else:
            params_cap = params
        t = builtin_space(args.space, params_cap)
        name = args.space
    else:
        if params:
            raise ValueError("--param applies only to built-in spaces")
        if not Path(args.space).exists():
            raise FormatError(args.space, f"neither a built-in space ({', '.join(sorted(SPACES))}) nor a file")
        t = parse_nerve_tower(load(args.space), cfg.dim_cap)
        name = Path(args.space).name
    report = steenrod_report(t, args.max_degree, cfg.modulus, cfg.reduced, cfg.window, name, params)
    _emit(report.to_dict(), cfg)
    return EXIT_INEXACT if cfg.strict and report.has_inexact else EXIT_OK


def cmd_spaces(args: argparse.Namespace) -> int:
    cfg = _config(args, True)
    _emit({"spaces": [{"name": k, "description": SPACES[k][1]} for k in sorted(SPACES)]}, cfg)
    return EXIT_OK


def _bool_flag(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--reduced", dest="reduced", action="store_true", default=None,
                   help="reduced (co)homology (default for steenrod)")
    g.add_argument("--unreduced", dest="reduced", action="store_false",
                   help="unreduced (co)homology (default for homology)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP, help="maximal simplex dimension kept")
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="stages inspected for truncated towers")
    common.add_argument("--mod", type=int, default=0, help="coefficients Z/m (0 = integers)")
    common.add_argument("--strict", action="store_true", help="exit 3 on inconclusive or truncated results")
    common.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    _bool_flag(common)

    p = argparse.ArgumentParser(prog="nervetower", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nerve", parents=[common], help="nerve of a cover")
    s.add_argument("cover")
    s.add_argument("--kind", choices=("cech", "vietoris"), default="cech")
    s.set_defaults(func=cmd_nerve)

    s = sub.add_parser("homology", parents=[common], help="homology groups of a complex")
    s.add_argument("complex")
    s.add_argument("--max-degree", type=int)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("tower", parents=[common], help="Mittag-Leffler, lim and lim^1 of a group tower")
    s.add_argument("tower")
    s.add_argument("--colim", action="store_true", help="also report the direct limit along the tail")
    s.set_defaults(func=cmd_tower)

    s = sub.add_parser("steenrod", parents=[common], help="Steenrod homology and Čech cohomology report")
    s.add_argument("space", help="built-in space name or nerve/cover tower file")
    s.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--max-degree", type=int)
    s.set_defaults(func=cmd_steenrod)

    s = sub.add_parser("spaces", parents=[common], help="list built-in spaces")
    s.set_defaults(func=cmd_spaces)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ValueError) as exc:
        print(f"nervetower: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
