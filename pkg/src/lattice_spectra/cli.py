"""Command line experiment runner.

Every subcommand produces a JSON report; commands that compute a counting
function also produce a CSV of ``(E, N(E))`` rows. ``--out x.csv`` writes
the CSV and a sibling ``x.json``; ``--out x.json`` writes only the report;
without ``--out`` the report goes to standard output. ``--figure x.png``
renders a static figure of the result.

Exit codes: 0 success, 1 computation failed, 2 bad usage (including
parameter values rejected by the library). Errors are
reported as a JSON object on standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__

SUBCOMMANDS = ("gen", "ids", "kagome", "perc", "ucp", "curvature", "qgraph")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# value parsing


def parse_grid(text: str) -> np.ndarray:
    """``"min:max:step"`` to an inclusive float grid."""
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must be min:max:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise UsageError(f"empty grid {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def parse_fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_fraction_list(text: str) -> list:
    return [parse_fraction(x) for x in str(text).split(",") if x.strip()]


def parse_float_list(text: str) -> list:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a list of numbers: {text!r}") from None


def load_config(path: str) -> dict:
    """JSON object or ``key = value`` lines (``#`` starts a comment)."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        cfg = json.loads(text)
        if not isinstance(cfg, dict):
            raise UsageError("config JSON must be an object")
        return {k.replace("-", "_"): v for k, v in cfg.items()}
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


# ---------------------------------------------------------------------------
# serialization


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def atomic_write(path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def config_record(args) -> dict:
    skip = {"func", "config", "out", "figure"}
    return {k: to_jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


# ---------------------------------------------------------------------------
# subcommands; each returns (report, csv_rows or None, figure callback or None)


def _cmd_gen(args):
    from .lattices import kagome_patch, patch_graph, tessellation_patch

    g = patch_graph(args.kind, args.L, args.d)
    report = {"kind": args.kind, "L": args.L, "vertices": g.n, "edges": g.edge_count,
              "graph": g.to_json()}
    if args.kind == "kagome":
        patch = kagome_patch(args.L)
        report["hexagons"] = len(patch.hexagons)
        report["interior_hexagons"] = len(patch.interior_hexagons())
    elif args.kind != "zd":
        t = tessellation_patch(args.kind, args.L)
        report["faces"] = len(t.faces)
        report["interior_vertices"] = len(t.interior_vertices())

    def figure(path):
        from .plotting import graph_figure

        graph_figure(g, path, title=f"{args.kind} L={args.L}")

    return report, None, (figure if g.coords is not None else None)


def _cmd_ids(args):
    from .lattices import patch_graph
    from .operators import OperatorSpec, build_operator, operator_counting, validate_step_rows

    g = patch_graph(args.kind, args.L, args.d)
    m = build_operator(g, OperatorSpec(args.operator))
    exact = parse_fraction_list(args.exact_energies) if args.exact_energies else []
    n = operator_counting(m, g.n, exact_energies=exact, method=args.method)
    grid = parse_grid(args.grid)
    rows = n.csv_rows(grid)
    validate_step_rows(rows)
    report = {
        "kind": args.kind,
        "operator": args.operator,
        "vertices": g.n,
        "normalization": n.normalization,
        "exact_multiplicities": {str(e): v for e, v in n.exact_multiplicities.items()},
        "jumps_exact": {str(e): Fraction(v) / n.normalization for e, v in n.exact_multiplicities.items()},
        "min_eigenvalue": float(n.eigenvalues.min()),
        "max_eigenvalue": float(n.eigenvalues.max()),
    }
    return report, rows, _step_figure(rows, f"{args.operator} on {args.kind} L={args.L}")


def _step_figure(rows, title, jumps=()):
    def figure(path):
        from .plotting import step_figure

        step_figure(rows, path, title=title, jumps=jumps)

    return figure


def _cmd_kagome(args):
    from .kagome import kagome_counting, kagome_report
    from .operators import validate_step_rows

    report = kagome_report(args.L, args.boundary)
    rows = kagome_counting(args.L, args.boundary).csv_rows(parse_grid(args.grid))
    validate_step_rows(rows)
    return report, rows, _step_figure(rows, f"Kagome L={args.L}", jumps=[1.5])


def _cmd_perc(args):
    from .percolation import (PRNG_NAME, empirical_ids, randomized_potential_spectra,
                              sample_sites, trial_seed)
    from .operators import validate_step_rows

    if not 0 <= args.p <= 1:
        raise UsageError("p must lie in [0, 1]")
    if args.trials < 1:
        raise UsageError("need at least one trial")
    grid = parse_grid(args.grid)
    energies = parse_float_list(args.energies)
    res = empirical_ids(args.L, args.p, args.trials, args.seed, grid, energies, d=args.d,
                        jobs=args.jobs)
    rows = list(zip(grid.tolist(), res.mean.tolist()))
    validate_step_rows(rows)
    report = {
        "prng": PRNG_NAME,
        "trial_seeds": "seed XOR trial",
        "normalization": f"L^{args.d}",
        "mean_active_fraction": float(res.active_fraction.mean()),
        "jumps": [{"energy": e, "mean": m, "std": s, "stderr": se}
                  for e, m, s, se in zip(energies, res.jump_mean.tolist(), res.jump_std.tolist(),
                                         res.jump_stderr.tolist())],
    }
    if args.potential == "uniform":
        coincidences, max_mult = [], 0
        for t in range(args.trials):
            sample = sample_sites(args.L, args.d, args.p, trial_seed(args.seed, t))
            ps = randomized_potential_spectra(sample, trial_seed(args.seed + 1, t))
            coincidences.append(ps.cross_cluster_coincidences(1e-9))
            max_mult = max(max_mult, ps.max_cluster_multiplicity(1e-9))
        report["potential"] = {"distribution": "uniform[0,1]", "cross_cluster_coincidences": coincidences,
                               "max_cluster_multiplicity": max_mult}
    return report, rows, _step_figure(rows, f"site percolation L={args.L} p={args.p}", jumps=energies)


def _parse_geometry(text):
    from .continuation import box, cylinder

    kind, _, rest = text.partition(":")
    try:
        if kind == "cylinder":
            w, h = (int(x) for x in rest.lower().split("x"))
            return cylinder(w, h)
        if kind == "box":
            parts = [int(x) for x in rest.split(":")]
            if len(parts) == 1:
                return box(2, parts[0])
            return box(parts[0], parts[1])
    except ValueError as exc:
        raise UsageError(f"bad geometry {text!r}: {exc}") from None
    raise UsageError(f"geometry must be cylinder:WxH or box:L or box:d:L, got {text!r}")


def _parse_zero(geom, text):
    from .continuation import half_space, quadrant_cover, slab
    from .graph import VertexSet

    kind, _, rest = text.partition(":")
    try:
        if kind == "none":
            return VertexSet(geom.graph.n)
        if kind == "slab":
            a, b = (int(x) for x in rest.split(":"))
            return slab(geom, a, b)
        if kind in ("half", "quadrant"):
            nu_text, _, alpha = rest.partition(":")
            nu = parse_fraction_list(nu_text)
            alpha = parse_fraction(alpha or "0")
            if kind == "half":
                return half_space(geom, nu, alpha, center=geom.kind == "box")
            return quadrant_cover(geom, nu, alpha)
    except ValueError as exc:
        raise UsageError(f"bad zero set {text!r}: {exc}") from None
    raise UsageError(f"zero set must be none, slab:a:b, half:n1,n2:alpha or quadrant:n1,n2:alpha, got {text!r}")


def _parse_potential(text, n):
    if text == "zero":
        return None
    kind, _, seed = text.partition(":")
    if kind == "random":
        from .percolation import philox

        rng = philox(int(seed or 0))
        return tuple(Fraction(int(k), 7) for k in rng.integers(-7, 8, size=n))
    raise UsageError(f"potential must be zero or random:SEED, got {text!r}")


def _cmd_ucp(args):
    from .continuation import boundary_determination_bound, continuation_dimension, problem
    from .graph import VertexSet

    if args.task == "bound":
        geom = _parse_geometry(args.geometry)
        if geom.kind != "box":
            raise UsageError("the boundary bound needs a box geometry")
        V = _parse_potential(args.potential, geom.graph.n)
        return boundary_determination_bound(geom.dims[1], V, d=geom.dims[0]), None, None
    geom = _parse_geometry(args.geometry)
    zero = _parse_zero(geom, args.zero)
    if args.remove:
        index = {tuple(s): v for v, s in enumerate(geom.graph.labels)}
        drop = []
        for item in args.remove:
            site = tuple(int(x) for x in item.split(","))
            if site not in index:
                raise UsageError(f"site {site} not in the geometry")
            drop.append(index[site])
        zero = zero - VertexSet(geom.graph.n, drop)
    V = _parse_potential(args.potential, geom.graph.n)
    p = problem(geom, zero, V, parse_fraction(args.energy))
    sol = continuation_dimension(p)
    report = {"geometry": geom.describe(), "zero_sites": len(zero), "equation_sites": len(p.equation_set),
              "energy": p.energy}
    report.update(sol.to_json(with_basis=args.basis))
    return report, None, None


def _cmd_curvature(args):
    from .curvature import curvature_vs_support_scan
    from .lattices import tessellation_patch

    t = tessellation_patch(args.kind, args.L)
    energies = None if args.scan_energies == "default" else parse_fraction_list(args.scan_energies)
    report = curvature_vs_support_scan(t, energies)

    def figure(path):
        from .curvature import nonpositive_corner_curvature
        from .plotting import graph_figure

        _, pos = nonpositive_corner_curvature(t)
        graph_figure(t.graph, path, title=f"{args.kind} L={args.L}: positive corners",
                     highlight={c.v for c, _ in pos})

    return report, None, figure


def _cmd_qgraph(args):
    from .operators import validate_step_rows
    from .qgraph import c3_cross_validation, metric_kagome_ids

    ids = metric_kagome_ids(args.L, args.emax, dirichlet_boundary=args.dirichlet_boundary)
    grid = np.linspace(0.0, args.emax, args.points)
    rows = ids.csv_rows(grid)
    validate_step_rows(rows)
    report = {
        "L": args.L,
        "volume": ids.volume,
        "jumps": [{"energy": j["energy"], "size_num": j["size"].numerator, "size_den": j["size"].denominator,
                   "origin": j["origin"]} for j in ids.jumps],
        "metadata": ids.metadata,
        "c3_cross_validation": c3_cross_validation()["passed"],
    }
    return report, rows, _step_figure(rows, f"metric Kagome L={args.L}",
                                      jumps=[j["energy"] for j in ids.jumps])


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="output path (.csv writes CSV plus sibling .json; .json writes the report)")
    common.add_argument("--figure", help="write a PNG figure to this path")
    common.add_argument("--config", help="JSON or key = value config file; flags override it")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for randomized parts")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent units")

    parser = _Parser(prog="lattice-spectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    kinds = ("zd", "square", "triangular", "hexagonal", "kagome")

    p = sub.add_parser("gen", parents=[common], help="generate a lattice patch")
    p.add_argument("--kind", choices=kinds, default="zd")
    p.add_argument("--L", type=int, default=5)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("ids", parents=[common], help="counting function of an operator on a patch")
    p.add_argument("--kind", choices=kinds, default="zd")
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--operator", default="combinatorial_laplacian",
                   choices=("adjacency", "combinatorial_laplacian", "normalized_laplacian", "schrodinger"))
    p.add_argument("--grid", default="-1:9:0.05")
    p.add_argument("--exact-energies", default="", help="comma separated rationals")
    p.add_argument("--method", default="householder-ql", choices=("householder-ql", "lapack"))
    p.set_defaults(func=_cmd_ids)

    p = sub.add_parser("kagome", parents=[common], help="Kagome counting function and 3/2 jump")
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--boundary", choices=("simple", "dirichlet_delete"), default="simple")
    p.add_argument("--grid", default="0:2:0.01")
    p.set_defaults(func=_cmd_kagome)

    p = sub.add_parser("perc", parents=[common], help="Monte Carlo site percolation IDS")
    p.add_argument("--L", type=int, default=60)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--p", type=float, default=0.6)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--grid", default="-4:4:0.05")
    p.add_argument("--energies", default="0,1,-1", help="comma separated energies for jump estimates")
    p.add_argument("--potential", choices=("none", "uniform"), default="none")
    p.set_defaults(func=_cmd_perc)

    p = sub.add_parser("ucp", parents=[common], help="unique continuation solution spaces")
    p.add_argument("--task", choices=("dimension", "bound"), default="dimension")
    p.add_argument("--geometry", default="cylinder:8x6", help="cylinder:WxH, box:L or box:d:L")
    p.add_argument("--zero", default="slab:0:2", help="none, slab:a:b, half:n1,n2:alpha, quadrant:n1,n2:alpha")
    p.add_argument("--remove", action="append", default=[], help="site x,y removed from the zero set")
    p.add_argument("--energy", default="0")
    p.add_argument("--potential", default="zero", help="zero or random:SEED")
    p.add_argument("--basis", action="store_true", help="include the exact basis in the report")
    p.set_defaults(func=_cmd_ucp)

    p = sub.add_parser("curvature", parents=[common], help="corner curvature and finite support scan")
    p.add_argument("--kind", choices=kinds[1:], default="kagome")
    p.add_argument("--L", type=int, default=5)
    p.add_argument("--scan-energies", default="default", help="default or comma separated rationals")
    p.set_defaults(func=_cmd_curvature)

    p = sub.add_parser("qgraph", parents=[common], help="metric Kagome IDS")
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--emax", type=float, default=60.0)
    p.add_argument("--points", type=int, default=601)
    p.add_argument("--dirichlet-boundary", action="store_true")
    p.set_defaults(func=_cmd_qgraph)

    parser._subcommands = sub.choices
    return parser


def parse(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = load_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad config JSON: {exc}") from None
        subparser = parser._subcommands[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        flags = {a.dest for a in subparser._actions if isinstance(a, argparse._StoreTrueAction)}
        for key in flags & set(cfg):
            if isinstance(cfg[key], str):
                cfg[key] = cfg[key].strip().lower() in ("1", "true", "yes", "on")
        subparser.set_defaults(**cfg)
        args = parser.parse_args(argv)
    if args.seed < 0 or args.seed >= 1 << 64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    if args.jobs < 1:
        raise UsageError("jobs must be positive")
    return args


def run(args) -> int:
    report, rows, figure = args.func(args)
    doc = {"command": args.command, "version": __version__, "config": config_record(args),
           "result": to_jsonable(report)}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        if out.suffix == ".csv":
            if rows is None:
                raise UsageError(f"{args.command} produces no CSV; use a .json output path")
            atomic_write(out, csv_text(("E", "N"), rows))
            atomic_write(out.with_suffix(".json"), text)
        else:
            atomic_write(out, text)
    else:
        sys.stdout.write(text)
    if args.figure:
        if figure is None:
            raise UsageError(f"{args.command} has no figure for this input")
        figure(args.figure)
    return 0


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse(argv)
        return run(args)
    except UsageError as exc:
        return _fail(2, "usage", str(exc))
    except ValueError as exc:  # invalid parameter values rejected by the library
        return _fail(2, "invalid_value", str(exc))
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001 - reported as machine-readable error
        return _fail(1, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
