"""Command line front end.

    stable-norm-lab surface --kind giraffe --lsep 0.1
    stable-norm-lab enum --kind octagon --T 6 --out run/
    stable-norm-lab count --catalog run/catalog.jsonl --T 6
    stable-norm-lab lattice --region square.json --t 10 100
    stable-norm-lab giraffe --lsep 0.1 --T 7

Every flag can also be given in a JSON file passed with ``--config``, using
the flag name without dashes (``{"kind": "giraffe", "T": 7}``); flags on the
command line win.  Exit codes: 0 success, 2 input error, 3 missing input
file, 4 mathematical precondition failure.
"""

import argparse
import json
import math
import os
import sys

from .counting import (
    count_G_Gamma,
    count_minimal,
    default_grid,
    lattice_asymptotic,
    minkowski_upper_check,
    quadratic_fit,
    region_from_json,
)
from .enumeration import enumerate_classes, systole, worker_count
from .errors import ConstructionError, InvalidInputError, LabError
from .formats import (
    atomic_write,
    catalog_from_jsonl,
    catalog_to_jsonl,
    fmt,
    lattice_rows_to_csv,
    series_to_csv,
    surface_spec,
    table_to_jsonl,
)
from .giraffe import run_pipeline
from .stable_norm import build_stable_norm_table, flat_catalog, flat_stable_norm_table, minimality_flags
from .surfaces import FlatTorus, surface_from_spec
from .words import parse_word

EXIT_OK, EXIT_INPUT, EXIT_MISSING, EXIT_MATH = 0, 2, 3, 4

DEFAULTS = {
    "kind": None,
    "u": "1,0",
    "v": "0,1",
    "lsep": 0.1,
    "torus_params": "3,3,3,3",
    "spec": None,
    "T": None,
    "catalog": None,
    "grid": None,
    "window": None,
    "gamma": None,
    "region": None,
    "t": None,
    "rays": 360,
    "tol": 0.15,
    "out": None,
    "threads": None,
    "seed": 0,
}


class MissingArtifact(Exception):
    pass


def _floats(text, n=None, what="value"):
    if isinstance(text, (list, tuple)):
        vals = [float(x) for x in text]
    else:
        try:
            vals = [float(x) for x in str(text).split(",") if x.strip()]
        except ValueError:
            raise InvalidInputError(f"cannot parse {what} {text!r}") from None
    if n is not None and len(vals) != n:
        raise InvalidInputError(f"{what} needs {n} numbers, got {len(vals)}")
    return vals


def _surface(cfg):
    if cfg["spec"]:
        return surface_from_spec(_read_json(cfg["spec"]))
    kind = cfg["kind"]
    if kind is None:
        raise InvalidInputError("give --kind, --spec or --catalog")
    if kind == "flat_torus":
        return FlatTorus(tuple(_floats(cfg["u"], 2, "--u")), tuple(_floats(cfg["v"], 2, "--v")))
    if kind == "giraffe":
        tp = _floats(cfg["torus_params"], 4, "--torus-params")
        return surface_from_spec({"kind": "giraffe", "l_sep": float(cfg["lsep"]), "torus_params": [tp[:2], tp[2:]]})
    return surface_from_spec({"kind": kind})


def _read_text(path):
    if not os.path.exists(path):
        raise MissingArtifact(f"input file {path!r} does not exist")
    with open(path) as fh:
        return fh.read()


def _read_json(path):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _horizon(cfg):
    T = cfg["T"]
    if T is None:
        raise InvalidInputError("a horizon --T is required")
    T = float(T)
    if not (T > 0 and math.isfinite(T)):
        raise InvalidInputError("horizon must be positive")
    return T


def _catalog(cfg):
    """Catalog from --catalog, or a fresh enumeration of the configured surface."""
    if cfg["catalog"]:
        cat = catalog_from_jsonl(_read_text(cfg["catalog"]))
        if cfg["T"] is not None and float(cfg["T"]) < cat.length_bound:
            cat = cat.restrict(float(cfg["T"]))
        return cat
    s = _surface(cfg)
    T = _horizon(cfg)
    if isinstance(s, FlatTorus):
        return flat_catalog(s, T, primitive_only=False)
    return enumerate_classes(s, T, workers=cfg["threads"])


def _table(cat):
    if isinstance(cat.surface, FlatTorus):
        return flat_stable_norm_table(cat.surface, cat.length_bound)
    return build_stable_norm_table(cat, cat.length_bound)


def _emit(cfg, name, text):
    if cfg["out"]:
        atomic_write(os.path.join(cfg["out"], name), text)


def _summary_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, float):
        return float(fmt(x))
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def _round(obj):
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


# --- commands -----------------------------------------------------------------


def cmd_surface(cfg):
    s = _surface(cfg)
    if isinstance(s, FlatTorus):
        out = {"kind": "flat_torus", "genus": 1, "u": list(s.u), "v": list(s.v), "area": s.area}
    else:
        out = {
            "kind": s.kind,
            "genus": s.genus,
            "relation_residual": s.relation_residual,
            "metadata": s.metadata,
            "generators": [[list(map(float, row)) for row in g] for g in s.generators],
        }
    out = _round(out)
    _emit(cfg, "surface.json", _summary_json(out) + "\n")
    return out


def cmd_enum(cfg):
    cat = _catalog(cfg)
    out = {
        "surface": surface_spec(cat.surface),
        "horizon": cat.length_bound,
        "classes": len(cat),
        "complete": bool(cat.complete_flag),
        "method": cat.method,
        "systole": systole(cat) if cat.classes else None,
        "workers": worker_count(cfg["threads"]),
    }
    _emit(cfg, "catalog.jsonl", catalog_to_jsonl(cat))
    return _round(out)


def cmd_stablenorm(cfg):
    cat = _catalog(cfg)
    table = _table(cat)
    rep = minimality_flags(cat, table)
    out = {
        "horizon": table.horizon,
        "stored": len(table.values),
        "genericity_violations": len(table.genericity_violations),
        "minimal": len(rep.minimal()),
        "undecided": sum(1 for v in rep.flags.values() if v == "undecided"),
        "complete": table.complete,
    }
    _emit(cfg, "table.jsonl", table_to_jsonl(table))
    return _round(out)


def cmd_count(cfg):
    cat = _catalog(cfg)
    table = _table(cat)
    T = cat.length_bound
    if cfg["gamma"]:
        G = [cat.lookup(parse_word(w)) for w in str(cfg["gamma"]).split("+")]
        L = T - sum(g.length for g in G)
        grid = _floats(cfg["grid"], what="--grid") if cfg["grid"] else default_grid(L)
        series = count_G_Gamma(table, G, grid, cat)
    else:
        rep = minimality_flags(cat, table)
        grid = _floats(cfg["grid"], what="--grid") if cfg["grid"] else default_grid(T)
        series = count_minimal(rep, cat, grid)
    window = _floats(cfg["window"], 2, "--window") if cfg["window"] else None
    fit = quadratic_fit(series, window)
    out = {"kind": series.kind, "fit": {"c": fit.coefficient, "residual": fit.residual, "window": list(fit.window)}}
    if isinstance(cat.surface, FlatTorus) and series.kind == "N":
        vol = math.pi / cat.surface.area
        out["minkowski"] = {"vol_b1": vol, "pass": minkowski_upper_check(series, vol, 2)}
    if series.kind == "N_Gamma":
        d = series.diagnostics
        out["audit"] = {
            "dedup_projection": d["dedup_projection"],
            "dedup_homology": d["dedup_homology"],
            "genericity_violations": len(d["genericity_violations"]),
        }
    _emit(cfg, "counts.csv", series_to_csv(series))
    return _round(out)


def cmd_lattice(cfg):
    if not cfg["region"]:
        raise InvalidInputError("--region is required")
    region = region_from_json(_read_json(cfg["region"]))
    ts = _floats(cfg["t"], what="--t") if cfg["t"] else [10.0, 100.0, 1000.0]
    ts = [int(t) if float(t).is_integer() else t for t in ts]
    res = lattice_asymptotic(region, ts)
    text = lattice_rows_to_csv(res.samples, res.area)
    _emit(cfg, "lattice.csv", text)
    if not cfg["out"]:
        sys.stdout.write(text)
    return _round({"area": str(res.area), "perimeter": res.perimeter, "final_deviation": res.final_deviation})


def cmd_giraffe(cfg):
    s = _surface(cfg)
    T = _horizon(cfg)
    P = run_pipeline(s, T, n_rays=int(cfg["rays"]), tol=float(cfg["tol"]))
    out = _round(P.to_json())
    _emit(cfg, "giraffe_report.json", _summary_json(out) + "\n")
    return out


COMMANDS = {
    "surface": cmd_surface,
    "enum": cmd_enum,
    "stablenorm": cmd_stablenorm,
    "count": cmd_count,
    "lattice": cmd_lattice,
    "giraffe": cmd_giraffe,
}


def build_parser():
    p = argparse.ArgumentParser(prog="stable-norm-lab", description="Counting homologically minimal geodesics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with default values for any flag")
        sp.add_argument("--out", help="output directory (files are written atomically)")
        sp.add_argument("--threads", type=int, help="worker count (env STABLE_NORM_LAB_THREADS also works)")
        sp.add_argument("--seed", type=int)

    def surface_flags(sp):
        sp.add_argument("--kind", choices=["flat_torus", "octagon", "giraffe"])
        sp.add_argument("--spec", help="surface JSON file")
        sp.add_argument("--u", help="flat torus period, e.g. 1,0")
        sp.add_argument("--v", help="flat torus period, e.g. 0,1")
        sp.add_argument("--lsep", type=float, help="giraffe separating length")
        sp.add_argument("--torus-params", dest="torus_params", help="traces of a1,b1,a2,b2 as 4 numbers")

    sp = sub.add_parser("surface", help="build a surface and print a summary")
    common(sp)
    surface_flags(sp)

    for name, hlp in (("enum", "enumerate closed geodesics"), ("stablenorm", "restricted stable norm table")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        surface_flags(sp)
        sp.add_argument("--T", type=float, help="length horizon")
        sp.add_argument("--catalog", help="existing catalog.jsonl")

    sp = sub.add_parser("count", help="N(T) or N_Gamma(L) series with a quadratic fit")
    common(sp)
    surface_flags(sp)
    sp.add_argument("--T", type=float)
    sp.add_argument("--catalog")
    sp.add_argument("--grid", help="comma separated T values")
    sp.add_argument("--window", help="fit window as Tmin,Tmax")
    sp.add_argument("--gamma", help="word of a component of Gamma (join several with +)")

    sp = sub.add_parser("lattice", help="lattice points in dilates of a polygon")
    common(sp)
    sp.add_argument("--region", help="JSON polygon file")
    sp.add_argument("--t", nargs="+", help="dilation factors")

    sp = sub.add_parser("giraffe", help="neck certificates, plane areas and the growth check")
    common(sp)
    surface_flags(sp)
    sp.add_argument("--T", type=float)
    sp.add_argument("--rays", type=int, help="integration rays per plane")
    sp.add_argument("--tol", type=float, help="relative tolerance of the growth check")
    return p


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        data = _read_json(args.config)
        if not isinstance(data, dict):
            raise InvalidInputError("config file must hold a JSON object")
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for k, v in vars(args).items():
        if k in cfg and v is not None:
            cfg[k] = v
    if cfg["threads"] is not None:
        os.environ["STABLE_NORM_LAB_THREADS"] = str(int(cfg["threads"]))
    for k in ("tol", "rays"):
        if cfg[k] is not None and not float(cfg[k]) > 0:
            raise InvalidInputError(f"{k} must be positive")
    if cfg["kind"] is None and args.command == "giraffe" and not cfg["spec"]:
        cfg["kind"] = "giraffe"
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        out = COMMANDS[args.command](cfg)
    except MissingArtifact as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (InvalidInputError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LabError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130
    if args.command != "lattice" or cfg["out"]:
        print(_summary_json(out))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
