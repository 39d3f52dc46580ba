"""Command-line entry point.

Every subcommand writes JSON lines (one record per grid point).  With
``--out DIR`` the run is persisted as

    DIR/config.json     the parsed configuration, enough to replay the run
    DIR/records.jsonl   one JSON object per record
    DIR/summary.json    version, record count and the measured-constant ledger

plus CSV/PNG series where a grid was scanned.  ``replay DIR`` re-runs a
stored configuration and compares the exact fields record by record.
"""

import argparse
import csv
import json
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .errors import ConfigError, ConjApproxError
from .intervals import DEFAULT_BITS, interval_from_json, parse_point, parse_points

SUBCOMMANDS = ("form", "minima", "approx", "gelfond", "diag", "replay")
GLOBAL_DESTS = {"precision_bits", "out", "seed", "json"}


# -- configuration ------------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    precision_bits: int = DEFAULT_BITS
    seed: int = 0
    out: str = None

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, data):
        allowed = {"subcommand", "options", "precision_bits", "seed", "out"}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError("unknown configuration keys: %s" % ", ".join(sorted(unknown)))
        cfg = cls(**data)
        if cfg.subcommand not in SUBCOMMANDS:
            raise ConfigError("unknown subcommand %r" % cfg.subcommand)
        parser = build_parser()
        sub = _subparser(parser, cfg.subcommand)
        known = {a.dest for a in sub._actions if a.dest != "help"} - GLOBAL_DESTS
        extra = set(cfg.options) - known
        if extra:
            raise ConfigError("unknown options for %s: %s" % (cfg.subcommand, ", ".join(sorted(extra))))
        return cfg


def _rational(text):
    """Parse "p/q", decimals, "1e4" or "10^4"."""
    s = str(text).strip().replace("**", "^")
    try:
        if "^" in s:
            base, exp = s.split("^")
            return Fraction(base) ** int(exp)
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("not a rational number: %r" % (text,)) from exc


def _grid(text):
    """start:factor:count -> list of rationals."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError("grid must look like start:factor:count, got %r" % text)
    start, factor = _rational(parts[0]), _rational(parts[1])
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError("grid count must be an integer") from exc
    if count < 1 or start <= 0 or factor <= 0:
        raise ConfigError("grid needs positive start and factor and count >= 1")
    return [start * factor ** k for k in range(count)]


def _ints(text):
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError("expected comma-separated integers, got %r" % text) from exc


def build_parser():
    def global_flags(parser, defaults):
        kw = (lambda v: {"default": v}) if defaults else (lambda v: {"default": argparse.SUPPRESS})
        parser.add_argument("--precision-bits", type=int, **kw(DEFAULT_BITS))
        parser.add_argument("--out", help="run directory to persist records", **kw(None))
        parser.add_argument("--seed", type=int, **kw(0))
        parser.add_argument("--json", action="store_true",
                            help="print JSON lines instead of a summary", **kw(False))

    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, defaults=False)
    p = argparse.ArgumentParser(prog="conjapprox",
                                description="Geometry-of-numbers experiments on conjugate approximation.")
    global_flags(p, defaults=True)
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    add = sub.add_parser
    sub.add_parser = lambda name, **kw: add(name, parents=[common], **kw)

    f = sub.add_parser("form", help="invariant bilinear form of a progression")
    f.add_argument("--case", choices=("add", "mult"), required=True)
    f.add_argument("--gamma", required=True)
    f.add_argument("--n", type=int, required=True)

    m = sub.add_parser("minima", help="successive minima of a body")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--points", required=True)
    m.add_argument("--mult", default=None)
    m.add_argument("--X", required=True)
    m.add_argument("--Y", required=True)
    m.add_argument("--body", choices=("C", "Cbar", "Cphi"), default="C")
    m.add_argument("--continuation", default=None)
    m.add_argument("--method", choices=("exhaustive", "reduced"), default="exhaustive")

    a = sub.add_parser("approx", help="irreducible approximants with certified root clusters")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--t", type=int, required=True)
    a.add_argument("--points", required=True)
    a.add_argument("--case", choices=("thm1", "thm2"), default="thm1")
    a.add_argument("--D", type=int, default=1)
    a.add_argument("--X-grid", dest="X_grid", required=True)
    a.add_argument("--prime", type=int, default=2)

    g = sub.add_parser("gelfond", help="small-value polynomial search on a progression")
    g.add_argument("--case", choices=("add", "mult"), required=True)
    g.add_argument("--gamma", required=True)
    g.add_argument("--seed-point", dest="seed_point", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--exponent", default="dirichlet",
                   help="dirichlet, theorem or value:q")
    g.add_argument("--delta", default="1/10")
    g.add_argument("--Y-grid", dest="Y_grid", required=True)
    g.add_argument("--method", choices=("auto", "exhaustive", "reduced"), default="auto")

    d = sub.add_parser("diag", help="Hankel diagnostics of a dual witness")
    d.add_argument("--input", default=None, help="JSON file or JSON-lines run records")
    d.add_argument("--y", default=None, help="comma-separated witness coordinates")
    d.add_argument("--points", default=None)
    d.add_argument("--X", default=None)
    d.add_argument("--Y", default=None)
    d.add_argument("--k", type=int, default=None)
    d.add_argument("--u", type=int, default=None)
    d.add_argument("--aux-case", dest="aux_case", choices=("derivative", "composition"),
                   default="derivative")
    d.add_argument("--A", default=None, help="slope,intercept of the degree-one map")

    r = sub.add_parser("replay", help="re-run a stored configuration and compare")
    r.add_argument("run_dir")
    return p


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise ConfigError("no subcommands")


def config_from_args(ns):
    opts = {k: v for k, v in vars(ns).items() if k not in GLOBAL_DESTS | {"subcommand"}}
    return RunConfig(ns.subcommand, opts, ns.precision_bits, ns.seed, ns.out)


# -- subcommand bodies -----------------------------------------------------------

def _run_form(o, cfg):
    from .invariant_form import ProgressionCase, build_form, gram_determinant

    gamma = _rational(o["gamma"])
    if gamma == 0:
        raise ConfigError("gamma must be nonzero (gamma != 0 is required)")
    case = ProgressionCase("additive" if o["case"] == "add" else "multiplicative", gamma)
    F = build_form(o["n"], case)
    rec = F.to_json()
    rec["gram_determinant"] = str(gram_determinant(F))
    return [rec], []


def _run_minima(o, cfg):
    from .bodies import (BodySpec, body_volume, dual_minima, minkowski_product,
                         successive_minima, volume_bounds)

    pts = parse_points(o["points"])
    mult = _ints(o["mult"]) if o.get("mult") else [1] * len(pts)
    cont = parse_points(o["continuation"]) if o.get("continuation") else []
    X, Y = _rational(o["X"]), _rational(o["Y"])
    body = o.get("body", "C")
    spec = BodySpec(o["n"], pts, mult, X, Y, which="C" if body == "Cphi" else body,
                    continuation=cont, bits=cfg.precision_bits)
    if body == "Cphi":
        rep = dual_minima(spec, method=o["method"])
    else:
        rep = successive_minima(spec, o["method"])
    rec = {"body": body, "n": o["n"], "X": str(X), "Y": str(Y),
           "method": o["method"], "minima": rep.to_json()}
    consts = []
    if body != "Cphi":
        vol, how = body_volume(spec, seed=cfg.seed)
        rec["volume"] = vol.to_json()
        rec["volume_method"] = how
        prod = minkowski_product(rep, volume_bounds(spec) if how == "exact" else vol)
        rec["minkowski_product_hi"] = str(prod)
        consts.append({"key": "minkowski_product", "params": {"n": o["n"], "X": str(X), "Y": str(Y)},
                       "value": str(prod)})
    return [rec], consts


def _run_approx(o, cfg):
    from .approximator import approximate_conjugates, exponent_ledger

    pts = parse_points(o["points"])
    ledger = exponent_ledger(o["n"], o["t"], pts, D=o["D"], case=o["case"])
    records, consts = [], []
    for X in _grid(o["X_grid"]):
        res = approximate_conjugates(ledger, X, prime=o["prime"], bits=cfg.precision_bits)
        rec = res.to_json()
        rec["ledger"] = ledger.to_json()
        records.append(rec)
        params = {"X": str(X), "n": ledger.n, "t": ledger.t}
        consts.append({"key": "height_over_lambda_X", "params": params,
                       "value": str(Fraction(res.height) / (res.lambda_hi * X))})
        consts.append({"key": "member_scale_over_lambda", "params": params,
                       "value": str(Fraction(res.certificates["member_scale"]) / res.lambda_hi)})
        consts.append({"key": "distance_times_XY", "params": params,
                       "value": str(max(d.upper for d in res.distances) * res.X * res.Y)})
    return records, consts


def _exponent(text, n, t):
    from .gelfond import dirichlet_exponent, theorem_exponent

    if text == "dirichlet":
        return dirichlet_exponent(n, t), True
    if text == "theorem":
        return theorem_exponent(n, t), False
    if str(text).startswith("value:"):
        return _rational(text[6:]), False
    raise ConfigError("exponent must be dirichlet, theorem or value:q")


def _run_gelfond(o, cfg):
    from .gelfond import ProgressionPoints, criterion_search
    from .invariant_form import ProgressionCase

    gamma = _rational(o["gamma"])
    if gamma == 0:
        raise ConfigError("gamma must be nonzero (gamma != 0 is required)")
    case = ProgressionCase("additive" if o["case"] == "add" else "multiplicative", gamma)
    prog = ProgressionPoints(case, parse_point(o["seed_point"]), o["n"] + 1)
    e, scaled = _exponent(o["exponent"], o["n"], o["t"])
    if scaled:
        e = e * (1 - _rational(o["delta"]))
    records, consts = [], []
    for Y in _grid(o["Y_grid"]):
        r = criterion_search(prog, o["n"], o["t"], Y, e, method=o["method"],
                             bits=cfg.precision_bits)
        rec = r.to_json()
        rec["progression"] = prog.to_json()
        records.append(rec)
        consts.append({"key": "first_minimum_hi", "params": {"Y": str(Y), "exponent": str(e)},
                       "value": str(r.lambda1.upper)})
    return records, consts


def _load_records(path):
    with open(path) as fh:
        text = fh.read().strip()
    if not text:
        raise ConfigError("input file %s is empty" % path)
    try:
        data = json.loads(text)
        return data if isinstance(data, list) else [data]
    except json.JSONDecodeError:
        return [json.loads(line) for line in text.splitlines() if line.strip()]


def _run_diag(o, cfg):
    from .hankel import diagnose

    A = tuple(_rational(x) for x in o["A"].split(",")) if o.get("A") else None
    jobs = []
    if o.get("y"):
        y = [_rational(c) for c in o["y"].split(",")]
        pts = parse_points(o["points"]) if o.get("points") else []
        jobs.append((y, pts, _rational(o.get("X") or 1), _rational(o.get("Y") or 1)))
    elif o.get("input"):
        for rec in _load_records(o["input"]):
            jobs.extend(_jobs_from_record(rec, cfg))
    else:
        raise ConfigError("diag needs --y or --input")
    if not jobs:
        print("warning: no certified dual witness in the input records", file=sys.stderr)
    records = []
    for y, pts, X, Y in jobs:
        n = len(y) - 1
        k = o.get("k") or max(1, min(len(pts) or 1, n // 2))
        rep = diagnose(y, pts, X, Y, k, o.get("u"), n, o.get("aux_case", "derivative"), A)
        rep["y"] = [str(c) for c in y]
        records.append(rep)
    return records, []


def _jobs_from_record(rec, cfg):
    """Dual witnesses for a stored witness or approximation record."""
    from .bodies import BodySpec
    from .hankel import dual_witnesses

    if "y" in rec:
        pts = [parse_point(p) for p in rec.get("points", [])]
        return [([Fraction(c) for c in rec["y"]], pts, Fraction(rec.get("X", "1")),
                 Fraction(rec.get("Y", "1")))]
    if "P" in rec and "ledger" in rec:
        led = rec["ledger"]
        pts = [parse_point(p) for p, _ in led["points"]]
        mult = [k for _, k in led["points"]]
        spec = BodySpec(led["n"], pts, mult, Fraction(rec["X"]), Fraction(rec["Y"]),
                        bits=cfg.precision_bits)
        found, _ = dual_witnesses(spec)
        return [(w.y, pts, spec.X, spec.Y) for w in found]
    raise ConfigError("record has neither a witness y nor an approximation result")


RUNNERS = {"form": _run_form, "minima": _run_minima, "approx": _run_approx,
           "gelfond": _run_gelfond, "diag": _run_diag}


def run(cfg):
    """Execute a configuration; returns (records, constants)."""
    if cfg.subcommand not in RUNNERS:
        raise ConfigError("subcommand %s cannot be run from a configuration" % cfg.subcommand)
    return RUNNERS[cfg.subcommand](cfg.options, cfg)


# -- persistence ------------------------------------------------------------------

def persist(cfg, records, consts):
    os.makedirs(cfg.out, exist_ok=True)
    for c in consts:
        c["approx"] = "%.6g" % float(Fraction(c["value"]))
    with open(os.path.join(cfg.out, "config.json"), "w") as fh:
        json.dump(cfg.to_json(), fh, indent=2, sort_keys=True)
    with open(os.path.join(cfg.out, "records.jsonl"), "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    with open(os.path.join(cfg.out, "summary.json"), "w") as fh:
        json.dump({"version": __version__, "subcommand": cfg.subcommand,
                   "records": len(records), "constants": consts}, fh, indent=2, sort_keys=True)
    emit_plots(cfg, records)


def emit_plots(cfg, records):
    """CSV (and PNG when there are at least two points) for grid runs."""
    if cfg.subcommand == "approx":
        rows = [{"X": r["X"], "Y": r["Y"], "height": r["height"],
                 "distance_hi": str(max(Fraction(d["hi"]) for d in r["distances"])),
                 "exponent_lo": r["measured_exponent"]["lo"]} for r in records]
        name, xkey, ykey, ylabel = "approx_series", "X", "exponent_lo", "measured exponent"
    elif cfg.subcommand == "gelfond":
        rows = [{"Y": r["Y"], "exponent": r["exponent"], "certainty": r["certainty"],
                 "found": int(r["certainty"] == "certified-found"),
                 "lambda1_hi": r.get("lambda1", {}).get("hi", "")} for r in records]
        name, xkey, ykey, ylabel = "gelfond_frontier", "Y", "found", "found"
    else:
        return []
    if not rows:
        warnings.warn("empty series, nothing to plot")
        return []
    paths = [os.path.join(cfg.out, name + ".csv")]
    with open(paths[0], "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    if len(rows) < 2:
        warnings.warn("single-point series: CSV written, plot skipped")
        return paths
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [float(Fraction(r[xkey])) for r in rows]
    ys = [float(Fraction(r[ykey])) if not isinstance(r[ykey], int) else r[ykey] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if cfg.subcommand == "gelfond":
        ax.step(xs, ys, where="post")
        ax.set_yticks([0, 1])
    else:
        ax.plot(xs, ys, marker="o")
    ax.set_xscale("log")
    ax.set_xlabel(xkey)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    png = os.path.join(cfg.out, name + ".png")
    fig.savefig(png, dpi=120)
    plt.close(fig)
    paths.append(png)
    return paths


def exact_fields(obj):
    """Drop interval enclosures (dicts with lo/hi/bits), keep everything exact."""
    if isinstance(obj, dict):
        if set(obj) == {"lo", "hi", "bits"}:
            return None
        return {k: exact_fields(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [exact_fields(v) for v in obj]
    return obj


def _intervals_consistent(a, b):
    """Every pair of matching enclosures overlaps."""
    if isinstance(a, dict) and isinstance(b, dict):
        if set(a) == {"lo", "hi", "bits"} == set(b):
            ia, ib = interval_from_json(a), interval_from_json(b)
            return ia.overlaps(ib)
        return all(_intervals_consistent(a[k], b[k]) for k in a if k in b)
    if isinstance(a, list) and isinstance(b, list):
        return all(_intervals_consistent(x, y) for x, y in zip(a, b))
    return True


def replay(run_dir):
    with open(os.path.join(run_dir, "config.json")) as fh:
        cfg = RunConfig.from_json(json.load(fh))
    with open(os.path.join(run_dir, "records.jsonl")) as fh:
        stored = [json.loads(line) for line in fh if line.strip()]
    cfg.out = None
    fresh, _ = run(cfg)
    fresh = json.loads(json.dumps(fresh, sort_keys=True))
    mismatches = []
    if len(fresh) != len(stored):
        mismatches.append({"record": None, "reason": "record count %d vs %d"
                           % (len(fresh), len(stored))})
    for i, (a, b) in enumerate(zip(stored, fresh)):
        if exact_fields(a) != exact_fields(b):
            mismatches.append({"record": i, "reason": "exact fields differ"})
        elif not _intervals_consistent(a, b):
            mismatches.append({"record": i, "reason": "enclosures disagree"})
    return {"run_dir": run_dir, "records": len(stored), "identical": not mismatches,
            "mismatches": mismatches}


# -- main ------------------------------------------------------------------------

def _summary_line(cfg, rec):
    s = cfg.subcommand
    if s == "form":
        return "a = (%s)" % ", ".join(rec["a"])
    if s == "minima":
        return "lambda = " + ", ".join("[%.6g, %.6g]" % (float(Fraction(m["lo"])), float(Fraction(m["hi"])))
                                       for m in rec["minima"])
    if s == "approx":
        return "X=%s  H=%s  exponent>=%s  P=%s" % (
            rec["X"], rec["height"], rec["measured_exponent"]["lo"][:10], " ".join(rec["P"]))
    if s == "gelfond":
        return "Y=%s  e=%s  %s" % (rec["Y"], rec["exponent"], rec["certainty"])
    if s == "diag":
        rd = rec.get("rank_drop", {})
        return "ranks=%s  h=%s" % (rec["ranks"], rd.get("h"))
    return json.dumps(rec)


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.subcommand == "replay":
            report = replay(ns.run_dir)
            print(json.dumps(report, sort_keys=True))
            return 0 if report["identical"] else 1
        cfg = config_from_args(ns)
        records, consts = run(cfg)
        if cfg.out:
            persist(cfg, records, consts)
        for rec in records:
            print(json.dumps(rec, sort_keys=True) if ns.json else _summary_line(cfg, rec))
        return 0
    except ConjApproxError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
