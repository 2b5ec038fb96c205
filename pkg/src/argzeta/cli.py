"""Command-line front end.

Subcommands::

    argzeta find-zeros --from 10 --to 1000 --out zeros.ztab
    argzeta verify-ef [--t 50,100] [--L 1,2] [--delta 1] [--sign plus]
    argzeta scan {theorem1,theorem2,gaps,s-extrema,multiplicity} ...

Options can also come from an INI-style file given with ``--config``
(sections ``[paths]``, ``[grids]``, ``[run]``, ``[tolerances]``; see the
README for the keys). Command-line flags override file values.

Exit codes: 0 success, 2 precondition violation, 3 property or budget
violation, 4 I/O or parse error.
"""
from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import bounds, explicit_formula as ef
from ._csvio import format_summary, write_rows
from .errors import (
    ArgzetaError,
    CapacityError,
    CoverageError,
    DomainError,
    FormulaViolationError,
    PropertyViolationError,
    UnresolvedIntervalError,
    ZeroTableParseError,
)
from .selberg import SelbergParams
from .zeros import (
    MAGIC,
    MAX_HEIGHT,
    ZeroTable,
    find_zeros,
    import_zeros,
    load_table,
    save_table,
    write_csv_mirror,
)

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_VIOLATION = 3
EXIT_IO = 4

DEFAULT_T = (50.0, 100.0, 500.0, 1000.0, 5000.0)
DEFAULT_L = (1.0, 2.0, 5.0)
DEFAULT_DELTA = (1.0, 1.25, 1.5)
# zeros beyond t + L kept for the explicit formula (keeps the tail budget small)
EF_MARGIN = 1000.0


@dataclass
class RunConfig:
    zero_cache_path: str | None = None
    reference_table_path: str | None = None
    reference_skip: int = 0
    grids: dict = field(default_factory=lambda: {
        "t": list(DEFAULT_T), "L": list(DEFAULT_L), "delta": list(DEFAULT_DELTA), "h": [],
    })
    output_dir: str = "."
    worker_count: int = 1
    tolerances: dict = field(default_factory=dict)

    def validate(self, strict=False):
        if self.worker_count < 1:
            raise DomainError("worker_count must be >= 1")
        if strict:
            for key in ("t", "L", "delta"):
                if not self.grids.get(key):
                    raise DomainError(f"grid {key!r} is empty")
            t_min = min(self.grids["t"])
            for d in self.grids["delta"]:
                if d < 1.0:
                    raise DomainError(f"delta = {d} < 1")
            for L in self.grids["L"]:
                if L > 2.0 * math.sqrt(t_min):
                    raise DomainError(f"L = {L} > 2 sqrt(min t) = {2 * math.sqrt(t_min)}")


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).replace(" ", "").split(",") if x]


def load_config(path):
    """Read a RunConfig from an INI-style file."""
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    cfg = RunConfig()
    if cp.has_section("paths"):
        sec = cp["paths"]
        cfg.zero_cache_path = sec.get("zero_cache", cfg.zero_cache_path)
        cfg.reference_table_path = sec.get("reference_table", cfg.reference_table_path)
        cfg.reference_skip = sec.getint("reference_skip", cfg.reference_skip)
        cfg.output_dir = sec.get("output_dir", cfg.output_dir)
    if cp.has_section("grids"):
        for key in ("t", "L", "delta", "h"):
            if key in cp["grids"]:
                cfg.grids[key] = _floats(cp["grids"][key])
    if cp.has_section("run"):
        cfg.worker_count = cp["run"].getint("workers", cfg.worker_count)
    if cp.has_section("tolerances"):
        cfg.tolerances = {k: float(v) for k, v in cp["tolerances"].items()}
    return cfg


def _apply_flags(cfg, args):
    cfg = replace(cfg, grids=dict(cfg.grids), tolerances=dict(cfg.tolerances))
    for attr, key in (("zeros", "zero_cache_path"), ("reference", "reference_table_path"),
                      ("output_dir", "output_dir")):
        val = getattr(args, attr, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "skip", None) is not None:
        cfg.reference_skip = args.skip
    if getattr(args, "workers", None) is not None:
        cfg.worker_count = args.workers
    for key in ("t", "L", "delta", "h"):
        val = getattr(args, "grid_" + key, None)
        if val is not None:
            cfg.grids[key] = _floats(val)
    return cfg


# ------------------------------------------------------------------ zero tables


def read_any_table(path, skip=0):
    """Load a ZTAB1 cache or a plain-text ordinate list."""
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return load_table(path)
    return import_zeros(path, skip=skip)


def _reference(cfg):
    if cfg.reference_table_path:
        return read_any_table(cfg.reference_table_path, cfg.reference_skip)
    return None


def _log(msg):
    print(msg, file=sys.stderr)


def obtain_table(cfg, t_needed, log=_log):
    """A verified table covering (0, t_needed], from cache when possible."""
    path = cfg.zero_cache_path
    if path and os.path.exists(path):
        tab = read_any_table(path, cfg.reference_skip)
        if tab.t_max >= t_needed and tab.covers_from_zero:
            return tab
        log(f"cache {path} ends at {tab.t_max}; recomputing to {t_needed}")
    hi = min(float(t_needed), MAX_HEIGHT)
    if hi < t_needed:
        raise CoverageError(f"need zeros up to {t_needed}, beyond the supported {MAX_HEIGHT}")
    tab = find_zeros(10.0, hi, reference=_reference(cfg), workers=cfg.worker_count)
    if path:
        save_table(tab, path)
    return tab


# ------------------------------------------------------------------ commands


def cmd_find_zeros(args, cfg):
    tab = find_zeros(args.lo, args.hi, reference=_reference(cfg), workers=cfg.worker_count)
    out = args.out or cfg.zero_cache_path or "zeros.ztab"
    save_table(tab, out)
    csv_path = args.csv or (str(out) + ".csv")
    write_csv_mirror(tab, csv_path)
    print(f"zeros = {len(tab)}")
    print(f"verified = {int(tab.verified)}")
    print(f"cache = {out}")
    if tab.close_pairs:
        print(f"close_pairs = {len(tab.close_pairs)}")
    return EXIT_OK


def _ef_row(job):
    table, t, p, m = job
    return ef.verify_formula(table, t, p, m, check=False)


def _delete_zero(tab, gamma):
    g = tab.ordinates
    i = int(np.argmin(np.abs(g - gamma))) if g.size else -1
    if i < 0 or abs(g[i] - gamma) > 1e-6:
        raise DomainError(f"no stored ordinate within 1e-6 of {gamma}")
    return ZeroTable(np.delete(g, i), tab.t_min, tab.t_max, source=tab.source,
                     verified=False, count_offset=tab.count_offset)


def cmd_verify_ef(args, cfg):
    cfg.validate(strict=True)
    ts, Ls, ds = cfg.grids["t"], cfg.grids["L"], cfg.grids["delta"]
    signs = ("plus", "minus") if args.sign == "both" else (args.sign,)
    jobs_p = [(t, SelbergParams(L, d, s)) for t in ts for L in Ls for d in ds for s in signs]
    need = max(t + p.L for t, p in jobs_p) + cfg.tolerances.get("coverage_margin", EF_MARGIN)
    tab = obtain_table(cfg, need)
    if args.delete_zero is not None:
        tab = _delete_zero(tab, args.delete_zero)
    m = ef.von_mangoldt_sieve(max(ef.prime_cutoff(p) for _, p in jobs_p) + 1)
    jobs = [(tab, t, p, m) for t, p in jobs_p]
    if cfg.worker_count > 1:
        with ProcessPoolExecutor(cfg.worker_count) as pool:
            reports = list(pool.map(_ef_row, jobs))
    else:
        reports = [_ef_row(j) for j in jobs]
    out = Path(args.out or Path(cfg.output_dir) / "explicit_formula.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    ef.write_reports_csv(reports, out)
    bad = [r for r in reports if not r.ok]
    worst = max(abs(r.residual) / r.budget for r in reports)
    print(format_summary({
        "rows": len(reports),
        "violations": len(bad),
        "max_budget": max(r.budget for r in reports),
        "max_residual_over_budget": worst,
        "csv": str(out),
    }), end="")
    for r in bad:
        print(f"violation: t={r.t} {r.params} residual={r.residual:.6e} budget={r.budget:.6e}",
              file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


_PLOTS = {
    "theorem1": ("t", "ratio"),
    "theorem2": ("t", "h_found"),
    "gaps": ("gamma", "ratio"),
    "s-extrema": ("block_hi", "max_ratio_to_theorem2"),
    "multiplicity": ("gamma", "ratio"),
}


def plot_script(kind, csv_name):
    x, y = _PLOTS[kind]
    stem = os.path.splitext(csv_name)[0]
    return (
        f"# plots {csv_name}; run from the directory holding the CSV\n"
        "import csv\n"
        "import matplotlib.pyplot as plt\n\n"
        f"with open({csv_name!r}) as fh:\n"
        "    rows = list(csv.DictReader(fh))\n"
        f"x = [float(r[{x!r}]) for r in rows]\n"
        f"y = [float(r[{y!r}]) for r in rows]\n"
        "fig, ax = plt.subplots()\n"
        "ax.plot(x, y, '.', markersize=2)\n"
        "ax.set_xscale('log')\n"
        f"ax.set_xlabel({x!r})\n"
        f"ax.set_ylabel({y!r})\n"
        f"ax.set_title({kind!r})\n"
        f"fig.savefig({stem + '.png'!r}, dpi=150)\n"
    )


def _emit(cfg, kind, header, rows, summary):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = kind.replace("-", "_")
    csv_path = out / f"{name}.csv"
    write_rows(csv_path, header, rows)
    (out / f"{name}_plot.py").write_text(plot_script(kind, csv_path.name))
    text = format_summary(summary)
    (out / f"{name}_summary.txt").write_text(text)
    print(text, end="")


def _scan_theorem1(args, cfg):
    if args.t is not None:
        ts = _floats(args.t)
    else:
        ts = np.geomspace(args.lo, args.hi, args.points).tolist()
    hs = cfg.grids.get("h") or [1.0]
    for t in ts:
        for h in hs:
            if h > math.sqrt(t):
                raise DomainError(f"h = {h} exceeds sqrt(t) = {math.sqrt(t)} at t = {t}")
    tab = obtain_table(cfg, max(ts) + max(hs))
    stats = bounds.theorem1_scan(tab, ts, hs)
    recon = all(s.reconstruction_ok for s in stats)
    k = max(range(len(stats)), key=lambda i: stats[i].ratio)
    summary = {"windows": len(stats), "max_ratio": stats[k].ratio, "max_ratio_t": stats[k].t,
               "max_ratio_h": stats[k].h, "reconstruction_ok": recon}
    _emit(cfg, "theorem1", bounds.WindowStat.CSV_HEADER, (s.row() for s in stats), summary)
    return EXIT_OK if recon else EXIT_VIOLATION


def _scan_theorem2(args, cfg):
    if args.t is not None:
        ts = _floats(args.t)
    else:
        rng = np.random.default_rng(args.seed)
        ts = np.sort(rng.uniform(args.lo, args.hi, args.points)).tolist()
    tab = obtain_table(cfg, max(t + math.log(t) ** 2 for t in ts))
    recs = [bounds.theorem2_deduce(tab, t, step_fraction=args.step_fraction) for t in ts]
    ok = all(r.s_bound_check for r in recs)
    summary = {"points": len(recs), "max_h_found": max(r.h_found for r in recs),
               "max_h_found_lower": max(r.h_found_lower for r in recs), "reconstruction_ok": ok}
    _emit(cfg, "theorem2", bounds.Theorem2Record.CSV_HEADER, (r.row() for r in recs), summary)
    return EXIT_OK if ok else EXIT_VIOLATION


def _scan_gaps(args, cfg):
    tab = obtain_table(cfg, args.hi)
    gs = bounds.gap_scan(tab, args.lo, args.hi)
    _emit(cfg, "gaps", bounds.GapStat.CSV_HEADER, gs.rows(), gs.summary())
    return EXIT_OK


def _scan_s_extrema(args, cfg):
    tab = obtain_table(cfg, args.hi)
    edges = np.geomspace(args.lo, args.hi, args.blocks + 1)
    rows = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        ex = bounds.s_extrema_scan(tab, float(lo), float(hi))
        rows.append((float(lo), float(hi), ex.sup_s, ex.argmax, ex.inf_s, ex.argmin,
                     ex.max_ratio_to_theorem2))
    total = bounds.s_extrema_scan(tab, args.lo, args.hi)
    header = ("block_lo", "block_hi", "sup_s", "argmax", "inf_s", "argmin",
              "max_ratio_to_theorem2")
    _emit(cfg, "s-extrema", header, rows, total.summary())
    return EXIT_OK


def _scan_multiplicity(args, cfg):
    tab = obtain_table(cfg, args.hi + 1.0)
    sub = tab.ordinates
    g, h, bound, ratio = bounds.multiplicity_scan(tab, h=args.window_h)
    sel = (sub >= args.lo) & (sub <= args.hi)
    g, h, bound, ratio = g[sel], h[sel], bound[sel], ratio[sel]
    summary = {"zeros": int(g.size), "max_bound": int(bound.max(initial=0)),
               "zeros_with_bound_gt_1": int(np.count_nonzero(bound > 1)),
               "max_ratio": float(ratio.max(initial=0.0))}
    rows = zip(g.tolist(), h.tolist(), bound.tolist(), ratio.tolist())
    _emit(cfg, "multiplicity", ("gamma", "h", "bound", "ratio"), rows, summary)
    return EXIT_OK


_SCANS = {
    "theorem1": _scan_theorem1,
    "theorem2": _scan_theorem2,
    "gaps": _scan_gaps,
    "s-extrema": _scan_s_extrema,
    "multiplicity": _scan_multiplicity,
}


def cmd_scan(args, cfg):
    cfg.validate()
    if args.lo is not None and args.hi is not None and not args.lo < args.hi:
        raise DomainError("--from must be below --to")
    return _SCANS[args.kind](args, cfg)


# ------------------------------------------------------------------ parser


def build_parser():
    ap = argparse.ArgumentParser(prog="argzeta", description=__doc__.split("\n")[0])
    ap.add_argument("--config", help="INI-style configuration file")
    ap.add_argument("--zeros", help="zero table (ZTAB1 cache or text); also the cache path")
    ap.add_argument("--reference", help="reference zero table for count verification")
    ap.add_argument("--skip", type=int, help="header lines in a text reference table")
    ap.add_argument("--workers", type=int, help="worker processes")
    ap.add_argument("--output-dir", dest="output_dir", help="directory for CSV output")
    sub = ap.add_subparsers(dest="command", required=True)

    fz = sub.add_parser("find-zeros", help="compute and cache zero ordinates")
    fz.add_argument("--from", dest="lo", type=float, required=True)
    fz.add_argument("--to", dest="hi", type=float, required=True)
    fz.add_argument("--out", help="ZTAB1 output path")
    fz.add_argument("--csv", help="CSV mirror path (default: <out>.csv)")

    ve = sub.add_parser("verify-ef", help="check the explicit formula over a grid")
    ve.add_argument("--t", dest="grid_t")
    ve.add_argument("--L", dest="grid_L")
    ve.add_argument("--delta", dest="grid_delta")
    ve.add_argument("--sign", choices=("plus", "minus", "both"), default="both")
    ve.add_argument("--delete-zero", dest="delete_zero", type=float,
                    help="drop the stored ordinate nearest this value (fault injection)")
    ve.add_argument("--out", help="CSV output path")

    sc = sub.add_parser("scan", help="run a report scan")
    sc.add_argument("kind", choices=sorted(_SCANS))
    sc.add_argument("--from", dest="lo", type=float, default=10.0)
    sc.add_argument("--to", dest="hi", type=float, default=1e4)
    sc.add_argument("--t", help="explicit comma-separated t values")
    sc.add_argument("--h", dest="grid_h", help="window lengths for theorem1")
    sc.add_argument("--points", type=int, default=200)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--blocks", type=int, default=50)
    sc.add_argument("--step-fraction", dest="step_fraction", type=float, default=0.125,
                    help="theorem2 grid step as a fraction of the mean gap")
    sc.add_argument("--window-h", dest="window_h", type=float,
                    help="fixed multiplicity window instead of 1/(log gamma)^2")
    return ap


_COMMANDS = {"find-zeros": cmd_find_zeros, "verify-ef": cmd_verify_ef, "scan": cmd_scan}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = _apply_flags(cfg, args)
        return _COMMANDS[args.command](args, cfg)
    except ZeroTableParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except UnresolvedIntervalError as exc:
        lo, hi = exc.interval
        print(f"error: unresolved interval ({lo!r}, {hi!r})", file=sys.stderr)
        return EXIT_VIOLATION
    except (FormulaViolationError, PropertyViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (DomainError, CoverageError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArgzetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
