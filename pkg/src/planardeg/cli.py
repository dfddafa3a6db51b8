"""Command-line surface: distribution tables, constants, density sweeps and
the validation suite.

Subcommands
-----------
distribution   d_k table for a family/connectivity level with tail model
constants      named analytic constants with provenance labels
density        cumulative degree curves over an edge-density grid (CSV)
validate       machine-readable validation verdicts (JSON lines)

Output is deterministic for a fixed configuration; analytic constants are
cached in a human-diffable text file keyed by (family, name, precision).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import mpmath
from mpmath import mp

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

FAMILIES = ("outerplanar", "series_parallel", "planar")
LEVELS = ("connected", "2conn", "3conn")


# ---------------------------------------------------------------------------
# constants cache
# ---------------------------------------------------------------------------

class ConstantsCache:
    """Text cache: one line per constant: family name precision value."""

    def __init__(self, path):
        self.path = path
        self.data = {}
        if path and os.path.exists(path):
            with open(path) as fh:
                for line in fh:
                    parts = line.split()
                    if len(parts) == 4:
                        fam, name, prec, val = parts
                        self.data[(fam, name, int(prec))] = val

    def get(self, family, name, precision):
        return self.data.get((family, name, precision))

    def put(self, family, name, precision, value):
        self.data[(family, name, precision)] = value

    def save(self):
        if not self.path:
            return
        os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
        with open(self.path, "w") as fh:
            for (fam, name, prec), val in sorted(self.data.items()):
                fh.write(f"{fam} {name} {prec} {val}\n")


def cache_path(args):
    if getattr(args, "cache", None):
        return args.cache
    return os.environ.get("PLANARDEG_CACHE", "")


# ---------------------------------------------------------------------------
# constants assembly
# ---------------------------------------------------------------------------

def gather_constants(digits, families=None):
    """[(family, name, value, provenance)] for the constants report."""
    from . import outerplanar, seriesparallel, planar
    out = []
    families = families or FAMILIES
    with mp.workdps(2 * digits + 10):
        if "outerplanar" in families:
            c = outerplanar.constants_outer(digits)
            s2 = mpmath.sqrt(2)
            out += [
                ("outerplanar", "tau", c.tau.value, "solver"),
                ("outerplanar", "rho", c.rho.value, "solver"),
                ("outerplanar", "radiusB", c.radiusB.value, "closed-form (3-2*sqrt2)"),
                ("outerplanar", "q", c.q.value, "closed-form 2D(tau)-tau"),
                ("outerplanar", "q_2conn", s2 - 1, "closed-form sqrt2-1"),
                ("outerplanar", "c1", c.c1.value, "fitted"),
                ("outerplanar", "c2", c.c2.value, "fitted"),
            ]
        if "series_parallel" in families:
            c = seriesparallel.constants_sp(digits)
            out += [
                ("series_parallel", "R", c.R1.value, "solver"),
                ("series_parallel", "tau", c.tau.value, "solver"),
                ("series_parallel", "rho", c.rho.value, "solver"),
                ("series_parallel", "E0", c.E0.value, "solver"),
                ("series_parallel", "q_conn", c.q_conn.value, "closed-form 1/w1"),
                ("series_parallel", "q_2conn", c.q_2conn.value, "closed-form 1/w0"),
                ("series_parallel", "c_conn", c.c_conn.value, "fitted"),
                ("series_parallel", "c_2conn", c.c_2conn.value, "fitted"),
                ("series_parallel", "kappa", c.kappa.value, "solver"),
            ]
        if "planar" in families:
            c = planar.constants_planar(digits)
            s7 = mpmath.sqrt(7)
            out += [
                ("planar", "r1", c.r1.value, "closed-form (7*sqrt7-17)/32"),
                ("planar", "u0", c.u0.value, "closed-form (sqrt7-1)/3"),
                ("planar", "t0", c.t0.value, "solver"),
                ("planar", "R", c.R1.value, "solver"),
                ("planar", "E0", c.E0.value, "solver"),
                ("planar", "rho", c.rho.value, "solver"),
                ("planar", "q_conn", c.q1.value, "closed-form 1/w3"),
                ("planar", "q_2conn", c.q2.value, "closed-form 1/w3"),
                ("planar", "q_3conn", s7 - 2, "closed-form sqrt7-2"),
                ("planar", "alpha_3conn", c.alpha3.value, "closed-form (sqrt7+7)/2"),
                ("planar", "kappa", c.kappa.value, "solver"),
                ("planar", "c_conn", c.c1.value, "fitted"),
                ("planar", "c_2conn", c.c2.value, "fitted"),
                ("planar", "c_3conn_edge", c.c3.value, "fitted"),
            ]
    return out


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

def compute_distribution(family, level, kmax, digits):
    from . import outerplanar, seriesparallel, planar
    if family == "outerplanar":
        if level == "connected":
            return outerplanar.pgf_outer_conn(kmax, digits=digits)
        if level == "2conn":
            return outerplanar.pgf_outer_2conn(kmax)
        raise SystemExit2(f"no {level} distribution for outerplanar")
    if family == "series_parallel":
        if level == "connected":
            return seriesparallel.pgf_sp_conn(kmax, digits=digits)
        if level == "2conn":
            return seriesparallel.pgf_sp_2conn(kmax, digits=digits)
        raise SystemExit2(f"no {level} distribution for series_parallel")
    if family == "planar":
        if level == "connected":
            return planar.pgf_planar_conn(kmax, digits=digits)
        if level == "2conn":
            return planar.pgf_planar_2conn(kmax, digits=digits)
        if level == "3conn":
            return planar.pgf_planar_3conn(kmax, digits=digits)[1]
        raise SystemExit2(f"no {level} distribution for planar")
    raise SystemExit2(f"unknown family {family}")


class SystemExit2(Exception):
    pass


def _nstr(v, digits):
    return mpmath.nstr(v, max(digits, 4), strip_zeros=False)


def emit_rows(rows, header, fmt, out):
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for r in rows:
            out.write(",".join(str(c) for c in r) + "\n")
    elif fmt == "jsonl":
        for r in rows:
            out.write(json.dumps(dict(zip(header, [str(c) for c in r]))) + "\n")
    else:
        widths = [max(len(str(h)), max((len(str(r[i])) for r in rows), default=0))
                  for i, h in enumerate(header)]
        out.write("  ".join(h.ljust(widths[i]) for i, h in enumerate(h_ for h_ in header)) + "\n")
        for r in rows:
            out.write("  ".join(str(c).ljust(widths[i]) for i, c in enumerate(r)) + "\n")


def cmd_distribution(args):
    digits = args.digits
    with mp.workdps(2 * digits + 10):
        dist = compute_distribution(args.family, args.level, args.kmax, digits)
        pd = max(digits // 2, 8)
        rows = []
        cum = mp.mpf(0)
        for k in range(0, args.kmax + 1):
            cum += dist.dk[k]
            rows.append((args.family, args.level, "", k,
                         _nstr(dist.dk[k], pd), _nstr(cum, pd)))
        tail = dist.tail
        total = dist.total()
        emit_rows(rows, ["family", "level", "mu", "k", "dk", "cum"],
                  args.format, sys.stdout)
        if args.format == "table":
            if tail is not None:
                if tail.kind == "outer_subexp":
                    sys.stdout.write(
                        f"tail: {_nstr(tail.c, 8)} * k^(1/4) "
                        f"* exp({_nstr(tail.c2, 8)} sqrt(k)) * q^k, q = {_nstr(tail.q, 8)}\n")
                elif tail.kind == "linear_geometric":
                    sys.stdout.write(
                        f"tail: {_nstr(tail.c, 8)} * (k-1) * q^k, q = {_nstr(tail.q, 8)}\n")
                else:
                    sys.stdout.write(
                        f"tail: {_nstr(tail.c, 8)} * k^({_nstr(tail.a, 4)}) "
                        f"* q^k, q = {_nstr(tail.q, 8)}\n")
            sys.stdout.write(f"checksum sum d_k (tail completed) = {_nstr(total, 10)}\n")
    return EXIT_OK


CONSTANT_NAMES = {
    "outerplanar": [("tau", "solver"), ("rho", "solver"),
                    ("radiusB", "closed-form (3-2*sqrt2)"),
                    ("q", "closed-form 2D(tau)-tau"),
                    ("q_2conn", "closed-form sqrt2-1"),
                    ("c1", "fitted"), ("c2", "fitted")],
    "series_parallel": [("R", "solver"), ("tau", "solver"), ("rho", "solver"),
                        ("E0", "solver"), ("q_conn", "closed-form 1/w1"),
                        ("q_2conn", "closed-form 1/w0"), ("c_conn", "fitted"),
                        ("c_2conn", "fitted"), ("kappa", "solver")],
    "planar": [("r1", "closed-form (7*sqrt7-17)/32"),
               ("u0", "closed-form (sqrt7-1)/3"), ("t0", "solver"),
               ("R", "solver"), ("E0", "solver"), ("rho", "solver"),
               ("q_conn", "closed-form 1/w3"), ("q_2conn", "closed-form 1/w3"),
               ("q_3conn", "closed-form sqrt7-2"),
               ("alpha_3conn", "closed-form (sqrt7+7)/2"), ("kappa", "solver"),
               ("c_conn", "fitted"), ("c_2conn", "fitted"),
               ("c_3conn_edge", "fitted")],
}


def cmd_constants(args):
    digits = args.digits
    cache = ConstantsCache(cache_path(args))
    fams = [args.family] if args.family else list(FAMILIES)
    rows = []
    missing = [f for f in fams
               if any(cache.get(f, n, digits) is None for n, _ in CONSTANT_NAMES[f])]
    if missing:
        for fam, name, val, prov in gather_constants(digits, missing):
            cache.put(fam, name, digits, mpmath.nstr(val, digits))
        cache.save()
    for fam in fams:
        for name, prov in CONSTANT_NAMES[fam]:
            rows.append((fam, name, cache.get(fam, name, digits), prov))
    emit_rows(rows, ["family", "constant", "value", "provenance"],
              args.format, sys.stdout)
    return EXIT_OK


def cmd_density(args):
    from . import planar
    digits = args.digits
    fam_level = args.level
    markers = {"connected": None, "2conn": None, "3conn": None}
    with mp.workdps(2 * digits + 10):
        cons = planar.constants_planar(digits)
        markers["connected"] = cons.kappa.value
        markers["2conn"] = -planar._log_deriv(
            lambda y: planar.R_of_y(y, digits=min(digits, 14)), mp.mpf(1))
        markers["3conn"] = (7 + mpmath.sqrt(7)) / 4
        if args.mu is not None:
            grid = [mp.mpf(args.mu)]
        else:
            lo, hi, n = args.mu_grid
            grid = [mp.mpf(lo) + (mp.mpf(hi) - mp.mpf(lo)) * i / (n - 1)
                    for i in range(n)]
        pd = max(digits // 2, 8)
        rows = []
        for mu in grid:
            try:
                dist = planar.density_pgf(fam_level, mu, args.kmax, digits=digits)
            except planar.SaddleOutOfRange as exc:
                rows.append((("planar", fam_level, _nstr(mu, 8), "", "SADDLE_OUT_OF_RANGE",
                              str(exc))))
                continue
            cum = mp.mpf(0)
            for k in range(args.kmax + 1):
                cum += dist.dk[k]
                rows.append(("planar", fam_level, _nstr(mu, 8), k,
                             _nstr(dist.dk[k], pd), _nstr(cum, pd)))
        emit_rows(rows, ["family", "level", "mu", "k", "dk", "cum"],
                  args.format, sys.stdout)
        if args.format == "table":
            sys.stdout.write(
                f"mean-density marker for {fam_level}: {_nstr(markers[fam_level], 8)}\n")
    return EXIT_OK


def cmd_validate(args):
    from .validate import run_validation
    results = run_validation(only=args.only, n=args.n, digits=args.digits,
                             kmax=args.kmax, perturb=args.perturb)
    failures = 0
    for rec in results:
        sys.stdout.write(json.dumps(rec) + "\n")
        if rec["status"] == "FAIL":
            failures += 1
    sys.stdout.write(json.dumps({
        "check": "summary", "status": "FAIL" if failures else "PASS",
        "detail": f"{failures} failures of {len(results)} checks"}) + "\n")
    return EXIT_VALIDATION if failures else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="planardeg",
        description="Degree distributions of random planar-type graph families")
    p.add_argument("--digits", type=int, default=30,
                   help="display precision in decimal digits (30..200)")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("distribution", help="d_k table for a family")
    d.add_argument("--family", choices=FAMILIES, required=True)
    d.add_argument("--level", choices=LEVELS, default="connected")
    d.add_argument("--kmax", type=int, default=10)
    d.add_argument("--format", choices=("table", "csv", "jsonl"), default="table")
    d.set_defaults(func=cmd_distribution)

    c = sub.add_parser("constants", help="named analytic constants")
    c.add_argument("--family", choices=FAMILIES)
    c.add_argument("--cache", help="constants cache file path")
    c.add_argument("--format", choices=("table", "csv", "jsonl"), default="table")
    c.set_defaults(func=cmd_constants)

    e = sub.add_parser("density", help="edge-density conditioned distributions")
    e.add_argument("--level", choices=LEVELS, default="connected")
    e.add_argument("--mu", type=float)
    e.add_argument("--mu-grid", type=_grid_spec, default=(1.6, 2.8, 7),
                   help="lo:hi:steps")
    e.add_argument("--kmax", type=int, default=10)
    e.add_argument("--format", choices=("table", "csv", "jsonl"), default="csv")
    e.set_defaults(func=cmd_density)

    v = sub.add_parser("validate", help="run the validation suite")
    v.add_argument("--only", help="restrict to checks whose name starts with this")
    v.add_argument("--n", type=int, default=6, help="exact-enumeration size")
    v.add_argument("--kmax", type=int, default=64)
    v.add_argument("--perturb", help="NAME=DELTA fault injection for harness tests")
    v.set_defaults(func=cmd_validate)
    return p


def _grid_spec(text):
    lo, hi, n = text.split(":")
    return (float(lo), float(hi), int(n))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if not 30 <= args.digits <= 200:
        sys.stderr.write("digits must lie in [30, 200]\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except SystemExit2 as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
