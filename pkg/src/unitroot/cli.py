"""Command-line front end.

Subcommands: ``dseries``, ``lfunction``, ``slopes``, ``poles`` and
``check {identity,continuity,independence,fieldgen}``.  Every command builds
a list of flat records (dicts sharing a ``record`` field naming their kind)
and renders them as JSON lines, aligned text tables or CSV.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .analysis import (
    check_continuity,
    check_identity,
    field_generation_report,
    generated_field_degree,
    independence_check,
    independence_suite,
    pole_certificate,
)
from .cache import ClassNumberCache, default_cache_path
from .errors import ConfigError, InvariantError, PrecisionError
from .padic import PadicScalar
from .series import NewtonPolygon, PadicSeries, newton_polygon
from .trace import ROUTES, build_D, build_L, validate_parameters

log = logging.getLogger("unitroot")

EXIT_OK, EXIT_CONFIG, EXIT_PRECISION, EXIT_INVARIANT = 0, 1, 2, 3


@dataclass
class JobConfig:
    p: int
    N: int
    k: int
    m_max: int
    precision: int
    route: str = "both"
    format: str = "json"
    cache: Optional[str] = None
    threads: Optional[int] = None

    def validate(self) -> None:
        validate_parameters(self.p, self.N)
        if self.m_max < 1:
            raise ConfigError("--m-max must be positive")
        if self.precision < 1:
            raise ConfigError("--precision must be positive")
        if self.route not in ROUTES:
            raise ConfigError(f"--route must be one of {ROUTES}")
        if self.format not in ("json", "table", "csv"):
            raise ConfigError("--format must be json, table or csv")


# records ---------------------------------------------------------------------

def scalar_fields(x: PadicScalar) -> dict:
    v, u, prec = x.triple()
    return {"valuation": v, "unit": u, "precision": prec}


def _params(cfg: JobConfig, **extra) -> dict:
    return {"p": cfg.p, "N": cfg.N, "k": cfg.k, "m_max": cfg.m_max, "precision": cfg.precision, **extra}


def series_records(kind: str, f: PadicSeries) -> list[dict]:
    return [{"record": kind, "index": i, **scalar_fields(c)} for i, c in enumerate(f.coeffs)]


def polygon_records(np_: NewtonPolygon, series: str) -> list[dict]:
    out = []
    for i, (s, n) in enumerate(np_.segments):
        out.append({
            "record": "segment", "series": series, "slope": str(s), "length": n,
            "start": np_.vertices[i][0], "certified": np_.segment_certified(i),
        })
    return out


def cmd_dseries(cfg: JobConfig) -> tuple[list[dict], int]:
    D = build_D(cfg.p, cfg.N, cfg.k, cfg.m_max, cfg.precision, workers=cfg.threads)
    recs = [{"record": "dseries", **_params(cfg), "integral": D.is_integral()}]
    recs += series_records("coefficient", D)
    recs += polygon_records(newton_polygon(D), "D(k,T)")
    return recs, EXIT_OK


def cmd_lfunction(cfg: JobConfig) -> tuple[list[dict], int]:
    res = build_L(cfg.p, cfg.N, cfg.k, cfg.m_max, cfg.precision, cfg.route, workers=cfg.threads)
    recs = [{
        "record": "lfunction", **_params(cfg), "route": cfg.route,
        "agreement": res.agreement, "min_precision": res.min_precision,
        "integral": res.series.is_integral(),
    }]
    recs += series_records("coefficient", res.series)
    recs += polygon_records(res.polygon, "L(T)")
    return recs, EXIT_OK


def cmd_slopes(cfg: JobConfig) -> tuple[list[dict], int]:
    D = build_D(cfg.p, cfg.N, cfg.k, cfg.m_max, cfg.precision, workers=cfg.threads)
    np_ = newton_polygon(D)
    recs = [{"record": "slopes", **_params(cfg)}]
    recs += [
        {"record": "slope", "slope": str(s), "multiplicity": n, "certified": np_.segment_certified(i)}
        for i, (s, n) in enumerate(np_.segments)
    ]
    return recs, EXIT_OK


def cmd_poles(cfg: JobConfig) -> tuple[list[dict], int]:
    cert = pole_certificate(cfg.p, cfg.N, cfg.k, cfg.m_max, cfg.precision, workers=cfg.threads)
    recs = [{
        "record": "poles", **_params(cfg),
        "circle_valuation": cert.circle_valuation,
        "certified_poles": cert.certified_poles,
        "ordinary_multiplicity": cert.ordinary_multiplicity,
        "numerator_slope_one": cert.numerator_slope_one,
        "lower_bound_only": cert.lower_bound_only,
        "L_integral": cert.L_integral,
        "summary": f"{cert.certified_poles} certified poles on |T|=p",
    }]
    recs += [
        {"record": "zero_circle", "valuation": v, "multiplicity": n, "certified": ok}
        for v, n, ok in cert.denominator_zero_circles
    ]
    recs += polygon_records(cert.denominator_polygon, "D(k,T)")
    recs += polygon_records(cert.numerator_polygon, "D(k+2,T)")
    status = EXIT_OK if cert.L_integral else EXIT_INVARIANT
    return recs, status


def cmd_identity(cfg: JobConfig) -> tuple[list[dict], int]:
    rep = check_identity(cfg.p, cfg.N, cfg.k, cfg.m_max, cfg.precision, workers=cfg.threads)
    recs = [{
        "record": "identity", **_params(cfg), "agree": rep.agree,
        "first_mismatch": rep.first_mismatch, "min_precision": rep.min_precision,
    }]
    for i, (a, b) in enumerate(zip(rep.exponential.coeffs, rep.quotient.coeffs)):
        ea, eb = scalar_fields(a), scalar_fields(b)
        recs.append({
            "record": "coefficient", "index": i, "agree": a.agrees_with(b),
            "exp_valuation": ea["valuation"], "exp_unit": ea["unit"], "exp_precision": ea["precision"],
            "quot_valuation": eb["valuation"], "quot_unit": eb["unit"], "quot_precision": eb["precision"],
        })
    return recs, EXIT_OK if rep.agree else EXIT_INVARIANT


def cmd_continuity(cfg: JobConfig, s: int) -> tuple[list[dict], int]:
    rep = check_continuity(cfg.p, cfg.N, cfg.k, s, cfg.m_max, cfg.precision, workers=cfg.threads)
    recs = [{
        "record": "continuity", **_params(cfg), "s": s, "shifted_k": rep.shifted_k,
        "modulus_exponent": rep.modulus_exponent, "ok": rep.ok,
    }]
    recs += [
        {"record": "congruence", "m": r.m, "A_ok": r.A_ok, "C_ok": r.C_ok,
         "A_diff_valuation": _num(r.A_diff_valuation), "C_diff_valuation": _num(r.C_diff_valuation)}
        for r in rep.rows
    ]
    return recs, EXIT_OK if rep.ok else EXIT_INVARIANT


def cmd_fieldgen(cfg: JobConfig) -> tuple[list[dict], int]:
    rep = field_generation_report(cfg.p, cfg.N, cfg.k, cfg.m_max)
    recs = [{"record": "fieldgen", "p": cfg.p, "N": cfg.N, "k": cfg.k, "m_max": cfg.m_max,
             "contained_fields": " ".join(map(str, rep.contained_fields))}]
    recs += [
        {"record": "field_row", "m": r.m, "rational_part": str(r.value.rational_part()),
         "support": " ".join(map(str, r.support)), "degree": r.degree,
         "cumulative_degree": r.cumulative_degree}
        for r in rep.rows
    ]
    return recs, EXIT_OK


def cmd_independence(coeffs, radicands, trials: int, seed: int) -> tuple[list[dict], int]:
    if coeffs is not None or radicands is not None:
        if coeffs is None or radicands is None:
            raise ConfigError("--coeffs and --radicands go together")
        try:
            cs = [Fraction(c) for c in coeffs.split(",")]
            rs = [int(r) for r in radicands.split(",")]
        except ValueError as exc:
            raise ConfigError(f"cannot parse --coeffs/--radicands: {exc}") from None
        nonzero = independence_check(cs, rs)
        return [{
            "record": "independence", "coeffs": coeffs, "radicands": radicands,
            "nonzero": nonzero, "degree": generated_field_degree(cs, rs),
        }], EXIT_OK
    rep = independence_suite(trials, seed)
    return [{
        "record": "independence_suite", "trials": rep.trials, "seed": seed,
        "zero_reported": rep.zero_reported, "degree_mismatches": rep.degree_mismatches, "ok": rep.ok,
    }], EXIT_OK if rep.ok else EXIT_INVARIANT


def _num(v):
    return "inf" if v == float("inf") else v


# rendering -------------------------------------------------------------------

def _groups(records: list[dict]) -> list[list[dict]]:
    groups: list[list[dict]] = []
    for r in records:
        if groups and groups[-1][0]["record"] == r["record"] and groups[-1][0].keys() == r.keys():
            groups[-1].append(r)
        else:
            groups.append([r])
    return groups


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    return "" if v is None else str(v)


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=False, default=str) + "\n" for r in records)
    out = io.StringIO()
    for gi, group in enumerate(_groups(records)):
        keys = [k for k in group[0] if k != "record"]
        if gi:
            out.write("\n")
        if fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["record", *keys])
            for r in group:
                w.writerow([r["record"], *(_cell(r[k]) for k in keys)])
            continue
        out.write(f"[{group[0]['record']}]\n")
        rows = [[_cell(r[k]) for k in keys] for r in group]
        widths = [max(len(k), *(len(row[i]) for row in rows)) for i, k in enumerate(keys)]
        out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)).rstrip() + "\n")
        for row in rows:
            out.write("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() + "\n")
    return out.getvalue()


# argument parsing ------------------------------------------------------------

def _threads(value: str) -> int:
    if value.upper() == "AUTO":
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be AUTO or a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=5, help="odd prime (default 5)")
    common.add_argument("--N", type=int, default=7, help="tame level > 4, prime to p (default 7)")
    common.add_argument("--k", type=int, default=2, help="weight (default 2)")
    common.add_argument("--m-max", type=int, default=5, dest="m_max", help="number of trace terms / series degree")
    common.add_argument("--precision", type=int, default=20, help="p-adic digits to report")
    common.add_argument("--route", default="both", help="exp, quot or both")
    common.add_argument("--format", default="json", help="json (one record per line), table or csv")
    common.add_argument("--cache", default=None, help="class-number cache file (default: $UNITROOT_CACHE)")
    common.add_argument("--threads", type=_threads, default=1, help="AUTO or number of worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="unitroot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dseries", parents=[common], help="coefficients and Newton polygon of D(k,T)")
    sub.add_parser("lfunction", parents=[common], help="the unit root L-function")
    sub.add_parser("slopes", parents=[common], help="U_p slope table")
    sub.add_parser("poles", parents=[common], help="pole certificate on |T|_p = p")
    check = sub.add_parser("check", help="verification reports")
    csub = check.add_subparsers(dest="check", required=True)
    csub.add_parser("identity", parents=[common])
    cont = csub.add_parser("continuity", parents=[common])
    cont.add_argument("--s", type=int, default=1)
    ind = csub.add_parser("independence", parents=[common])
    ind.add_argument("--coeffs", default=None, help="comma separated rationals")
    ind.add_argument("--radicands", default=None, help="comma separated squarefree integers")
    ind.add_argument("--trials", type=int, default=1000)
    ind.add_argument("--seed", type=int, default=0)
    csub.add_parser("fieldgen", parents=[common])
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = JobConfig(args.p, args.N, args.k, args.m_max, args.precision, args.route,
                    args.format, args.cache, args.threads)
    cache = None
    try:
        cfg.validate()
        path = cfg.cache or default_cache_path()
        if path:
            cache = ClassNumberCache(path)
            cache.load()
        if args.command == "check":
            if args.check == "identity":
                records, status = cmd_identity(cfg)
            elif args.check == "continuity":
                records, status = cmd_continuity(cfg, args.s)
            elif args.check == "independence":
                records, status = cmd_independence(args.coeffs, args.radicands, args.trials, args.seed)
            else:
                records, status = cmd_fieldgen(cfg)
        else:
            records, status = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"unitroot: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionError as exc:
        print(f"unitroot: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except InvariantError as exc:
        print(f"unitroot: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if cache is not None:
        cache.save()
    stdout.write(render(records, cfg.format))
    return status


COMMANDS = {
    "dseries": cmd_dseries,
    "lfunction": cmd_lfunction,
    "slopes": cmd_slopes,
    "poles": cmd_poles,
}


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
