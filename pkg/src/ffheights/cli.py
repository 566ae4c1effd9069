"""Batch front end: parse inputs, run computations, emit JSON/CSV.

One job per invocation; identical configurations produce byte-identical
artifacts (sorted JSON keys, no timestamps, seeded randomness, atomic
writes).  Exit codes: 0 success, 2 mathematically inconclusive at the
configured caps (CapExceeded / Inconclusive rows), 1 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .gf import NotPrime, factorize, field as make_field, is_prime
from .fqpoly import Poly
from .ratfunc import RatFuncField
from .places import Place
from .extfield import ExtField, IrreducibilityUnknown
from .exprparse import ParseError, format_fraction, parse_drinfeld_coeffs, parse_element
from .drinfeld import (CAP_EXCEEDED, DrinfeldModule, global_height, is_torsion)
from .sweep import CSV_COLUMNS, _csv_record, lehmer_sweep
from .elliptic import ECurve, IsotrivialCurve
from .ec_heights import canonical_height, duplication_constant, exact_height
from .ec_census import (integral_points_census, lehmer_lang_check, point_search,
                        small_height_census, szpiro_check, torsion_group)
from .laurent import PrecisionExhausted
from .places_ext import UnsupportedRamification


def _field_from_q(q: int) -> RatFuncField:
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    p, deg = next(iter(fac.items()))
    return RatFuncField(make_field(p, deg))


def _frac(x: Fraction) -> str:
    return format_fraction(Fraction(x))


def _write_artifact(path: str | None, payload) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), indent=None)
    if path:
        d = os.path.dirname(os.path.abspath(path)) or "."
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-artifact-")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.write("\n")
        os.replace(tmp, path)
    return text


def _write_csv(path: str, rows) -> None:
    import csv as _csv

    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-artifact-")
    with os.fdopen(fd, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(_csv_record(r))
    os.replace(tmp, path)


def _place_str(w: Place) -> str:
    return "inf" if w.pi is None else w.pi.format("t")


def cmd_drinfeld_height(args) -> tuple[int, dict]:
    K = _field_from_q(args.q)
    coeffs = parse_drinfeld_coeffs(K, args.phi)
    phi = DrinfeldModule(K, coeffs)
    if args.ext:
        L = ExtField(K, _parse_minpoly(K, args.ext))
        alpha = L.gen() if args.alpha.strip() == "g" else L.from_K(parse_element(K, args.alpha))
    else:
        alpha = parse_element(K, args.alpha)
    hr = global_height(phi, alpha, cap=args.cap)
    payload = {
        "hhat": _frac(hr.value),
        "status": hr.status,
        "upper": _frac(hr.upper),
        "d": hr.d,
        "per_place": [
            {"place": _place_str(getattr(v, "below", v)) if not isinstance(v, str) else v,
             "value": _frac(lh.value) if not isinstance(lh, str) else lh,
             "status": lh.status if not isinstance(lh, str) else "certificate",
             "iterations": lh.iterations if not isinstance(lh, str) else 0}
            for v, lh in hr.per_place
        ],
    }
    return (2 if hr.status == CAP_EXCEEDED else 0), payload


def cmd_drinfeld_sweep(args) -> tuple[int, dict]:
    K = _field_from_q(args.q)
    phi = DrinfeldModule(K, parse_drinfeld_coeffs(K, args.phi))
    exts = []
    for spec in (args.ext or "").split(";"):
        spec = spec.strip()
        if spec:
            exts.append(ExtField(K, _parse_minpoly(K, spec)))
    rows = lehmer_sweep(phi, max_num_deg=args.num_deg, max_den_deg=args.den_deg,
                        extensions=exts, cap=args.cap)
    if args.csv:
        _write_csv(args.csv, rows)
    n_incl = sum(1 for r in rows if r.status == CAP_EXCEEDED or r.violation is None
                 and r.torsion is None)
    payload = {
        "rows": len(rows),
        "violations": sum(1 for r in rows if r.violation),
        "pole_case_violations": sum(1 for r in rows if r.violation and r.pole_case),
        "torsion": sum(1 for r in rows if r.torsion),
        "inconclusive": n_incl,
        "min_d_hhat_nontorsion": min(
            (_frac(r.d_times_hhat) for r in rows
             if r.torsion is False and r.d_times_hhat is not None),
            default=None,
        ),
    }
    return (2 if n_incl else 0), payload


def cmd_drinfeld_torsion(args) -> tuple[int, dict]:
    K = _field_from_q(args.q)
    phi = DrinfeldModule(K, parse_drinfeld_coeffs(K, args.phi))
    if args.ext:
        L = ExtField(K, _parse_minpoly(K, args.ext))
        alpha = L.gen() if args.alpha.strip() == "g" else L.from_K(parse_element(K, args.alpha))
    else:
        alpha = parse_element(K, args.alpha)
    tr = is_torsion(phi, alpha, degree_bound=args.degree_bound, cap=args.cap)
    payload = {
        "torsion": tr.torsion,
        "certificate": tr.certificate,
        "annihilator": tr.annihilator,
        "hhat": _frac(tr.height.value) if tr.height else None,
    }
    return (2 if tr.torsion is None else 0), payload


def _parse_minpoly(K: RatFuncField, text: str):
    # monic in x: syntax 'x^2 - T' etc.; reuse the element grammar with x as tau
    coeffs = []
    from .exprparse import parse_twisted

    cs = parse_twisted(K, text.replace("x", "tau"))
    if not cs or not cs[-1].is_one():
        raise ParseError("minimal polynomial must be monic in x", 0)
    return cs


def _curve(args) -> ECurve:
    K = _field_from_q(args.q)
    B = parse_element(K, args.B)
    C = parse_element(K, args.C)
    return ECurve(K, B, C)


def cmd_ec_profile(args) -> tuple[int, dict]:
    E = _curve(args)
    prof = E.profile()
    payload = {
        "d_EK": prof.d_EK,
        "deg_j": prof.deg_j,
        "f_EK": prof.f_EK,
        "p_e": prof.p_e,
        "deg_s_j": prof.deg_s_j,
        "semistable": prof.semistable,
        "places": [
            {"place": _place_str(d.place), "e": 1, "f_res": d.place.degree,
             "d_v": d.place.degree, "reduction": d.reduction,
             "kodaira": d.kodaira, "v_disc_min": d.v_disc}
            for d in prof.bad_places
        ],
    }
    return 0, payload


def cmd_ec_height(args) -> tuple[int, dict]:
    E = _curve(args)
    K = E.K
    P = E.point(parse_element(K, args.x), parse_element(K, args.y))
    width = Fraction(args.width)
    iv = canonical_height(E, P, width=width)
    payload = {
        "lo": _frac(iv.lo),
        "hi": _frac(iv.hi),
        "exact": iv.lo == iv.hi,
        "width": _frac(iv.width),
        "hhat": _frac(iv.lo) if iv.lo == iv.hi else None,
    }
    return 0, payload


def cmd_ec_census(args) -> tuple[int, dict]:
    E = _curve(args)
    cen = small_height_census(E)
    payload = {
        "threshold": _frac(cen.threshold),
        "mode": cen.mode,
        "search_radius": cen.radius,
        "count": cen.count,
        "within_24": cen.within_24,
        "points": [repr(P) for P in cen.points],
        "deficit_constant": _frac(cen.deficit),
    }
    return 0, payload


def cmd_ec_integral(args) -> tuple[int, dict]:
    E = _curve(args)
    S = []
    for s in args.S.split(","):
        s = s.strip()
        if s == "inf":
            S.append(Place.infinite(E.K.base))
        else:
            pi = parse_element(E.K, s)
            if not pi.is_poly():
                raise ParseError(f"place {s!r} must be a monic polynomial or inf", 0)
            S.append(Place.finite(pi.num.monic()))
    rep = integral_points_census(E, S, rank_info=args.rank,
                                 search_bound=args.search_bound)
    payload = {
        "S": list(rep.s_places),
        "search_bound": rep.search_bound,
        "count": rep.count,
        "eps_bound": _frac(rep.eps_bound),
        "eps_observed": _frac(rep.eps_observed) if rep.eps_observed is not None else None,
        "eps_within": rep.eps_within,
        "torsion_size": rep.torsion_size,
        "rank_lower": rep.rank_lower,
        "bound_semistable": rep.bound_semistable,
        "verdict_semistable": rep.verdict_semistable,
        "verdict_general": rep.verdict_general,
    }
    code = 2 if rep.rank_lower is None else 0
    return code, payload


def cmd_ec_report(args) -> tuple[int, dict]:
    E = _curve(args)
    prof = E.profile()
    sz = szpiro_check(E)
    cen = small_height_census(E)
    pts = point_search(E, args.search_bound)
    rows = lehmer_lang_check(E, pts)
    tg = torsion_group(E)
    cst = duplication_constant(E)
    payload = {
        "curve": {"B": args.B, "C": args.C, "q": args.q},
        "d_EK": prof.d_EK,
        "f_EK": prof.f_EK,
        "deg_j": prof.deg_j,
        "p_e": prof.p_e,
        "semistable": prof.semistable,
        "szpiro": {"lhs": sz.d_EK, "rhs": sz.szpiro_rhs,
                   "verdict": "PASS" if sz.szpiro_pass else "FAIL"},
        "conductor_bound": {"f_EK": sz.f_EK, "two_deg_s_j": 2 * sz.deg_s_j,
                            "verdict": "PASS" if sz.conductor_bound_pass else "FAIL"},
        "census": {"threshold": _frac(cen.threshold), "count": cen.count,
                   "bound": 24,
                   "verdict": "PASS" if cen.within_24 else "FAIL"},
        "torsion": {"size": tg.size, "bound": 24,
                    "verdict": "PASS" if tg.size <= 24 else "FAIL"},
        "lehmer_lang": [
            {"point": repr(r.point), "hhat": _frac(r.hhat),
             "torsion": r.torsion, "bound": _frac(r.bound),
             "verdict": "excluded" if r.passed is None
             else ("PASS" if r.passed else "FAIL")}
            for r in rows
        ],
        "C_E": _frac(cst.C_E),
    }
    return 0, payload


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ffheights",
        description="Exact canonical heights over F_q(T): Drinfeld modules and "
                    "elliptic curves, with verification reports.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--q", type=int, required=True, help="field size (prime power)")
        p.add_argument("--out", help="write the JSON record here (atomic)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=40)
        p.add_argument("--config", help="JSON file of flag values")

    p = sub.add_parser("drinfeld-height", help="exact canonical height of alpha")
    common(p)
    p.add_argument("--phi", required=True, help="phi_T, e.g. 'T + tau'")
    p.add_argument("--alpha", required=True)
    p.add_argument("--ext", help="minimal polynomial in x; alpha 'g' = generator")
    p.set_defaults(fn=cmd_drinfeld_height)

    p = sub.add_parser("drinfeld-sweep", help="Lehmer-bound sweep (CSV)")
    common(p)
    p.add_argument("--phi", required=True)
    p.add_argument("--num-deg", type=int, default=2)
    p.add_argument("--den-deg", type=int, default=2)
    p.add_argument("--ext", help="semicolon-separated minimal polynomials")
    p.add_argument("--csv", help="CSV output path")
    p.set_defaults(fn=cmd_drinfeld_sweep)

    p = sub.add_parser("drinfeld-torsion", help="torsion test with certificate")
    common(p)
    p.add_argument("--phi", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--ext")
    p.add_argument("--degree-bound", type=int, default=24)
    p.set_defaults(fn=cmd_drinfeld_torsion)

    p = sub.add_parser("ec-profile", help="reduction types and global invariants")
    common(p)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.set_defaults(fn=cmd_ec_profile)

    p = sub.add_parser("ec-height", help="canonical height enclosure of a point")
    common(p)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--width", default="1/10000")
    p.set_defaults(fn=cmd_ec_height)

    p = sub.add_parser("ec-census", help="complete small-height census")
    common(p)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.set_defaults(fn=cmd_ec_census)

    p = sub.add_parser("ec-integral", help="S-integral point census and bounds")
    common(p)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.add_argument("--S", default="inf", help="comma-separated places ('inf' or monic polys)")
    p.add_argument("--rank", type=int)
    p.add_argument("--search-bound", type=int, default=3)
    p.set_defaults(fn=cmd_ec_integral)

    p = sub.add_parser("ec-report", help="full verification report for one curve")
    common(p)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.add_argument("--search-bound", type=int, default=2)
    p.set_defaults(fn=cmd_ec_report)
    return ap


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"unknown config key {key!r}")
        setattr(args, attr, val)


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        _apply_config(args)
        code, payload = args.fn(args)
        text = _write_artifact(getattr(args, "out", None), payload)
        sys.stdout.write(text + "\n")
        return code
    except (ParseError, NotPrime, IrreducibilityUnknown, IsotrivialCurve,
            ValueError, OSError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (PrecisionExhausted, UnsupportedRamification) as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
