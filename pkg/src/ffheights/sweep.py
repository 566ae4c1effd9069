"""Lehmer-bound sweep: exact d * hhat over exhaustive families of points.

For a fixed module, enumerate every alpha in K with numerator/denominator
degree below a bound (plus generators of supplied extensions), compute the
exact canonical height, and flag violations of the degree-d lower bound
d * hhat >= 1 among non-torsion points.  Points in the constant field have
no poles; the bound provably holds for pole-carrying points, while constant
non-torsion points can fall below it (Carlitz alpha = 1 has hhat = 1/q), so
rows carry a pole_case flag and violations are reported, not asserted.

Rows never abort the sweep: per-alpha failures land in the status column.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .fqpoly import Poly
from .ratfunc import RatFunc, RatFuncField
from .extfield import ExtField
from .drinfeld import (CAP_EXCEEDED, CERTIFIED_ZERO, EXACT, DrinfeldModule,
                       global_height)
from .heights import has_pole
from .laurent import PrecisionExhausted
from .places_ext import UnsupportedRamification


@dataclass(frozen=True)
class SweepRow:
    alpha: str
    minpoly: str
    d: int
    torsion: Optional[bool]
    hhat: Optional[Fraction]
    d_times_hhat: Optional[Fraction]
    pole_case: bool
    status: str
    violation: Optional[bool]


def enumerate_K_family(K: RatFuncField, max_num_deg: int, max_den_deg: int) -> Iterator[RatFunc]:
    """All alpha = num/den in lowest terms, deterministic encoding order."""
    q = K.base.q
    seen = set()
    for dn in range(max_den_deg + 1):
        for tail in range(q**dn):
            cs = []
            t = tail
            for _ in range(dn):
                t, rr = divmod(t, q)
                cs.append(rr)
            den = Poly(K.base, cs + [1])
            for nn in range(q ** (max_num_deg + 1)):
                t = nn
                ncs = []
                while t:
                    t, rr = divmod(t, q)
                    ncs.append(rr)
                num = Poly(K.base, ncs)
                alpha = RatFunc(num, den)
                key = (alpha.num.coeffs, alpha.den.coeffs)
                if key in seen:
                    continue
                seen.add(key)
                yield alpha


def classify(phi: DrinfeldModule, alpha, *, cap: int = 40) -> SweepRow:
    """One exact sweep record for alpha (element of K or of an extension)."""
    if isinstance(alpha, RatFunc):
        alpha_str = alpha.format()
        minpoly_str = ""
        d = 1
    else:
        alpha_str = alpha.format()
        minpoly_str = _minpoly_str(alpha.ext)
        d = alpha.ext.d
    try:
        pole = has_pole(alpha)
        hr = global_height(phi, alpha, cap=cap)
    except (PrecisionExhausted, UnsupportedRamification) as exc:
        return SweepRow(alpha_str, minpoly_str, d, None, None, None,
                        False, f"Error: {exc}", None)
    if hr.status == CERTIFIED_ZERO:
        return SweepRow(alpha_str, minpoly_str, d, True, Fraction(0),
                        Fraction(0), pole, CERTIFIED_ZERO, False)
    dh = hr.value * d
    if hr.status == EXACT:
        return SweepRow(alpha_str, minpoly_str, d, False, hr.value, dh,
                        pole, EXACT, dh < 1)
    # capped: hhat lies in [value, upper]
    torsion = None if hr.value == 0 else False
    if hr.upper * d < 1 and hr.value > 0:
        violation = True
    elif dh >= 1:
        violation = False
    else:
        violation = None
    return SweepRow(alpha_str, minpoly_str, d, torsion, hr.value, dh, pole,
                    CAP_EXCEEDED, violation)


def _minpoly_str(L: ExtField) -> str:
    parts = []
    for i, c in enumerate(L.minpoly):
        if c.is_zero():
            continue
        cs = c.format()
        if i == 0:
            parts.append(cs)
        elif i == L.d:
            parts.append("x" if i == 1 else f"x^{i}")
        else:
            xs = "x" if i == 1 else f"x^{i}"
            parts.append(xs if c.is_one() else f"({cs})*{xs}")
    return " + ".join(parts)


def lehmer_sweep(phi: DrinfeldModule, *, max_num_deg: int = 2,
                 max_den_deg: int = 2, extensions: Sequence[ExtField] = (),
                 include_zero: bool = True, cap: int = 40) -> list[SweepRow]:
    """Sweep the exhaustive K-family and the given extension generators."""
    K = phi.K
    rows = []
    for alpha in enumerate_K_family(K, max_num_deg, max_den_deg):
        if alpha.is_zero() and not include_zero:
            continue
        rows.append(classify(phi, alpha, cap=cap))
    for L in extensions:
        rows.append(classify(phi, L.gen(), cap=cap))
    return rows


CSV_COLUMNS = ("alpha", "minpoly", "d", "torsion", "hhat_num", "hhat_den",
               "d_times_hhat", "pole_case", "status", "violation")


def sweep_to_csv(rows: Sequence[SweepRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(_csv_record(r))


def _csv_record(r: SweepRow) -> list:
    hn = r.hhat.numerator if r.hhat is not None else ""
    hd = r.hhat.denominator if r.hhat is not None else ""
    dh = (f"{r.d_times_hhat.numerator}/{r.d_times_hhat.denominator}"
          if r.d_times_hhat is not None else "")
    tor = "" if r.torsion is None else str(r.torsion).lower()
    vio = "" if r.violation is None else str(r.violation).lower()
    return [r.alpha, r.minpoly, r.d, tor, hn, hd, dh,
            str(r.pole_case).lower(), r.status, vio]
