"""Numeric lower bounds on the approximate second-neighborhood constant.

Every root here is found by plain bisection on a sign-changing bracket in
[0, 1], in binary64, with a fixed iteration count of ceil(log2(1 / tol)).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Callable

from snw.errors import BadM, BadTolerance, NoSignChange

DEFAULT_TOL = 1e-12
MIN_TOL = 1e-14

# Reference constants quoted from the literature, stored rather than computed.
CSY_CLAIMED = 0.67815
ZHANG_ZHOU_LAMBDA3 = 0.6751

CSV_HEADER = ("m", "snc_root", "liang_xu_root", "asym_paper", "asym_lx")


def _check_tol(tol: float) -> None:
    if not (tol >= MIN_TOL and math.isfinite(tol)):
        raise BadTolerance(f"tolerance must be a finite value >= {MIN_TOL}, got {tol}")


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise BadM(f"m must be an integer >= 2, got {m!r}")


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` around a sign change of ``f``; return the final bracket.

    Requires ``f(lo) < 0 < f(hi)`` or the reverse. Width after the loop is at
    most ``tol``.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo < 0) == (fhi < 0):
        raise NoSignChange(f"f({lo})={flo} and f({hi})={fhi} have the same sign")
    steps = max(0, math.ceil(math.log2((hi - lo) / tol)))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def _root(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    a, b = bisect(f, lo, hi, tol)
    return 0.5 * (a + b)


def snc_poly(m: int) -> Callable[[float], float]:
    return lambda x: x**m + x ** (m - 1) - 1.0


def liang_xu_poly(m: int) -> Callable[[float], float]:
    return lambda x: 2 * x**3 - (m - 3) * x**2 + (2 * m - 4) * x - (m - 1)


def csy_poly(x: float) -> float:
    return 2 * x**3 + x**2 - 1


def snc_bound_root(m: int, tol: float = DEFAULT_TOL) -> float:
    """Positive root of ``x^m + x^(m-1) = 1``, a lower bound on lambda_m."""
    _check_m(m)
    _check_tol(tol)
    f = snc_poly(m)
    # strictly increasing on (0, 1]: f(0) = -1, f(1) = 1
    assert f(0.0) < 0 < f(1.0)
    return _root(f, 0.0, 1.0, tol)


def liang_xu_root(m: int, tol: float = DEFAULT_TOL) -> float:
    """Root in (0, 1) of ``2x^3 - (m-3)x^2 + (2m-4)x - (m-1)``.

    Raises ``NoSignChange`` when the polynomial does not change sign on
    the open interval for this ``m``.
    """
    _check_m(m)
    _check_tol(tol)
    f = liang_xu_poly(m)
    if not (f(0.0) < 0 < f(1.0) or f(0.0) > 0 > f(1.0)):
        raise NoSignChange(f"Liang-Xu polynomial has no sign change on (0, 1) for m={m}")
    return _root(f, 0.0, 1.0, tol)


def csy_root(tol: float = DEFAULT_TOL) -> float:
    """Real root of ``2x^3 + x^2 - 1``."""
    _check_tol(tol)
    return _root(csy_poly, 0.0, 1.0, tol)


def asymptotic_row(m: int) -> tuple[float, float]:
    """``(1 - ln2/m, 1 - sqrt(2)/sqrt(m))``: leading terms of the two bounds."""
    _check_m(m)
    return 1.0 - math.log(2) / m, 1.0 - math.sqrt(2) / math.sqrt(m)


@dataclass(frozen=True)
class BoundRow:
    m: int
    snc_root: float
    liang_xu_root: float
    asym_paper: float
    asym_lx: float


def bounds_table(m_max: int, tol: float = DEFAULT_TOL) -> list[BoundRow]:
    """One row per m in ``2..m_max``; ordering invariants are checked as rows are built."""
    if not isinstance(m_max, int) or m_max < 2:
        raise BadM(f"m_max must be an integer >= 2, got {m_max!r}")
    _check_tol(tol)
    rows: list[BoundRow] = []
    for m in range(2, m_max + 1):
        snc = snc_bound_root(m, tol)
        lx = liang_xu_root(m, tol)
        if not 0 < snc < 1:
            raise ArithmeticError(f"snc root {snc} outside (0, 1) at m={m}")
        if rows and not snc > rows[-1].snc_root:
            raise ArithmeticError(f"snc root not increasing at m={m}")
        if m >= 3 and not snc > lx:
            raise ArithmeticError(f"snc root {snc} does not exceed Liang-Xu root {lx} at m={m}")
        rows.append(BoundRow(m, snc, lx, *asymptotic_row(m)))
    return rows


def _fmt(x: float) -> str:
    return f"{x:#.12g}"


def table_to_csv(rows: list[BoundRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([r.m, _fmt(r.snc_root), _fmt(r.liang_xu_root), _fmt(r.asym_paper), _fmt(r.asym_lx)])
    return buf.getvalue()


def table_to_json(rows: list[BoundRow], tol: float = DEFAULT_TOL) -> dict:
    return {
        "rows": [asdict(r) for r in rows],
        "csy_root": csy_root(tol),
        "csy_claimed": CSY_CLAIMED,
        "zhang_zhou_lambda3": ZHANG_ZHOU_LAMBDA3,
    }
