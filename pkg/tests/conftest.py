"""Shared fixtures and independent oracles for the test suite.

The oracles here never call into the library's own root-isolation or
field code paths: the dense scan evaluates the null condition directly
on a grid, and the bisection refiner is plain interval halving.
"""

from __future__ import annotations

import mpmath
from mpmath import mpf

import pytest

from tachyon_selfforce import PrecisionContext, working_digits


@pytest.fixture
def fast_ctx() -> PrecisionContext:
    return PrecisionContext(working_digits=40, target_digits=25, cap_digits=400)


@pytest.fixture
def default_ctx() -> PrecisionContext:
    return PrecisionContext()


def decimal_ulp(x, dps: int):
    """One unit in the last of ``dps`` significant decimal digits of x."""
    if x == 0:
        return mpf(10) ** (-dps)
    exponent = int(mpmath.floor(mpmath.log10(abs(x))))
    return mpf(10) ** (exponent - dps + 1)


def null_condition(tau, beta):
    """Direct evaluation of 2 - 2cos(beta*tau) - tau^2 (oracle copy)."""
    return 2 - 2 * mpmath.cos(mpf(beta) * mpf(tau)) - mpf(tau) ** 2


def dense_scan_brackets(beta, dps: int = 40) -> list[tuple]:
    """Sign-change brackets of the null condition on a dense grid.

    Steps pi/(64*beta) across (0, 2]; every sign change yields one
    bracket. Completely independent of the library's extrema-based
    isolation.
    """
    with working_digits(dps):
        b = mpf(beta)
        step = mpmath.pi / (64 * b)
        brackets = []
        t_prev = step
        f_prev = null_condition(t_prev, b)
        t = t_prev + step
        while t_prev < 2:
            t = min(t, mpf(2))
            f = null_condition(t, b)
            if f_prev * f < 0:
                brackets.append((t_prev, t))
            if t == 2:
                break
            t_prev, f_prev = t, f
            t = t + step
        return brackets


def bisect_refine(fun, lo, hi, dps: int = 40):
    """Plain bisection to ~dps digits; oracle-side refiner."""
    with working_digits(dps + 10):
        a, b = mpf(lo), mpf(hi)
        fa = fun(a)
        if fa == 0:
            return a
        for _ in range(int(3.4 * dps) + 20):
            mid = (a + b) / 2
            fm = fun(mid)
            if fm == 0:
                return mid
            if fa * fm > 0:
                a, fa = mid, fm
            else:
                b = mid
        return (a + b) / 2


# 16-significant-digit reference strings for the singular-velocity table
# used by the acceptance gate (criterion 1).  NOTE: entries beyond k=1
# carry only ~13-14 accurate digits; the exact roots of the tangency
# condition differ in the trailing digits (see the acceptance test).
REFERENCE_SINGULAR_BETAS_16 = [
    "4.603338848751701",
    "7.789705767492714",
    "10.94987986982622",
    "14.10169533046915",
    "17.24976556755881",
    "20.39583252184294",
    "23.54070189773618",
    "26.68479810180271",
    "29.82836607105987",
    "32.97155711433862",
    "36.11446976533017",
    "39.25717095448966",
    "42.39970774262564",
    "45.54211418676631",
    "48.68441554248154",
]
