"""Working-precision control for all transcendental evaluation.

Structural arithmetic (roots, weights, multiplicities, rational phases) is
exact and never touches this module; only exponentials, logs and zeta
values are evaluated in mpmath at the configured number of decimal digits.
"""
from __future__ import annotations

import contextlib
from fractions import Fraction

import mpmath as mp

_working_dps = 30


def get_working_dps() -> int:
    return _working_dps


def set_working_dps(dps: int) -> None:
    global _working_dps
    dps = int(dps)
    if dps < 15:
        raise ValueError("working precision below 15 digits is not supported")
    _working_dps = dps


@contextlib.contextmanager
def working_prec(dps: int | None = None):
    """Context manager entering the requested (or default) mpmath precision."""
    with mp.workdps(int(dps) if dps is not None else _working_dps):
        yield


def frac_to_mpf(x) -> mp.mpf:
    """Convert a Fraction (or int) to mpf exactly at the current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def to_mpc(x) -> mp.mpc:
    """Convert Fraction/int/float/complex/mpf/mpc to mpc at current precision."""
    if isinstance(x, Fraction):
        return mp.mpc(frac_to_mpf(x))
    return mp.mpc(x)


def unit_phase(t: Fraction) -> mp.mpc:
    """e^{2 pi i t} for an exact rational t, reduced mod 1 before evaluation."""
    t = t % 1
    return mp.expjpi(frac_to_mpf(2 * t))
