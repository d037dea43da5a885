"""Zeta-regularization calculus on exponential polynomials.

The central objects are the Lerch-type series

    zeta_L(s, phi) = sum_{l >= 1} e^{i l phi} / l^s

and its s-derivative, both evaluated at non-positive integers s = -n.
Values come from closed forms:

* phi = 0 (mod 2 pi): zeta(-n) = -B_{n+1}(1)/(n+1), exact rational, with
  the B_1 = +1/2 convention fixed by zeta(0) = -1/2;
* phi != 0: the polylogarithm Li_{-n}(e^{i phi}), a rational function of
  e^{i phi} obtained by applying (z d/dz)^n to z/(1-z).

Derivatives use the exact splitting over residue classes: for a rational
phase phi = 2 pi p/q,

    zeta_L(s, phi) = q^{-s} sum_{r=1}^{q} e^{2 pi i r p / q} zeta_H(s, r/q),

which reduces everything to Hurwitz zeta values (Bernoulli polynomials,
exact) and Hurwitz zeta s-derivatives at s = -n.  The latter are computed
by Euler--Maclaurin summation applied to the s-differentiated series with a
rigorous remainder bound; phases are carried as rational multiples of 2 pi
end to end, so the phi = 0 branch is decided exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Tuple, Union

import mpmath as mp

from .characters import ExponentialPolynomial
from .errors import DomainError, NumericError
from .precision import frac_to_mpf, get_working_dps, to_mpc, unit_phase, working_prec

Phase = Union[Fraction, int, float, mp.mpf]


@dataclass(frozen=True)
class LerchValue:
    value: object          # Fraction or mpc
    method: str            # evaluation route tag
    precision_estimate: float


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials (exact)

@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (the polynomial convention B_n(0) = B_n)."""
    if n == 0:
        return Fraction(1)
    # binomial recurrence sum_{j<n} C(n+1, j) B_j = 0
    s = Fraction(0)
    for j in range(n):
        s += comb(n + 1, j) * _bernoulli(j)
    return -s / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^{n-k}, exact."""
    x = Fraction(x)
    return sum((comb(n, k) * _bernoulli(k) * x ** (n - k)
                for k in range(n + 1)), Fraction(0))


def hurwitz_zeta_neg(n: int, x: Fraction) -> Fraction:
    """zeta_H(-n, x) = -B_{n+1}(x)/(n+1), exact."""
    return -bernoulli_poly(n + 1, Fraction(x)) / (n + 1)


# ---------------------------------------------------------------------------
# phase normalization

def _normalize_phase(phi: Phase) -> Tuple[Fraction | None, mp.mpf | None]:
    """Return (phi_frac, phi_float): the exact phase as a fraction of 2 pi
    when available, else a floating phase in [0, 2 pi)."""
    if isinstance(phi, Fraction):
        return phi % 1, None
    if isinstance(phi, int):
        # integers are radians; only 0 is exactly representable as a fraction
        if phi == 0:
            return Fraction(0), None
        return None, mp.mpf(phi) % (2 * mp.pi)
    f = mp.mpf(phi)
    if f == 0:
        return Fraction(0), None
    return None, f % (2 * mp.pi)


# ---------------------------------------------------------------------------
# Lerch values at s = -n

@lru_cache(maxsize=None)
def _polylog_numerator(n: int) -> Tuple[int, ...]:
    """Integer coefficients N_n with Li_{-n}(z) = N_n(z)/(1-z)^{n+1},
    from (z d/dz) N/(1-z)^{j+1} = [z N'(1-z) + (j+1) z N]/(1-z)^{j+2}."""
    coeffs = [0, 1]  # N_0(z) = z
    for j in range(n):
        deriv = [i * coeffs[i] for i in range(1, len(coeffs))]
        # z * deriv * (1 - z)
        part1 = [0] + deriv
        part1 = [a - b for a, b in
                 zip(part1 + [0], [0] + part1)]  # (1-z) multiply
        part1 = part1[:len(coeffs) + 1]
        part2 = [0] + [(j + 1) * c for c in coeffs]
        m = max(len(part1), len(part2))
        coeffs = [(part1[i] if i < len(part1) else 0) +
                  (part2[i] if i < len(part2) else 0) for i in range(m)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def lerch_value_detail(n: int, phi: Phase, dps: int | None = None) -> LerchValue:
    """zeta_L(-n, phi) with an evaluation-method tag."""
    n = int(n)
    if n < 0:
        raise DomainError("n must be a nonnegative integer")
    phi_frac, phi_float = _normalize_phase(phi)
    if phi_frac is not None and phi_frac == 0:
        val = Fraction(-bernoulli_poly(n + 1, Fraction(1)), 1) / (n + 1)
        return LerchValue(val, "bernoulli-closed-form", 0.0)
    with working_prec(dps):
        z = unit_phase(phi_frac) if phi_frac is not None else mp.expj(phi_float)
        num = _polylog_numerator(n)
        p = mp.mpc(0)
        for c in reversed(num):
            p = p * z + c
        val = p / (1 - z) ** (n + 1)
        eps = float(mp.mpf(10) ** (-(mp.mp.dps - 4)))
        return LerchValue(val, "rational-polylog-closed-form", eps)


def lerch_value(n: int, phi: Phase, dps: int | None = None):
    """zeta_L(-n, phi): exact rational on the phi = 0 branch, else mpc."""
    return lerch_value_detail(n, phi, dps=dps).value


# ---------------------------------------------------------------------------
# Hurwitz zeta s-derivative at s = -n via Euler-Maclaurin

def _poly_from_roots(shifts) -> Tuple[Fraction, ...]:
    """Coefficients of prod_i (s + shift_i) as a polynomial in s."""
    coeffs = [Fraction(1)]
    for a in shifts:
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] += c * a
        coeffs = new
    return tuple(coeffs)


def _poly_eval_and_deriv(coeffs, s: Fraction) -> Tuple[Fraction, Fraction]:
    val = Fraction(0)
    der = Fraction(0)
    for c in reversed(coeffs):
        der = der * s + val
        val = val * s + c
    return val, der


@lru_cache(maxsize=None)
def _hurwitz_deriv_cached(n: int, num: int, den: int, dps: int) -> Tuple[mp.mpf, float]:
    return _hurwitz_zeta_deriv_neg_impl(n, Fraction(num, den), dps)


def hurwitz_zeta_deriv_neg(n: int, x: Fraction, dps: int | None = None
                           ) -> Tuple[mp.mpf, float]:
    """(d/ds) zeta_H(s, x) at s = -n for rational x in (0, 1], with a
    rigorous error bound.  Euler--Maclaurin on the differentiated series."""
    x = Fraction(x)
    if not 0 < x <= 1:
        raise DomainError("x must lie in (0, 1]")
    return _hurwitz_deriv_cached(int(n), x.numerator, x.denominator,
                                 int(dps) if dps is not None else get_working_dps())


def _hurwitz_zeta_deriv_neg_impl(n: int, x: Fraction, dps: int
                                 ) -> Tuple[mp.mpf, float]:
    tol = mp.mpf(10) ** (-(dps + 2))
    with mp.workdps(dps + 12):
        xf = frac_to_mpf(x)
        m_terms = max(16, n + 6)
        j_terms = max(n // 2 + 3, 6)
        while True:
            # remainder bound: only the Pochhammer-derivative part survives
            # because prod_{i=0}^{2J}(s+i) vanishes at s = -n for 2J >= n
            mm = mp.mpf(m_terms) + xf
            twoj = 2 * j_terms
            qprime = mp.mpf(1)
            for i in range(twoj + 1):
                if i != n:
                    qprime *= abs(i - n)
            bound = (mp.mpf("2.5") / (2 * mp.pi) ** (twoj + 1)) * qprime \
                * mm ** (n - twoj) / (twoj - n)
            if bound < tol:
                break
            j_terms += 2
            if j_terms > 80:
                j_terms = max(n // 2 + 3, 6)
                m_terms *= 2
                if m_terms > 5000:
                    raise NumericError(
                        "Euler-Maclaurin failed to reach tolerance",
                        achieved=float(bound))

        # partial sum of -log(m+x) (m+x)^n
        total = mp.mpf(0)
        for m in range(m_terms):
            mx = frac_to_mpf(m + x)
            total += -mp.log(mx) * mx ** n
        mm = frac_to_mpf(m_terms + x)
        logm = mp.log(mm)
        # d/ds [(M+x)^{1-s}/(s-1)] at s = -n
        total += mm ** (n + 1) * (logm / (n + 1) - mp.mpf(1) / (n + 1) ** 2)
        # d/ds [(M+x)^{-s}/2]
        total += -logm * mm ** n / 2
        # correction terms sum_j B_2j/(2j)! d/ds[P_j(s) (M+x)^{-s-2j+1}]
        fact = Fraction(1)
        for j in range(1, j_terms + 1):
            fact *= Fraction((2 * j - 1) * (2 * j))
            pj = _poly_from_roots(range(2 * j - 1))
            val, der = _poly_eval_and_deriv(pj, Fraction(-n))
            coeff = _bernoulli(2 * j) / fact
            total += frac_to_mpf(coeff) * \
                (frac_to_mpf(der) - frac_to_mpf(val) * logm) * mm ** (n - 2 * j + 1)
        return total, float(bound)


# ---------------------------------------------------------------------------
# Lerch derivative at s = -n

def lerch_deriv_detail(n: int, phi: Phase, dps: int | None = None) -> LerchValue:
    """zeta_L'(-n, phi) = (d/ds) zeta_L(s, phi) at s = -n.

    Rational phases are split over residue classes into Hurwitz zeta data;
    irrational (floating) phases fall back to numerically differentiating
    the Lerch transcendent.
    """
    n = int(n)
    if n < 0:
        raise DomainError("n must be a nonnegative integer")
    phi_frac, phi_float = _normalize_phase(phi)
    dps_eff = int(dps) if dps is not None else get_working_dps()

    if phi_frac is not None:
        p, q = phi_frac.numerator, phi_frac.denominator
        with mp.workdps(dps_eff + 10):
            total = mp.mpc(0)
            err = 0.0
            logq = mp.log(q)
            for r in range(1, q + 1):
                d, e = hurwitz_zeta_deriv_neg(n, Fraction(r, q), dps=dps_eff)
                hz = hurwitz_zeta_neg(n, Fraction(r, q))
                term = d - logq * frac_to_mpf(hz)
                total += unit_phase(Fraction(r * p, q)) * term
                err += e
            total *= mp.mpf(q) ** n
            err *= float(q ** (n + 1))
            return LerchValue(total, "euler-maclaurin", err)

    # floating phase: numeric s-derivative of the Lerch transcendent
    with mp.workdps(dps_eff + 10):
        z = mp.expj(phi_float)

        def f(s):
            return z * mp.lerchphi(z, s, 1)

        val = mp.diff(f, mp.mpf(-n))
        return LerchValue(val, "euler-maclaurin",
                          float(mp.mpf(10) ** (-(dps_eff - 6))))


def lerch_deriv(n: int, phi: Phase, dps: int | None = None) -> mp.mpc:
    return lerch_deriv_detail(n, phi, dps=dps).value


# ---------------------------------------------------------------------------
# operations on exponential polynomials

def odd_part(p: ExponentialPolynomial) -> ExponentialPolynomial:
    """(P(l) - P(-l))/2 re-expressed in canonical form: the term
    c l^n e^{i l phi} pairs with c (-1)^n l^n e^{-i l phi}."""
    terms = []
    half = Fraction(1, 2)
    for c, n, phi in p.terms:
        ch = c * half if isinstance(c, Fraction) else c / 2
        terms.append((ch, n, phi))
        cm = ch if n % 2 == 0 else -ch
        terms.append((-cm, n, (-phi) % 1))
    return ExponentialPolynomial.from_terms(terms)


def even_part(p: ExponentialPolynomial) -> ExponentialPolynomial:
    return p + odd_part(p).scaled(Fraction(-1))


def zeta_apply(p: ExponentialPolynomial, dps: int | None = None):
    """bold-zeta P = sum_j c_j zeta_L(-n_j, phi_j); exact when P is a pure
    rational polynomial (all phases zero)."""
    if p.is_exact and all(phi == 0 for _, _, phi in p.terms):
        return sum((c * lerch_value(n, Fraction(0)) for c, n, _ in p.terms),
                   Fraction(0))
    with working_prec(dps):
        total = mp.mpc(0)
        for c, n, phi in p.terms:
            total += to_mpc(c) * to_mpc(lerch_value(n, phi, dps=dps))
        return total


def zeta_deriv_apply_detail(p: ExponentialPolynomial, dps: int | None = None
                            ) -> LerchValue:
    with working_prec(dps):
        total = mp.mpc(0)
        err = 0.0
        for c, n, phi in p.terms:
            d = lerch_deriv_detail(n, phi, dps=dps)
            total += to_mpc(c) * to_mpc(d.value)
            err += float(abs(to_mpc(c))) * d.precision_estimate
        return LerchValue(total, "euler-maclaurin", err)


def zeta_deriv_apply(p: ExponentialPolynomial, dps: int | None = None) -> mp.mpc:
    return zeta_deriv_apply_detail(p, dps=dps).value


def p_star(p: ExponentialPolynomial, pval) :
    """P*(p) = - sum over phase-0 terms of c p^{n+1}/(4(n+1)) H_n with the
    harmonic number H_0 = 0; exact for exact inputs."""
    pval = Fraction(pval) if not isinstance(pval, (Fraction, int)) else Fraction(pval)
    exact = p.is_exact
    total: object = Fraction(0) if exact else mp.mpc(0)
    for c, n, phi in p.terms:
        if phi != 0:
            continue
        harmonic = sum((Fraction(1, l) for l in range(1, n + 1)), Fraction(0))
        if harmonic == 0:
            continue
        factor = pval ** (n + 1) / (4 * (n + 1)) * harmonic
        if exact:
            total -= c * factor
        else:
            total -= to_mpc(c) * frac_to_mpf(factor)
    return total
