"""Equivariant quaternionic analytic torsion on the symmetric spaces G/K:
the closed-form spectral zeta, the torsion assembled from the zeta calculus,
the brute-force spectral oracle it is validated against, and the Quillen
metric bookkeeping.

Setup: a bundle is specified by an even integer k >= 0 and a dominant
integral weight lambda_circ of K_0; set lambda = lambda_circ + k alpha.
For each beta in Psi_0 write gamma = alpha + beta and

    p_beta = <gamma^vee, rho + lambda>        (an integer).

The graded Laplacian spectrum is indexed by pairs (l, beta): the eigenvalue
attached to (l, beta) is |gamma|^2 l (l - p_beta) / 2 on the Psi_0^+ side
(l > p_beta) and |gamma|^2 l (l + p_beta) / 2 on the Psi_0^- side
(l > -p_beta), in the Killing norm.  The closed form used here is

  Z(s) = -2^s sum_{beta in Psi_0^+} sum_{l > p}
             chi_{rho+lambda-l gamma} <2 rho + 2 lambda - l gamma, -l gamma>^{-s}
       + 2^s sum_{beta in Psi_0^-} sum_{l > -p}
             chi_{rho+lambda+l gamma} <2 rho + 2 lambda + l gamma, l gamma>^{-s},

with l gamma in both denominators.  The first branch carries the -l gamma
shift: with the +l gamma shift printed elsewhere the sum disagrees with the
spectral oracle (the matched-truncation comparison in the tests is exact
rational at the identity and adjudicates this, together with the l-vs-k
denominator emendation).  Both branches follow from the occurrence lemma
plus the reflection antisymmetry chi_{rho+lambda+l gamma} =
-chi_{rho+lambda-(l+p) gamma}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath as mp

from .characters import (ExponentialPolynomial, branch_dim_hom,
                         character_ell_family, character_value, dimension)
from .errors import ConsistencyError, DomainError
from .precision import frac_to_mpf, to_mpc, working_prec
from .rootsys import (RootSystem, TorusElement, Weight,
                      shifted_dominant_weights)
from .wolf import WolfSpaceData, psi_split
from .zetareg import odd_part, p_star, zeta_apply, zeta_deriv_apply_detail

Number = Union[Fraction, mp.mpc]


# ---------------------------------------------------------------------------
# result containers

@dataclass
class TorsionResult:
    total: mp.mpc
    breakdown: Dict[str, mp.mpc]
    inputs: Dict[str, object]
    precision_estimate: float


@dataclass
class SpectralTerm:
    b_pi: Weight
    eigenvalue: Fraction                 # (|b_pi|^2 - |rho+lambda|^2)/2
    q_multiplicities: Tuple[int, ...]    # q = 0..2n
    char_at_x: Number                    # dimension at the identity


# ---------------------------------------------------------------------------
# shared validation

def _resolve_lambda(w: WolfSpaceData, k: int, lam_circ: Weight) -> Weight:
    if k < 0 or k % 2 != 0:
        raise DomainError("k must be an even nonnegative integer")
    w.validate_lambda_circ(lam_circ)
    lam = lam_circ + k * w.alpha
    return lam


def _require_integral(w: WolfSpaceData, lam: Weight) -> None:
    if not w.rs.is_integral(lam):
        raise DomainError(
            "lambda = lambda_circ + k alpha is not an integral weight of G; "
            "the corresponding bundle data does not exist on this space")


def _check_element(w: WolfSpaceData, x: TorusElement) -> None:
    if x.regularity not in ("identity", "regular"):
        raise DomainError("only the identity or a regular element is supported")
    if len(x.coords) != w.rs.ambient_dim:
        raise DomainError("element has wrong dimension")


def _chi(w: WolfSpaceData, b: Weight, x: TorusElement, dps=None) -> Number:
    if x.is_identity:
        return dimension(w.rs, b)
    return character_value(w.rs, b, x, dps=dps)


# ---------------------------------------------------------------------------
# branch bookkeeping for the closed form

@dataclass
class _Branch:
    beta: Weight
    gamma: Weight           # alpha + beta
    p: int                  # <gamma^vee, rho+lambda>
    positive_side: bool     # True: Psi_0^+ (shift -l gamma), else Psi_0^-
    gnorm2: Fraction        # |gamma|^2 in the Killing norm
    family: ExponentialPolynomial  # P(l) = chi at the l-shifted weight

    def pentagon_eigenvalue(self, ell: int) -> Fraction:
        off = -self.p if self.positive_side else self.p
        return self.gnorm2 * ell * (ell + off) / 2

    def first_ell(self) -> int:
        return self.p + 1 if self.positive_side else -self.p + 1


def _branches(w: WolfSpaceData, k: int, lam_circ: Weight, x: TorusElement,
              dps=None) -> List[_Branch]:
    rs = w.rs
    lam = _resolve_lambda(w, k, lam_circ)
    _require_integral(w, lam)
    _check_element(w, x)
    plus, minus = psi_split(w, lam)
    out = []
    for beta in plus + minus:
        positive_side = beta in plus
        gamma = w.alpha + beta
        p = rs.pair_coroot(gamma, rs.rho + lam)
        if p.denominator != 1:
            raise ConsistencyError("non-integer coroot pairing for integral data")
        delta = -gamma if positive_side else gamma
        fam = character_ell_family(w, lam, delta, x, dps=dps)
        out.append(_Branch(beta=beta, gamma=gamma, p=int(p),
                           positive_side=positive_side,
                           gnorm2=rs.knorm2(gamma), family=fam))
    return out


def _branch_tail_bound(br: _Branch, s: float, ell0: int) -> float:
    """Bound on sum_{l >= ell0} |P(l)| (|gamma|^2 l (l -+ p))^{-s} using
    |P(l)| <= A l^d and l(l -+ p) >= l^2/2 for l >= 2|p|+2."""
    a = br.family.coeff_abs_sum()
    d = br.family.degree
    if ell0 < 2 * abs(br.p) + 2:
        raise DomainError("tail bound needs ell0 >= 2|p|+2")
    if 2 * s - d <= 1:
        return float("inf")
    g = float(br.gnorm2)
    kappa = a * (2.0 / g) ** s
    return kappa * (float(ell0) ** (d - 2 * s)
                    + float(ell0) ** (d - 2 * s + 1) / (2 * s - d - 1))


def zeta_closed_form(w: WolfSpaceData, k: int, lam_circ: Weight,
                     x: TorusElement, s, *, tol: float = 1e-10,
                     casimir_cutoff=None, dps: int | None = None) -> Number:
    """Closed-form Z(s) (see module docstring).

    With ``casimir_cutoff`` set, sums exactly the terms whose Laplacian
    eigenvalue is <= cutoff; this matches the spectral oracle's truncation
    term for term (and is exact rational at the identity for integer s).
    Otherwise the full series is summed to ``tol`` using an explicit
    integral tail bound; a DomainError is raised below the abscissa of
    absolute convergence.
    """
    branches = _branches(w, k, lam_circ, x, dps=dps)
    exact = x.is_identity and isinstance(s, int) and casimir_cutoff is not None

    if casimir_cutoff is not None:
        cutoff = Fraction(casimir_cutoff)
        total: Number = Fraction(0) if exact else mp.mpc(0)
        for br in branches:
            sign = -1 if br.positive_side else 1
            ell = br.first_ell()
            while br.pentagon_eigenvalue(ell) <= cutoff:
                chi = br.family.eval(ell)
                eig = br.pentagon_eigenvalue(ell)
                if eig <= 0:
                    raise ConsistencyError("nonpositive eigenvalue in range")
                if exact:
                    total += sign * chi * Fraction(1, 1) / eig ** s
                else:
                    with working_prec(dps):
                        total += sign * to_mpc(chi) * frac_to_mpf(eig) ** (-mp.mpf(s))
                ell += 1
        return total

    s_f = float(s)
    with working_prec(dps):
        total_m = mp.mpc(0)
        for br in branches:
            d = br.family.degree
            if 2 * s_f - d <= 1:
                raise DomainError(
                    "s = %s is below the abscissa of absolute convergence "
                    "(need 2s > %d + 1 for this family)" % (s, d))
            sign = -1 if br.positive_side else 1
            ell = br.first_ell()
            # sum until the explicit tail bound is below the shared budget
            budget = tol / (2 * len(branches))
            while True:
                eig = br.pentagon_eigenvalue(ell)
                total_m += sign * to_mpc(br.family.eval(ell)) \
                    * frac_to_mpf(eig) ** (-mp.mpf(s_f))
                ell += 1
                if ell >= 2 * abs(br.p) + 2 and \
                        _branch_tail_bound(br, s_f, ell) < budget:
                    break
        return total_m


def closed_form_tail_bound(w: WolfSpaceData, k: int, lam_circ: Weight,
                           x: TorusElement, s, casimir_cutoff) -> float:
    """Explicit bound on |Z(s) - Z_truncated(s)| when the series is cut at
    the Laplacian-eigenvalue cutoff; infinite below the convergence abscissa."""
    branches = _branches(w, k, lam_circ, x)
    cutoff = Fraction(casimir_cutoff)
    total = 0.0
    for br in branches:
        ell = br.first_ell()
        while br.pentagon_eigenvalue(ell) <= cutoff:
            ell += 1
        if ell < 2 * abs(br.p) + 2:
            ell = 2 * abs(br.p) + 2  # widen: bound only gets larger ranges
        total += _branch_tail_bound(br, float(s), ell)
    return total


# ---------------------------------------------------------------------------
# Theorem-style torsion assembly

def torsion(w: WolfSpaceData, k: int, lam_circ: Weight, x: TorusElement,
            dps: int | None = None) -> TorsionResult:
    """Equivariant quaternionic analytic torsion T^k at e^X, assembled term
    by term from the zeta calculus; see the module docstring for the
    eigenvalue bookkeeping.  The breakdown parts sum to the total exactly
    in the arithmetic used.
    """
    rs = w.rs
    lam = _resolve_lambda(w, k, lam_circ)
    _require_integral(w, lam)
    _check_element(w, x)
    plus, minus = psi_split(w, lam)
    lamb = rs.rho + lam

    with working_prec(dps):
        zeta_prime_part = mp.mpc(0)
        p_star_part = mp.mpc(0)
        log_norm_part = mp.mpc(0)
        finite_plus = mp.mpc(0)
        finite_minus = mp.mpc(0)
        err = 0.0

        for beta in plus + minus:
            gamma = w.alpha + beta
            p = int(rs.pair_coroot(gamma, lamb))
            fam = character_ell_family(w, lam, -gamma, x, dps=dps)

            d = zeta_deriv_apply_detail(odd_part(fam), dps=dps)
            zeta_prime_part += -2 * to_mpc(d.value)
            err += 2 * d.precision_estimate

            p_star_part += -2 * to_mpc(p_star(fam, p))

            lognorm = mp.log(frac_to_mpf(
                Fraction(2) / (rs.knorm2(w.alpha) + rs.knorm2(beta))))
            log_norm_part += -to_mpc(zeta_apply(fam, dps=dps)) * lognorm

        chi_log_part = mp.mpc(0)
        chi_top = _chi(w, lamb, x, dps=dps)
        for beta in plus:
            lognorm = mp.log(frac_to_mpf(
                Fraction(2) / (rs.knorm2(w.alpha) + rs.knorm2(beta))))
            chi_log_part += -to_mpc(chi_top) * lognorm

        for beta in plus:
            gamma = w.alpha + beta
            p = int(rs.pair_coroot(gamma, lamb))
            for ell in range(1, p + 1):
                finite_plus += -to_mpc(_chi(w, lamb - ell * gamma, x, dps=dps)) \
                    * mp.log(ell)
        for beta in minus:
            gamma = w.alpha + beta
            p = int(rs.pair_coroot(gamma, lamb))
            for ell in range(1, -p + 1):
                finite_minus += to_mpc(_chi(w, lamb + ell * gamma, x, dps=dps)) \
                    * mp.log(ell)

        breakdown = {
            "zeta_prime_part": zeta_prime_part,
            "p_star_part": p_star_part,
            "log_norm_part": log_norm_part,
            "chi_log_part": chi_log_part,
            "finite_sum_plus": finite_plus,
            "finite_sum_minus": finite_minus,
        }
        total = mp.mpc(0)
        for v in breakdown.values():
            total += v
        eps = float(mp.mpf(10) ** (-(mp.mp.dps - 8)))
        return TorsionResult(
            total=total, breakdown=breakdown,
            inputs={
                "cartan_type": rs.cartan_type,
                "k": k,
                "lambda_circ": tuple(str(c) for c in lam_circ.coords),
                "element": "identity" if x.is_identity
                           else tuple(str(c) for c in x.coords),
            },
            precision_estimate=err + eps)


# ---------------------------------------------------------------------------
# spectral oracle

def spectral_oracle(w: WolfSpaceData, k: int, lam_circ: Weight,
                    x: TorusElement, casimir_cutoff,
                    dps: int | None = None) -> List[SpectralTerm]:
    """Brute-force spectrum below the cutoff: enumerate dominant b_pi,
    compute graded multiplicities by branching and the eigenvalue from the
    Casimir.  Only b_pi congruent to rho+lambda modulo the root lattice can
    branch nontrivially, so the enumeration is restricted accordingly."""
    rs = w.rs
    lam = _resolve_lambda(w, k, lam_circ)
    _require_integral(w, lam)
    _check_element(w, x)
    cutoff = Fraction(casimir_cutoff)
    if cutoff < 0:
        raise DomainError("cutoff must be nonnegative")

    bound = rs.knorm2(rs.rho + lam) + 2 * cutoff
    terms: List[SpectralTerm] = []
    for b in shifted_dominant_weights(rs, bound, congruent_to=lam):
        eig = (rs.knorm2(b) - rs.knorm2(rs.rho + lam)) / 2
        mults = tuple(branch_dim_hom(w, b, k, lam_circ, q)
                      for q in range(2 * w.n + 1))
        if eig < 0 and any(mults):
            raise ConsistencyError(
                "negative Laplacian eigenvalue with nonzero multiplicity at "
                "b_pi = %r" % (b,))
        char = _chi(w, b, x, dps=dps)
        terms.append(SpectralTerm(b_pi=b, eigenvalue=eig,
                                  q_multiplicities=mults, char_at_x=char))
    return terms


def oracle_partial_z(terms: Sequence[SpectralTerm], s) -> Number:
    """Partial Z(s) = sum over positive eigenvalues of
    sum_q (-1)^{q+1} q m_q chi eigenvalue^{-s}; exact rational when the
    characters are rational and s is a nonnegative integer."""
    exact = isinstance(s, int) and all(
        isinstance(t.char_at_x, Fraction) for t in terms)
    total: Number = Fraction(0) if exact else mp.mpc(0)
    for t in terms:
        if t.eigenvalue <= 0:
            continue
        qsum = sum((-1) ** (q + 1) * q * m
                   for q, m in enumerate(t.q_multiplicities))
        if qsum == 0:
            continue
        if exact:
            total += qsum * t.char_at_x / t.eigenvalue ** s
        else:
            total += qsum * to_mpc(t.char_at_x) \
                * frac_to_mpf(t.eigenvalue) ** (-mp.mpf(s))
    return total


# ---------------------------------------------------------------------------
# occurrence check (graded multiplicities vs. shifted characters)

def lemma_occur_check(w: WolfSpaceData, k: int, lam_circ: Weight,
                      b_pi: Weight, x: TorusElement,
                      dps: int | None = None) -> Tuple[Number, Number]:
    """Two independent evaluations of the same quantity:

    lhs = sum_q (-1)^q q dim Hom_K(V_pi, Lambda^q E (x) Sym^{k+q} H (x) V^{K_0})
          * chi_{b_pi}(e^X),
    rhs = sum over (l, beta) with b_pi in the Weyl orbit of
          rho + lambda + l (alpha+beta) of  -chi_{rho+lambda+l(alpha+beta)}(e^X).

    Exact integers at the identity."""
    rs = w.rs
    lam = _resolve_lambda(w, k, lam_circ)
    _check_element(w, x)
    mu_pi = b_pi - rs.rho
    if not rs.is_dominant_integral(mu_pi):
        raise DomainError("b_pi must be rho + a dominant integral weight")

    chi_b = _chi(w, b_pi, x, dps=dps)
    lhs_int = sum((-1) ** q * q * branch_dim_hom(w, b_pi, k, lam_circ, q)
                  for q in range(2 * w.n + 1))
    lhs = lhs_int * chi_b if isinstance(chi_b, Fraction) else lhs_int * to_mpc(chi_b)

    lamb = rs.rho + lam
    target_norm = b_pi.dot(b_pi)
    rhs: Number = Fraction(0) if x.is_identity and rs.is_integral(lam) else mp.mpc(0)
    if not rs.is_integral(lam):
        # no integral b_pi can meet the orbit of a non-integral weight
        return lhs, rhs
    for beta in w.psi0:
        gamma = w.alpha + beta
        ell = 1
        while True:
            v = lamb + ell * gamma
            # |v|^2 grows in ell once past the vertex; stop when it exceeds
            vnorm = v.dot(v)
            if vnorm > target_norm and v.dot(gamma) > 0:
                break
            if vnorm == target_norm:
                dom, sign = rs.dominant_conjugate(v)
                if sign != 0 and dom == b_pi:
                    chi_v = _chi(w, v, x, dps=dps) if not x.is_identity \
                        else dimension(rs, v)
                    rhs = rhs - (chi_v if isinstance(rhs, Fraction)
                                 else to_mpc(chi_v))
            ell += 1
            if ell > 10 ** 6:  # pragma: no cover
                raise ConsistencyError("orbit scan failed to terminate")
    return lhs, rhs


# ---------------------------------------------------------------------------
# Quillen metric bookkeeping

def quillen_log_metric(l2_log_by_eigclass: Dict[object, object],
                       t: TorsionResult) -> Dict[object, mp.mpc]:
    """Per-eigenvalue-class Quillen correction: each class' squared-norm
    logarithm is shifted by -total torsion.  With no cohomology data the
    torsion-only entry is reported for the trivial class 1."""
    if not l2_log_by_eigclass:
        return {1: -t.total}
    return {zeta: to_mpc(v) - t.total
            for zeta, v in l2_log_by_eigclass.items()}
