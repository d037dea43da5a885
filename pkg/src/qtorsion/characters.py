"""Character theory: Weyl character/dimension formulas, Freudenthal weight
multiplicities, K-branching, and the integer-parameter character families
feeding the zeta calculus.

Everything structural (multiplicities, dimensions, polynomial character
families at the identity) is exact rational arithmetic; only character
values at regular torus elements are floating, evaluated at the working
precision with exact rational phases.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Sequence, Tuple, Union

import mpmath as mp

from .errors import ConsistencyError, DomainError
from .precision import frac_to_mpf, to_mpc, unit_phase, working_prec
from .rootsys import (RootSystem, TorusElement, Weight, alt_sum,
                      apply_matrix, reflect, _wsum)
from .wolf import WolfSpaceData

Coef = Union[Fraction, mp.mpc]


# ---------------------------------------------------------------------------
# exponential polynomials  P(l) = sum_j c_j l^{n_j} e^{i l phi_j}

@dataclass(frozen=True)
class ExponentialPolynomial:
    """Finite sum of terms (c, n, phi) representing c l^n e^{i l phi}.

    Phases are carried as exact rationals phi_frac = phi / (2 pi) in [0, 1),
    so the zeta calculus can branch on phi = 0 mod 2 pi exactly.  Terms are
    stored merged: no two terms share (n, phi_frac), and stored coefficients
    are nonzero.
    """

    terms: Tuple[Tuple[Coef, int, Fraction], ...]

    @staticmethod
    def from_terms(terms) -> "ExponentialPolynomial":
        merged: Dict[Tuple[int, Fraction], Coef] = {}
        for c, n, phi in terms:
            if isinstance(c, int):
                c = Fraction(c)
            n = int(n)
            if n < 0:
                raise DomainError("powers must be nonnegative")
            phi = Fraction(phi) % 1
            key = (n, phi)
            if key in merged:
                merged[key] = merged[key] + c
            else:
                merged[key] = c
        clean = tuple(sorted(((c, n, phi) for (n, phi), c in merged.items()
                              if c != 0),
                             key=lambda t: (t[1], t[2])))
        return ExponentialPolynomial(clean)

    @staticmethod
    def zero() -> "ExponentialPolynomial":
        return ExponentialPolynomial(())

    @staticmethod
    def from_poly(coeffs: Sequence[Fraction]) -> "ExponentialPolynomial":
        """Pure polynomial sum_n coeffs[n] l^n (phase 0)."""
        return ExponentialPolynomial.from_terms(
            (Fraction(c), n, Fraction(0)) for n, c in enumerate(coeffs))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c, _, _ in self.terms)

    @property
    def degree(self) -> int:
        return max((n for _, n, _ in self.terms), default=0)

    def coeff_abs_sum(self) -> float:
        return float(sum(abs(to_mpc(c)) for c, _, _ in self.terms))

    def eval(self, ell: int):
        """Value at an integer argument (mpc, or Fraction when exact and
        phase-free)."""
        ell = int(ell)
        if self.is_exact and all(phi == 0 for _, _, phi in self.terms):
            return sum((c * ell ** n for c, n, _ in self.terms), Fraction(0))
        total = mp.mpc(0)
        for c, n, phi in self.terms:
            total += to_mpc(c) * ell ** n * unit_phase(ell * phi)
        return total

    def scaled(self, c) -> "ExponentialPolynomial":
        return ExponentialPolynomial.from_terms(
            (c * a, n, phi) for a, n, phi in self.terms)

    def __add__(self, other: "ExponentialPolynomial") -> "ExponentialPolynomial":
        return ExponentialPolynomial.from_terms(self.terms + other.terms)


# ---------------------------------------------------------------------------
# dimension and character values

def dimension(rs: RootSystem, b: Weight) -> Fraction:
    """Weyl dimension product prod <b, gamma> / <rho, gamma>; exact, signed
    for non-dominant b, zero for singular b."""
    num = Fraction(1)
    den = Fraction(1)
    for g in rs.positive_roots:
        num *= b.dot(g)
        den *= rs.rho.dot(g)
    return num / den


def character_value(rs: RootSystem, b: Weight, x: TorusElement,
                    dps: int | None = None) -> mp.mpc:
    """Weyl character quotient Alt{b}(X)/Alt{rho}(X) at a regular element.

    Follows the signed convention: b need not be dominant, and reflecting b
    flips the sign.  The identity is rejected; use dimension() there.
    """
    if x.is_identity:
        raise DomainError("character_value requires a regular element; "
                          "use dimension() at the identity")
    if x.regularity != "regular":
        raise DomainError("character_value requires a regular element")
    with working_prec(dps):
        num = alt_sum(rs, b, x, dps=dps)
        den = alt_sum(rs, rs.rho, x, dps=dps)
        return num / den


# ---------------------------------------------------------------------------
# Freudenthal weight multiplicities over an arbitrary (sub)root datum

_freudenthal_lock = threading.Lock()
_FREUDENTHAL_CACHE: Dict[Tuple, Dict[Weight, int]] = {}


def _datum_dominant_conjugate(simples: Sequence[Weight], v: Weight) -> Weight:
    cur = v
    changed = True
    guard = 0
    while changed:
        changed = False
        for a in simples:
            if cur.dot(a) < 0:
                cur = reflect(a, cur)
                changed = True
        guard += 1
        if guard > 100000:  # pragma: no cover
            raise ConsistencyError("dominant conjugation failed to terminate")
    return cur


def _datum_coeffs(simples: Sequence[Weight], x: Weight):
    """Coefficients of x in the simple basis of the datum, or None if x is
    outside the span."""
    from .linalg import rref
    nb = len(simples)
    dim = x.dim
    m = [[simples[j].coords[i] for j in range(nb)] + [x.coords[i]]
         for i in range(dim)]
    red, pivots = rref(m)
    coeffs = [Fraction(0)] * nb
    for r, p in enumerate(pivots):
        if p == nb:
            return None
        coeffs[p] = red[r][nb]
    for i in range(dim):
        if sum(coeffs[j] * simples[j].coords[i] for j in range(nb)) != x.coords[i]:
            return None
    return coeffs


def freudenthal_weight_table(positive: Sequence[Weight],
                             simples: Sequence[Weight],
                             hw: Weight,
                             cache_key: Tuple | None = None
                             ) -> Dict[Weight, int]:
    """Exact weight multiplicities of the irreducible module with highest
    weight hw over the root datum (positive, simples).

    Works for any semisimple datum given by explicit root lists, e.g. the
    k_0 subsystem of a Wolf space.  Results are memoized for the session;
    the cache is guarded by a lock so concurrent readers are safe.
    """
    if cache_key is None:
        cache_key = (tuple(g.coords for g in positive), hw.coords)
    with _freudenthal_lock:
        hit = _FREUDENTHAL_CACHE.get(cache_key)
    if hit is not None:
        return hit

    if not positive:
        if not hw.is_zero():
            raise DomainError("nontrivial weight for an empty root datum")
        table = {hw: 1}
        with _freudenthal_lock:
            _FREUDENTHAL_CACHE[cache_key] = table
        return table

    for a in simples:
        p = 2 * hw.dot(a) / a.dot(a)
        if p < 0 or p.denominator != 1:
            raise DomainError("highest weight is not dominant integral "
                              "for the datum")

    dim = hw.dim
    rho_d = Fraction(1, 2) * _wsum(positive, dim)

    dom_cache: Dict[Weight, Weight] = {}

    def domconj(v: Weight) -> Weight:
        r = dom_cache.get(v)
        if r is None:
            r = _datum_dominant_conjugate(simples, v)
            dom_cache[v] = r
        return r

    def is_weight(v: Weight) -> bool:
        # saturation criterion: dominant conjugate <= hw in the root order
        d = domconj(v)
        coeffs = _datum_coeffs(simples, hw - d)
        if coeffs is None:
            return False
        return all(c >= 0 and c.denominator == 1 for c in coeffs)

    # closure of the weight support under subtracting simple roots
    weights = {hw}
    frontier = [hw]
    while frontier:
        new = []
        for v in frontier:
            for a in simples:
                cand = v - a
                if cand not in weights and is_weight(cand):
                    weights.add(cand)
                    new.append(cand)
        frontier = new

    dominant = sorted({domconj(v) for v in weights},
                      key=lambda v: (sum(_datum_coeffs(simples, hw - v)),
                                     v.coords))
    # ordered by height of hw - v, so dependencies come earlier
    mult: Dict[Weight, int] = {}
    hw_norm = (hw + rho_d).dot(hw + rho_d)
    for v in dominant:
        if v == hw:
            mult[v] = 1
            continue
        den = hw_norm - (v + rho_d).dot(v + rho_d)
        if den == 0:
            raise ConsistencyError("vanishing Freudenthal denominator")
        num = Fraction(0)
        for g in positive:
            j = 1
            while True:
                u = v + j * g
                if u not in weights:
                    break
                num += mult[domconj(u)] * u.dot(g)
                j += 1
        m = 2 * num / den
        if m.denominator != 1 or m <= 0:
            raise ConsistencyError("non-integral Freudenthal multiplicity")
        mult[v] = int(m)

    table = {v: mult[domconj(v)] for v in weights}
    with _freudenthal_lock:
        _FREUDENTHAL_CACHE[cache_key] = table
    return table


@dataclass(frozen=True)
class WeightMultiplicityTable:
    head: Weight                       # b = rho + highest weight
    entries: Dict[Weight, int]         # weight -> multiplicity

    @property
    def total(self) -> int:
        return sum(self.entries.values())


def weight_multiplicities(rs: RootSystem, b: Weight) -> WeightMultiplicityTable:
    """Freudenthal table for the G-irreducible with b = rho + highest weight."""
    mu = b - rs.rho
    if not rs.is_dominant_integral(mu):
        raise DomainError("b - rho must be dominant integral")
    table = freudenthal_weight_table(rs.positive_roots, rs.simple_roots, mu,
                                     cache_key=(rs.cartan_type, mu.coords))
    return WeightMultiplicityTable(head=b, entries=table)


# ---------------------------------------------------------------------------
# character families  P(l) = chi_{rho + lambda + l delta}(e^X)

def character_ell_family(w: WolfSpaceData, lam: Weight, delta: Weight,
                         x: TorusElement, dps: int | None = None
                         ) -> ExponentialPolynomial:
    """Exponential polynomial P with P(l) = chi_{rho+lambda+l delta}(e^X)
    for every integer l.

    At the identity this is the Weyl dimension product expanded as an exact
    polynomial in l; at a regular element it is a pure-phase sum over the
    Weyl group with exact rational phases, merged on exact phase collision
    before any floating conversion.
    """
    rs = w.rs
    allowed = {(w.alpha + b).coords for b in w.psi0} | \
              {(-(w.alpha + b)).coords for b in w.psi0}
    if delta.coords not in allowed:
        raise DomainError("delta must be +-(alpha+beta) for some beta in Psi_0")
    lamb = rs.rho + lam

    if x.is_identity:
        # prod_gamma <rho+lam+l delta, gamma> / <rho, gamma> as a polynomial
        coeffs = [Fraction(1)]
        for g in rs.positive_roots:
            a0 = lamb.dot(g)
            a1 = delta.dot(g)
            new = [Fraction(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i] += c * a0
                new[i + 1] += c * a1
            coeffs = new
        den = Fraction(1)
        for g in rs.positive_roots:
            den *= rs.rho.dot(g)
        return ExponentialPolynomial.from_poly([c / den for c in coeffs])

    if x.regularity != "regular":
        raise DomainError("character families need the identity or a "
                          "regular element")

    with working_prec(dps):
        den = alt_sum(rs, rs.rho, x, dps=dps)
        # merge on the exact rational phase before converting anything
        buckets: Dict[Fraction, mp.mpc] = {}
        for m, sign in rs.weyl_elements():
            head = apply_matrix(m, lamb).dot(x.coords)
            phi = apply_matrix(m, delta).dot(x.coords) % 1
            c = sign * unit_phase(head) / den
            buckets[phi] = buckets.get(phi, mp.mpc(0)) + c
        return ExponentialPolynomial.from_terms(
            (c, 0, phi) for phi, c in sorted(buckets.items()))


# ---------------------------------------------------------------------------
# branching dim Hom_K(V_pi, Lambda^q E (x) Sym^{k+q} H (x) V^{K_0})

def _convolve(a: Dict[Weight, int], b: Dict[Weight, int]) -> Dict[Weight, int]:
    out: Dict[Weight, int] = {}
    for wa, ma in a.items():
        for wb, mb in b.items():
            key = wa + wb
            out[key] = out.get(key, 0) + ma * mb
    return out


def uq_weight_function(w: WolfSpaceData, k: int, lam_circ: Weight,
                       q: int) -> Dict[Weight, int]:
    """Torus weight multiplicities of Lambda^q E (x) Sym^{k+q} H (x)
    V^{K_0}_{lam_circ}, built by convolution of the three factors."""
    if q < 0 or q > 2 * w.n:
        raise DomainError("q out of range 0..2n")
    dim = w.rs.ambient_dim

    lam_weights: Dict[Weight, int] = {}
    for subset in combinations(range(len(w.psi0)), q):
        key = _wsum([w.psi0[i] for i in subset], dim)
        lam_weights[key] = lam_weights.get(key, 0) + 1

    sym_weights: Dict[Weight, int] = {}
    for j in range(k + q + 1):
        key = (k + q - 2 * j) * w.alpha
        sym_weights[key] = sym_weights.get(key, 0) + 1

    k0_table = freudenthal_weight_table(
        w.sigma_k0_plus, w.k0_simple_roots, lam_circ,
        cache_key=("K0", w.rs.cartan_type, lam_circ.coords))

    return _convolve(_convolve(lam_weights, sym_weights), k0_table)


def _k_type_multiplicity(w: WolfSpaceData, table: Dict[Weight, int],
                         mu: Weight) -> int:
    """Multiplicity of the K-type with highest weight mu in a K-module given
    by its torus weight table, via Weyl-group alternation over W_K."""
    rho_k = w.rho_k
    total = 0
    for m, sign in w.weyl_k_elements():
        shifted = apply_matrix(m, mu + rho_k) - rho_k
        total += sign * table.get(shifted, 0)
    return total


def branch_dim_hom(w: WolfSpaceData, b_pi: Weight, k: int, lam_circ: Weight,
                   q: int) -> int:
    """dim Hom_K(V_pi, Lambda^q E (x) Sym^{k+q} H (x) V^{K_0}_{lam_circ}).

    Both sides are decomposed into K-types by alternating sums over W_K and
    the decompositions are paired.  Only K-weights occurring in the tensor
    factor enter as candidates, which enforces the parity (lattice)
    constraint on the Lie-algebra level.
    """
    rs = w.rs
    if k < 0 or k % 2 != 0:
        raise DomainError("k must be an even nonnegative integer")
    mu_pi = b_pi - rs.rho
    if not rs.is_dominant_integral(mu_pi):
        raise DomainError("b_pi must be rho + a dominant integral weight")
    w.validate_lambda_circ(lam_circ)

    table_pi = freudenthal_weight_table(
        rs.positive_roots, rs.simple_roots, mu_pi,
        cache_key=(rs.cartan_type, mu_pi.coords))
    table_uq = uq_weight_function(w, k, lam_circ, q)

    k_simples = w.k_simple_roots
    total = 0
    for mu in sorted(set(table_uq) & set(table_pi), key=lambda v: v.coords):
        if any(mu.dot(a) < 0 for a in k_simples):
            continue
        m_u = _k_type_multiplicity(w, table_uq, mu)
        m_p = _k_type_multiplicity(w, table_pi, mu)
        if m_u < 0 or m_p < 0:
            raise ConsistencyError("negative K-type multiplicity")
        total += m_u * m_p
    return total


def dimension_for_datum(positive: Sequence[Weight], hw: Weight) -> Fraction:
    """Weyl dimension formula over an explicit positive-root list."""
    if not positive:
        return Fraction(1)
    dim = hw.dim
    rho_d = Fraction(1, 2) * _wsum(positive, dim)
    num = Fraction(1)
    den = Fraction(1)
    for g in positive:
        num *= (hw + rho_d).dot(g)
        den *= rho_d.dot(g)
    return num / den
