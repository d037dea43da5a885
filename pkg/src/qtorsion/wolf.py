"""Quaternionic symmetric-space combinatorics derived from a root system.

For a simple compact group the associated quaternionic symmetric space has
isotropy algebra sp(1) + k_0, where sp(1) is the highest-root subalgebra.
Writing theta for the highest root and alpha = theta/2, the roots split by
their theta-coroot level:

    level +-2 : +-theta = +-2 alpha         (the sp(1) roots)
    level +-1 : +-(alpha + beta), beta in Psi_0   (the H (x) E part)
    level   0 : the roots of k_0.

Psi_0 is the multiset of torus weights of the isotropy representation on E;
it has 2n elements for quaternionic dimension n and is closed under
negation.  All fields are exact and validated at construction time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import ConsistencyError, DomainError
from .linalg import solve_linear
from .rootsys import (Matrix, RootSystem, Weight, _matmul,
                      _reflection_matrix, _wsum)


def _is_positive_weight(rs: RootSystem, x: Weight) -> bool:
    # same order functional as the root order: rho-pairing, ties broken
    # lexicographically (needed for Psi_0 elements off the root lattice)
    d = rs.rho.dot(x)
    if d != 0:
        return d > 0
    return x.coords > tuple(Fraction(0) for _ in x.coords)


@dataclass
class WolfSpaceData:
    rs: RootSystem
    alpha: Weight
    psi0: Tuple[Weight, ...]
    sigma_k_plus: Tuple[Weight, ...]
    sigma_k0_plus: Tuple[Weight, ...]
    rho_k: Weight
    rho_k_circ: Weight
    n: int
    kappa_over_8: Fraction
    k0_simple_roots: Tuple[Weight, ...] = field(default=())
    _wk_cache: Optional[Tuple[Tuple[Matrix, int], ...]] = field(
        default=None, repr=False, compare=False)

    @property
    def psi0_positive(self) -> Tuple[Weight, ...]:
        return tuple(b for b in self.psi0 if _is_positive_weight(self.rs, b))

    @property
    def k_simple_roots(self) -> Tuple[Weight, ...]:
        # theta is orthogonal to every k_0 root, so it stays simple in Sigma_K+
        return self.k0_simple_roots + (self.rs.theta,)

    def weyl_k_elements(self) -> Tuple[Tuple[Matrix, int], ...]:
        """Elements of W_K = W_{K_0} x W_{Sp(1)} as (matrix, sign)."""
        if self._wk_cache is None:
            dim = self.rs.ambient_dim
            gens = [_reflection_matrix(g, dim) for g in self.k_simple_roots]
            ident = tuple(tuple(Fraction(1) if i == j else Fraction(0)
                                for j in range(dim)) for i in range(dim))
            elems: Dict[Matrix, int] = {ident: 1}
            frontier = [ident]
            while frontier:
                new = []
                for m in frontier:
                    s = elems[m]
                    for g in gens:
                        p = _matmul(g, m)
                        if p not in elems:
                            elems[p] = -s
                            new.append(p)
                frontier = new
            self._wk_cache = tuple(sorted(elems.items()))
        return self._wk_cache

    def k0_fundamental_weights(self) -> Tuple[Weight, ...]:
        """Fundamental weights of the semisimple part of k_0, in the span of
        its simple roots (hence orthogonal to alpha)."""
        simples = self.k0_simple_roots
        if not simples:
            return ()
        a = [[2 * sj.dot(sk) / sj.dot(sj) for sk in simples] for sj in simples]
        out = []
        for i in range(len(simples)):
            b = [Fraction(1) if j == i else Fraction(0)
                 for j in range(len(simples))]
            coeffs = solve_linear(a, b)
            v = Weight.zero(self.rs.ambient_dim)
            for c, s in zip(coeffs, simples):
                v = v + c * s
            out.append(v)
        return tuple(out)

    def lambda_circ_from_fundamental(self, coeffs) -> Weight:
        """Convert fundamental-weight coordinates of K_0 to a torus weight."""
        fund = self.k0_fundamental_weights()
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != len(fund):
            raise DomainError("expected %d fundamental-weight coordinates "
                              "for K_0 of %s, got %d"
                              % (len(fund), self.rs.cartan_type, len(coeffs)))
        if any(c < 0 for c in coeffs):
            raise DomainError("lambda_circ must be dominant: coordinates >= 0")
        if any(c.denominator != 1 for c in coeffs):
            raise DomainError("lambda_circ coordinates must be integers")
        return _wsum([c * f for c, f in zip(coeffs, fund)], self.rs.ambient_dim)

    def validate_lambda_circ(self, lam_circ: Weight) -> None:
        if lam_circ.dot(self.alpha) != 0:
            raise DomainError("lambda_circ must be orthogonal to alpha")
        for g in self.k0_simple_roots:
            p = self.rs.pair_coroot(g, lam_circ)
            if p < 0 or p.denominator != 1:
                raise DomainError("lambda_circ is not dominant integral for K_0")


def _simple_system(positive: Tuple[Weight, ...]) -> Tuple[Weight, ...]:
    pos = set(positive)
    simples = []
    for g in positive:
        if not any(g - h in pos for h in pos if h != g):
            simples.append(g)
    return tuple(sorted(simples, key=lambda w: w.coords))


def build_wolf_space(rs: RootSystem) -> WolfSpaceData:
    """Derive alpha, Psi_0 and the K-side data; fails loudly on any
    violated structural identity (which would signal a wrong root order)."""
    theta = rs.theta
    alpha = Fraction(1, 2) * theta
    dim = rs.ambient_dim

    level = {g: rs.pair_coroot(theta, g) for g in rs.positive_roots}
    level_one = tuple(g for g in rs.positive_roots if level[g] == 1)
    level_two = tuple(g for g in rs.positive_roots if level[g] == 2)
    if level_two != (theta,):
        raise ConsistencyError("level-2 part is not exactly the highest root")

    psi0 = tuple(sorted((g - alpha for g in level_one), key=lambda w: w.coords))
    if len(psi0) % 2 != 0:
        raise ConsistencyError("|Psi_0| must be even")
    n = len(psi0) // 2
    if set(psi0) != {-b for b in psi0}:
        raise ConsistencyError("Psi_0 is not closed under negation")

    sigma_k0 = tuple(g for g in rs.positive_roots if level[g] == 0)
    sigma_k = tuple(sorted(sigma_k0 + (theta,), key=lambda w: w.coords))
    rho_k = Fraction(1, 2) * _wsum(sigma_k, dim)
    rho_k_circ = Fraction(1, 2) * _wsum(sigma_k0, dim)

    if rs.rho - rho_k_circ != (n + 1) * alpha:
        raise ConsistencyError("rho - rho_{K_0} != (n+1) alpha")

    data = WolfSpaceData(
        rs=rs, alpha=alpha, psi0=psi0,
        sigma_k_plus=sigma_k, sigma_k0_plus=sigma_k0,
        rho_k=rho_k, rho_k_circ=rho_k_circ, n=n,
        kappa_over_8=n * (n + 2) * rs.knorm2(alpha),
        k0_simple_roots=_simple_system(sigma_k0),
    )

    # Sigma_G+ \ Sigma_K+ must be exactly {alpha +- beta : beta in Psi_0, beta > 0}
    diff = set(rs.positive_roots) - set(sigma_k)
    built = set()
    for b in data.psi0_positive:
        built.add(alpha + b)
        built.add(alpha - b)
    if diff != built or len(data.psi0_positive) != n:
        raise ConsistencyError(
            "Sigma_G+ \\ Sigma_K+ does not match {alpha +- beta}")
    for b in psi0:
        if b.dot(alpha) != 0:
            raise ConsistencyError("Psi_0 weights must be orthogonal to alpha")
    return data


def psi_split(w: WolfSpaceData, lam: Weight) -> Tuple[List[Weight], List[Weight]]:
    """Partition Psi_0 by the sign of <(alpha+beta)^vee, rho+lambda>;
    the nonnegative side comes first.  Exact rational arithmetic."""
    if lam.dim != w.rs.ambient_dim:
        raise DomainError("lambda has wrong dimension")
    target = w.rs.rho + lam
    plus, minus = [], []
    for b in w.psi0:
        p = w.rs.pair_coroot(w.alpha + b, target)
        (plus if p >= 0 else minus).append(b)
    return plus, minus
