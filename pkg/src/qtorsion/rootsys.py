"""Root systems of the simple Lie types in exact rational arithmetic.

Coordinates follow the standard orthogonal (Bourbaki) realizations: A_r is
embedded in r+1 coordinates, B_r/C_r/D_r/F_4 live in r coordinates, G_2 in
the sum-zero plane of R^3, E_6/E_7/E_8 inside R^8.  Every root, weight and
torus element is a tuple of fractions, so membership and regularity tests
are exact.

Conventions:

* a Weight is a covector on the Cartan torus; its pairing with a torus
  element X is the plain coordinate dot product, so ``beta(X) in ZZ`` is an
  exact rational statement;
* the inner product used for norms and Casimir eigenvalues is the Euclidean
  dot product rescaled by ``gram_scale`` so that <theta, theta + 2 rho> = 1
  for the highest root theta.  With this normalization the Casimir acting
  on the irreducible representation with shifted highest weight b equals
  |b|^2 - |rho|^2 and the adjoint representation has Casimir exactly 1;
* coroot pairings 2<x, gamma>/<gamma, gamma> are scale-free and therefore
  computed in plain Euclidean arithmetic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import mpmath as mp

from .errors import ConfigurationError, ConsistencyError, DomainError, ResourceError
from .linalg import invert, solve_linear
from .precision import frac_to_mpf, unit_phase, working_prec

WEYL_ENUMERATION_BOUND = 10 ** 6

Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Weight:
    """Exact covector on the Cartan torus in orthogonal coordinates."""

    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           tuple(Fraction(c) for c in self.coords))

    @staticmethod
    def of(*coords) -> "Weight":
        return Weight(tuple(Fraction(c) for c in coords))

    @staticmethod
    def zero(dim: int) -> "Weight":
        return Weight(tuple(Fraction(0) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def dot(self, other) -> Fraction:
        coords = other.coords if hasattr(other, "coords") else other
        return sum((a * b for a, b in zip(self.coords, coords)), Fraction(0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        return "Weight(%s)" % (", ".join(str(c) for c in self.coords))


@dataclass(frozen=True)
class TorusElement:
    """Point X of the Cartan algebra, flagged as the identity or regular."""

    coords: Tuple[Fraction, ...]
    regularity: str  # "identity" | "regular"

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           tuple(Fraction(c) for c in self.coords))
        if self.regularity not in ("identity", "regular"):
            raise DomainError("regularity must be 'identity' or 'regular'")
        if self.regularity == "identity" and any(c != 0 for c in self.coords):
            raise DomainError("identity element must have X = 0")

    @property
    def is_identity(self) -> bool:
        return self.regularity == "identity"


def identity_element(rs: "RootSystem") -> TorusElement:
    return TorusElement(tuple(Fraction(0) for _ in range(rs.ambient_dim)),
                        "identity")


def torus_element(rs: "RootSystem", coords: Sequence) -> TorusElement:
    """Classify X exactly: the zero vector is the identity, X with
    beta(X) not in ZZ for every root is regular, anything else is rejected."""
    coords = tuple(Fraction(c) for c in coords)
    if len(coords) != rs.ambient_dim:
        raise DomainError("element has %d coordinates, expected %d"
                          % (len(coords), rs.ambient_dim))
    if all(c == 0 for c in coords):
        return TorusElement(coords, "identity")
    for beta in rs.positive_roots:
        if beta.dot(coords).denominator == 1:
            raise DomainError(
                "element is neither the identity nor regular: root %r takes "
                "the integer value %s" % (beta, beta.dot(coords)))
    return TorusElement(coords, "regular")


# ---------------------------------------------------------------------------
# simple-root tables (Bourbaki orthogonal realizations)

def _parse_cartan_type(name: str) -> Tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])[_\- ]?(\d+)\s*", str(name))
    if not m:
        raise ConfigurationError("unrecognized Cartan type %r" % (name,))
    return m.group(1).upper(), int(m.group(2))


def _simple_root_coords(letter: str, rank: int) -> Tuple[int, List[Tuple[Fraction, ...]]]:
    F = Fraction

    def e(i: int, dim: int, c=1) -> List[Fraction]:
        v = [F(0)] * dim
        v[i] = F(c)
        return v

    if letter == "A":
        if not 1 <= rank <= 8:
            raise ConfigurationError("A_r supported for 1 <= r <= 8")
        dim = rank + 1
        simples = []
        for i in range(rank):
            v = [F(0)] * dim
            v[i], v[i + 1] = F(1), F(-1)
            simples.append(tuple(v))
        return dim, simples
    if letter in ("B", "C"):
        if not 2 <= rank <= 8:
            raise ConfigurationError("%s_r supported for 2 <= r <= 8" % letter)
        dim = rank
        simples = []
        for i in range(rank - 1):
            v = [F(0)] * dim
            v[i], v[i + 1] = F(1), F(-1)
            simples.append(tuple(v))
        last = e(rank - 1, dim, 1 if letter == "B" else 2)
        simples.append(tuple(last))
        return dim, simples
    if letter == "D":
        if not 4 <= rank <= 8:
            raise ConfigurationError("D_r supported for 4 <= r <= 8")
        dim = rank
        simples = []
        for i in range(rank - 1):
            v = [F(0)] * dim
            v[i], v[i + 1] = F(1), F(-1)
            simples.append(tuple(v))
        v = [F(0)] * dim
        v[rank - 2], v[rank - 1] = F(1), F(1)
        simples.append(tuple(v))
        return dim, simples
    if letter == "G":
        if rank != 2:
            raise ConfigurationError("G_2 is the only G type")
        return 3, [(F(1), F(-1), F(0)), (F(-2), F(1), F(1))]
    if letter == "F":
        if rank != 4:
            raise ConfigurationError("F_4 is the only F type")
        return 4, [
            (F(0), F(1), F(-1), F(0)),
            (F(0), F(0), F(1), F(-1)),
            (F(0), F(0), F(0), F(1)),
            (F(1, 2), F(-1, 2), F(-1, 2), F(-1, 2)),
        ]
    if letter == "E":
        if rank not in (6, 7, 8):
            raise ConfigurationError("E_r supported for r in {6, 7, 8}")
        h = F(1, 2)
        e8 = [
            (h, -h, -h, -h, -h, -h, -h, h),
            (F(1), F(1), F(0), F(0), F(0), F(0), F(0), F(0)),
            (F(-1), F(1), F(0), F(0), F(0), F(0), F(0), F(0)),
            (F(0), F(-1), F(1), F(0), F(0), F(0), F(0), F(0)),
            (F(0), F(0), F(-1), F(1), F(0), F(0), F(0), F(0)),
            (F(0), F(0), F(0), F(-1), F(1), F(0), F(0), F(0)),
            (F(0), F(0), F(0), F(0), F(-1), F(1), F(0), F(0)),
            (F(0), F(0), F(0), F(0), F(0), F(-1), F(1), F(0)),
        ]
        return 8, e8[:rank]
    raise ConfigurationError("unrecognized Cartan type letter %r" % letter)


_WEYL_ORDER = {
    "A": lambda r: factorial(r + 1),
    "B": lambda r: 2 ** r * factorial(r),
    "C": lambda r: 2 ** r * factorial(r),
    "D": lambda r: 2 ** (r - 1) * factorial(r),
    "G": lambda r: 12,
    "F": lambda r: 1152,
    "E": lambda r: {6: 51840, 7: 2903040, 8: 696729600}[r],
}


def reflect(gamma: Weight, x: Weight) -> Weight:
    """Reflection of x in the hyperplane orthogonal to gamma."""
    c = 2 * x.dot(gamma) / gamma.dot(gamma)
    return x - c * gamma


def _reflection_matrix(gamma: Weight, dim: int) -> Matrix:
    g = gamma.coords
    n2 = gamma.dot(gamma)
    return tuple(
        tuple((Fraction(1) if i == j else Fraction(0)) - 2 * g[i] * g[j] / n2
              for j in range(dim))
        for i in range(dim))


def apply_matrix(m: Matrix, w: Weight) -> Weight:
    return Weight(tuple(sum((row[j] * w.coords[j] for j in range(len(row))),
                            Fraction(0)) for row in m))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0))
              for j in range(n))
        for i in range(n))


class RootSystem:
    """Immutable root-system data; safe to share across threads."""

    def __init__(self, cartan_type: str):
        letter, rank = _parse_cartan_type(cartan_type)
        dim, simple_coords = _simple_root_coords(letter, rank)
        self.cartan_type = "%s%d" % (letter, rank)
        self.rank = rank
        self.ambient_dim = dim
        self.simple_roots: Tuple[Weight, ...] = tuple(Weight(c) for c in simple_coords)
        self.weyl_order = _WEYL_ORDER[letter](rank)

        roots = self._generate_roots()
        self._dual_simple_basis = self._build_dual_basis()
        pos = [g for g in roots if self._is_positive_root(g)]
        neg_check = {-g for g in pos}
        if len(pos) * 2 != len(roots) or neg_check != set(roots) - set(pos):
            raise ConsistencyError("root closure is not symmetric")
        pos.sort(key=lambda g: (self._height(g), g.coords))
        self.positive_roots: Tuple[Weight, ...] = tuple(pos)
        self.roots: Tuple[Weight, ...] = tuple(pos + [-g for g in pos])
        self.theta = pos[-1]
        if any(self._height(g) >= self._height(self.theta) for g in pos[:-1]):
            raise ConsistencyError("highest root is not unique")
        self.rho = Fraction(1, 2) * _wsum(pos, dim)

        c = self.theta.dot(self.theta) + 2 * self.theta.dot(self.rho)
        self.gram_scale = Fraction(1, 1) / c
        self.fundamental_weights = self._build_fundamental_weights()
        self._weyl_cache: Optional[Tuple[Tuple[Matrix, int], ...]] = None
        self._validate()

    # -- construction helpers ------------------------------------------------

    def _generate_roots(self) -> List[Weight]:
        roots = set(self.simple_roots) | {-a for a in self.simple_roots}
        frontier = list(roots)
        while frontier:
            new = []
            for g in frontier:
                for a in self.simple_roots:
                    s = reflect(a, g)
                    if s not in roots:
                        roots.add(s)
                        new.append(s)
            frontier = new
        return sorted(roots, key=lambda w: w.coords)

    def _build_dual_basis(self) -> Tuple[Weight, ...]:
        # delta_i in span(simples) with <delta_i, alpha_j> = delta_ij
        gram = [[a.dot(b) for b in self.simple_roots] for a in self.simple_roots]
        ginv = invert(gram)
        out = []
        for i in range(self.rank):
            v = Weight.zero(self.ambient_dim)
            for j in range(self.rank):
                v = v + ginv[i][j] * self.simple_roots[j]
            out.append(v)
        return tuple(out)

    def simple_coefficients(self, x: Weight) -> Tuple[Fraction, ...]:
        """Coefficients of x in the simple-root basis (x must lie in the span)."""
        coeffs = tuple(d.dot(x) for d in self._dual_simple_basis)
        recon = _wsum([c * a for c, a in zip(coeffs, self.simple_roots)],
                      self.ambient_dim)
        if recon != x:
            raise DomainError("%r is not in the root span" % (x,))
        return coeffs

    def _is_positive_root(self, g: Weight) -> bool:
        coeffs = tuple(d.dot(g) for d in self._dual_simple_basis)
        return all(c >= 0 for c in coeffs) and any(c > 0 for c in coeffs)

    def _height(self, g: Weight) -> Fraction:
        return sum((d.dot(g) for d in self._dual_simple_basis), Fraction(0))

    def _build_fundamental_weights(self) -> Tuple[Weight, ...]:
        # omega_i in span(simples) with <omega_i, alpha_j^vee> = delta_ij
        a = [[2 * sj.dot(sk) / sj.dot(sj) for sk in self.simple_roots]
             for sj in self.simple_roots]
        out = []
        for i in range(self.rank):
            b = [Fraction(1) if j == i else Fraction(0) for j in range(self.rank)]
            coeffs = solve_linear([[a[j][k] for k in range(self.rank)]
                                   for j in range(self.rank)], b)
            v = Weight.zero(self.ambient_dim)
            for k, ck in enumerate(coeffs):
                v = v + ck * self.simple_roots[k]
            out.append(v)
        return tuple(out)

    def _validate(self) -> None:
        for a in self.simple_roots:
            if self.pair_coroot(a, self.rho) != 1:
                raise ConsistencyError("<rho, alpha^vee> != 1 for a simple root")
        if self.knorm2(self.theta) + 2 * self.kdot(self.theta, self.rho) != 1:
            raise ConsistencyError("Casimir normalization <theta, theta+2rho> != 1")
        counts = {"A": self.rank * (self.rank + 1) // 2,
                  "B": self.rank ** 2, "C": self.rank ** 2,
                  "D": self.rank * (self.rank - 1),
                  "G": 6, "F": 24,
                  "E": {6: 36, 7: 63, 8: 120}.get(self.rank, -1)}
        expected = counts[self.cartan_type[0]]
        if len(self.positive_roots) != expected:
            raise ConsistencyError("positive-root count %d != expected %d"
                                   % (len(self.positive_roots), expected))

    # -- inner products ------------------------------------------------------

    def kdot(self, a: Weight, b: Weight) -> Fraction:
        """Dual Killing form on weights."""
        return self.gram_scale * a.dot(b)

    def knorm2(self, a: Weight) -> Fraction:
        return self.kdot(a, a)

    @property
    def gram(self) -> Matrix:
        s = self.gram_scale
        d = self.ambient_dim
        return tuple(tuple(s if i == j else Fraction(0) for j in range(d))
                     for i in range(d))

    @staticmethod
    def pair_coroot(gamma: Weight, b: Weight) -> Fraction:
        """<b, gamma^vee> = 2 <b, gamma> / <gamma, gamma>; scale-free."""
        return 2 * b.dot(gamma) / gamma.dot(gamma)

    def casimir(self, b: Weight) -> Fraction:
        """Casimir eigenvalue |b|^2 - |rho|^2 of the representation V_b."""
        return self.knorm2(b) - self.knorm2(self.rho)

    # -- Weyl machinery ------------------------------------------------------

    def weyl_elements(self, bound: int = WEYL_ENUMERATION_BOUND
                      ) -> Tuple[Tuple[Matrix, int], ...]:
        """All Weyl elements as (matrix, sign), enumerated once and cached."""
        if self.weyl_order > bound:
            raise ResourceError(
                "Weyl group of %s has order %d, exceeding the bound %d"
                % (self.cartan_type, self.weyl_order, bound))
        if self._weyl_cache is None:
            gens = [_reflection_matrix(a, self.ambient_dim)
                    for a in self.simple_roots]
            ident = tuple(tuple(Fraction(1) if i == j else Fraction(0)
                                for j in range(self.ambient_dim))
                          for i in range(self.ambient_dim))
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
            if len(elems) != self.weyl_order:
                raise ConsistencyError("enumerated %d Weyl elements, expected %d"
                                       % (len(elems), self.weyl_order))
            self._weyl_cache = tuple(sorted(elems.items()))
        return self._weyl_cache

    def dominant_conjugate(self, b: Weight) -> Tuple[Weight, int]:
        """Dominant chamber representative of b with the sign of the Weyl
        element used; sign 0 when b lies on a wall (singular)."""
        cur, sign = b, 1
        for _ in range(10000):
            for a in self.simple_roots:
                if cur.dot(a) < 0:
                    cur = reflect(a, cur)
                    sign = -sign
                    break
            else:
                break
        else:  # pragma: no cover
            raise ConsistencyError("dominant conjugation failed to terminate")
        if any(cur.dot(a) == 0 for a in self.simple_roots):
            sign = 0
        return cur, sign

    def is_dominant(self, mu: Weight) -> bool:
        return all(mu.dot(a) >= 0 for a in self.simple_roots)

    def is_dominant_integral(self, mu: Weight) -> bool:
        try:
            self.simple_coefficients(mu)
        except DomainError:
            return False
        return all(self.pair_coroot(a, mu) >= 0
                   and self.pair_coroot(a, mu).denominator == 1
                   for a in self.simple_roots)

    def in_root_lattice(self, x: Weight) -> bool:
        try:
            coeffs = self.simple_coefficients(x)
        except DomainError:
            return False
        return all(c.denominator == 1 for c in coeffs)

    def is_integral(self, mu: Weight) -> bool:
        try:
            self.simple_coefficients(mu)
        except DomainError:
            return False
        return all(self.pair_coroot(a, mu).denominator == 1
                   for a in self.simple_roots)


def _wsum(ws: Iterable[Weight], dim: int) -> Weight:
    acc = Weight.zero(dim)
    for w in ws:
        acc = acc + w
    return acc


_ROOT_SYSTEM_CACHE: Dict[str, RootSystem] = {}


def build_root_system(cartan_type: str) -> RootSystem:
    """Construct (and cache) the root system for a simple Cartan type."""
    letter, rank = _parse_cartan_type(cartan_type)
    key = "%s%d" % (letter, rank)
    if key not in _ROOT_SYSTEM_CACHE:
        _ROOT_SYSTEM_CACHE[key] = RootSystem(key)
    return _ROOT_SYSTEM_CACHE[key]


def weyl_group_elements(rs: RootSystem, bound: int = WEYL_ENUMERATION_BOUND
                        ) -> Iterator[Tuple[Matrix, int]]:
    """Iterate over (action matrix, sign) for every Weyl element."""
    return iter(rs.weyl_elements(bound))


def alt_sum(rs: RootSystem, b: Weight, x: TorusElement,
            dps: int | None = None) -> mp.mpc:
    """Weyl-antisymmetrized exponential sum sum_w sign(w) e^{2 pi i (w b)(X)}.

    Exactly zero for b fixed by any reflection; otherwise evaluated at the
    working precision with exact rational phases.
    """
    for gamma in rs.positive_roots:
        if b.dot(gamma) == 0:
            return mp.mpc(0)
    with working_prec(dps):
        total = mp.mpc(0)
        for m, sign in rs.weyl_elements():
            t = apply_matrix(m, b).dot(x.coords)
            total += sign * unit_phase(t)
        return total


def shifted_dominant_weights(rs: RootSystem, knorm2_bound: Fraction,
                             congruent_to: Weight | None = None) -> List[Weight]:
    """All b = rho + mu with mu dominant integral and |b|^2 <= bound in the
    Killing norm, optionally restricted to mu = congruent_to mod root lattice.

    The Killing norm of rho + sum m_i omega_i is strictly increasing in every
    coefficient m_i, which makes the recursive enumeration exact.
    """
    knorm2_bound = Fraction(knorm2_bound)
    fund = rs.fundamental_weights
    out: List[Weight] = []

    def cong_ok(mu: Weight) -> bool:
        if congruent_to is None:
            return True
        return rs.in_root_lattice(mu - congruent_to)

    def rec(i: int, mu: Weight) -> None:
        if rs.knorm2(rs.rho + mu) > knorm2_bound:
            return
        if i == rs.rank:
            if cong_ok(mu):
                out.append(rs.rho + mu)
            return
        m = 0
        while True:
            nxt = mu + m * fund[i]
            if rs.knorm2(rs.rho + nxt) > knorm2_bound:
                break
            rec(i + 1, nxt)
            m += 1

    rec(0, Weight.zero(rs.ambient_dim))
    out.sort(key=lambda b: (rs.knorm2(b), b.coords))
    return out


def dominant_weights_up_to(rs: RootSystem, casimir_cutoff) -> List[Weight]:
    """Dominant integral b = rho + mu with Casimir |b|^2-|rho|^2 <= cutoff."""
    cutoff = Fraction(casimir_cutoff)
    if cutoff < 0:
        raise DomainError("cutoff must be nonnegative")
    return shifted_dominant_weights(rs, rs.knorm2(rs.rho) + cutoff)
