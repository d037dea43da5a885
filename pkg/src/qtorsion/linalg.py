"""Small exact linear-algebra helpers over Fraction.

Dense routines (Gaussian elimination, nullspace) are used for kernel/basis
constructions; SpMat is a sparse row-major matrix used for the operator
algebra of the finite-dimensional tensor models, where operators touch only
a handful of basis vectors each.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

Vec = Tuple[Fraction, ...]


def solve_linear(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve the square system a x = b exactly; raises on singular a."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def invert(a: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Exact inverse of a square rational matrix."""
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(solve_linear(a, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = [list(map(Fraction, r)) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots: List[int] = []
    row = 0
    for col in range(nc):
        piv = next((r for r in range(row, nr) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vec]:
    """Basis of the kernel of the linear map given by `rows` (ncols unknowns)."""
    if not rows:
        return [tuple(Fraction(1) if i == j else Fraction(0) for i in range(ncols))
                for j in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -m[r][f]
        basis.append(tuple(v))
    return basis


def solve_in_span(basis: Sequence[Vec], target: Vec) -> List[Fraction]:
    """Coordinates of `target` in the span of `basis`; raises if outside."""
    nb = len(basis)
    dim = len(target)
    # least-squares-free exact solve: pick pivot rows via elimination
    m = [[basis[j][i] for j in range(nb)] + [target[i]] for i in range(dim)]
    red, pivots = rref(m)
    coords = [Fraction(0)] * nb
    for r, p in enumerate(pivots):
        if p == nb:
            raise ValueError("target not in span")
        coords[p] = red[r][nb]
    # verify (guards against inconsistent overdetermined systems)
    for i in range(dim):
        if sum(coords[j] * basis[j][i] for j in range(nb)) != target[i]:
            raise ValueError("target not in span")
    return coords


class SpMat:
    """Sparse rational matrix, row-major nested dicts; immutable by convention."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int,
                 rows: Dict[int, Dict[int, Fraction]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: Dict[int, Dict[int, Fraction]] = rows if rows is not None else {}

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "SpMat":
        return SpMat(nrows, ncols)

    @staticmethod
    def identity(n: int) -> "SpMat":
        return SpMat(n, n, {i: {i: Fraction(1)} for i in range(n)})

    def set(self, i: int, j: int, v: Fraction) -> None:
        if v == 0:
            return
        self.rows.setdefault(i, {})[j] = v

    def add_to(self, i: int, j: int, v: Fraction) -> None:
        if v == 0:
            return
        row = self.rows.setdefault(i, {})
        nv = row.get(j, Fraction(0)) + v
        if nv == 0:
            row.pop(j, None)
            if not row:
                self.rows.pop(i, None)
        else:
            row[j] = nv

    def get(self, i: int, j: int) -> Fraction:
        return self.rows.get(i, {}).get(j, Fraction(0))

    def __add__(self, other: "SpMat") -> "SpMat":
        out = SpMat(self.nrows, self.ncols,
                    {i: dict(r) for i, r in self.rows.items()})
        for i, r in other.rows.items():
            for j, v in r.items():
                out.add_to(i, j, v)
        return out

    def __sub__(self, other: "SpMat") -> "SpMat":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "SpMat":
        if c == 0:
            return SpMat(self.nrows, self.ncols)
        return SpMat(self.nrows, self.ncols,
                     {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()})

    def __matmul__(self, other: "SpMat") -> "SpMat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = SpMat(self.nrows, other.ncols)
        for i, ra in self.rows.items():
            acc: Dict[int, Fraction] = {}
            for k, va in ra.items():
                rb = other.rows.get(k)
                if not rb:
                    continue
                for j, vb in rb.items():
                    acc[j] = acc.get(j, Fraction(0)) + va * vb
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                out.rows[i] = acc
        return out

    def anticommutator(self, other: "SpMat") -> "SpMat":
        return (self @ other) + (other @ self)

    def entries(self):
        for i, r in sorted(self.rows.items()):
            for j, v in sorted(r.items()):
                yield i, j, v

    def max_abs(self) -> Fraction:
        best = Fraction(0)
        for _, _, v in self.entries():
            if abs(v) > best:
                best = abs(v)
        return best

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpMat):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and \
            (self - other).is_zero()

    def __hash__(self):
        raise TypeError("SpMat is unhashable")
