"""Dense exact linear algebra over ``F_p`` and ``QQ``.

Matrices over ``F_p`` with ``p < 2**31`` live in ``int64`` numpy arrays; larger
primes and the rationals use ``object`` arrays of Python ints / Fractions.
Elimination pivots on the first nonzero entry, scanning columns left to right
and rows top to bottom, so every echelon form is reproducible.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import InconsistentSystem, PreconditionError
from .fields import FieldSpec

_INT64_SAFE = 2**31


def _dtype_for(fld: FieldSpec):
    return np.int64 if fld.p is not None and fld.p < _INT64_SAFE else object


def as_array(rows, fld: FieldSpec, shape: Optional[tuple] = None) -> np.ndarray:
    """Coerce nested rows (or an array) into the storage array for ``fld``."""
    dtype = _dtype_for(fld)
    rows = [list(r) for r in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    out = np.empty(shape, dtype=dtype)
    if dtype is np.int64:
        out[...] = 0
    else:
        out[...] = fld.zero
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = fld(x)
    return out


def zeros(nrows: int, ncols: int, fld: FieldSpec) -> np.ndarray:
    dtype = _dtype_for(fld)
    if dtype is np.int64:
        return np.zeros((nrows, ncols), dtype=np.int64)
    out = np.empty((nrows, ncols), dtype=object)
    out[...] = fld.zero
    return out


def matmul(a: np.ndarray, b: np.ndarray, fld: FieldSpec) -> np.ndarray:
    """Exact product ``a @ b`` over ``fld`` without int64 overflow."""
    if a.shape[1] != b.shape[0]:
        raise PreconditionError(f"shape mismatch {a.shape} @ {b.shape}")
    if fld.p is None or a.dtype == object:
        out = a.dot(b) if a.size and b.size else zeros(a.shape[0], b.shape[1], fld)
        return out % fld.p if fld.p is not None else out
    p = fld.p
    block = max(1, (2**63 - 1) // ((p - 1) ** 2 + 1) - 1)
    inner = a.shape[1]
    if inner <= block:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for start in range(0, inner, block):
        out = (out + (a[:, start:start + block] @ b[start:start + block]) % p) % p
    return out


@dataclass
class Echelon:
    """Reduced row echelon data: nonzero rows (pivot entries 1) and pivot columns."""

    rows: np.ndarray
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(a: np.ndarray, fld: FieldSpec) -> Echelon:
    """Reduced row echelon form of ``a`` (the input is not modified)."""
    a = a.copy()
    nrows, ncols = a.shape
    p = fld.p
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = fld.inv(a[r, c])
        if p is None:
            a[r, c:] = a[r, c:] * inv
        else:
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col != 0)
        if others.size:
            upd = np.outer(col[others], a[r, c:])
            if p is None:
                a[others, c:] = a[others, c:] - upd
            else:
                a[others, c:] = (a[others, c:] - upd % p) % p
        pivots.append(c)
        r += 1
    return Echelon(a[:r], tuple(pivots))


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Fraction-free (Bareiss) rank of a rational matrix."""
    m = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = lcm(1, *(x.denominator for x in r))
        m.append([int(x * den) for x in r])
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for i in range(rank + 1, nrows):
            mi = m[i]
            f = mi[c]
            mr = m[rank]
            for j in range(c + 1, ncols):
                mi[j] = (pv * mi[j] - f * mr[j]) // prev
            mi[c] = 0
        prev = pv
        rank += 1
    return rank


class RankMatrix:
    """An exact matrix over a :class:`FieldSpec` with a compute-once echelon cache."""

    def __init__(self, rows, fld: FieldSpec, shape: Optional[tuple] = None):
        self.field = fld
        if isinstance(rows, np.ndarray) and rows.ndim == 2:
            if rows.dtype == _dtype_for(fld) == np.int64:
                self.data = rows % fld.p
            else:
                self.data = as_array(rows.tolist(), fld, rows.shape)
        else:
            self.data = as_array(rows, fld, shape)
        self.data.setflags(write=False)
        self._echelon: Optional[Echelon] = None
        self._lock = threading.Lock()

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, fld: FieldSpec) -> "RankMatrix":
        m = zeros(nrows, len(columns), fld)
        for j, col in enumerate(columns):
            if nrows:
                m[:, j] = [fld(x) for x in col]
        return cls(m, fld)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def echelon(self) -> Echelon:
        if self._echelon is None:
            with self._lock:
                if self._echelon is None:
                    self._echelon = rref(self.data, self.field)
        return self._echelon

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self.echelon().rank

    def kernel_basis(self) -> list:
        """Basis of the right kernel as tuples, one per free column."""
        ech = self.echelon()
        piv = ech.pivots
        pivset = set(piv)
        fld = self.field
        basis = []
        for f in range(self.cols):
            if f in pivset:
                continue
            v = [fld.zero] * self.cols
            v[f] = fld.one
            for i, c in enumerate(piv):
                x = ech.rows[i, f]
                if x != 0:
                    v[c] = fld(-x) if fld.p is not None else -x
            basis.append(tuple(int(x) if fld.p is not None else x for x in v))
        return basis

    def image_basis(self) -> list:
        """Columns of the matrix at the pivot positions."""
        return [tuple(self.data[:, c].tolist()) for c in self.echelon().pivots]

    def solve(self, b: Sequence) -> tuple:
        """One solution ``x`` of ``M x = b``; raises :class:`InconsistentSystem`."""
        fld = self.field
        aug = zeros(self.rows, self.cols + 1, fld)
        aug[:, : self.cols] = self.data
        aug[:, self.cols] = [fld(x) for x in b]
        ech = rref(aug, fld)
        if ech.pivots and ech.pivots[-1] == self.cols:
            raise InconsistentSystem("right-hand side is not in the column span")
        x = [fld.zero] * self.cols
        for i, c in enumerate(ech.pivots):
            x[c] = ech.rows[i, self.cols]
        return tuple(int(v) if fld.p is not None else v for v in x)

    def transpose(self) -> "RankMatrix":
        return RankMatrix(self.data.T.copy(), self.field)

    def apply(self, v: Sequence) -> tuple:
        vec = as_array([list(v)], self.field).T
        out = matmul(self.data, vec, self.field)[:, 0]
        return tuple(int(x) if self.field.p is not None else x for x in out)

    def tolist(self) -> list:
        return [[int(x) if self.field.p is not None else x for x in r] for r in self.data.tolist()]

    def __repr__(self) -> str:
        return f"RankMatrix({self.rows}x{self.cols} over {self.field})"


def rank(m: RankMatrix) -> int:
    if m.field.is_rational:
        # fraction-free route; agrees with the cached Fraction echelon by construction of the tests
        return bareiss_rank(m.data.tolist()) if m.rows and m.cols else 0
    return m.rank()


def kernel_basis(m: RankMatrix) -> list:
    return m.kernel_basis()


@dataclass
class MultiPrimeRank:
    ranks: dict
    rows: int
    cols: int
    consensus: int = field(init=False)
    agree: bool = field(init=False)

    def __post_init__(self):
        self.consensus = max(self.ranks.values()) if self.ranks else 0
        self.agree = len(set(self.ranks.values())) <= 1

    @property
    def certified_exact(self) -> bool:
        """Maximal rank mod some prime pins the rational rank exactly."""
        return self.consensus == min(self.rows, self.cols)

    def to_json(self) -> dict:
        return {
            "ranks": {str(p): r for p, r in self.ranks.items()},
            "lower_bound": self.consensus,
            "agree": self.agree,
            "certified_exact": self.certified_exact,
        }


def multi_prime_rank(build: Callable[[FieldSpec], RankMatrix], primes: Iterable[int]) -> MultiPrimeRank:
    """Rank of ``build(F_p)`` for each prime.

    ``max`` of the ranks is a lower bound for the rank over ``QQ``; it is exact
    when it reaches ``min(rows, cols)``.  ``build`` should raise
    :class:`PrimeReductionError` when its entries cannot be reduced mod ``p``.
    """
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise PreconditionError("primes must be distinct")
    ranks = {}
    shape = (0, 0)
    for p in primes:
        m = build(FieldSpec(p))
        shape = m.shape
        ranks[p] = m.rank()
    return MultiPrimeRank(ranks, *shape)
