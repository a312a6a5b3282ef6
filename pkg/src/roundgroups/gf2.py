"""Linear algebra over GF(2) with Python ints as bitsets.

Coordinate ``i`` of a vector is bit ``i`` of an int. Matrices act on row
vectors from the right: ``v M`` is the XOR of the rows of ``M`` selected by
the set bits of ``v``.

Subspaces are stored in a canonical reduced row-echelon form: each basis
row has a pivot at its highest set bit, no other row has that bit set, and
rows are sorted by pivot ascending. Two subspaces are equal exactly when
their basis tuples are equal, so :class:`Subspace` can be hashed and
deduplicated directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Sequence

from .errors import EnumerationTooLarge, SingularMatrix, UsageError

MAX_WIDTH = 128
DEFAULT_ENUM_BUDGET = 1 << 24


def _check_width(width):
    if not 1 <= width <= MAX_WIDTH:
        raise UsageError(f"width must be in 1..{MAX_WIDTH}, got {width}")


def _as_int(v, width):
    """Accept an int or a BitVector and return the raw bits, checking width."""
    if isinstance(v, BitVector):
        if v.width != width:
            raise UsageError(f"width mismatch: expected {width}, got {v.width}")
        return v.bits
    v = int(v)
    if v < 0 or v >> width:
        raise UsageError(f"value {v:#x} does not fit in {width} bits")
    return v


def hex_digits(width):
    return max(1, (width + 3) // 4)


def to_hex(v, width):
    """Render ``v`` as zero-padded hex, most significant coordinate first."""
    return format(v, f"0{hex_digits(width)}x")


@dataclass(frozen=True)
class BitVector:
    width: int
    bits: int = 0

    def __post_init__(self):
        _check_width(self.width)
        if self.bits < 0 or self.bits >> self.width:
            raise UsageError(f"bits {self.bits:#x} exceed width {self.width}")

    def __xor__(self, other):
        return vec_add(self, other)

    __add__ = __xor__

    def __int__(self):
        return self.bits

    def __index__(self):
        return self.bits

    def hex(self):
        return to_hex(self.bits, self.width)


def vec_add(a: BitVector, b: BitVector) -> BitVector:
    if a.width != b.width:
        raise UsageError(f"width mismatch: {a.width} vs {b.width}")
    return BitVector(a.width, a.bits ^ b.bits)


# -- matrices ---------------------------------------------------------------


@dataclass(frozen=True)
class BitMatrix:
    """Square or rectangular GF(2) matrix with ``rows[i]`` the image of e_i."""

    rows: tuple
    ncols: int

    def __post_init__(self):
        _check_width(self.ncols)
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for i, r in enumerate(self.rows):
            if r < 0 or r >> self.ncols:
                raise UsageError(f"row {i} exceeds {self.ncols} columns")

    @property
    def nrows(self):
        return len(self.rows)

    @classmethod
    def identity(cls, n):
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zero(cls, nrows, ncols=None):
        return cls((0,) * nrows, nrows if ncols is None else ncols)

    @classmethod
    def from_columns_map(cls, n, fn):
        """Matrix of a linear map given as a function on basis vectors."""
        return cls(tuple(fn(1 << i) for i in range(n)), n)

    @classmethod
    def from_hex_rows(cls, rows: Sequence[str], ncols=None):
        n = len(rows) if ncols is None else ncols
        return cls(tuple(int(r, 16) for r in rows), n)

    def to_hex_rows(self):
        return [to_hex(r, self.ncols) for r in self.rows]

    @cached_property
    def _byte_tables(self):
        # 8-bit chunk lookup tables: v M = XOR_j table_j[byte_j(v)]
        tables = []
        for start in range(0, self.nrows, 8):
            chunk = self.rows[start:start + 8]
            t = [0] * (1 << len(chunk))
            for x in range(1, len(t)):
                low = x & -x
                t[x] = t[x ^ low] ^ chunk[low.bit_length() - 1]
            tables.append(t)
        return tables

    def apply(self, v):
        v = _as_int(v, self.nrows)
        out = 0
        for t in self._byte_tables:
            out ^= t[v & 0xFF]
            v >>= 8
        return out

    def then(self, other: "BitMatrix") -> "BitMatrix":
        """The composite map: apply ``self`` first, then ``other``."""
        if self.ncols != other.nrows:
            raise UsageError(f"cannot compose {self.nrows}x{self.ncols} with "
                             f"{other.nrows}x{other.ncols}")
        return BitMatrix(tuple(other.apply(r) for r in self.rows), other.ncols)

    def transpose(self):
        cols = []
        for j in range(self.ncols):
            c = 0
            for i, r in enumerate(self.rows):
                if (r >> j) & 1:
                    c |= 1 << i
            cols.append(c)
        return BitMatrix(tuple(cols), self.nrows)

    def rank(self):
        return len(_echelon(self.rows))

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self):
        return mat_invert(self)


def mat_apply(M: BitMatrix, v) -> int:
    return M.apply(v)


def mat_invert(M: BitMatrix) -> BitMatrix:
    """Gauss-Jordan inversion over GF(2)."""
    n = M.nrows
    if n != M.ncols:
        raise UsageError(f"matrix is {n}x{M.ncols}, not square")
    # augmented rows [M | I] packed as (left, right)
    left = list(M.rows)
    right = [1 << i for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if (left[r] >> col) & 1), None)
        if pivot is None:
            raise SingularMatrix(f"matrix is singular (no pivot in column {col})")
        left[col], left[pivot] = left[pivot], left[col]
        right[col], right[pivot] = right[pivot], right[col]
        for r in range(n):
            if r != col and (left[r] >> col) & 1:
                left[r] ^= left[col]
                right[r] ^= right[col]
    return BitMatrix(tuple(right), n)


def random_invertible(n, rng) -> BitMatrix:
    """Uniform element of GL(n, 2) by rejection; ``rng`` is a random.Random."""
    while True:
        M = BitMatrix(tuple(rng.getrandbits(n) for _ in range(n)), n)
        if M.is_invertible():
            return M


# -- subspaces --------------------------------------------------------------


def _echelon(gens: Iterable[int]) -> dict:
    """Return {pivot_bit: row} with distinct highest-bit pivots (not reduced)."""
    basis = {}
    for v in gens:
        while v:
            p = v.bit_length() - 1
            row = basis.get(p)
            if row is None:
                basis[p] = v
                break
            v ^= row
    return basis


def _rref(gens: Iterable[int]) -> tuple:
    basis = _echelon(gens)
    pivots = sorted(basis)
    # clear each pivot column from every other row, top pivot down
    for p in reversed(pivots):
        row = basis[p]
        for q in pivots:
            if q != p and (basis[q] >> p) & 1:
                basis[q] ^= row
    return tuple(basis[p] for p in pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(2)^width given by its canonical RREF basis.

    Construct through :meth:`span` unless the basis is already canonical.
    """

    width: int
    basis: tuple = ()

    @classmethod
    def span(cls, width, gens: Iterable = ()) -> "Subspace":
        _check_width(width)
        return cls(width, _rref(_as_int(g, width) for g in gens))

    @classmethod
    def zero(cls, width):
        return cls.span(width)

    @classmethod
    def full(cls, width):
        return cls(width, tuple(1 << i for i in range(width)))

    @property
    def dim(self):
        return len(self.basis)

    @property
    def codim(self):
        return self.width - len(self.basis)

    @property
    def pivots(self):
        return tuple(r.bit_length() - 1 for r in self.basis)

    @property
    def size(self):
        return 1 << len(self.basis)

    def is_zero(self):
        return not self.basis

    def is_full(self):
        return len(self.basis) == self.width

    def reduce(self, v) -> int:
        """Canonical coset representative of ``v + self``."""
        v = _as_int(v, self.width)
        for row in self.basis:
            if (v >> (row.bit_length() - 1)) & 1:
                v ^= row
        return v

    def contains(self, v) -> bool:
        return self.reduce(v) == 0

    def __contains__(self, v):
        return self.contains(v)

    def elements(self) -> list:
        """All 2^dim elements; element ``i`` is the combination selected by i."""
        out = [0]
        for row in self.basis:
            out += [x ^ row for x in out]
        return out

    def coset_representatives(self) -> Iterator[int]:
        """One reduced representative per coset, ascending."""
        pivots = set(self.pivots)
        free = [i for i in range(self.width) if i not in pivots]
        for x in range(1 << len(free)):
            v = 0
            for j, c in enumerate(free):
                if (x >> j) & 1:
                    v |= 1 << c
            yield v

    def issubset(self, other: "Subspace") -> bool:
        _same_width(self, other)
        return all(other.contains(r) for r in self.basis)

    def __le__(self, other):
        return self.issubset(other)

    def __lt__(self, other):
        return self.issubset(other) and self.dim < other.dim

    def sum(self, other: "Subspace") -> "Subspace":
        _same_width(self, other)
        return Subspace.span(self.width, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        _same_width(self, other)
        return self.annihilator().sum(other.annihilator()).annihilator()

    def annihilator(self) -> "Subspace":
        """{w : <w, s> = 0 for all s in self} under the dot product mod 2."""
        pivots = self.pivots
        pivot_set = set(pivots)
        gens = []
        for f in range(self.width):
            if f in pivot_set:
                continue
            w = 1 << f
            for row, p in zip(self.basis, pivots):
                if (row >> f) & 1:
                    w |= 1 << p
            gens.append(w)
        return Subspace.span(self.width, gens)

    def image(self, M: BitMatrix) -> "Subspace":
        if M.nrows != self.width:
            raise UsageError("matrix rows do not match subspace width")
        return Subspace.span(M.ncols, (M.apply(r) for r in self.basis))

    def hex_basis(self):
        return [to_hex(r, self.width) for r in self.basis]

    def sort_key(self):
        return (self.dim, self.basis)


def _same_width(a, b):
    if a.width != b.width:
        raise UsageError(f"ambient width mismatch: {a.width} vs {b.width}")


def subspace_from_generators(width, gens) -> Subspace:
    return Subspace.span(width, gens)


def subspace_contains(S: Subspace, v) -> bool:
    return S.contains(v)


def subspace_sum(S1: Subspace, S2: Subspace) -> Subspace:
    return S1.sum(S2)


def subspace_intersection(S1: Subspace, S2: Subspace) -> Subspace:
    return S1.intersection(S2)


def annihilator(S: Subspace) -> Subspace:
    return S.annihilator()


# -- counting and enumeration ----------------------------------------------


def count_subspaces(n, k) -> int:
    """Gaussian binomial [n, k]_2."""
    if not 0 <= k <= n:
        raise UsageError(f"need 0 <= k <= n, got n={n}, k={k}")
    num = prod((1 << n) - (1 << i) for i in range(k))
    den = prod((1 << k) - (1 << i) for i in range(k))
    return num // den


def enumerate_subspaces(n, k, budget=DEFAULT_ENUM_BUDGET) -> Iterator[Subspace]:
    """Yield every k-dimensional subspace of GF(2)^n exactly once.

    Walks pivot patterns and free entries of the canonical RREF directly, so
    nothing has to be deduplicated or held in memory.
    """
    if not 0 <= k <= n <= 16:
        raise UsageError(f"need 0 <= k <= n <= 16, got n={n}, k={k}")
    total = count_subspaces(n, k)
    if total > budget:
        raise EnumerationTooLarge(
            f"{total} subspaces of dimension {k} in GF(2)^{n} exceed budget {budget}")
    return _enumerate(n, k)


def _enumerate(n, k):
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        row_choices = []
        for p in pivots:
            free = [c for c in range(p) if c not in pivot_set]
            rows = []
            for x in range(1 << len(free)):
                r = 1 << p
                for j, c in enumerate(free):
                    if (x >> j) & 1:
                        r |= 1 << c
                rows.append(r)
            row_choices.append(rows)
        for basis in itertools.product(*row_choices):
            yield Subspace(n, basis)


def enumerate_all_subspaces(n, budget=DEFAULT_ENUM_BUDGET) -> Iterator[Subspace]:
    total = sum(count_subspaces(n, k) for k in range(n + 1))
    if total > budget:
        raise EnumerationTooLarge(f"{total} subspaces of GF(2)^{n} exceed budget {budget}")
    for k in range(n + 1):
        yield from _enumerate(n, k)


def random_subspace(width, dim, rng) -> Subspace:
    """Uniformly random ``dim``-dimensional subspace; ``rng`` is a random.Random."""
    if not 0 <= dim <= width:
        raise UsageError(f"need 0 <= dim <= width, got dim={dim}, width={width}")
    basis = {}
    while len(basis) < dim:
        _absorb_one(basis, rng.getrandbits(width))
    return Subspace.span(width, basis.values())


def _absorb_one(basis, v):
    while v:
        p = v.bit_length() - 1
        if p not in basis:
            basis[p] = v
            return
        v ^= basis[p]
