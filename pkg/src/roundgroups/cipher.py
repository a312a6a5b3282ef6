"""Key-alternating block ciphers: round function v -> (v gamma) lambda + k.

The state is an ``n_b``-bit int split into ``n_t`` contiguous ``m``-bit
blocks; block ``i`` occupies bits ``[i*m, (i+1)*m)``. ``gamma`` applies one
S-box per block and ``lambda`` is an invertible GF(2) matrix acting on row
vectors. Maps compose left to right: gamma first, then lambda, then the key.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import UsageError
from .gf2 import MAX_WIDTH, BitMatrix, random_invertible
from .gf2m import AES_POLY, FieldSpec

MAX_TOY_WIDTH = 16
SBOX_KINDS = ("inversion", "random", "identity")
LAMBDA_KINDS = ("identity", "rotate", "random", "mixcolumns")


@dataclass(frozen=True)
class SBoxTable:
    m: int
    table: tuple

    def __post_init__(self):
        table = tuple(int(x) for x in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != 1 << self.m:
            raise UsageError(f"S-box needs {1 << self.m} entries, got {len(table)}")
        if sorted(table) != list(range(1 << self.m)):
            raise UsageError("S-box table is not a bijection")

    def __getitem__(self, x):
        return self.table[x]

    def __len__(self):
        return len(self.table)

    def inverse(self):
        inv = [0] * len(self.table)
        for x, y in enumerate(self.table):
            inv[y] = x
        return SBoxTable(self.m, tuple(inv))

    @classmethod
    def identity(cls, m):
        return cls(m, tuple(range(1 << m)))

    @classmethod
    def inversion(cls, gf: FieldSpec):
        return cls(gf.m, gf.inv_table)

    @classmethod
    def random(cls, m, rng):
        t = list(range(1 << m))
        rng.shuffle(t)
        return cls(m, tuple(t))


@dataclass(frozen=True)
class Partition:
    n_t: int
    m: int

    def __post_init__(self):
        if self.n_t < 1 or self.m < 1:
            raise UsageError("partition needs n_t >= 1 and m >= 1")
        if self.n_b > MAX_WIDTH:
            raise UsageError(f"state width {self.n_b} exceeds {MAX_WIDTH}")

    @property
    def n_b(self):
        return self.n_t * self.m

    @property
    def block_mask(self):
        return (1 << self.m) - 1

    def block_of(self, i):
        """Bitmask of the coordinates of V_i."""
        return self.block_mask << (i * self.m)


@dataclass(frozen=True)
class CipherSpec:
    partition: Partition
    sboxes: tuple
    lam: BitMatrix
    name: str = "cipher"
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sboxes", tuple(self.sboxes))
        p = self.partition
        if len(self.sboxes) != p.n_t:
            raise UsageError(f"need {p.n_t} S-boxes, got {len(self.sboxes)}")
        for i, s in enumerate(self.sboxes):
            if s.m != p.m:
                raise UsageError(f"S-box {i} has width {s.m}, blocks have width {p.m}")
        if self.lam.nrows != p.n_b or self.lam.ncols != p.n_b:
            raise UsageError(f"lambda must be {p.n_b}x{p.n_b}")
        if not self.lam.is_invertible():
            raise UsageError("lambda is not invertible")

    @property
    def n_t(self):
        return self.partition.n_t

    @property
    def m(self):
        return self.partition.m

    @property
    def n_b(self):
        return self.partition.n_b

    def _check_state(self, v):
        v = int(v)
        if v < 0 or v >> self.n_b:
            raise UsageError(f"state {v:#x} does not fit in {self.n_b} bits")
        return v

    def project_block(self, v, i):
        if not 0 <= i < self.n_t:
            raise UsageError(f"block index {i} out of range 0..{self.n_t - 1}")
        return (self._check_state(v) >> (i * self.m)) & self.partition.block_mask

    def apply_gamma(self, v):
        v = self._check_state(v)
        m, mask = self.m, self.partition.block_mask
        out = 0
        for i, s in enumerate(self.sboxes):
            out |= s.table[(v >> (i * m)) & mask] << (i * m)
        return out

    def rho(self, v):
        return self.lam.apply(self.apply_gamma(v))

    def round_function(self, v, k):
        return self.rho(v) ^ self._check_state(k)

    def encrypt(self, v, keys: Sequence[int]):
        if not keys:
            raise UsageError("encrypt needs at least one round key")
        for k in keys:
            v = self.round_function(v, k)
        return v

    def distinct_sboxes(self):
        """S-box tables deduplicated by content, first-seen order."""
        seen = {}
        for s in self.sboxes:
            seen.setdefault(s.table, s)
        return list(seen.values())

    @cached_property
    def rho_table(self) -> np.ndarray:
        """vρ for every v, as an array indexed by v (toy widths only)."""
        if self.n_b > MAX_TOY_WIDTH:
            raise UsageError(f"cannot materialise rho on 2^{self.n_b} points")
        v = np.arange(1 << self.n_b, dtype=np.uint32)
        g = np.zeros_like(v)
        m, mask = self.m, self.partition.block_mask
        for i, s in enumerate(self.sboxes):
            t = np.asarray(s.table, dtype=np.uint32)
            g |= t[(v >> np.uint32(i * m)) & np.uint32(mask)] << np.uint32(i * m)
        out = np.zeros_like(v)
        for j, row in enumerate(self.lam.rows):
            out ^= ((g >> np.uint32(j)) & np.uint32(1)) * np.uint32(row)
        out.setflags(write=False)
        return out


def translation_generators(n_b):
    """XOR masks of the basis translations v -> v + e_i."""
    if not 1 <= n_b <= MAX_WIDTH:
        raise UsageError(f"bad width {n_b}")
    return [1 << i for i in range(n_b)]


def translation_permutation(mask, n_b):
    if n_b > MAX_TOY_WIDTH:
        raise UsageError(f"cannot materialise a permutation on 2^{n_b} points")
    return np.arange(1 << n_b, dtype=np.uint32) ^ np.uint32(mask)


# -- AES --------------------------------------------------------------------


def _xtime(b):
    b <<= 1
    return b ^ 0x11B if b & 0x100 else b


def _gmul(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a = _xtime(a)
        b >>= 1
    return out


def _bytes_of(v, n=16):
    return [(v >> (8 * i)) & 0xFF for i in range(n)]


def _from_bytes(bs):
    out = 0
    for i, b in enumerate(bs):
        out |= b << (8 * i)
    return out


def aes_affine_linear_byte(b):
    """Linear part of the AES S-box affine map (without the 0x63 constant)."""
    out = 0
    for j in range(8):
        bit = 0
        for t in (0, 4, 5, 6, 7):
            bit ^= (b >> ((j + t) % 8)) & 1
        out |= bit << j
    return out


def aes_shift_rows(v):
    # byte index r + 4c holds state[r][c]; row r rotates left by r
    s = _bytes_of(v)
    return _from_bytes([s[r + 4 * ((c + r) % 4)] for c in range(4) for r in range(4)])


MIX_ROW = (2, 3, 1, 1)


def aes_mix_columns(v):
    s = _bytes_of(v)
    out = [0] * 16
    for c in range(4):
        col = s[4 * c:4 * c + 4]
        for r in range(4):
            acc = 0
            for j in range(4):
                acc ^= _gmul(MIX_ROW[(j - r) % 4], col[j])
            out[4 * c + r] = acc
    return _from_bytes(out)


def aes_lambda() -> BitMatrix:
    """Affine linear part (per byte), then ShiftRows, then MixColumns."""
    affine = BitMatrix.from_columns_map(
        128, lambda e: _from_bytes([aes_affine_linear_byte(b) for b in _bytes_of(e)]))
    sr = BitMatrix.from_columns_map(128, aes_shift_rows)
    mc = BitMatrix.from_columns_map(128, aes_mix_columns)
    return affine.then(sr).then(mc)


AES_CONSTANT = _from_bytes([0x63] * 16)


def aes_spec() -> CipherSpec:
    inv = SBoxTable.inversion(FieldSpec(8, AES_POLY))
    return CipherSpec(
        Partition(16, 8), (inv,) * 16, aes_lambda(), name="aes",
        notes=("lambda = S-box affine linear part, then ShiftRows, then MixColumns",
               "affine constant 0x63 folded into the round key"),
    )


# -- toy presets ------------------------------------------------------------


def mixcolumns_analogue(n_t, gf: FieldSpec) -> BitMatrix:
    row0 = [2, 3] + [1] * (n_t - 2) if n_t >= 2 else [2]
    m = gf.m

    def fn(e):
        s = [(e >> (i * m)) & (gf.order - 1) for i in range(n_t)]
        out = 0
        for r in range(n_t):
            acc = 0
            for j in range(n_t):
                acc ^= gf.mul(row0[(j - r) % n_t], s[j])
            out |= acc << (r * m)
        return out

    M = BitMatrix.from_columns_map(n_t * m, fn)
    if not M.is_invertible():
        raise UsageError(f"MixColumns analogue is singular for n_t={n_t}, m={m}")
    return M


def block_rotation(n_t, m) -> BitMatrix:
    n_b = n_t * m
    mask = (1 << n_b) - 1
    return BitMatrix.from_columns_map(n_b, lambda e: ((e << m) | (e >> (n_b - m))) & mask)


def toy_spec(n_t, m, sbox_kind="inversion", lambda_kind="identity", seed=0,
             poly=0) -> CipherSpec:
    if n_t * m > MAX_TOY_WIDTH:
        raise UsageError(f"toy specs are limited to {MAX_TOY_WIDTH} bits, got {n_t * m}")
    if sbox_kind not in SBOX_KINDS:
        raise UsageError(f"unknown S-box kind {sbox_kind!r}; choose from {SBOX_KINDS}")
    if lambda_kind not in LAMBDA_KINDS:
        raise UsageError(f"unknown lambda kind {lambda_kind!r}; choose from {LAMBDA_KINDS}")
    rng = random.Random(seed)
    needs_field = sbox_kind == "inversion" or lambda_kind == "mixcolumns"
    gf = FieldSpec(m, poly) if needs_field else None

    if sbox_kind == "inversion":
        sboxes = [SBoxTable.inversion(gf)] * n_t
    elif sbox_kind == "identity":
        sboxes = [SBoxTable.identity(m)] * n_t
    else:
        sboxes = [SBoxTable.random(m, rng) for _ in range(n_t)]

    n_b = n_t * m
    if lambda_kind == "identity":
        lam = BitMatrix.identity(n_b)
    elif lambda_kind == "rotate":
        lam = block_rotation(n_t, m)
    elif lambda_kind == "mixcolumns":
        lam = mixcolumns_analogue(n_t, gf)
    else:
        lam = random_invertible(n_b, rng)

    name = f"toy:{n_t}x{m}:{sbox_kind}:{lambda_kind}"
    if "random" in (sbox_kind, lambda_kind):
        name += f"@{seed}"
    return CipherSpec(Partition(n_t, m), sboxes, lam, name=name)


def parse_preset(text, seed=0) -> CipherSpec:
    """``aes`` or ``toy:<n_t>x<m>:<sbox>:<lambda>``."""
    if text == "aes":
        return aes_spec()
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "toy":
        raise UsageError(f"unknown preset {text!r}; expected 'aes' or "
                         "'toy:<n_t>x<m>:<sbox>:<lambda>'")
    try:
        n_t, m = (int(x) for x in parts[1].split("x"))
    except ValueError:
        raise UsageError(f"bad toy size {parts[1]!r}; expected <n_t>x<m>") from None
    return toy_spec(n_t, m, parts[2], parts[3], seed=seed)
