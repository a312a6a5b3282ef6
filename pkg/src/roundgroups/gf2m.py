"""Arithmetic in GF(2^m), elements encoded as m-bit coefficient vectors."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import UsageError

# x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, x^7+x+1, Rijndael x^8+x^4+x^3+x+1
DEFAULT_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x11B,
}
AES_POLY = 0x11B


def poly_mod(a, b):
    """Remainder of a by b as GF(2)[x] polynomials."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly):
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, q) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    m: int
    poly: int = 0

    def __post_init__(self):
        if not 2 <= self.m <= 8:
            raise UsageError(f"extension degree must be in 2..8, got {self.m}")
        if not self.poly:
            object.__setattr__(self, "poly", DEFAULT_POLYS[self.m])
        if self.poly.bit_length() - 1 != self.m:
            raise UsageError(f"reduction polynomial {self.poly:#x} is not of degree {self.m}")
        if not is_irreducible(self.poly):
            raise UsageError(f"reduction polynomial {self.poly:#x} is reducible")

    @property
    def order(self):
        return 1 << self.m

    def mul(self, a, b):
        return field_mul(self, a, b)

    def inv(self, a):
        return self.inv_table[a]

    @cached_property
    def inv_table(self):
        return tuple(field_inv(self, a) for a in range(self.order))

    @cached_property
    def mul_table(self):
        q = self.order
        return tuple(tuple(field_mul(self, a, b) for b in range(q)) for a in range(q))

    def pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = field_mul(self, result, a)
            a = field_mul(self, a, a)
            e >>= 1
        return result


def _check_elem(F, a):
    if not 0 <= a < F.order:
        raise UsageError(f"{a} is not an element of GF(2^{F.m})")


def field_mul(F: FieldSpec, a, b):
    _check_elem(F, a)
    _check_elem(F, b)
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> F.m:
            a ^= F.poly
    return out


def field_inv(F: FieldSpec, a):
    """a^(2^m - 2); maps 0 to 0."""
    _check_elem(F, a)
    return F.pow(a, F.order - 2)


def aes_field():
    return FieldSpec(8, AES_POLY)
