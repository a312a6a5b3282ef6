"""Exhaustive checks of finite-field facts behind the AES S-box analysis.

Inversion here is the totalised map x -> x^(2^m - 2), so 0 maps to 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import UsageError
from .gf2 import DEFAULT_ENUM_BUDGET, Subspace, count_subspaces, enumerate_all_subspaces
from .gf2m import FieldSpec


def solve_difference_equation(F: FieldSpec, a, b) -> list:
    """All x with inv(x + a) + inv(x) = b, ascending."""
    if a == 0:
        raise UsageError("the input difference a must be nonzero")
    inv = F.inv_table
    return [x for x in range(F.order) if inv[x ^ a] ^ inv[x] == b]


def solution_counts(F: FieldSpec, a) -> list:
    """counts[b] = number of solutions of inv(x + a) + inv(x) = b."""
    if a == 0:
        raise UsageError("the input difference a must be nonzero")
    inv = F.inv_table
    counts = [0] * F.order
    for x in range(F.order):
        counts[inv[x ^ a] ^ inv[x]] += 1
    return counts


def cube_root_of_unity(F: FieldSpec):
    """An element of multiplicative order 3, or None when 2 does not divide m."""
    for c in range(2, F.order):
        if F.pow(c, 3) == 1:
            return c
    return None


def four_solution_set(F: FieldSpec, a) -> list:
    """{0, a, ac, ac^2} for a primitive cube root of unity c (even m only)."""
    c = cube_root_of_unity(F)
    if c is None:
        return []
    return sorted({0, a, F.mul(a, c), F.mul(a, F.mul(c, c))})


def image_size_even(m):
    """(2^m - 4)/2 + 4/4: image size of x -> inv(x + a) + inv(x) for even m."""
    return ((1 << m) - 4) // 2 + 1


def hua_identity_check(F: FieldSpec, a, b) -> bool:
    """a + ((a - b^-1)^-1 - a^-1)^-1 == a b a, with subtraction as XOR."""
    if a == 0 or b == 0 or F.mul(a, b) == 1:
        raise UsageError("need a, b and ab - 1 invertible")
    inv, mul = F.inv_table, F.mul_table
    lhs = a ^ inv[inv[a ^ inv[b]] ^ inv[a]]
    rhs = mul[mul[a][b]][a]
    return lhs == rhs


def valid_hua_pairs(F: FieldSpec):
    mul = F.mul_table
    for a in range(1, F.order):
        for b in range(1, F.order):
            if mul[a][b] != 1:
                yield a, b


def hua_sweep(F: FieldSpec, samples=None, seed=0):
    """Check the identity on every valid pair, or on ``samples`` random ones.

    Returns (checked, failures) where failures lists offending pairs.
    """
    if samples is None:
        pairs = valid_hua_pairs(F)
    else:
        rng = random.Random(seed)
        pairs = []
        while len(pairs) < samples:
            a, b = rng.randrange(1, F.order), rng.randrange(1, F.order)
            if F.mul(a, b) != 1:
                pairs.append((a, b))
    checked, failures = 0, []
    for a, b in pairs:
        checked += 1
        if not hua_identity_check(F, a, b):
            failures.append((a, b))
    return checked, failures


def is_subfield(S: Subspace, F: FieldSpec) -> bool:
    if S.width != F.m:
        raise UsageError("subspace width does not match the field degree")
    if S.is_zero():
        raise UsageError("the zero subspace is not considered")
    if not S.contains(1):
        return False
    mul = F.mul_table
    elems = S.elements()
    return all(S.contains(mul[x][y]) for x in elems for y in elems)


def is_inversion_closed(S: Subspace, F: FieldSpec) -> bool:
    inv = F.inv_table
    # basis first: nearly every non-closed subspace fails there
    if not all(S.contains(inv[r]) for r in S.basis):
        return False
    return all(S.contains(inv[x]) for x in S.elements())


@dataclass
class SubfieldCatalog:
    field: FieldSpec
    inversion_closed_subspaces: list
    subfield_flags: list
    examined: int = 0

    @property
    def dimensions(self):
        return [S.dim for S in self.inversion_closed_subspaces]

    @property
    def all_subfields(self):
        return all(self.subfield_flags)

    @property
    def largest_proper(self):
        proper = [S for S in self.inversion_closed_subspaces if not S.is_full()]
        return max(proper, key=lambda S: S.dim) if proper else None

    def to_dict(self):
        return {
            "m": self.field.m,
            "poly": hex(self.field.poly),
            "examined": self.examined,
            "entries": [
                {"dim": S.dim, "codim": S.codim, "basis": S.hex_basis(), "subfield": flag}
                for S, flag in zip(self.inversion_closed_subspaces, self.subfield_flags)],
            "all_subfields": self.all_subfields,
        }

    def render(self):
        m = self.field.m
        lines = [f"GF(2^{m}) mod {self.field.poly:#x}: {self.examined} subspaces examined, "
                 f"{len(self.inversion_closed_subspaces)} nonzero inversion-closed",
                 f"{'dim':>4} {'codim':>5}  {'subfield':<8}  basis"]
        for S, flag in zip(self.inversion_closed_subspaces, self.subfield_flags):
            lines.append(f"{S.dim:>4} {S.codim:>5}  {'yes' if flag else 'NO':<8}  "
                         f"{' '.join(S.hex_basis())}")
        return "\n".join(lines)


def inversion_closed_subspaces(F: FieldSpec, budget=DEFAULT_ENUM_BUDGET) -> SubfieldCatalog:
    """Sweep every subspace of GF(2)^m and keep the inversion-closed ones."""
    found = []
    examined = 0
    for S in enumerate_all_subspaces(F.m, budget=budget):
        examined += 1
        if not S.is_zero() and is_inversion_closed(S, F):
            found.append(S)
    found.sort(key=Subspace.sort_key)
    flags = [is_subfield(S, F) for S in found]
    return SubfieldCatalog(F, found, flags, examined)


def total_subspaces(m):
    return sum(count_subspaces(m, k) for k in range(m + 1))
