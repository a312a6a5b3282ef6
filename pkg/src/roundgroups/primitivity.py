"""Sufficient conditions for the round-function group to be primitive.

For a cipher with rho = gamma lambda, the group generated by the round
functions is primitive whenever

1. every S-box fixes 0 and has order dividing ``s`` (``s = 2``: involution),
2. for some ``1 <= r < m/s`` every S-box has all differential image sizes
   above ``2^(m-r-1)`` and no proper nonzero invariant subspace of
   codimension ``<= s*r``,
3. no proper nonzero sum of blocks is mapped into itself by lambda.

Failing a check never proves imprimitivity, so the verdict is either
``CERTIFIED_PRIMITIVE`` or ``INCONCLUSIVE``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cipher import CipherSpec, Partition, SBoxTable
from .errors import UsageError
from .gf2 import DEFAULT_ENUM_BUDGET, BitMatrix, Subspace, enumerate_subspaces

CERTIFIED_PRIMITIVE = "CERTIFIED_PRIMITIVE"
INCONCLUSIVE = "INCONCLUSIVE"


def check_power_condition(sbox: SBoxTable, s) -> bool:
    """0 is fixed and the s-fold composite of the table is the identity."""
    if s < 2:
        raise UsageError(f"s must be >= 2, got {s}")
    t = sbox.table
    if t[0] != 0:
        return False
    for x in range(len(t)):
        y = x
        for _ in range(s):
            y = t[y]
        if y != x:
            return False
    return True


def difference_image(sbox: SBoxTable, a) -> set:
    t = sbox.table
    return {t[x ^ a] ^ t[x] for x in range(len(t))}


def differential_image_size(sbox: SBoxTable, a) -> int:
    if not 0 < a < len(sbox.table):
        raise UsageError(f"input difference must be nonzero and below 2^{sbox.m}, got {a}")
    return len(difference_image(sbox, a))


def min_differential_image_size(sbox: SBoxTable) -> int:
    return min(differential_image_size(sbox, a) for a in range(1, len(sbox.table)))


def admissible_r_values(min_image, m, s) -> list:
    """All r with 1 <= r < m/s and min_image > 2^(m-r-1)."""
    return [r for r in range(1, m) if r * s < m and min_image > 1 << (m - r - 1)]


def max_certifiable_r(sbox: SBoxTable, s):
    rs = admissible_r_values(min_differential_image_size(sbox), sbox.m, s)
    return rs[-1] if rs else None


def is_invariant(sbox: SBoxTable, S: Subspace) -> bool:
    t = sbox.table
    return all(S.contains(t[x]) for x in S.elements())


def invariant_subspaces_up_to_codim(sbox: SBoxTable, c, budget=DEFAULT_ENUM_BUDGET) -> list:
    """Proper nonzero S-box-invariant subspaces of codimension 1..c.

    Enumerates the (small) dual subspaces of dimension 1..c and tests the
    annihilator of each pointwise, since the S-box is nonlinear.
    """
    m = sbox.m
    if not 0 <= c < m:
        raise UsageError(f"codimension bound must satisfy 0 <= c < m={m}, got {c}")
    found = []
    for k in range(1, c + 1):
        for dual in enumerate_subspaces(m, k, budget=budget):
            S = dual.annihilator()
            if is_invariant(sbox, S):
                found.append(S)
    found.sort(key=Subspace.sort_key)
    return found


def _block_reach(lam: BitMatrix, partition: Partition) -> list:
    """reach[i]: bitmask of blocks on which lambda(V_i) has nonzero projection."""
    m, n_t = partition.m, partition.n_t
    reach = []
    for i in range(n_t):
        img = 0
        for j in range(m):
            img |= lam.rows[i * m + j]
        mask = 0
        for b in range(n_t):
            if img & partition.block_of(b):
                mask |= 1 << b
        reach.append(mask)
    return reach


def lambda_invariant_block_sums(lam: BitMatrix, partition: Partition) -> list:
    """Nonempty proper block subsets whose direct sum lambda maps into itself."""
    n_t = partition.n_t
    if n_t > 24:
        raise UsageError(f"subset enumeration over {n_t} blocks is too large (max 24)")
    reach = _block_reach(lam, partition)
    found = []
    full = (1 << n_t) - 1
    for subset in range(1, full):
        ok = True
        rest = subset
        while rest:
            low = rest & -rest
            if reach[low.bit_length() - 1] & ~subset:
                ok = False
                break
            rest ^= low
        if ok:
            found.append(tuple(i for i in range(n_t) if (subset >> i) & 1))
    return found


@dataclass
class SBoxEvidence:
    sbox_index: int
    power_condition: bool
    min_image_size: int
    max_r: int | None
    tested_r: int | None
    codim_bound: int | None
    invariant_subspaces: list = field(default_factory=list)

    def to_dict(self):
        return {
            "sbox_index": self.sbox_index,
            "power_condition": self.power_condition,
            "min_image_size": self.min_image_size,
            "max_r": self.max_r,
            "tested_r": self.tested_r,
            "codim_bound": self.codim_bound,
            "invariant_subspaces": [S.hex_basis() for S in self.invariant_subspaces],
        }


@dataclass
class PrimitivityReport:
    cipher: str
    s: int
    condition1: bool
    sboxes: list
    achieved_r: int | None
    lambda_invariant_sums: list
    verdict: str
    reasons: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    n_t: int = 0

    @property
    def min_image_size(self):
        return [e.min_image_size for e in self.sboxes]

    @property
    def invariant_subspaces_found(self):
        return [e.invariant_subspaces for e in self.sboxes]

    @property
    def certified(self):
        return self.verdict == CERTIFIED_PRIMITIVE

    def to_dict(self):
        return {
            "cipher": self.cipher,
            "s": self.s,
            "n_t": self.n_t,
            "condition1": self.condition1,
            "achieved_r": self.achieved_r,
            "sboxes": [e.to_dict() for e in self.sboxes],
            "lambda_invariant_sums": [list(x) for x in self.lambda_invariant_sums],
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "notes": list(self.notes),
        }

    def render(self):
        lines = [f"cipher: {self.cipher}", f"s = {self.s}",
                 f"condition 1 (0 fixed, gamma^s = 1): {'pass' if self.condition1 else 'FAIL'}"]
        for e in self.sboxes:
            lines.append(
                f"  S-box #{e.sbox_index}: min differential image {e.min_image_size}, "
                f"max r {e.max_r}, tested r {e.tested_r}, "
                f"invariant subspaces with codim <= {e.codim_bound}: "
                f"{len(e.invariant_subspaces)}")
            for S in e.invariant_subspaces:
                lines.append(f"    dim {S.dim}: {' '.join(S.hex_basis())}")
        sums = self.lambda_invariant_sums
        if self.n_t == 1:
            status = "vacuous (single block)"
        else:
            status = "pass" if not sums else "FAIL"
        lines.append(f"condition 3 (no lambda-invariant block sum): {status}")
        for subset in sums[:20]:
            lines.append(f"  invariant sum of blocks {list(subset)}")
        if len(sums) > 20:
            lines.append(f"  ... {len(sums) - 20} more")
        lines.append(f"achieved r = {self.achieved_r}")
        for note in self.notes:
            lines.append(f"note: {note}")
        for reason in self.reasons:
            lines.append(f"reason: {reason}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def verify_primitivity(spec: CipherSpec, s=2, budget=DEFAULT_ENUM_BUDGET) -> PrimitivityReport:
    if s < 2:
        raise UsageError(f"s must be >= 2, got {s}")
    reasons = []
    sboxes = spec.distinct_sboxes()
    powers = [check_power_condition(sb, s) for sb in sboxes]
    min_imgs = [min_differential_image_size(sb) for sb in sboxes]
    per_box = [admissible_r_values(mi, spec.m, s) for mi in min_imgs]
    common = sorted(set.intersection(*(set(rs) for rs in per_box)))
    # larger r only loosens the image bound and tightens the subspace bound,
    # so the smallest common admissible r is the one to test
    r = common[0] if common else None

    evidence = []
    for idx, sbox in enumerate(sboxes):
        found = []
        if r is not None:
            found = invariant_subspaces_up_to_codim(sbox, s * r, budget=budget)
        rs = per_box[idx]
        evidence.append(SBoxEvidence(idx, powers[idx], min_imgs[idx],
                                     rs[-1] if rs else None, r,
                                     s * r if r is not None else None, found))
        if not powers[idx]:
            reasons.append(f"S-box #{idx}: 0 not fixed or gamma^{s} != 1")
        if not rs:
            reasons.append(f"S-box #{idx}: no r in [1, m/{s}) with min image "
                           f"{min_imgs[idx]} > 2^(m-r-1)")
        elif found:
            reasons.append(f"S-box #{idx}: {len(found)} invariant subspace(s) of "
                           f"codimension <= {s * r}")
    if r is None and all(per_box):
        reasons.append("no single r is admissible for every S-box")

    condition1 = all(powers)
    achieved_r = r if r is not None and not any(e.invariant_subspaces for e in evidence) else None

    notes = list(spec.notes)
    sums = lambda_invariant_block_sums(spec.lam, spec.partition)
    if spec.n_t == 1:
        reasons.append("n_t = 1: no proper block sums exist, so the diffusion "
                       "condition is vacuous; not certified by policy")
    elif sums:
        reasons.append(f"{len(sums)} nonempty proper block sum(s) invariant under lambda")

    verdict = CERTIFIED_PRIMITIVE if not reasons else INCONCLUSIVE
    return PrimitivityReport(spec.name, s, condition1, evidence, achieved_r, sums,
                             verdict, reasons, notes, spec.n_t)
