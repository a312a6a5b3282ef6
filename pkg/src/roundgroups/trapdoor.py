"""Ciphers with a planted invariant subspace, and what the planter can do.

The construction works in an adapted basis where the planted subspace U is
spanned by the low ``d`` coordinates. There the S-box is

    (x_u, x_w) -> (g[x_w](x_u), h(x_w))

with ``h`` a permutation of the quotient and each ``g[w]`` a permutation of
U, and the linear layer is block triangular so it maps U into U. Inputs
that differ by an element of U share ``x_w``, so their outputs also differ
by an element of U. Conjugating back to the standard basis hides U.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .blocks import is_difference_invariant
from .cipher import MAX_TOY_WIDTH, CipherSpec, Partition, SBoxTable
from .errors import InconsistentOracle, UsageError
from .gf2 import BitMatrix, Subspace, random_invertible


@dataclass(frozen=True)
class TrapdoorSpec:
    cipher: CipherSpec
    planted_U: Subspace
    basis_change: BitMatrix
    h: tuple
    g: tuple

    @property
    def n_b(self):
        return self.cipher.n_b

    @property
    def d(self):
        return self.planted_U.dim


def build_trapdoor_cipher(n_b, d=None, seed=0, identity_g=False,
                          identity_h=False) -> TrapdoorSpec:
    if d is None:
        d = n_b // 2
    if not 0 < n_b <= MAX_TOY_WIDTH:
        raise UsageError(f"trapdoor width must be in 1..{MAX_TOY_WIDTH}, got {n_b}")
    if not 0 < d < n_b:
        raise UsageError(f"planted dimension must satisfy 0 < d < n_b, got d={d}, n_b={n_b}")
    rng = random.Random(seed)
    q = n_b - d

    P = random_invertible(n_b, rng)  # row i = image of internal e_i
    U = Subspace.span(n_b, P.rows[:d])
    P_inv = P.inverse()

    h = list(range(1 << q))
    if not identity_h:
        rng.shuffle(h)
    g = []
    for _ in range(1 << q):
        perm = list(range(1 << d))
        if not identity_g:
            rng.shuffle(perm)
        g.append(tuple(perm))

    A = random_invertible(d, rng)
    C = random_invertible(q, rng)
    lam_rows = list(A.rows) + [(C.rows[i] << d) | rng.getrandbits(d) for i in range(q)]
    lam_internal = BitMatrix(tuple(lam_rows), n_b)

    # gamma in standard coordinates: v -> gamma_int(v P^-1) P
    x = np.arange(1 << n_b, dtype=np.int64)
    internal = _apply_matrix(P_inv, x)
    xu = internal & ((1 << d) - 1)
    xw = internal >> d
    g_arr = np.asarray(g, dtype=np.int64)
    out_int = g_arr[xw, xu] | (np.asarray(h, dtype=np.int64)[xw] << d)
    table = _apply_matrix(P, out_int)

    lam = P_inv.then(lam_internal).then(P)
    cipher = CipherSpec(Partition(1, n_b), (SBoxTable(n_b, tuple(table.tolist())),), lam,
                        name=f"trapdoor:{n_b}:{d}@{seed}")
    if not is_difference_invariant(cipher, U, all_pairs=True):
        raise AssertionError("planted subspace is not difference-invariant")
    return TrapdoorSpec(cipher, U, P, tuple(h), tuple(g))


def _apply_matrix(M: BitMatrix, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for j, row in enumerate(M.rows):
        out ^= ((x >> j) & 1) * row
    return out


def _rho_fn(spec: CipherSpec):
    if spec.n_b <= MAX_TOY_WIDTH:
        table = spec.rho_table.tolist()
        return table.__getitem__
    return spec.rho


def truncated_distinguisher(spec: CipherSpec, U: Subspace, pair_count, seed=0) -> float:
    """Fraction of random pairs with input difference in U \\ {0} whose
    output difference also lies in U."""
    if U.width != spec.n_b:
        raise UsageError("subspace width does not match the cipher")
    if U.is_zero() or U.is_full():
        raise UsageError("distinguisher needs a subspace other than {0} and V")
    if pair_count < 1:
        raise UsageError("pair_count must be positive")
    rho = _rho_fn(spec)
    rng = random.Random(seed)
    n, d = spec.n_b, U.dim
    basis = U.basis
    hits = 0
    for _ in range(pair_count):
        v = rng.getrandbits(n)
        c = rng.randrange(1, 1 << d)
        u = 0
        for j, row in enumerate(basis):
            if (c >> j) & 1:
                u ^= row
        if U.contains(rho(v ^ u) ^ rho(v)):
            hits += 1
    return hits / pair_count


def chance_baseline(n_b, d):
    """Probability that a uniform nonzero difference lands in a d-dim subspace."""
    return ((1 << d) - 1) / ((1 << n_b) - 1)


@dataclass
class AttackResult:
    recovered_key: int
    trial_count: int
    coset_trials: int
    key_trials: int
    theoretical_bound: int
    trial_bound: int

    def to_dict(self, width):
        from .gf2 import to_hex
        return {
            "recovered_key": to_hex(self.recovered_key, width),
            "trial_count": self.trial_count,
            "coset_trials": self.coset_trials,
            "key_trials": self.key_trials,
            "theoretical_bound": self.theoretical_bound,
            "trial_bound": self.trial_bound,
        }


def oracle_pairs(trapdoor: TrapdoorSpec, key, count=2, seed=0) -> list:
    """Known plaintext/ciphertext pairs for the one-round cipher v -> v rho + key."""
    rng = random.Random(seed)
    spec = trapdoor.cipher
    out = []
    for _ in range(count):
        v = rng.getrandbits(spec.n_b)
        out.append((v, spec.round_function(v, key)))
    return out


def coset_key_recovery(trapdoor: TrapdoorSpec, pairs) -> AttackResult:
    """Recover k from pairs (v, v rho + k) using knowledge of U.

    One trial is one evaluation of the cipher under a candidate key. The
    coset of k modulo U is found first by walking quotient representatives,
    then the key is searched inside that coset: at most 2^(n-d) + 2^d trials.
    """
    if not pairs:
        raise UsageError("need at least one plaintext/ciphertext pair")
    spec = trapdoor.cipher
    U = trapdoor.planted_U
    n, d = spec.n_b, U.dim
    rho = _rho_fn(spec)
    v0, c0 = pairs[0]

    trials = 0
    coset = None
    for q in U.coset_representatives():
        trials += 1
        if U.contains(rho(v0) ^ q ^ c0):
            coset = q
            break
    if coset is None:
        raise InconsistentOracle("no key coset is consistent with the first pair")
    coset_trials = trials

    for u in U.elements():
        k = coset ^ u
        trials += 1
        if all(rho(v) ^ k == c for v, c in pairs):
            return AttackResult(k, trials, coset_trials, trials - coset_trials,
                                2 * math.isqrt(1 << n), (1 << (n - d)) + (1 << d))
    raise InconsistentOracle("no key in the identified coset reproduces every pair")
