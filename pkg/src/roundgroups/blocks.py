"""Constructive search for block systems of G = <T, rho>.

Two independent routes:

* CLOSURE: the smallest subspace U containing a seed u such that
  ``(v + u') rho + v rho`` lies in U for all u' in U and all v. Any such U
  gives the block system of cosets of U, and every block system of G
  arises this way.
* GROUP_ACTION: the classical union-find minimal-block computation on the
  permutation action of the generators ``{v -> v + e_i} ∪ {rho}``. It knows
  nothing about linearity, so it serves as an oracle for the closure route.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cipher import MAX_TOY_WIDTH, CipherSpec
from .errors import UsageError
from .gf2 import Subspace, to_hex

CLOSURE = "CLOSURE"
GROUP_ACTION = "GROUP_ACTION"
MAX_ACTION_WIDTH = 14
DEFAULT_PROBES = 48
DEFAULT_SAMPLES = 256


def _absorb(basis: dict, values: np.ndarray) -> list:
    """Insert ``values`` into an echelon basis {top_bit: row}; return new rows."""
    d = values
    for p in sorted(basis, reverse=True):
        d = d ^ (((d >> np.uint32(p)) & np.uint32(1)) * np.uint32(basis[p]))
    d = np.unique(d[d != 0])
    new = []
    while d.size:
        x = int(d[-1])
        p = x.bit_length() - 1
        basis[p] = x
        new.append(x)
        d = d ^ (((d >> np.uint32(p)) & np.uint32(1)) * np.uint32(x))
        d = np.unique(d[d != 0])
    return new


def _absorb_ints(basis: dict, values) -> list:
    new = []
    for v in values:
        while v:
            p = v.bit_length() - 1
            row = basis.get(p)
            if row is None:
                basis[p] = v
                new.append(v)
                break
            v ^= row
    return new


class _ExhaustiveDifferences:
    """Difference closures with v ranging over all of V (n_b <= 16)."""

    def __init__(self, spec: CipherSpec, probes=DEFAULT_PROBES):
        if spec.n_b > MAX_TOY_WIDTH:
            raise UsageError(f"exhaustive closure needs n_b <= {MAX_TOY_WIDTH}, "
                             f"got {spec.n_b}; use sampled mode")
        self.n = spec.n_b
        self.rho = spec.rho_table
        self.points = np.arange(1 << self.n, dtype=np.uint32)
        rng = np.random.default_rng(0)
        self.probe = rng.integers(0, 1 << self.n, size=min(probes, 1 << self.n),
                                  dtype=np.uint32)

    def _close(self, basis, pending, vs):
        rho = self.rho
        rho_vs = rho[vs]
        while pending and len(basis) < self.n:
            w = np.uint32(pending.pop())
            pending.extend(_absorb(basis, rho[vs ^ w] ^ rho_vs))

    def closure(self, u) -> Subspace:
        basis = {}
        pending = _absorb_ints(basis, [u])
        # a cheap probe set first; the full pass below certifies the result
        self._close(basis, pending, self.probe)
        if len(basis) < self.n:
            self._close(basis, list(basis.values()), self.points)
        return Subspace.span(self.n, basis.values())

    def spans_everything(self) -> np.ndarray:
        """Boolean mask over u: span{u, probe differences of u} is all of V.

        Batched rank computation; a True entry already proves closure(u) = V.
        """
        n, rho = self.n, self.rho
        u = self.points
        piv = np.zeros((u.size, n), dtype=np.uint32)
        rank = np.zeros(u.size, dtype=np.int64)
        top = np.zeros(1 << n, dtype=np.int64)
        top[1:] = np.floor(np.log2(np.arange(1, 1 << n))).astype(np.int64)
        rows = np.arange(u.size)
        columns = [u] + [rho[u ^ v] ^ rho[v] for v in self.probe]
        for x in columns:
            x = x.copy()
            for bit in range(n - 1, -1, -1):
                hit = ((x >> np.uint32(bit)) & np.uint32(1)).astype(bool)
                x[hit] ^= piv[hit, bit]
            nz = x != 0
            t = top[x[nz]]
            piv[rows[nz], t] = x[nz]
            rank[nz] += 1
        return rank == n


class _SampledDifferences:
    """Difference closures with v drawn from a seeded sample (any width)."""

    def __init__(self, spec: CipherSpec, samples=DEFAULT_SAMPLES, seed=0):
        self.spec = spec
        self.n = spec.n_b
        self.samples = samples
        self.rng = random.Random(seed)

    def _close(self, basis, pending):
        rho, n = self.spec.rho, self.n
        while pending and len(basis) < n:
            w = pending.pop()
            diffs = []
            for _ in range(self.samples):
                v = self.rng.getrandbits(n)
                diffs.append(rho(v ^ w) ^ rho(v))
            pending.extend(_absorb_ints(basis, diffs))

    def closure(self, u) -> Subspace:
        basis = {}
        self._close(basis, _absorb_ints(basis, [u]))
        return Subspace.span(self.n, basis.values())

    def confirm(self, U: Subspace):
        """Fresh-sample check over every basis vector; returns an escaping difference."""
        rho, n = self.spec.rho, self.n
        for w in U.basis:
            for _ in range(self.samples):
                v = self.rng.getrandbits(n)
                d = rho(v ^ w) ^ rho(v)
                if not U.contains(d):
                    return d
        return None


def difference_closure(spec: CipherSpec, u, sampled=False, samples=DEFAULT_SAMPLES,
                       seed=0) -> Subspace:
    """Smallest difference-invariant subspace containing ``u``."""
    u = int(u)
    if not 0 < u < 1 << spec.n_b:
        raise UsageError(f"seed must be a nonzero {spec.n_b}-bit vector")
    if sampled:
        return _SampledDifferences(spec, samples, seed).closure(u)
    return _ExhaustiveDifferences(spec).closure(u)


def is_difference_invariant(spec: CipherSpec, U: Subspace, all_pairs=False) -> bool:
    """Exhaustive check of (v + u) rho + v rho in U over all v.

    u runs over a basis of U by default (sufficient, since the difference of
    u1 + u2 splits into differences of u1 and u2), or over every element.
    """
    rho = spec.rho_table
    member = np.zeros(1 << spec.n_b, dtype=bool)
    member[np.asarray(U.elements(), dtype=np.int64)] = True
    points = np.arange(1 << spec.n_b, dtype=np.uint32)
    for w in (U.elements()[1:] if all_pairs else U.basis):
        if not member[rho[points ^ np.uint32(w)] ^ rho].all():
            return False
    return True


@dataclass
class BlockSystemReport:
    cipher: str
    n_b: int
    method: str
    mode: str
    exists_nontrivial: bool
    invariant_subspaces: list = field(default_factory=list)
    seed_trace: dict = field(default_factory=dict)
    blocks: list = field(default_factory=list)
    heuristic: bool = False

    def to_dict(self):
        w = self.n_b
        out = {
            "cipher": self.cipher,
            "n_b": w,
            "method": self.method,
            "mode": self.mode,
            "heuristic": self.heuristic,
            "exists_nontrivial": self.exists_nontrivial,
            "invariant_subspaces": [
                {"dim": S.dim, "basis": S.hex_basis()} for S in self.invariant_subspaces],
        }
        if self.method == CLOSURE:
            dims = {}
            for d in self.seed_trace.values():
                dims[d] = dims.get(d, 0) + 1
            out["closure_dimensions"] = {str(d): c for d, c in sorted(dims.items())}
            out["proper_closures"] = {
                to_hex(u, w): d for u, d in sorted(self.seed_trace.items()) if d < w}
        else:
            out["blocks"] = [
                {"size": len(b), "count": (1 << w) // len(b),
                 "alpha": to_hex(a, w)} for a, b in self.blocks]
        return out

    def render(self):
        lines = [f"cipher: {self.cipher} (n_b = {self.n_b})",
                 f"method: {self.method} ({self.mode}{', heuristic' if self.heuristic else ''})"]
        if self.method == CLOSURE:
            proper = sum(1 for d in self.seed_trace.values() if d < self.n_b)
            lines.append(f"seeds examined: {len(self.seed_trace)}, proper closures: {proper}")
        else:
            for alpha, b in self.blocks:
                lines.append(f"  block through 0 and {to_hex(alpha, self.n_b)}: size {len(b)}, "
                             f"{(1 << self.n_b) // len(b)} blocks")
        for S in self.invariant_subspaces:
            lines.append(f"  invariant subspace dim {S.dim}: {' '.join(S.hex_basis())}")
        lines.append("nontrivial block system: " + ("YES" if self.exists_nontrivial else "no"))
        return "\n".join(lines)


def find_linear_block_systems(spec: CipherSpec, sampled=None, samples=DEFAULT_SAMPLES,
                              seed=0, extra_seeds=None, seeds=()) -> BlockSystemReport:
    """Minimal nontrivial difference-invariant subspaces of ``spec``.

    Exhaustive for n_b <= 16 (every nonzero seed, every v). Sampled mode seeds
    the closure with the basis vectors plus ``extra_seeds`` random vectors and
    draws v at random, plus any explicit ``seeds``; its findings are labelled
    heuristic.
    """
    if sampled is None:
        sampled = spec.n_b > MAX_TOY_WIDTH
    if sampled:
        return _find_sampled(spec, samples, seed, extra_seeds, seeds)

    n = spec.n_b
    engine = _ExhaustiveDifferences(spec)
    full = engine.spans_everything()
    trace = {}
    proper = {}
    for u in range(1, 1 << n):
        if full[u]:
            trace[u] = n
            continue
        C = engine.closure(u)
        trace[u] = C.dim
        if C.dim < n:
            proper[u] = C
    distinct = set(proper.values())
    # C is minimal iff every nonzero element has closure exactly C
    minimal = [C for C in distinct if all(proper.get(x) == C for x in C.elements()[1:])]
    minimal.sort(key=Subspace.sort_key)
    return BlockSystemReport(spec.name, n, CLOSURE, "exhaustive", bool(distinct),
                             minimal, trace)


def _find_sampled(spec, samples, seed, extra_seeds, explicit=()):
    n = spec.n_b
    engine = _SampledDifferences(spec, samples, seed)
    rng = random.Random(seed)
    if extra_seeds is None:
        extra_seeds = 8
    seeds = [1 << i for i in range(n)] + [rng.getrandbits(n) or 1 for _ in range(extra_seeds)]
    seeds += [int(u) for u in explicit if int(u)]
    trace = {}
    found = set()
    for u in seeds:
        C = engine.closure(u)
        while not C.is_full():
            escape = engine.confirm(C)
            if escape is None:
                break
            C = _reclose(engine, Subspace.span(n, C.basis + (escape,)))
        trace[u] = C.dim
        if not C.is_full():
            found.add(C)
    minimal = sorted((C for C in found if not any(D < C for D in found)),
                     key=Subspace.sort_key)
    return BlockSystemReport(spec.name, n, CLOSURE, "sampled", bool(found), minimal,
                             trace, heuristic=True)


def _reclose(engine, C):
    basis = {}
    pending = _absorb_ints(basis, C.basis)
    engine._close(basis, pending)
    return Subspace.span(engine.n, basis.values())


# -- group action -----------------------------------------------------------


def _check_action_width(spec):
    if spec.n_b > MAX_ACTION_WIDTH:
        raise UsageError(f"group action is materialised only for n_b <= {MAX_ACTION_WIDTH}, "
                         f"got {spec.n_b}")


def _generators(spec: CipherSpec) -> list:
    """Point-image lists for v -> v + e_i (each i) and v -> v rho."""
    n = spec.n_b
    points = np.arange(1 << n, dtype=np.uint32)
    gens = [(points ^ np.uint32(1 << i)).tolist() for i in range(n)]
    gens.append(spec.rho_table.tolist())
    return gens


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def minimal_block_partition(gens: list, size: int, alpha) -> list:
    """Finest G-invariant partition with 0 and ``alpha`` together, as class labels."""
    parent = list(range(size))
    parent[alpha] = 0
    queue = [(0, alpha)]
    while queue:
        a, b = queue.pop()
        for g in gens:
            x, y = _find(parent, g[a]), _find(parent, g[b])
            if x != y:
                if y < x:
                    x, y = y, x
                parent[y] = x
                queue.append((x, y))
    return [_find(parent, x) for x in range(size)]


def minimal_block_through(spec: CipherSpec, alpha) -> frozenset:
    """Smallest block of <T, rho> containing 0 and ``alpha``."""
    _check_action_width(spec)
    alpha = int(alpha)
    if not 0 < alpha < 1 << spec.n_b:
        raise UsageError("alpha must be a nonzero state")
    labels = minimal_block_partition(_generators(spec), 1 << spec.n_b, alpha)
    return frozenset(x for x, lab in enumerate(labels) if lab == 0)


def stabilizer_orbit_representatives(spec: CipherSpec) -> list:
    """One point per orbit on V \\ {0} of a subgroup of the stabiliser of 0.

    The subgroup is generated by x -> (x + a) rho + a rho for a in {0, e_i};
    each of these fixes 0. Minimal blocks through 0 and alpha are permuted by
    the stabiliser, so one alpha per orbit decides primitivity.
    """
    n = spec.n_b
    rho = spec.rho_table
    points = np.arange(1 << n, dtype=np.uint32)
    src, dst = [], []
    for a in [0] + [1 << i for i in range(n)]:
        a = np.uint32(a)
        src.append(points)
        dst.append(rho[points ^ a] ^ rho[a])
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)),
                       shape=(1 << n, 1 << n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    reps = {}
    for x in range(1, 1 << n):
        reps.setdefault(labels[x], x)
    return sorted(reps.values())


def group_action_blocks(spec: CipherSpec) -> BlockSystemReport:
    _check_action_width(spec)
    n = spec.n_b
    size = 1 << n
    gens = _generators(spec)
    blocks = []
    seen = set()
    for alpha in stabilizer_orbit_representatives(spec):
        labels = minimal_block_partition(gens, size, alpha)
        block = frozenset(x for x, lab in enumerate(labels) if lab == 0)
        if len(block) < size and block not in seen:
            seen.add(block)
            blocks.append((alpha, block))
    subspaces = []
    for _, b in blocks:
        S = Subspace.span(n, b)
        if S.size == len(b):
            subspaces.append(S)
    subspaces.sort(key=Subspace.sort_key)
    return BlockSystemReport(spec.name, n, GROUP_ACTION, "exhaustive", bool(blocks),
                             subspaces, blocks=blocks)


@dataclass
class CrosscheckResult:
    passed: bool
    checked: list
    counterexample: dict | None = None

    def to_dict(self):
        return {"passed": self.passed, "checked": len(self.checked),
                "counterexample": self.counterexample}


def crosscheck_block_cosets(spec: CipherSpec, samples=8, seed=0, alphas=None) -> CrosscheckResult:
    """Compare union-find blocks with difference closures on sampled alphas.

    For each alpha: the block through 0 and alpha must be the point set of
    closure(alpha), and every class of the partition must be a coset of it.
    """
    _check_action_width(spec)
    n = spec.n_b
    size = 1 << n
    if alphas is None:
        rng = random.Random(seed)
        alphas = sorted(set(rng.randrange(1, size) for _ in range(samples)))
    gens = _generators(spec)
    engine = _ExhaustiveDifferences(spec)
    checked = []
    for alpha in alphas:
        labels = minimal_block_partition(gens, size, alpha)
        U = engine.closure(alpha)
        block = {x for x, lab in enumerate(labels) if lab == 0}
        if block != set(U.elements()):
            return CrosscheckResult(False, checked, {
                "alpha": to_hex(alpha, n), "block_size": len(block),
                "closure_dim": U.dim, "reason": "block through 0 is not the closure"})
        for v, lab in enumerate(labels):
            if lab != labels[U.reduce(v)]:
                return CrosscheckResult(False, checked, {
                    "alpha": to_hex(alpha, n), "v": to_hex(v, n),
                    "reason": "block through v is not the coset v + U"})
        if len(set(labels)) != size >> U.dim:
            return CrosscheckResult(False, checked, {
                "alpha": to_hex(alpha, n), "reason": "wrong number of blocks"})
        checked.append(alpha)
    return CrosscheckResult(True, checked)
