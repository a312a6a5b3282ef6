import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_dot, brute_span, brute_subspaces
from roundgroups.errors import EnumerationTooLarge, SingularMatrix, UsageError
from roundgroups.gf2 import (BitMatrix, BitVector, Subspace, annihilator, count_subspaces,
                             enumerate_all_subspaces, enumerate_subspaces, mat_apply,
                             mat_invert, random_invertible, subspace_contains,
                             subspace_from_generators, subspace_intersection, subspace_sum,
                             vec_add)

SWAP = BitMatrix((0b10, 0b01), 2)


def test_vec_add_examples():
    assert int(vec_add(BitVector(3, 0b101), BitVector(3, 0b011))) == 0b110
    v = BitVector(5, 0b10110)
    assert int(vec_add(v, v)) == 0
    assert vec_add(v, BitVector(5, 0)) == v


def test_vec_add_width_mismatch():
    with pytest.raises(UsageError):
        vec_add(BitVector(3, 1), BitVector(4, 1))


def test_mat_apply_examples():
    assert mat_apply(BitMatrix.identity(4), 0b1010) == 0b1010
    assert mat_apply(BitMatrix.zero(4), 0b1011) == 0
    assert mat_apply(SWAP, 0b01) == 0b10


def test_mat_apply_dimension_mismatch():
    with pytest.raises(UsageError):
        mat_apply(BitMatrix.identity(2), 0b111)


def test_mat_invert_examples():
    assert mat_invert(BitMatrix.identity(5)) == BitMatrix.identity(5)
    assert mat_invert(SWAP) == SWAP
    with pytest.raises(SingularMatrix):
        mat_invert(BitMatrix.zero(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32))
def test_random_invertible_roundtrip(n, seed):
    M = random_invertible(n, random.Random(seed))
    Minv = M.inverse()
    assert M.then(Minv) == BitMatrix.identity(n)
    v = random.Random(seed + 1).getrandbits(n)
    assert mat_apply(Minv, mat_apply(M, v)) == v


def test_then_is_left_to_right():
    rng = random.Random(3)
    A, B = random_invertible(6, rng), random_invertible(6, rng)
    for v in range(64):
        assert A.then(B).apply(v) == B.apply(A.apply(v))


def test_subspace_examples():
    assert subspace_from_generators(3, [0b011, 0b101, 0b110]).dim == 2
    assert subspace_from_generators(5, []).is_zero()
    assert subspace_from_generators(3, [1, 2, 4]).is_full()
    S = Subspace.span(3, [0b011, 0b101])
    assert subspace_contains(S, 0b110)
    assert subspace_contains(S, 0)
    assert not subspace_contains(Subspace.span(3, [1]), 0b010)


def test_contains_width_mismatch():
    with pytest.raises(UsageError):
        subspace_contains(Subspace.span(3, [1]), 0b1000)


def test_sum_intersection_examples():
    S = Subspace.span(4, [0b0011, 0b1100])
    Z = Subspace.zero(4)
    assert subspace_sum(S, Z) == S
    assert subspace_intersection(S, Z) == Z
    assert subspace_sum(S, S) == S and subspace_intersection(S, S) == S
    e0, e1 = Subspace.span(2, [1]), Subspace.span(2, [2])
    assert subspace_sum(e0, e1).is_full()
    assert subspace_intersection(e0, e1).is_zero()
    with pytest.raises(UsageError):
        subspace_sum(S, Subspace.zero(3))


def test_annihilator_examples():
    assert annihilator(Subspace.zero(4)).is_full()
    assert annihilator(Subspace.full(4)).is_zero()
    S = Subspace.span(2, [0b11])
    assert annihilator(S) == S


def test_counting_examples():
    assert count_subspaces(8, 4) == 200787
    assert count_subspaces(4, 2) == 35
    assert all(count_subspaces(n, 0) == 1 for n in range(10))
    assert sum(1 for _ in enumerate_subspaces(4, 2)) == 35
    assert list(enumerate_subspaces(5, 0)) == [Subspace.zero(5)]


def test_total_for_width_8():
    assert sum(count_subspaces(8, k) for k in range(9)) == 417199


def test_enumeration_budget():
    with pytest.raises(EnumerationTooLarge):
        list(enumerate_subspaces(8, 4, budget=1000))


@pytest.mark.parametrize("n", range(0, 5))
def test_enumeration_matches_brute_force(n):
    mine = {frozenset(S.elements()) for S in enumerate_all_subspaces(n)}
    assert mine == brute_subspaces(n)


@pytest.mark.parametrize("n", range(0, 7))
def test_enumeration_count_and_distinctness(n):
    for k in range(n + 1):
        subs = list(enumerate_subspaces(n, k))
        assert len(subs) == count_subspaces(n, k)
        assert len(set(subs)) == len(subs)
        assert all(S.dim == k for S in subs)


vectors = st.lists(st.integers(0, 2**12 - 1), max_size=8)


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_span_matches_brute_force(gens):
    S = Subspace.span(12, gens)
    assert set(S.elements()) == brute_span(gens)
    assert S.size == len(brute_span(gens))


@settings(max_examples=200, deadline=None)
@given(vectors, st.randoms(use_true_random=False))
def test_canonical_form_is_basis_independent(gens, rnd):
    S = Subspace.span(12, gens)
    # a different generating set of the same space
    shuffled = list(S.elements())
    rnd.shuffle(shuffled)
    assert Subspace.span(12, shuffled[:max(1, S.dim + 3)] + list(S.basis)) == S
    pivots = [r.bit_length() - 1 for r in S.basis]
    assert pivots == sorted(pivots)
    for r in S.basis:
        for p in pivots:
            if p != r.bit_length() - 1:
                assert not (r >> p) & 1


@settings(max_examples=200, deadline=None)
@given(vectors, vectors)
def test_dimension_formula(a, b):
    S, T = Subspace.span(12, a), Subspace.span(12, b)
    assert S.sum(T).dim + S.intersection(T).dim == S.dim + T.dim
    assert set(S.intersection(T).elements()) == brute_span(a) & brute_span(b)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 63), max_size=6))
def test_annihilator_duality(gens):
    S = Subspace.span(6, gens)
    A = S.annihilator()
    assert A.dim == 6 - S.dim
    assert A.annihilator() == S
    brute = {y for y in range(64) if all(brute_dot(x, y) == 0 for x in S.elements())}
    assert set(A.elements()) == brute


@settings(max_examples=100, deadline=None)
@given(vectors, st.integers(0, 2**12 - 1))
def test_coset_representatives_partition(gens, v):
    S = Subspace.span(8, [g & 0xFF for g in gens])
    reps = list(S.coset_representatives())
    assert len(reps) == 1 << S.codim
    assert len({S.reduce(r) for r in reps}) == len(reps)
    assert S.reduce(v & 0xFF) in {S.reduce(r) for r in reps}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 63), max_size=6), st.randoms(use_true_random=False))
def test_span_idempotent_and_order_independent(gens, rnd):
    S = Subspace.span(6, gens)
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    assert Subspace.span(6, shuffled) == S
    assert Subspace.span(6, S.basis) == S


def test_annihilator_reverses_inclusion():
    subs = list(enumerate_all_subspaces(4))
    for A in subs:
        for B in subs:
            if A <= B:
                assert B.annihilator() <= A.annihilator()
