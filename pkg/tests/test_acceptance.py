"""Acceptance criteria, one test each. A summary line per criterion is
printed at the end of the run."""

import math
import random
import time

import pytest

from roundgroups.blocks import (crosscheck_block_cosets, find_linear_block_systems,
                                group_action_blocks)
from roundgroups.cipher import SBoxTable, aes_spec, toy_spec
from roundgroups.fieldfacts import (four_solution_set, hua_sweep, inversion_closed_subspaces,
                                    solution_counts, solve_difference_equation)
from roundgroups.gf2 import count_subspaces, enumerate_subspaces, random_subspace
from roundgroups.gf2m import FieldSpec, aes_field
from roundgroups.primitivity import (CERTIFIED_PRIMITIVE, differential_image_size,
                                     invariant_subspaces_up_to_codim,
                                     lambda_invariant_block_sums, verify_primitivity)
from roundgroups.trapdoor import (build_trapdoor_cipher, chance_baseline, coset_key_recovery,
                                  oracle_pairs, truncated_distinguisher)

AES_INV = SBoxTable.inversion(aes_field())


@pytest.mark.criterion(1)
def test_aes_differential_image_size(criterion):
    t0 = time.perf_counter()
    sizes = [differential_image_size(AES_INV, a) for a in range(1, 256)]
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"min {min(sizes)}, max {max(sizes)}, {elapsed:.2f}s"
    assert min(sizes) == max(sizes) == 127
    assert elapsed < 1.0


@pytest.mark.criterion(2)
def test_aes_invariant_subspaces(criterion):
    t0 = time.perf_counter()
    assert invariant_subspaces_up_to_codim(AES_INV, 2) == []
    cat = inversion_closed_subspaces(aes_field())
    elapsed = time.perf_counter() - t0
    criterion["detail"] = (f"{cat.examined} examined, dims {cat.dimensions}, "
                           f"largest proper codim {cat.largest_proper.codim}, {elapsed:.1f}s")
    assert cat.examined == 417199
    assert len(cat.inversion_closed_subspaces) == 4 and cat.all_subfields
    assert cat.largest_proper.codim == 4
    assert elapsed < 300


@pytest.mark.criterion(3)
def test_aes_lambda_block_sums(criterion):
    spec = aes_spec()
    t0 = time.perf_counter()
    sums = lambda_invariant_block_sums(spec.lam, spec.partition)
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"{len(sums)} invariant sums over 65534 subsets, {elapsed:.2f}s"
    assert sums == []
    assert elapsed < 10


@pytest.mark.criterion(4)
def test_aes_verdict(criterion):
    report = verify_primitivity(aes_spec(), s=2)
    criterion["detail"] = f"{report.verdict}, r = {report.achieved_r}"
    assert report.verdict == CERTIFIED_PRIMITIVE and report.achieved_r == 1


@pytest.mark.criterion(5)
def test_solution_counts(criterion):
    F = aes_field()
    rng = random.Random(5)
    values = rng.sample(range(1, 256), 16)
    for a in values:
        b_star = F.inv(a)
        assert solve_difference_equation(F, a, b_star) == four_solution_set(F, a)
        counts = solution_counts(F, a)
        assert counts[b_star] == 4
        assert all(c <= 2 for b, c in enumerate(counts) if b != b_star)
    F3 = FieldSpec(3)
    worst = max(max(solution_counts(F3, a)) for a in range(1, 8))
    criterion["detail"] = f"16 values of a in GF(2^8); GF(2^3) max count {worst}"
    assert worst <= 2


def _criterion6_specs():
    specs = []
    for seed in range(4):
        specs.append(toy_spec(2, 4, "random", "random", seed=seed))
        specs.append(toy_spec(3, 4, "random", "random", seed=seed))
    specs += [toy_spec(2, 4, "inversion", "mixcolumns"), toy_spec(2, 6, "inversion", "mixcolumns"),
              toy_spec(4, 2, "inversion", "rotate"), toy_spec(4, 3, "inversion", "rotate"),
              toy_spec(2, 4, "inversion", "identity"), toy_spec(3, 4, "inversion", "identity")]
    for seed, (n, d) in enumerate([(8, 2), (8, 4), (8, 6), (12, 3), (12, 6), (12, 9)]):
        specs.append(build_trapdoor_cipher(n, d, seed=seed).cipher)
    return specs


@pytest.mark.criterion(6)
def test_block_methods_agree(criterion):
    t0 = time.perf_counter()
    specs = _criterion6_specs()
    imprimitive = 0
    for spec in specs:
        assert spec.n_b in (8, 12)
        closure = find_linear_block_systems(spec)
        action = group_action_blocks(spec)
        assert closure.exists_nontrivial == action.exists_nontrivial, spec.name
        imprimitive += action.exists_nontrivial
        alphas = [a for a, _ in action.blocks]
        alphas += random.Random(spec.name).sample(range(1, 1 << spec.n_b), 4)
        res = crosscheck_block_cosets(spec, alphas=alphas)
        assert res.passed, (spec.name, res.counterexample)
    elapsed = time.perf_counter() - t0
    criterion["detail"] = (f"{len(specs)} specs, {imprimitive} imprimitive, "
                           f"all agree, {elapsed:.1f}s")
    assert len(specs) >= 20 and 0 < imprimitive < len(specs)
    assert elapsed < 120


@pytest.mark.criterion(7)
def test_trapdoor_attack_bound(criterion):
    t0 = time.perf_counter()
    worst = 0
    for seed in range(50):
        td = build_trapdoor_cipher(16, 8, seed=seed)
        rng = random.Random(seed)
        key = rng.getrandbits(16)
        res = coset_key_recovery(td, oracle_pairs(td, key, count=2, seed=rng.getrandbits(32)))
        assert res.recovered_key == key
        worst = max(worst, res.trial_count)
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"50/50 keys recovered, worst {worst} trials (bound 512), {elapsed:.1f}s"
    assert worst <= 512
    assert elapsed < 60


@pytest.mark.criterion(8)
def test_distinguisher_separation(criterion):
    n, d, samples = 16, 8, 10000
    td = build_trapdoor_cipher(n, d, seed=1)
    trap = truncated_distinguisher(td.cipher, td.planted_U, samples, seed=2)
    control = toy_spec(2, 8, "inversion", "mixcolumns")
    assert verify_primitivity(control).verdict == CERTIFIED_PRIMITIVE
    U = random_subspace(n, d, random.Random(3))
    f = truncated_distinguisher(control, U, samples, seed=4)
    p = chance_baseline(n, d)
    sigma = math.sqrt(p * (1 - p) / samples)
    z = (f - p) / sigma
    criterion["detail"] = f"trapdoor {trap}, control {f:.5f} vs {p:.5f} (z = {z:+.2f})"
    assert trap == 1.0
    assert abs(z) <= 5


@pytest.mark.criterion(9)
def test_hua_identity(criterion):
    c4, f4 = hua_sweep(FieldSpec(4))
    c8, f8 = hua_sweep(aes_field(), samples=10000, seed=9)
    criterion["detail"] = f"GF(2^4) {c4} pairs, GF(2^8) {c8} pairs, {len(f4) + len(f8)} failures"
    assert c4 == 15 * 15 - 15 and c8 == 10000
    assert f4 == [] and f8 == []


@pytest.mark.criterion(10)
def test_gaussian_binomial(criterion):
    assert count_subspaces(8, 4) == 200787
    for n in range(7):
        for k in range(n + 1):
            assert sum(1 for _ in enumerate_subspaces(n, k)) == count_subspaces(n, k)
    criterion["detail"] = "[8,4]_2 = 200787; enumeration matches for n <= 6"
