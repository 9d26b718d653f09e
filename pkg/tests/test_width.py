from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import block_system, mixed_system, sympy_width_holds
from widthk.linalg import SymMatrix
from widthk.systems import (
    gen_lower_bound,
    gen_normal_form,
    gen_segre_fourfold,
    gen_width3_triple,
    random_symmetric,
)
from widthk.width import (
    Witness,
    WidthError,
    schwartz_zippel_bound,
    symmetrized_wedges,
    verify_witness,
    wedge_polynomial,
    width_k_random,
    width_k_symbolic,
    width_k_symmetrized,
    width_subset_symbolic,
)

SEGRE = gen_segre_fourfold().matrices
DIAG_PAIR = [SymMatrix.unit(3, 0, 0), SymMatrix.unit(3, 1, 1)]


# -- subset check ------------------------------------------------------------------

def test_subset_examples():
    assert width_subset_symbolic(SEGRE, (0, 1, 2, 3)) == (True, None)
    holds, w = width_subset_symbolic(DIAG_PAIR, (0, 1))
    assert not holds
    assert w == Witness((0, 1), (1, 1, 0))
    triple = gen_width3_triple(5, 4).matrices
    assert width_subset_symbolic(triple, (0, 1, 2))[0]


def test_subset_k_above_n_holds():
    ms = [SymMatrix.identity(2), SymMatrix.unit(2, 0, 1), SymMatrix.unit(2, 1, 1)]
    assert width_subset_symbolic(ms, (0, 1, 2)) == (True, None)
    rep = width_k_symbolic(ms, 3)
    assert rep.holds and "exceeds" in rep.note


def test_bad_indices():
    with pytest.raises(WidthError):
        width_subset_symbolic(SEGRE, (2, 1))
    with pytest.raises(WidthError):
        width_subset_symbolic(SEGRE, (0, 4))


def test_wedge_polynomial_of_segre_vanishes():
    assert wedge_polynomial(SEGRE, (0, 1, 2, 3)).is_zero()
    assert not wedge_polynomial(SEGRE, (0, 1, 2)).is_zero()


# -- full checkers -------------------------------------------------------------------

def test_symbolic_examples():
    assert width_k_symbolic(gen_lower_bound(5, 4).matrices, 4).holds
    rng = random.Random(50)
    dense = [random_symmetric(5, rng) for _ in range(3)]
    rep = width_k_symbolic(dense, 3)
    assert not rep.holds and verify_witness(dense, 3, rep.witness)


def test_normal_forms_fail_width4():
    # both quadruples have a nonvanishing 4x4 wedge, confirmed by sympy
    for variant in (1, 2):
        ms = gen_normal_form(variant).matrices
        rep = width_k_symbolic(ms, 4)
        assert not rep.holds
        assert verify_witness(ms, 4, rep.witness)
        assert not sympy_width_holds(list(ms), 4)


def test_r_below_k_is_an_error():
    for check in (width_k_symbolic, width_k_symmetrized):
        with pytest.raises(WidthError):
            check(DIAG_PAIR, 3)


def test_symmetrized_examples():
    assert width_k_symmetrized(SEGRE, 4).holds
    rep = width_k_symmetrized(DIAG_PAIR, 2)
    assert not rep.holds and verify_witness(DIAG_PAIR, 2, rep.witness)


def test_symmetrized_reference_matches_fast_kernel():
    # the slow Fraction reference and the integer kernel agree on zero-ness
    rng = random.Random(8)
    for _ in range(10):
        n = rng.randint(2, 4)
        ms = block_system(n, rng.randint(1, n), 3, rng)
        k = rng.randint(2, min(3, n))
        for idx in [(0, 1), (0, 1, 2)][: k - 1]:
            ref_zero = not symmetrized_wedges(ms, idx)
            assert ref_zero == width_subset_symbolic(ms, idx)[0]


def test_symmetrized_large_entries_use_exact_fallback():
    big = 10**12
    ms = [SymMatrix.unit(3, 0, 0) * big, SymMatrix.unit(3, 1, 1) * (big + 1), SymMatrix.unit(3, 0, 1) * big]
    assert width_k_symmetrized(ms, 3).holds == width_k_symbolic(ms, 3).holds


def test_random_examples():
    rep = width_k_random(SEGRE, 4, trials=64, seed=7)
    assert rep.holds and rep.failure_probability_bound < Fraction(1, 10**30)
    rep = width_k_random(DIAG_PAIR, 2, trials=1, seed=0)
    assert not rep.holds and verify_witness(DIAG_PAIR, 2, rep.witness)
    with pytest.raises(WidthError):
        width_k_random(SEGRE, 4, trials=0, seed=0)


def test_schwartz_zippel_bound():
    assert schwartz_zippel_bound(4, 1) == Fraction(4, 2 * 10**6 + 1)
    assert schwartz_zippel_bound(2, 3, box=1) == Fraction(8, 27)


# sympy's symbolic determinants get slow at n = 6; the acceptance suite covers that size
SMALL_DRAWS = [i for i in range(80) if mixed_system(i)[0][0].n <= 5][:24]


@pytest.mark.parametrize("i", SMALL_DRAWS)
def test_checkers_agree_with_sympy(i):
    ms, k = mixed_system(i)
    truth = sympy_width_holds(ms, k)
    assert width_k_symbolic(ms, k).holds == truth
    assert width_k_symmetrized(ms, k).holds == truth
    assert width_k_random(ms, k, trials=4, seed=i).holds == truth


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(1, 16))
def test_random_never_fails_a_holding_system(seed, trials):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    k = rng.randint(2, min(4, n))
    ms = block_system(n, k - 1, rng.randint(k, 5), rng)
    assert width_k_random(ms, k, trials, seed).holds


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_reported_witnesses_always_verify(seed):
    ms, k = mixed_system(seed)
    for rep in (width_k_symbolic(ms, k), width_k_symmetrized(ms, k), width_k_random(ms, k, 4, seed)):
        if not rep.holds:
            assert verify_witness(ms, k, rep.witness)


def test_reports_are_deterministic():
    ms, k = mixed_system(4)
    assert width_k_random(ms, k, 8, 3).to_dict() == width_k_random(ms, k, 8, 3).to_dict()
    assert width_k_symbolic(ms, k).to_dict() == width_k_symbolic(ms, k).to_dict()


# -- witnesses --------------------------------------------------------------------------

def test_verify_witness_examples():
    assert verify_witness(DIAG_PAIR, 2, Witness((0, 1), (1, 1, 0)))
    assert not verify_witness(DIAG_PAIR, 2, Witness((0, 1), (0, 0, 0)))
    assert not verify_witness(SEGRE, 4, Witness((0, 1, 2, 3), (1, 2, 3, 4)))
    assert not verify_witness(SEGRE, 4, Witness((0, 1, 2), (1, 2, 3, 4)))
    assert not verify_witness(SEGRE, 4, Witness((0, 1, 2, 3), (1, 2)))


def test_witness_serialization_is_one_based():
    assert Witness((0, 2), (Fraction(1, 2), 0)).to_dict() == {"indices": [1, 3], "u": ["1/2", "0"]}
