import itertools
import math

import numpy as np
import pytest

from bscbounds import (
    DimensionError,
    DomainError,
    ExplicitPmf,
    apply_bsc,
    best_case_mmse_given_output,
    conditional_mmse,
    counterexample_pmf,
    entropy,
    greedy_permutation,
    markov_joint_pmf,
    mmse_along_permutation,
    noisy_conditional_mmse,
    random_pmf,
    read_pmf,
    worst_case_mmse,
    write_pmf,
)


def _product(margs):
    w = np.ones(1)
    for p in margs:
        w = np.concatenate([w * (1.0 - p), w * p])
    return ExplicitPmf(w)


def _minor_perms(n):
    return list(itertools.permutations(range(1, n + 1)))


class TestExplicitPmf:
    def test_infers_n_from_length(self):
        assert ExplicitPmf([0.25] * 4).n == 2
        assert ExplicitPmf([0.125] * 8).n == 3
        assert ExplicitPmf([0.5, 0.5]).n == 1

    def test_renormalizes_within_tolerance(self):
        w = np.full(4, 0.25)
        w[0] += 3e-10
        pmf = ExplicitPmf(w)
        assert float(pmf.weights.sum()) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_bad_weights(self):
        with pytest.raises(DomainError):
            ExplicitPmf([0.5, 0.5, 0.5])  # not a power of two
        with pytest.raises(DomainError):
            ExplicitPmf([1.5, -0.5])  # negative
        with pytest.raises(DomainError):
            ExplicitPmf([0.7, 0.7])  # way off normalization
        with pytest.raises(DomainError):
            ExplicitPmf([math.inf, 0.0])
        with pytest.raises(DimensionError):
            ExplicitPmf(np.full(1 << 17, 1.0 / (1 << 17)))

    def test_immutable(self):
        pmf = ExplicitPmf([0.25] * 4)
        with pytest.raises(AttributeError):
            pmf.n = 3
        with pytest.raises(ValueError):
            pmf.weights[0] = 1.0


class TestEntropy:
    def test_uniform_and_point_mass(self):
        assert entropy(ExplicitPmf([0.25] * 4)) == pytest.approx(2.0, abs=1e-12)
        assert entropy(ExplicitPmf([1.0, 0.0, 0.0, 0.0])) == 0.0

    def test_product_of_biased_bits(self):
        pmf = _product([0.11, 0.11])
        assert entropy(pmf) == pytest.approx(0.9998319163290559, abs=1e-12)


class TestConditionalMmse:
    def test_unconditional_is_variance(self):
        pmf = _product([0.3, 0.5])
        assert conditional_mmse(pmf, 1) == pytest.approx(0.21, abs=1e-15)
        assert conditional_mmse(pmf, 2) == pytest.approx(0.25, abs=1e-15)

    def test_markov_neighbor(self):
        pmf = markov_joint_pmf(2, 0.2)
        assert conditional_mmse(pmf, 2, [1]) == pytest.approx(0.16, abs=1e-15)

    def test_rejects_bad_coordinates(self):
        pmf = _product([0.3, 0.5])
        with pytest.raises(DomainError):
            conditional_mmse(pmf, 3)
        with pytest.raises(DomainError):
            conditional_mmse(pmf, 1, [1])
        with pytest.raises(DomainError):
            conditional_mmse(pmf, 0, [1])


class TestMmseAlongPermutation:
    def test_markov_dyadic_value(self):
        pmf = markov_joint_pmf(3, 0.2)
        # 1/4 + MMSE(X3|X1) + MMSE(X2|X1,X3), frozen from the direct
        # eight-outcome enumeration
        assert mmse_along_permutation(pmf, (1, 3, 2)) == pytest.approx(
            0.5852470588235295, abs=1e-12)

    def test_order_matters_on_markov(self):
        pmf = markov_joint_pmf(3, 0.2)
        ident = mmse_along_permutation(pmf, (1, 2, 3))
        dy = mmse_along_permutation(pmf, (1, 3, 2))
        assert dy > ident

    def test_product_is_order_invariant(self):
        pmf = _product([0.2, 0.35, 0.45])
        vals = {round(mmse_along_permutation(pmf, p), 13) for p in _minor_perms(3)}
        assert len(vals) == 1

    def test_rejects_non_permutation(self):
        pmf = _product([0.2, 0.35])
        with pytest.raises(DomainError):
            mmse_along_permutation(pmf, (1, 1))
        with pytest.raises(DomainError):
            mmse_along_permutation(pmf, (1,))


class TestWorstCase:
    def test_iid_fair_bits(self):
        val, order = worst_case_mmse(ExplicitPmf([0.125] * 8))
        assert val == pytest.approx(0.75, abs=1e-15)
        assert order == (1, 2, 3)  # ties break to the first order tried

    def test_point_mass(self):
        val, order = worst_case_mmse(ExplicitPmf([1.0, 0.0, 0.0, 0.0]))
        assert val == 0.0
        assert order == (1, 2)

    def test_dominates_every_order(self):
        pmf = random_pmf(4, seed=11)
        val, _ = worst_case_mmse(pmf)
        for perm in _minor_perms(4):
            assert val >= mmse_along_permutation(pmf, perm) - 1e-12

    def test_cap_enforced(self):
        pmf = random_pmf(9, seed=0)
        with pytest.raises(DimensionError):
            worst_case_mmse(pmf)
        # a larger explicit cap lets it through
        val, order = worst_case_mmse(random_pmf(3, seed=0), cap=3)
        assert len(order) == 3 and val > 0.0


class TestBestCaseGivenOutput:
    def test_noiseless_matches_direct_minimum(self):
        pmf = random_pmf(3, seed=5)
        best, _ = best_case_mmse_given_output(pmf, 0.0)
        direct = min(mmse_along_permutation(pmf, p) for p in _minor_perms(3))
        assert best == pytest.approx(direct, abs=1e-12)

    def test_half_noise_gives_plain_variances(self):
        # useless observations reduce every step to the unconditioned variance
        pmf = random_pmf(3, seed=7)
        best, _ = best_case_mmse_given_output(pmf, 0.5)
        plain = sum(conditional_mmse(pmf, j) for j in (1, 2, 3))
        assert best == pytest.approx(plain, abs=1e-12)

    def test_noisy_at_least_noiseless(self):
        pmf = random_pmf(4, seed=9)
        b0, _ = best_case_mmse_given_output(pmf, 0.0)
        b1, _ = best_case_mmse_given_output(pmf, 0.11)
        b2, _ = best_case_mmse_given_output(pmf, 0.3)
        assert b0 <= b1 + 1e-12 <= b2 + 2e-12


class TestNoisyConditionalMmse:
    def test_matches_hand_enumeration(self):
        # joint of (X1, X2), observe Y2 = X2 xor noise, predict X1
        pmf = markov_joint_pmf(2, 0.2)
        a = 0.11
        total = 0.0
        for y2 in (0, 1):
            py = 0.0
            p1 = 0.0
            for x1 in (0, 1):
                for x2 in (0, 1):
                    w = float(pmf.weights[x1 | (x2 << 1)])
                    flip = a if y2 != x2 else 1.0 - a
                    py += w * flip
                    if x1 == 1:
                        p1 += w * flip
            cond = p1 / py
            total += py * cond * (1.0 - cond)
        assert noisy_conditional_mmse(pmf, 1, [2], a) == pytest.approx(total, abs=1e-14)

    def test_noise_never_helps(self):
        pmf = random_pmf(4, seed=21)
        for a in (0.05, 0.2, 0.5):
            clean = conditional_mmse(pmf, 2, [1, 4])
            noisy = noisy_conditional_mmse(pmf, 2, [1, 4], a)
            assert noisy >= clean - 1e-12


class TestApplyBsc:
    def test_zero_noise_is_identity(self):
        pmf = random_pmf(3, seed=2)
        out = apply_bsc(pmf, 0.0)
        assert np.allclose(out.weights, pmf.weights, atol=0)

    def test_half_noise_is_uniform(self):
        pmf = random_pmf(3, seed=2)
        out = apply_bsc(pmf, 0.5)
        assert np.allclose(out.weights, 0.125, atol=1e-15)

    def test_point_mass_becomes_product(self):
        out = apply_bsc(ExplicitPmf([1.0, 0.0, 0.0, 0.0]), 0.11)
        expect = _product([0.11, 0.11])
        assert np.allclose(out.weights, expect.weights, atol=1e-15)

    def test_entropy_never_decreases(self):
        pmf = random_pmf(4, seed=13)
        hs = [entropy(apply_bsc(pmf, a)) for a in (0.0, 0.05, 0.2, 0.5)]
        assert all(b >= a - 1e-12 for a, b in zip(hs, hs[1:]))


class TestMarkovJointPmf:
    def test_two_step_weights(self):
        pmf = markov_joint_pmf(2, 0.2)
        assert np.allclose(pmf.weights, [0.4, 0.1, 0.1, 0.4], atol=1e-15)

    def test_frozen_chain_splits_mass(self):
        pmf = markov_joint_pmf(3, 0.0)
        w = pmf.weights
        assert w[0] == pytest.approx(0.5, abs=0)
        assert w[7] == pytest.approx(0.5, abs=0)
        assert float(w.sum() - w[0] - w[7]) == 0.0

    def test_half_rate_is_uniform(self):
        pmf = markov_joint_pmf(3, 0.5)
        assert np.allclose(pmf.weights, 0.125, atol=1e-15)

    def test_marginals_are_fair(self):
        pmf = markov_joint_pmf(4, 0.2)
        for j in range(1, 5):
            assert conditional_mmse(pmf, j) == pytest.approx(0.25, abs=1e-15)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            markov_joint_pmf(3, 0.7)
        with pytest.raises(DimensionError):
            markov_joint_pmf(0, 0.2)
        with pytest.raises(DimensionError):
            markov_joint_pmf(17, 0.2)


class TestGreedyPermutation:
    def test_markov_picks_far_end_second(self):
        assert greedy_permutation(markov_joint_pmf(3, 0.2)) == (1, 3, 2)

    def test_product_falls_back_to_index_order(self):
        assert greedy_permutation(_product([0.5, 0.5, 0.5])) == (1, 2, 3)

    def test_highest_variance_first(self):
        pmf = _product([0.1, 0.5, 0.3])
        assert greedy_permutation(pmf)[0] == 2


class TestCounterexamplePmf:
    def test_weights_layout(self):
        pmf = counterexample_pmf(0.1)
        assert np.allclose(pmf.weights, [0.5, 0.1, 0.0, 0.4], atol=1e-15)

    def test_bit_one_has_higher_variance(self):
        for eps in (0.01, 0.1, 0.3, 0.49):
            pmf = counterexample_pmf(eps)
            assert conditional_mmse(pmf, 1) > conditional_mmse(pmf, 2)

    def test_rejects_boundary(self):
        for bad in (0.0, 0.5, -0.1, 0.6):
            with pytest.raises(DomainError):
                counterexample_pmf(bad)


class TestRandomPmf:
    def test_deterministic_per_seed(self):
        a = random_pmf(3, seed=42)
        b = random_pmf(3, seed=42)
        c = random_pmf(3, seed=43)
        assert np.array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, c.weights)

    def test_strictly_positive(self):
        assert float(random_pmf(4, seed=1).weights.min()) > 0.0


class TestPmfFiles:
    def test_round_trip(self, tmp_path):
        pmf = random_pmf(3, seed=8)
        path = tmp_path / "law.pmf"
        write_pmf(pmf, path)
        back = read_pmf(path)
        assert back.n == 3
        assert np.array_equal(back.weights, pmf.weights)

    def test_malformed_files(self, tmp_path):
        bad = tmp_path / "bad.pmf"
        bad.write_text("2\n0.5 0.5\n")
        with pytest.raises(DomainError):
            read_pmf(bad)
        bad.write_text("x\n")
        with pytest.raises(DomainError):
            read_pmf(bad)
        bad.write_text("")
        with pytest.raises(DomainError):
            read_pmf(bad)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            read_pmf(tmp_path / "absent.pmf")


def test_mmse_bracket_on_random_pmfs():
    # any order: 4 n phat (1-phat) <= 4 MMSE <= H(X), phat = hinv(H/n)
    from bscbounds import inv_binary_entropy

    for seed in range(40):
        n = 2 + seed % 3
        pmf = random_pmf(n, seed=seed)
        h = entropy(pmf)
        phat = inv_binary_entropy(h / n)
        floor = 4.0 * n * phat * (1.0 - phat)
        for perm in _minor_perms(n):
            m4 = 4.0 * mmse_along_permutation(pmf, perm)
            assert m4 >= floor - 1e-10
            assert m4 <= h + 1e-10
