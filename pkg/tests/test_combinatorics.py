from fractions import Fraction as F
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slbt.combinatorics import (
    ModelA,
    Pmf,
    binomial_pmf,
    conditional_n1_mean,
    convolve,
    equal_parameter,
    joint_tx,
    minus_count_pmf,
    quality_c,
)
from slbt.errors import DomainError

from oracles import enumerate_outcomes, minus_count_by_enumeration

A, B = F(7, 12), F(9, 12)
G73 = [F(343, 442368), F(539, 49152), F(9289, 147456), F(83159, 442368),
       F(45671, 147456), F(4555, 16384), F(2075, 16384), F(375, 16384)]

probs = st.floats(0.0, 1.0, allow_nan=False)


def small_models(max_n=6):
    return st.integers(2, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(1, n - 1), probs, probs)
    ).map(lambda t: ModelA(*t))


def random_pmf(max_len=6):
    return st.lists(st.floats(0.01, 1.0), min_size=1, max_size=max_len).map(
        lambda w: Pmf(np.array(w) / sum(w))
    )


class TestModel:
    @pytest.mark.parametrize("n,k", [(2, 2), (2, 0), (1, 1), (3, 4)])
    def test_rejects_bad_counts(self, n, k):
        with pytest.raises(DomainError):
            ModelA(n, k, 0.6, 0.7)

    @pytest.mark.parametrize("a,b", [(-0.1, 0.5), (0.5, 1.2)])
    def test_rejects_bad_probabilities(self, a, b):
        with pytest.raises(DomainError):
            ModelA(3, 1, a, b)

    def test_quality(self):
        assert ModelA(3, 1, 7 / 12, 9 / 12).c == pytest.approx(4.2)
        assert quality_c(1.0, 0.5) == float("inf")
        assert quality_c(equal_parameter(4.2), equal_parameter(4.2)) == pytest.approx(4.2)


class TestBinomial:
    def test_values(self):
        f = binomial_pmf(3, 0.25)
        expected = [comb(3, j) * 0.25**j * 0.75 ** (3 - j) for j in range(4)]
        np.testing.assert_allclose(f.mass, expected, atol=1e-15)

    def test_degenerate(self):
        assert list(binomial_pmf(4, 0.0).mass) == [1, 0, 0, 0, 0]
        assert list(binomial_pmf(4, 1.0).mass) == [0, 0, 0, 0, 1]
        assert list(binomial_pmf(0, 0.3).mass) == [1]

    def test_out_of_support_is_zero(self):
        f = binomial_pmf(2, 0.5)
        assert f[-1] == 0.0 and f[3] == 0.0

    def test_rejects_non_normalized(self):
        with pytest.raises(DomainError):
            Pmf(np.array([0.5, 0.4]))


class TestConvolve:
    @given(random_pmf(), random_pmf())
    def test_commutative(self, f, g):
        np.testing.assert_allclose(convolve(f, g).mass, convolve(g, f).mass, atol=1e-12)

    @given(random_pmf(4), random_pmf(4), random_pmf(4))
    def test_associative(self, f, g, h):
        np.testing.assert_allclose(
            convolve(convolve(f, g), h).mass, convolve(f, convolve(g, h)).mass, atol=1e-12
        )

    @given(random_pmf())
    def test_point_mass_identity(self, f):
        np.testing.assert_allclose(convolve(f, Pmf.point_mass(0)).mass, f.mass, atol=1e-15)

    def test_binomials_add(self):
        np.testing.assert_allclose(
            convolve(binomial_pmf(3, 0.3), binomial_pmf(4, 0.3)).mass,
            binomial_pmf(7, 0.3).mass,
            atol=1e-14,
        )


class TestMinusCount:
    def test_a21(self):
        np.testing.assert_allclose(
            minus_count_pmf(ModelA(2, 1, 7 / 12, 9 / 12)).mass,
            np.array([7, 26, 15]) / 48, atol=1e-12,
        )

    def test_a31(self):
        np.testing.assert_allclose(
            minus_count_pmf(ModelA(3, 1, 7 / 12, 9 / 12)).mass,
            np.array([7, 47, 93, 45]) / 192, atol=1e-12,
        )

    def test_a73_exact(self):
        g = minus_count_pmf(ModelA(7, 3, 7 / 12, 9 / 12)).mass
        np.testing.assert_allclose(g, [float(v) for v in G73], rtol=1e-12)
        assert minus_count_by_enumeration(7, 3, A, B) == G73

    def test_reduced_model_allows_k_equal_boxes(self):
        g = minus_count_pmf(ModelA(3, 2, 0.7, 0.8), boxes=2)
        np.testing.assert_allclose(g.mass, binomial_pmf(2, 0.3).mass)

    def test_mean(self):
        m = ModelA(7, 3, 7 / 12, 9 / 12)
        assert minus_count_pmf(m).mean() == pytest.approx(3 * 5 / 12 + 4 * 9 / 12)

    @settings(max_examples=30, deadline=None)
    @given(small_models(5))
    def test_matches_enumeration(self, model):
        expected = minus_count_by_enumeration(model.n, model.k, model.a, model.b)
        np.testing.assert_allclose(minus_count_pmf(model).mass, expected, atol=1e-12)

    @given(small_models())
    def test_perfect_tests(self, model):
        m = ModelA(model.n, model.k, 1.0, 1.0)
        assert minus_count_pmf(m)[m.n - m.k] == 1.0


class TestJoint:
    def test_a31_cells(self):
        # every cell by exhaustive enumeration in exact arithmetic
        exact = {}
        for locks, s, pr in enumerate_outcomes(3, 1, A, B):
            x = 3 - sum(s)
            t = sum(1 for i in locks if s[i] == 0)
            exact[t, x] = exact.get((t, x), 0) + pr
        j = joint_tx(ModelA(3, 1, 7 / 12, 9 / 12))
        for t in range(2):
            for x in range(4):
                assert j.at(t, x) == pytest.approx(float(exact.get((t, x), 0)), abs=1e-12)
        np.testing.assert_allclose(j.column_sums(), np.array([7, 47, 93, 45]) / 192, atol=1e-12)
        assert j.at(1, 0) == 0.0 and j.at(0, 3) == 0.0 and j.at(5, 1) == 0.0

    @given(small_models())
    def test_columns_give_minus_count(self, model):
        np.testing.assert_allclose(
            joint_tx(model).column_sums(), minus_count_pmf(model).mass, atol=1e-12
        )

    def test_conditional_mean(self):
        m = ModelA(3, 1, 7 / 12, 9 / 12)
        j = joint_tx(m)
        x = 1
        expected = j.at(1, x) / (j.at(0, x) + j.at(1, x))
        assert conditional_n1_mean(m, x) == pytest.approx(expected)

    def test_conditional_undefined(self):
        m = ModelA(3, 1, 1.0, 1.0)
        with pytest.raises(DomainError):
            joint_tx(m).conditional(0)
