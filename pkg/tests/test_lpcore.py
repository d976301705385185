import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcompact.lpcore import (
    INF,
    Exponent,
    TailedSequence,
    as_exponent,
    conjugate_exponent,
    holder_pairing,
    lp_norm,
    vec_norm,
)


class TestConjugateExponent:
    def test_one_gives_inf(self):
        assert conjugate_exponent(1).is_inf

    def test_two_self_conjugate(self):
        assert conjugate_exponent(2).p == 2.0

    def test_four_thirds_gives_four(self):
        assert conjugate_exponent(4 / 3).p == pytest.approx(4.0, abs=1e-12)

    def test_inf_gives_one(self):
        assert conjugate_exponent(INF).p == 1.0

    @given(st.floats(min_value=1.0, max_value=100.0))
    def test_involution(self, p):
        q = as_exponent(p).conjugate().conjugate()
        assert q.p == pytest.approx(p, rel=1e-12)

    def test_rejects_below_one(self):
        with pytest.raises(ValueError):
            Exponent(0.5)


class TestLpNorm:
    def test_euclidean_3_4_5(self):
        s = TailedSequence(prefix=[3, 4], p=2)
        assert lp_norm(s) == (5.0, 5.0)

    def test_ones_l1(self):
        s = TailedSequence(prefix=[1, 1, 1], p=1)
        assert lp_norm(s) == (3.0, 3.0)

    def test_geometric_tail_interval(self):
        # prefix 1/2, 1/4 with the exact remaining geometric mass 1/4
        s = TailedSequence(prefix=[0.5, 0.25], p=1, tail_norm=0.25)
        lo, hi = lp_norm(s)
        assert lo == pytest.approx(0.75, abs=1e-15)
        assert hi == pytest.approx(1.0, abs=1e-15)

    def test_inf_uses_max_semantics(self):
        s = TailedSequence(prefix=[2, 5, 3], p=INF, tail_norm=4.0)
        assert lp_norm(s) == (5.0, 5.0)

    def test_negative_tail_rejected(self):
        with pytest.raises(ValueError):
            TailedSequence(prefix=[1], p=1, tail_norm=-0.1)


finite_seqs = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1,
    max_size=8)
exponents = st.sampled_from([1.0, 1.5, 2.0, 3.0])


class TestNormProperties:
    @settings(max_examples=60)
    @given(finite_seqs, finite_seqs, exponents)
    def test_triangle_inequality(self, a, b, p):
        n = max(len(a), len(b))
        a = a + [0.0] * (n - len(a))
        b = b + [0.0] * (n - len(b))
        s = vec_norm(np.asarray(a) + np.asarray(b), p)
        assert s <= vec_norm(a, p) + vec_norm(b, p) + 1e-12

    @settings(max_examples=60)
    @given(finite_seqs, finite_seqs, exponents)
    def test_hoelder(self, alpha, x, p):
        n = min(len(alpha), len(x))
        alpha, x = alpha[:n], x[:n]
        q = as_exponent(p).conjugate()
        lhs = abs(holder_pairing(alpha, x))
        rhs = vec_norm(alpha, q) * vec_norm(x, p)
        assert lhs <= rhs * (1 + 1e-12) + 1e-12

    @settings(max_examples=60)
    @given(finite_seqs, exponents, exponents)
    def test_monotone_in_p(self, x, p1, p2):
        lo, hi = min(p1, p2), max(p1, p2)
        assert vec_norm(x, hi) <= vec_norm(x, lo) * (1 + 1e-12)

    @settings(max_examples=30)
    @given(finite_seqs, exponents)
    def test_inf_below_all(self, x, p):
        assert vec_norm(x, INF) <= vec_norm(x, p) * (1 + 1e-12)
