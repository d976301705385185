import json

import numpy as np
import pytest

from pcompact import serialize as ser
from pcompact.counterex import build_example_A, build_example_B
from pcompact.homopoly import HomPolynomial
from pcompact.lpcore import INF, TailedSequence
from tests_util import random_poly


class TestScalars:
    def test_exponent_inf(self):
        assert ser.exponent_to_json(INF) == "inf"
        assert ser.exponent_from_json("inf").is_inf

    def test_exponent_number(self):
        assert ser.exponent_to_json(1.5) == 1.5

    def test_complex_roundtrip(self):
        z = 1.25 - 0.5j
        assert ser.scalar_from_json(ser.scalar_to_json(z)) == z


class TestTailedSequence:
    def test_scalar_roundtrip(self):
        s = TailedSequence(prefix=[0.5, 0.25 + 1j], p=2, tail_norm=0.125)
        obj = ser.tailed_sequence_to_json(s)
        s2 = ser.tailed_sequence_from_json(json.loads(json.dumps(obj)))
        assert s2.p.p == 2.0
        assert s2.tail_norm == 0.125
        assert complex(np.atleast_1d(s2.prefix[1])[0]) == 0.25 + 1j

    def test_format_fields(self):
        s = TailedSequence(prefix=[1.0], p=1, tail_norm=0.0)
        obj = ser.tailed_sequence_to_json(s)
        assert set(obj) == {"p", "prefix", "tail_norm"}
        assert obj["prefix"] == [[1.0, 0.0]]


class TestPolynomial:
    def test_roundtrip_random(self):
        rng = np.random.default_rng(0)
        P = random_poly(rng, 3, 3, 2)
        obj = ser.polynomial_to_json(P)
        P2 = ser.polynomial_from_json(json.loads(json.dumps(obj)))
        x = rng.standard_normal(3)
        assert np.allclose(P(x), P2(x), atol=1e-14)

    def test_format_fields(self):
        P = HomPolynomial(m=2, dom_dim=2, cod_dim=1,
                          terms={(0, ((0, 1), (1, 1))): 2.0})
        obj = ser.polynomial_to_json(P)
        assert set(obj) == {"m", "dom", "cod", "terms"}
        assert obj["terms"] == [{"out": 0, "multi": [1, 1], "c": [2.0, 0.0]}]


class TestInstance:
    def test_roundtrip(self):
        rng = np.random.default_rng(1)
        K = [rng.standard_normal(3) for _ in range(2)]
        gens = [rng.standard_normal(3) for _ in range(4)]
        obj = ser.instance_to_json(2, K, gens)
        p, K2, G = ser.instance_from_json(json.loads(json.dumps(obj)))
        assert p.p == 2.0
        assert np.allclose(K2[0], K[0])
        assert len(G.gens) == 4


class TestTaylorModel:
    def test_family_b_roundtrip(self):
        tm = build_example_B(8, 2)
        obj = ser.taylor_model_to_json(tm)
        tm2 = ser.taylor_model_from_json(json.loads(json.dumps(obj)))
        assert tm2.family_tag == "B"
        assert tm2.tail.c1 == 1.0 and tm2.tail.c2 == 1.0
        assert tm2.max_degree == 8
        # materialized components evaluate identically
        x = np.zeros(tm.base_point.size)
        x[0], x[3] = 0.5, 0.5
        for c1, c2 in zip(tm.components, tm2.components):
            if hasattr(c1, "terms"):
                assert np.allclose(c1(x), c2(x), atol=1e-14)

    def test_family_a_tail_null(self):
        tm = build_example_A(3, 2)
        obj = ser.taylor_model_to_json(tm)
        assert obj["tail"] is None
        assert obj["family_tag"] == "A"
