from fractions import Fraction

import numpy as np
import pytest

from liefold.chevalley import folded_embedding, realize
from liefold.rootsys import parse_type
from liefold.tds import (ad_h_spectrum, centralizer_dimension, check_triple, complete_sl2,
                         decompose_adjoint, folded_principal_nilpotent, folded_tds_report,
                         is_principal, nilpotency_index, principal_nilpotent,
                         verify_decomposition)

TYPES = ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C2", "C3", "C4", "G2", "D4", "D5"]


def _triple(name):
    real = realize(parse_type(name))
    return real, complete_sl2(real, principal_nilpotent(real))


def test_a2_triple():
    real, t = _triple("A2")
    assert list(t.h) == [2, 2] + [0] * 6
    assert list(t.y) == [0] * 5 + [2, 2, 0]
    assert t.nullity == 0
    assert t.x[real.simple_e(0)] == t.x[real.simple_e(1)] == 1


@pytest.mark.parametrize("name", TYPES)
def test_decomposition_dims_are_exponents(name):
    real, t = _triple(name)
    check_triple(real, t)
    dec = decompose_adjoint(real, t)
    assert dec.dims == sorted(2 * m + 1 for m in real.datum.exponents)
    assert verify_decomposition(real, dec)["verdict"] == "PASS"


def test_d4_two_dimensional_highest_weight_space():
    real, t = _triple("D4")
    dec = decompose_adjoint(real, t)
    assert dec.dims == [3, 7, 7, 11]
    assert len(dec.highest_weight_spaces[3]) == 2
    sevens = [c for c in dec.components if c.dim == 7]
    span = [v for c in sevens for v in c.basis]
    from liefold import exact
    assert exact.rank(span) == 14


@pytest.mark.parametrize("name", ["A3", "B3", "G2", "D4"])
def test_principal_nilpotent_is_regular(name):
    real = realize(parse_type(name))
    x = principal_nilpotent(real)
    assert centralizer_dimension(real, x) == real.rank
    assert is_principal(real, x)["principal"]
    # ad x is nilpotent of index 2 * (largest exponent) + 1
    assert nilpotency_index(real, x) == 2 * max(real.datum.exponents) + 1


def test_simple_root_vector_is_not_principal():
    real = realize(parse_type("A3"))
    x = real.unit(real.simple_e(0))
    assert not is_principal(real, x)["principal"]


@pytest.mark.parametrize("name", ["A3", "C3", "G2"])
def test_h_spectrum_is_even(name):
    real, t = _triple(name)
    spec = ad_h_spectrum(real, t)
    assert all(int(k) % 2 == 0 for k in spec)
    assert sum(spec.values()) == real.dim


@pytest.mark.parametrize("pair,n", [("A2n1_C", 1), ("A2n1_C", 2), ("A2n_B", 2),
                                    ("D4_G2", 0), ("Dn_B", 5)])
@pytest.mark.parametrize("mode", ["orbit", "literal"])
def test_folded_nilpotent_principal_in_both(pair, n, mode):
    out = folded_tds_report(pair, n, mode)
    assert out["verdict"] == "PASS"
    assert out["sigma_fixed"] and out["triple_sigma_fixed"]
    assert out["centralizer_dim_g"] == out["rank_g"]
    assert out["centralizer_dim_k"] == out["rank_k"]


def test_folded_nilpotent_modes_differ_for_d4():
    emb = folded_embedding("D4_G2", 0)
    orbit = folded_principal_nilpotent(emb.spec, emb.ambient, emb.sigma, "orbit")
    literal = folded_principal_nilpotent(emb.spec, emb.ambient, emb.sigma, "literal")
    real = emb.ambient
    assert [orbit[real.simple_e(i)] for i in range(4)] == [1, 1, 1, 1]
    assert [literal[real.simple_e(i)] for i in range(4)] == [1, 3, 1, 1]


def test_sl2_commutation_exact():
    real, t = _triple("G2")
    br = real.bracket
    assert br(t.h, t.x) == [2 * c for c in t.x]
    assert br(t.h, t.y) == [-2 * c for c in t.y]
    assert br(t.x, t.y) == list(t.h)
    assert all(isinstance(c, (int, Fraction, np.integer)) for c in t.y)
