import pytest
from hypothesis import given, settings, strategies as st

from liefold.branching import (branch, chevalley_branching, not_a_weight_check,
                               phi, restricted_character, surjectivity_report, verify_case)
from liefold.folding import make_folding
from liefold.rootsys import (RepRingElement, fundamental, tensor_decompose, weyl_dimension)

FAMILY = [("A2n1_C", 1), ("A2n1_C", 2), ("A2n1_C", 3), ("A2n_B", 2), ("A2n_B", 3),
          ("Dn_B", 4), ("Dn_B", 5), ("D4_G2", 0)]


@pytest.mark.parametrize("pair,n", FAMILY)
def test_case_identities(pair, n):
    out = verify_case(pair, n)
    bad = [c["identity"] for c in out["checks"] if not c["holds"]]
    assert out["verdict"] == "PASS", bad


def test_case_i_sp4():
    # W2 = ext^2 W1 - 1 for C2, and phi(V2) - 1 = W2
    out = verify_case("A2n1_C", 1)
    names = {c["identity"]: c["holds"] for c in out["checks"]}
    assert names["W2 + ext^0 W1 = ext^2 W1"]
    assert names["phi(V2) - phi(V0) = W2"]
    spec = make_folding("A2n1_C", 1)
    assert weyl_dimension(spec.target, (0, 1)) == 5


def test_d4_g2_adjoint():
    spec = make_folding("D4_G2")
    res = branch(spec, (0, 1, 0, 0))
    assert res.decomposition.terms == {(0, 1): 1, (1, 0): 2}


def test_b_spin_matches_2_power():
    for n in (3, 4, 5):
        spec = make_folding("Dn_B", n + 1)
        res = branch(spec, fundamental(spec.source, n + 1))
        assert res.dimension == 2 ** n
        assert res.decomposition.terms == {fundamental(spec.target, n): 1}


def test_a4_middle_weight_is_2nu():
    spec = make_folding("A2n_B", 2)
    assert branch(spec, (0, 1, 0, 0)).decomposition.terms == {(0, 2): 1}


def test_restricted_character_dimension():
    spec = make_folding("E6_F4")
    chars = restricted_character(spec, fundamental(spec.source, 1))
    assert sum(chars.values()) == 27


@pytest.mark.slow
def test_case_v():
    out = verify_case("E6_F4")
    assert out["verdict"] == "PASS"


def test_not_a_weight():
    out = not_a_weight_check()
    assert out["verdict"] == "PASS"
    assert out["lattice"]["alpha2_coefficient"] == "-1"
    assert out["brute_force"]["weights_checked"] == 2925
    assert not out["brute_force"]["2nu1_present"]
    assert out["control_2nu4_present"]


@pytest.mark.parametrize("pair,n", [("A2n1_C", 1), ("A2n_B", 2), ("Dn_B", 4), ("D4_G2", 0)])
def test_realization_agrees_with_characters(pair, n):
    assert chevalley_branching(pair, n)["verdict"] == "PASS"


@pytest.mark.parametrize("pair,n", [("A2n1_C", 2), ("A2n_B", 3), ("D4_G2", 0), ("E6_F4", 0)])
def test_surjectivity(pair, n):
    out = surjectivity_report(pair, n)
    assert out["verdict"] == "PASS"
    assert all(row["holds"] for row in out["generators"])


def test_d4_g2_expressions():
    rows = surjectivity_report("D4_G2")["generators"]
    assert [r["expression"] for r in rows] == ["phi(V1) - 1", "phi(V2) - 2 phi(V1) + 2"]


SMALL = [("A2n1_C", 1), ("A2n_B", 2), ("D4_G2", 0), ("Dn_B", 4)]


@settings(max_examples=25, deadline=None)
@given(case=st.sampled_from(SMALL), data=st.data())
def test_branch_preserves_dimension_and_top(case, data):
    spec = make_folding(*case)
    ell = spec.source.rank
    lam = tuple(data.draw(st.lists(st.integers(0, 1), min_size=ell, max_size=ell)))
    if weyl_dimension(spec.source, lam) > 3000:
        return
    res = branch(spec, lam)
    assert res.dimension == weyl_dimension(spec.source, lam)
    assert res.multiplicity(spec.restrict_weight(lam)) == 1
    assert res.decomposition.is_genuine


@settings(max_examples=15, deadline=None)
@given(case=st.sampled_from(SMALL), data=st.data())
def test_phi_is_multiplicative(case, data):
    spec = make_folding(*case)
    ell = spec.source.rank
    vec = st.lists(st.integers(0, 1), min_size=ell, max_size=ell)
    lam, mu = tuple(data.draw(vec)), tuple(data.draw(vec))
    if weyl_dimension(spec.source, lam) * weyl_dimension(spec.source, mu) > 3000:
        return
    a = RepRingElement.irreducible(spec.source, lam)
    b = RepRingElement.irreducible(spec.source, mu)
    prod = tensor_decompose(spec.source, lam, mu)
    assert phi(spec, prod) == phi(spec, a) * phi(spec, b)
    assert phi(spec, a + b) == phi(spec, a) + phi(spec, b)
