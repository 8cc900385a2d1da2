import random
from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from liefold import exact, invariants as inv
from liefold.chevalley import realize
from liefold.rootsys import parse_type
from liefold.tds import complete_sl2, decompose_adjoint, principal_nilpotent


def real_of(name):
    return realize(parse_type(name))


def _sign(perm):
    n = len(perm)
    return -1 if sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n)) % 2 else 1


def cartan_brute(poly, vs):
    """Sum over all orderings of P(a_0, [a_1, a_2], ..., [a_{d-2}, a_{d-1}])."""
    br = poly.realization.bracket
    total = Fraction(0)
    for perm in permutations(range(len(vs))):
        args = [vs[perm[0]]] + [br(vs[perm[t]], vs[perm[t + 1]])
                                for t in range(1, len(vs), 2)]
        total += _sign(perm) * poly.polarized(args)
    return total


@pytest.mark.parametrize("name,k", [("A1", 2), ("A2", 2), ("A2", 3), ("B2", 2), ("G2", 2)])
def test_transgression_matches_cartan_formula(name, k):
    # each perfect matching appears 2^(k-1) (k-1)! times among the orderings
    real = real_of(name)
    poly = inv.invariant_polynomial(real, k)
    form = inv.transgress(poly)
    rng = random.Random(k)
    const = 2 ** (k - 1) * factorial(k - 1)
    for _ in range(3):
        vs = [inv.random_vector(rng, real.dim, 0.6) for _ in range(2 * k - 1)]
        assert cartan_brute(poly, vs) == const * form.evaluate(vs)


def test_sl2_value():
    real = real_of("A1")
    form = inv.transgress(inv.invariant_polynomial(real, 2))
    t = complete_sl2(real, principal_nilpotent(real))
    assert form.evaluate([list(t.x), list(t.h), list(t.y)]) == -6


def test_trace_route_equals_polarization_route():
    real = real_of("A3")
    poly = inv.invariant_polynomial(real, 3)
    rng = random.Random(1)
    vs = [[Fraction(c) for c in inv.random_vector(rng, real.dim, 0.5)] for _ in range(5)]
    ints = [inv.integerize(v)[0] for v in vs]
    brackets = {(i, l): real.bracket(ints[i], ints[l]) for i in range(5) for l in range(i + 1, 5)}
    a = inv._trace_transgression(poly.rep, ints, brackets, 3, None)
    b = inv._generic_transgression(poly, ints, brackets)
    assert a == b


@pytest.mark.parametrize("name,d", [("A2", 5), ("A3", 5), ("A3", 7), ("B2", 3), ("G2", 3)])
def test_alt_trace_is_proportional(name, d):
    real = real_of(name)
    k = (d + 1) // 2
    tau = inv.transgress(inv.invariant_polynomial(real, k))
    alt = inv.alt_trace_form(real, d)
    rng = random.Random(d)
    for _ in range(3):
        vs = [inv.random_vector(rng, real.dim, 0.6) for _ in range(d)]
        assert alt.evaluate(vs) == factorial(k - 1) * tau.evaluate(vs)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**63 - 1), name=st.sampled_from(["A2", "B2", "G2", "A3"]))
def test_alternating(seed, name):
    real = real_of(name)
    form = inv.transgress(inv.invariant_polynomial(real, 2))
    rng = random.Random(seed)
    vs = [inv.random_vector(rng, real.dim, 0.5) for _ in range(3)]
    i, j = rng.sample(range(3), 2)
    swapped = list(vs)
    swapped[i], swapped[j] = vs[j], vs[i]
    assert form.evaluate(swapped) == -form.evaluate(vs)
    rep = list(vs)
    rep[j] = vs[i]
    assert form.evaluate(rep) == 0


@pytest.mark.parametrize("name,d", [("A2", 5), ("B2", 7), ("G2", 3), ("D4", 7)])
def test_check_form_invariance(name, d):
    real = real_of(name)
    for form in inv.primitive_space(real, d).basis:
        out = inv.check_form(form, samples=2, seed=3)
        assert out["alternating"] and out["ad_invariant"]


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**63 - 1))
def test_modular_agrees_with_exact(seed):
    real = real_of("A3")
    form = inv.transgress(inv.invariant_polynomial(real, 3))
    rng = random.Random(seed)
    vs = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(real.dim)]
          for _ in range(5)]
    p = exact.auto_primes(1, seed)[0]
    value = form.evaluate(vs)
    assert exact.mod_fraction(value, p) == form.evaluate(vs, "modular", p)


@pytest.mark.parametrize("name,d", [("A2", 5), ("G2", 3), ("B2", 7)])
def test_basis_change_scales_by_determinant(name, d):
    # a degree-d form on a d-dimensional component is a multiple of the determinant
    real = real_of(name)
    t = complete_sl2(real, principal_nilpotent(real))
    dec = decompose_adjoint(real, t)
    comp = next(c for c in dec.components if c.dim == d)
    form = inv.primitive_space(real, d).basis[0]
    base = form.evaluate(comp.basis)
    assert base != 0
    rng = random.Random(11)
    for _ in range(5):
        m = [[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(d)] for _ in range(d)]
        new = [[sum(m[i][j] * comp.basis[j][c] for j in range(d)) for c in range(real.dim)]
               for i in range(d)]
        assert form.evaluate(new) == exact.det(m) * base


@settings(max_examples=20, deadline=None)
@given(data=st.data(), half=st.integers(1, 4))
def test_pfaffian_squares_to_determinant(data, half):
    n = 2 * half
    entries = data.draw(st.lists(st.integers(-5, 5), min_size=n * n, max_size=n * n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = entries[i * n + j]
            m[j][i] = -m[i][j]
    assert inv.pfaffian(m) ** 2 == Matrix(m).det()


def test_generator_degrees_and_rejections():
    real = real_of("A2")
    assert inv.generator_degrees(real.datum) == [2, 3]
    with pytest.raises(inv.InvariantError):
        inv.invariant_polynomial(real, 4)
    d4 = real_of("D4")
    with pytest.raises(inv.InvariantError):
        inv.invariant_polynomial(d4, 3)


def test_d4_primitive_space_in_degree_7():
    space = inv.primitive_space(real_of("D4"), 7)
    assert space.dim == space.expected_dim == 2
    assert space.evaluation_rank == 2


def test_decomposable_trace_vanishes_for_sl3():
    # tr X^4 on sl_3 is a polynomial in tr X^2 and tr X^3
    assert inv.decomposable_trace_vanishes(real_of("A2"), 7)


@pytest.mark.parametrize("name,d", [("A1", 3), ("A2", 3), ("A2", 5), ("G2", 3)])
def test_hitchin_exact_and_modular_agree(name, d):
    real = real_of(name)
    t = complete_sl2(real, principal_nilpotent(real))
    dec = decompose_adjoint(real, t)
    a = inv.hitchin_check(real, t, dec, d, mode="exact")
    b = inv.hitchin_check(real, t, dec, d, mode="modular", seed=4)
    assert a["verdict"] == b["verdict"] == "PASS"
    value = Fraction(a["certificate"]["value"])
    for p, r in zip(b["certificate"]["primes"], b["certificate"]["residues"]):
        assert exact.mod_fraction(value, p) == r


def test_hitchin_rejects_missing_dimension():
    real = real_of("G2")
    t = complete_sl2(real, principal_nilpotent(real))
    dec = decompose_adjoint(real, t)
    with pytest.raises(inv.InvariantError):
        inv.hitchin_check(real, t, dec, 5)


def test_zero_residue_escalates_to_exact():
    out = inv.certify_nonzero(lambda p: 0, [5, 7, 11], lambda: Fraction(3))
    assert out["method"] == "exact" and out["nonzero"]
    out = inv.certify_nonzero(lambda p: 1, [5, 7, 11])
    assert out["method"] == "modular" and out["nonzero"]


def test_integerize():
    ints, s = inv.integerize([Fraction(1, 2), Fraction(2, 3), 0])
    assert s == 6 and ints == [3, 4, 0]


def test_rep_matrix_is_linear():
    real = real_of("B2")
    rep = inv.default_representation(real)
    rng = random.Random(2)
    a = inv.random_vector(rng, real.dim)
    b = inv.random_vector(rng, real.dim)
    lhs = inv.rep_matrix(rep, [x + 2 * y for x, y in zip(a, b)])
    rhs = inv.rep_matrix(rep, a) + 2 * inv.rep_matrix(rep, b)
    assert np.array_equal(lhs, rhs)
