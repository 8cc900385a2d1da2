import json
import random
from pathlib import Path

import numpy as np
import pytest

from liefold.chevalley import (LieRealization, RealizationError, automorphism_matrix,
                               folded_embedding, realize, standard_representation,
                               verify_realization)
from liefold.folding import make_folding
from liefold.rootsys import parse_type

DATA = Path(__file__).parent / "data"
TYPES = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2", "D4", "D5", "A5"]


@pytest.mark.parametrize("name", TYPES)
def test_realization_verifies(name):
    real = realize(parse_type(name))
    out = verify_realization(real, samples=50, seed=1)
    assert out["verdict"] == "PASS", out["problems"]
    assert real.dim == parse_type(name).dimension


@pytest.mark.slow
@pytest.mark.parametrize("name", ["F4", "E6"])
def test_exceptional_realization_verifies(name):
    assert verify_realization(realize(parse_type(name)))["verdict"] == "PASS"


def _root_string_p(datum, alpha, beta):
    p = 0
    while datum.is_root(tuple(b - (p + 1) * a for a, b in zip(alpha, beta))):
        p += 1
    return p


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "D4"])
def test_chevalley_basis_constants(name):
    # [e_a, e_b] = +-(p+1) e_{a+b} where beta - p alpha starts the alpha-string through beta
    d = parse_type(name)
    real = realize(d)
    roots = d.positive_roots
    for i, a in enumerate(roots):
        for j, b in enumerate(roots):
            s = tuple(x + y for x, y in zip(a, b))
            got = real.table.get((real.e(i), real.e(j)), {})
            if d.is_root(s):
                k = real.e(d.root_index[s])
                assert set(got) == {k}
                assert abs(got[k]) == _root_string_p(d, a, b) + 1
            else:
                assert got == {}


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "D4"])
def test_killing_on_cartan_is_root_sum(name):
    # kappa(h_i, h_j) = sum over all roots of alpha(h_i) alpha(h_j)
    d = parse_type(name)
    real = realize(d)
    for i in range(d.rank):
        for j in range(d.rank):
            total = 0
            for r in d.positive_roots:
                ai = sum(r[k] * d.cartan[i][k] for k in range(d.rank))
                aj = sum(r[k] * d.cartan[j][k] for k in range(d.rank))
                total += 2 * ai * aj
            assert real.killing_form(real.unit(i), real.unit(j)) == total


@pytest.mark.parametrize("name", ["A2", "A3"])
def test_sl_killing_is_trace_form(name):
    real = realize(parse_type(name))
    rep = standard_representation(real)
    size = rep["size"]
    rng = random.Random(5)
    for _ in range(5):
        x = [rng.randint(-3, 3) for _ in range(real.dim)]
        y = [rng.randint(-3, 3) for _ in range(real.dim)]
        mx = sum(c * m for c, m in zip(x, rep["matrices"]))
        my = sum(c * m for c, m in zip(y, rep["matrices"]))
        assert real.killing_form(x, y) == 2 * size * np.trace(mx.dot(my))


def test_standard_rep_of_d4_preserves_form():
    rep = standard_representation(realize(parse_type("D4")))
    assert rep["size"] == 8 and rep["form"] is not None


def test_cap():
    with pytest.raises(RealizationError):
        realize(parse_type("E6"), cap=50)


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_matches_golden(name):
    golden = (DATA / f"realization_{name}.json").read_text().strip()
    assert realize(parse_type(name)).to_json() == golden
    back = LieRealization.from_json(golden)
    assert verify_realization(back)["verdict"] == "PASS"


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_every_mutation_is_caught(name):
    text = (DATA / f"realization_{name}.json").read_text()
    doc = json.loads(text)
    count = 0
    for i, (_, _, res) in enumerate(doc["structure"]):
        for k in range(len(res)):
            for delta in (1, -2):
                bad = json.loads(text)
                bad["structure"][i][2][k][1] += delta
                out = verify_realization(LieRealization.from_json(json.dumps(bad)))
                assert out["verdict"] == "FAIL", (i, k, delta)
                count += 1
    assert count > 0


def test_ambient_independence():
    # B3 as fixed points in D4 and in A6 must have identical constants
    via_d = folded_embedding("Dn_B", 4).realization
    via_a = folded_embedding("A2n_B", 3).realization
    assert via_d.table == via_a.table
    via_d = folded_embedding("Dn_B", 3).realization
    via_a = folded_embedding("A2n_B", 2).realization
    assert via_d.table == via_a.table


@pytest.mark.parametrize("pair,n", [("A2n1_C", 1), ("A2n_B", 2), ("Dn_B", 4), ("D4_G2", 0)])
def test_automorphism_is_homomorphism_of_right_order(pair, n):
    spec = make_folding(pair, n)
    real = realize(spec.source)
    out = automorphism_matrix(real, spec)
    s = np.array(out["matrix"], dtype=object)
    assert out["order"] == spec.order
    power = np.identity(real.dim, dtype=object)
    for _ in range(spec.order):
        power = power.dot(s)
    assert (power == np.identity(real.dim, dtype=object)).all()
    for a in range(real.dim):
        for b in range(a + 1, real.dim):
            lhs = s.dot(real.bracket(real.unit(a), real.unit(b)))
            rhs = real.bracket(list(s[:, a]), list(s[:, b]))
            assert list(lhs) == list(rhs)


@pytest.mark.parametrize("pair,n,dim", [("A2n1_C", 1, 10), ("A2n_B", 2, 10), ("Dn_B", 4, 21),
                                        ("D4_G2", 0, 14)])
def test_fixed_subalgebra_dimension(pair, n, dim):
    emb = folded_embedding(pair, n)
    assert emb.fixed_dim == dim
    assert all(emb.checks.values())
    assert emb.realization.datum.name == emb.spec.target.name
