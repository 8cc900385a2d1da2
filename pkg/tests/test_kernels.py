from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liefold import _kernels_py, kernels
from liefold.exact import auto_primes

P = auto_primes(2, seed=3)

try:
    from liefold import _kernels as compiled
except ImportError:  # pragma: no cover - fallback-only install
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def _sign(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _brute_pair(pairs, d, p):
    # every ordering of S cut into consecutive increasing pairs, with sgn of the ordering
    n = pairs.shape[1]
    index = {}
    k = 0
    for i in range(d):
        for l in range(i + 1, d):
            index[(i, l)] = k
            k += 1
    out = []
    for j in range(d):
        items = [x for x in range(d) if x != j]
        total = np.zeros((n, n), dtype=object)
        for perm in permutations(items):
            cut = [perm[t:t + 2] for t in range(0, len(perm), 2)]
            if any(a > b for a, b in cut):
                continue
            prod = np.eye(n, dtype=object)
            for a, b in cut:
                prod = prod.dot(pairs[index[(a, b)]].astype(object))
            total = total + _sign(perm) * prod
        out.append(np.vectorize(lambda x: int(x) % p)(total))
    return np.stack(out).astype(np.int64)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_matmul_mod_matches_python_ints(seed, n):
    rng = np.random.default_rng(seed)
    p = P[seed % 2]
    a = rng.integers(0, p, (n, n))
    b = rng.integers(0, p, (n, n))
    want = (a.astype(object).dot(b.astype(object))) % p
    assert (_kernels_py.matmul_mod(a, b, p) == want).all()
    assert (kernels.matmul_mod(a, b, p) == want).all()


@pytest.mark.parametrize("d", [3, 5])
def test_pair_dp_matches_brute_force(d):
    rng = np.random.default_rng(d)
    p = P[0]
    pairs = rng.integers(0, p, (d * (d - 1) // 2, 3, 3))
    want = _brute_pair(pairs, d, p)
    assert (_kernels_py.pair_dp(pairs, d, p) == want).all()
    assert (kernels.pair_dp(pairs, d, p) == want).all()


def test_chain_dp_is_signed_permutation_sum():
    rng = np.random.default_rng(0)
    p = P[1]
    mats = rng.integers(0, p, (4, 3, 3))
    want = np.zeros((3, 3), dtype=object)
    for perm in permutations(range(4)):
        prod = np.eye(3, dtype=object)
        for k in perm:
            prod = prod.dot(mats[k].astype(object))
        want = want + _sign(perm) * prod
    want = np.vectorize(lambda x: int(x) % p)(want)
    assert (_kernels_py.chain_dp(mats, p) == want).all()
    assert (kernels.chain_dp(mats, p) == want).all()


@needs_compiled
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.sampled_from([3, 5, 7]), n=st.integers(2, 9))
def test_compiled_matches_fallback(seed, d, n):
    rng = np.random.default_rng(seed)
    p = P[0]
    pairs = rng.integers(0, p, (d * (d - 1) // 2, n, n))
    assert (compiled.pair_dp(pairs, d, p) == _kernels_py.pair_dp(pairs, d, p)).all()
    mats = rng.integers(0, p, (d, n, n))
    assert (compiled.chain_dp(mats, p) == _kernels_py.chain_dp(mats, p)).all()


def test_pure_override(monkeypatch):
    import importlib
    monkeypatch.setenv("LIEFOLD_PURE", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("LIEFOLD_PURE")
        importlib.reload(kernels)
