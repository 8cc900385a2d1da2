"""Pure numpy versions of the modular subset dynamic programs.

All arrays hold residues in [0, p) as int64 with p < 2**32.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # split b into 16-bit halves so every partial sum fits in int64
    a = a.astype(np.int64, copy=False)
    b = b.astype(np.int64, copy=False)
    lo = b & 0xFFFF
    hi = b >> 16
    part_hi = (a @ hi) % p
    part_lo = (a @ lo) % p
    return ((part_hi << 16) % p + part_lo) % p


def _popcount_order(d: int, even: bool) -> list[int]:
    subsets = range(1, 1 << d)
    if even:
        subsets = (s for s in subsets if bin(s).count("1") % 2 == 0)
    return sorted(subsets, key=lambda s: bin(s).count("1"))


def pair_dp(pairs: np.ndarray, d: int, p: int) -> np.ndarray:
    """G(S) for S = [d] minus {j}, for every j.

    ``pairs[idx(i, l)]`` is the matrix of [a_i, a_l] for i < l, with pairs listed
    lexicographically.  G(S) sums, over sequences of pairs partitioning S, the
    signed ordered products.
    """
    n = pairs.shape[1]
    index = {}
    k = 0
    for i in range(d):
        for l in range(i + 1, d):
            index[(i, l)] = k
            k += 1
    g = {0: np.eye(n, dtype=np.int64)}
    for s in _popcount_order(d, even=True):
        members = [x for x in range(d) if s >> x & 1]
        acc = np.zeros((n, n), dtype=np.int64)
        for ri, i in enumerate(members):
            for rl in range(ri + 1, len(members)):
                l = members[rl]
                prod = matmul_mod(pairs[index[(i, l)]], g[s & ~(1 << i) & ~(1 << l)], p)
                if (ri + rl - 1) % 2:
                    acc = (acc - prod) % p
                else:
                    acc = (acc + prod) % p
        g[s] = acc
    full = (1 << d) - 1
    return np.stack([g[full & ~(1 << j)] for j in range(d)])


def chain_dp(mats: np.ndarray, p: int) -> np.ndarray:
    """Signed sum over all orderings of the product of ``mats``."""
    m, n = mats.shape[0], mats.shape[1]
    f = {0: np.eye(n, dtype=np.int64)}
    for s in _popcount_order(m, even=False):
        acc = np.zeros((n, n), dtype=np.int64)
        for j in range(m):
            if not s >> j & 1:
                continue
            rest = s & ~(1 << j)
            # inversions: elements of rest greater than j
            inv = bin(rest >> (j + 1)).count("1")
            prod = matmul_mod(f[rest], mats[j], p)
            acc = (acc - prod) % p if inv % 2 else (acc + prod) % p
        f[s] = acc
    return f[(1 << m) - 1]
