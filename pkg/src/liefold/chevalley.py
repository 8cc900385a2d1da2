"""Chevalley-basis realizations with exact integer structure constants.

Simply-laced algebras are modelled with the bimultiplicative sign cocycle on
the root lattice.  Every realization, simply-laced or not, is then rebuilt
from its Chevalley generators by one recursion: for a non-simple positive
root xi, take the smallest i with xi - alpha_i = beta a root and set

    e_xi = [e_i, e_beta] / (p + 1),     f_xi = [f_beta, f_i] / (p + 1),

where p is the length of the alpha_i-string below beta.  Non-simply-laced
algebras are produced as fixed subalgebras of a diagram automorphism and run
through the same recursion, so their structure constants depend only on the
abstract algebra.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import exact
from .folding import FoldingSpec, make_folding
from .rootsys import RootDatum, build_root_datum

DEFAULT_REALIZATION_CAP = 100

# ambient folding used to model each non-simply-laced type
_FOLD_MODEL = {
    "B": lambda r: ("Dn_B", r + 1),
    "C": lambda r: ("A2n1_C", r - 1),
    "G": lambda r: ("D4_G2", 0),
    "F": lambda r: ("E6_F4", 0),
}


class RealizationError(ValueError):
    pass


# --- sparse vectors -------------------------------------------------------

def sadd(u: dict, v: dict, c=1) -> dict:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def sscale(u: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: x * c for k, x in u.items()}


def _normalize(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def dense(u: dict, n: int) -> list:
    out = [0] * n
    for k, x in u.items():
        out[k] = _normalize(x)
    return out


def sparse(v) -> dict:
    return {i: x for i, x in enumerate(v) if x != 0}


# --- the sign-cocycle model for ADE ---------------------------------------

class CocycleModel:
    """Kac's construction of a simply-laced algebra from its root lattice.

    Coordinates: 0..l-1 are the simple coroots, then one coordinate per root.
    """

    def __init__(self, datum: RootDatum):
        if not datum.simply_laced:
            raise RealizationError(f"{datum.name} is not simply laced")
        self.datum = datum
        n = datum.rank
        pos = list(datum.positive_roots)
        self.roots = pos + [tuple(-x for x in r) for r in pos]
        self.index = {r: n + i for i, r in enumerate(self.roots)}
        self.eps = [[1 if (i == j or (i < j and datum.cartan[i][j] != 0)) else 0
                     for j in range(n)] for i in range(n)]

    def sign(self, a, b) -> int:
        n = self.datum.rank
        s = sum(a[i] * self.eps[i][j] * b[j] for i in range(n) for j in range(n)
                if a[i] and b[j] and self.eps[i][j])
        return -1 if s % 2 else 1

    def _basic(self, x: int, y: int) -> dict:
        n = self.datum.rank
        if x < n and y < n:
            return {}
        if x < n:
            r = self.roots[y - n]
            c = sum(self.datum.cartan[x][j] * r[j] for j in range(n))
            return {y: c} if c else {}
        if y < n:
            return sscale(self._basic(y, x), -1)
        a, b = self.roots[x - n], self.roots[y - n]
        s = tuple(p + q for p, q in zip(a, b))
        if not any(s):
            return {i: -a[i] for i in range(n) if a[i]}
        k = self.index.get(s)
        if k is None:
            return {}
        return {k: self.sign(a, b)}

    def bracket(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for x, cx in u.items():
            for y, cy in v.items():
                out = sadd(out, self._basic(x, y), cx * cy)
        return out

    def generators(self):
        n = self.datum.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        e = [{self.index[s]: 1} for s in simple]
        f = [{self.index[tuple(-x for x in s)]: -1} for s in simple]
        return e, f


# --- generic construction from generators ---------------------------------

def _recipe(datum: RootDatum) -> list[tuple[int, int, int, int]]:
    """(xi, i, beta, p) as indices into positive_roots, for every non-simple root."""
    idx = datum.root_index
    out = []
    for r, xi in enumerate(datum.positive_roots):
        if sum(xi) == 1:
            continue
        for i in range(datum.rank):
            beta = list(xi)
            beta[i] -= 1
            if tuple(beta) in idx:
                break
        else:
            raise RealizationError(f"no decomposition of root {xi}")
        p = 0
        down = list(beta)
        while True:
            down[i] -= 1
            if tuple(down) in idx:
                p += 1
            else:
                break
        out.append((r, i, idx[tuple(beta)], p))
    return out


class _SpanSolver:
    """Exact coordinates of vectors in the span of a fixed sparse family."""

    def __init__(self, vectors: list[dict]):
        self.vectors = vectors
        support = sorted({k for v in vectors for k in v})
        self.support = support
        mat = [[Fraction(v.get(k, 0)) for v in vectors] for k in support]
        # independent rows give a square block to invert
        _, piv = exact.rref(exact.transpose(mat))
        if len(piv) != len(vectors):
            raise RealizationError("family is not linearly independent")
        self._piv = piv
        self._inv = exact.inverse([mat[r] for r in piv])

    def solve(self, w: dict) -> list:
        piv, inv = self._piv, self._inv
        rhs = [Fraction(w.get(self.support[r], 0)) for r in piv]
        x = exact.matvec(inv, rhs)
        check: dict = {}
        for c, v in zip(x, self.vectors):
            check = sadd(check, v, c)
        if sadd(check, w, -1):
            raise RealizationError("vector not in span")
        return x


def _build_basis(datum: RootDatum, bracket, e_gens, f_gens):
    n = datum.rank
    N = len(datum.positive_roots)
    h = [bracket(e_gens[i], f_gens[i]) for i in range(n)]
    e = [None] * N
    f = [None] * N
    idx = datum.root_index
    for i in range(n):
        s = tuple(int(k == i) for k in range(n))
        e[idx[s]] = e_gens[i]
        f[idx[s]] = f_gens[i]
    recipe = _recipe(datum)
    for r, i, b, p in recipe:
        si = idx[tuple(int(k == i) for k in range(n))]
        e[r] = sscale(bracket(e[si], e[b]), Fraction(1, p + 1))
        f[r] = sscale(bracket(f[b], f[si]), Fraction(1, p + 1))
        if not e[r] or not f[r]:
            raise RealizationError(f"root vector for {datum.positive_roots[r]} vanished")
    return h + e + f, recipe


def _structure_table(datum: RootDatum, basis: list[dict], bracket) -> dict:
    n = datum.rank
    N = len(datum.positive_roots)
    weights = basis_weights(datum)
    widx = {w: k for k, w in enumerate(weights) if k >= n}
    cartan = _SpanSolver(basis[:n])
    table = {}
    zero = (0,) * n
    for a in range(len(basis)):
        for b in range(len(basis)):
            if a == b:
                continue
            w = bracket(basis[a], basis[b])
            if not w:
                continue
            wt = tuple(x + y for x, y in zip(weights[a], weights[b]))
            if wt == zero:
                coeffs = {k: c for k, c in enumerate(cartan.solve(w)) if c}
            elif wt in widx:
                c_idx = widx[wt]
                target = basis[c_idx]
                key = next(iter(target))
                c = Fraction(w.get(key, 0)) / target[key]
                if sadd(sscale(target, c), w, -1):
                    raise RealizationError(f"bracket of {a},{b} leaves its root space")
                coeffs = {c_idx: c}
            else:
                raise RealizationError(f"bracket of {a},{b} has non-root weight {wt}")
            for k, c in coeffs.items():
                if Fraction(c).denominator != 1:
                    raise RealizationError(f"non-integral structure constant at ({a},{b})")
            table[(a, b)] = {k: int(c) for k, c in coeffs.items()}
    del N
    return table


def basis_weights(datum: RootDatum) -> list[tuple[int, ...]]:
    """Root-lattice weight of each basis element (h's are 0)."""
    n = datum.rank
    pos = list(datum.positive_roots)
    return [(0,) * n] * n + pos + [tuple(-x for x in r) for r in pos]


def basis_labels(datum: RootDatum) -> list[str]:
    n = datum.rank
    labels = [f"h{i+1}" for i in range(n)]
    for prefix in ("e", "f"):
        for r in datum.positive_roots:
            labels.append(prefix + "".join(str(x) for x in r))
    return labels


# --- the realization --------------------------------------------------------

@dataclass
class LieRealization:
    datum: RootDatum
    table: dict                       # (a, b) -> {c: int}
    recipe: list = field(default_factory=list)
    model: str = ""

    def __post_init__(self):
        if not self.recipe:
            self.recipe = _recipe(self.datum)
        self.dim = self.datum.dimension
        self.rank = self.datum.rank
        self.labels = basis_labels(self.datum)
        self.weights = basis_weights(self.datum)
        ad = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for (a, b), res in self.table.items():
            for c, x in res.items():
                ad[a, c, b] = x
        self.ad = ad
        self._killing = None

    # index helpers
    def h(self, i: int) -> int:
        return i

    def e(self, r: int) -> int:
        return self.rank + r

    def f(self, r: int) -> int:
        return self.rank + len(self.datum.positive_roots) + r

    def simple_e(self, i: int) -> int:
        return self.e(self.datum.root_index[tuple(int(k == i) for k in range(self.rank))])

    def simple_f(self, i: int) -> int:
        return self.f(self.datum.root_index[tuple(int(k == i) for k in range(self.rank))])

    def unit(self, k: int) -> list:
        v = [0] * self.dim
        v[k] = 1
        return v

    def bracket(self, u, v) -> list:
        out = [0] * self.dim
        nu = [(a, x) for a, x in enumerate(u) if x]
        nv = [(b, y) for b, y in enumerate(v) if y]
        for a, x in nu:
            for b, y in nv:
                res = self.table.get((a, b))
                if res:
                    xy = x * y
                    for c, z in res.items():
                        out[c] += xy * z
        return [_normalize(x) for x in out]

    def bracket_sparse(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                res = self.table.get((a, b))
                if res:
                    for c, z in res.items():
                        val = out.get(c, 0) + x * y * z
                        if val:
                            out[c] = val
                        else:
                            out.pop(c, None)
        return out

    def ad_matrix(self, v) -> np.ndarray:
        """ad(v) as an object array (exact)."""
        m = np.zeros((self.dim, self.dim), dtype=object)
        for a, x in enumerate(v):
            if x:
                m = m + self.ad[a].astype(object) * x
        return m

    @property
    def killing(self) -> np.ndarray:
        if self._killing is None:
            self._killing = np.einsum("acd,bdc->ab", self.ad, self.ad)
        return self._killing

    def killing_form(self, u, v):
        k = self.killing
        return sum(u[a] * int(k[a, b]) * v[b] for a in range(self.dim) if u[a]
                   for b in range(self.dim) if v[b])

    def to_json(self) -> str:
        doc = {
            "schema": 1,
            "type": self.datum.name,
            "basis": self.labels,
            "structure": [[a, b, sorted(res.items())] for (a, b), res in sorted(self.table.items())
                          if a < b],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> LieRealization:
        doc = json.loads(text)
        from .rootsys import parse_type
        datum = parse_type(doc["type"])
        table = {}
        for a, b, res in doc["structure"]:
            table[(a, b)] = {c: x for c, x in res}
            table[(b, a)] = {c: -x for c, x in res}
        return cls(datum, table, model="json")


def verify_realization(real: LieRealization, samples: int = 0, seed: int = 0) -> dict:
    """Antisymmetry, Jacobi (as ad[a,b] = [ad a, ad b]), Cartan relations, Killing invariance."""
    datum, ad = real.datum, real.ad
    problems = []
    for (a, b), res in real.table.items():
        if real.table.get((b, a)) != {c: -x for c, x in res.items()}:
            problems.append(f"antisymmetry fails at ({real.labels[a]},{real.labels[b]})")
            break
    # Jacobi for every pair at once
    for a in range(real.dim):
        for b in range(a + 1, real.dim):
            lhs = ad[a] @ ad[b] - ad[b] @ ad[a]
            rhs = np.zeros_like(lhs)
            for c, x in real.table.get((a, b), {}).items():
                rhs += x * ad[c]
            if not np.array_equal(lhs, rhs):
                problems.append(f"Jacobi fails for ({real.labels[a]},{real.labels[b]})")
                break
        if problems and problems[-1].startswith("Jacobi"):
            break
    n = datum.rank
    for i in range(n):
        if real.table.get((real.simple_e(i), real.simple_f(i))) != {i: 1}:
            problems.append(f"[e{i+1},f{i+1}] != h{i+1}")
        for j in range(n):
            got = real.table.get((i, real.simple_e(j)), {})
            want = {real.simple_e(j): datum.cartan[i][j]} if datum.cartan[i][j] else {}
            if got != want:
                problems.append(f"[h{i+1},e{j+1}] != {datum.cartan[i][j]} e{j+1}")
    k = real.killing
    for a in range(real.dim):
        if not np.array_equal(ad[a].T @ k + k @ ad[a], np.zeros_like(k)):
            problems.append(f"Killing form not invariant under ad {real.labels[a]}")
            break
    if samples:
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = (rng.randrange(real.dim) for _ in range(3))
            u, v, w = real.unit(a), real.unit(b), real.unit(c)
            s = [x + y + z for x, y, z in zip(real.bracket(real.bracket(u, v), w),
                                              real.bracket(real.bracket(v, w), u),
                                              real.bracket(real.bracket(w, u), v))]
            if any(s):
                problems.append(f"sampled Jacobi fails at {(a, b, c)}")
                break
    return {"type": datum.name, "dim": real.dim, "problems": problems,
            "verdict": "PASS" if not problems else "FAIL"}


def realization_from_model(datum: RootDatum, bracket, e_gens, f_gens, model: str = ""):
    basis, recipe = _build_basis(datum, bracket, e_gens, f_gens)
    table = _structure_table(datum, basis, bracket)
    return LieRealization(datum, table, recipe, model=model), basis


@lru_cache(maxsize=None)
def _realize_cached(family: str, rank: int) -> LieRealization:
    datum = build_root_datum(family, rank)
    if datum.simply_laced:
        model = CocycleModel(datum)
        e, f = model.generators()
        real, _ = realization_from_model(datum, model.bracket, e, f, model="cocycle")
    else:
        pair, n = _FOLD_MODEL[family](rank)
        emb = folded_embedding(pair, n)
        real = emb.realization
    report = verify_realization(real)
    if report["verdict"] != "PASS":
        raise RealizationError(f"{datum.name}: {report['problems']}")
    return real


def realize(datum: RootDatum, cap: int = DEFAULT_REALIZATION_CAP) -> LieRealization:
    if datum.dimension > cap:
        raise RealizationError(f"dim {datum.name} = {datum.dimension} exceeds cap {cap}")
    return _realize_cached(datum.family, datum.rank)


# --- diagram automorphisms --------------------------------------------------

def automorphism_matrix(real: LieRealization, spec: FoldingSpec) -> dict:
    """The automorphism permuting Chevalley generators as sigma does.

    Returns the matrix (columns are images of basis vectors) together with
    the sign correction that was needed (always none for this construction:
    images of non-simple root vectors are defined by the same brackets that
    define the vectors themselves).
    """
    datum = real.datum
    if datum.cartan != spec.source.cartan:
        raise RealizationError("realization does not match the folding source")
    n = datum.rank
    images: list = [None] * real.dim
    for i in range(n):
        s = spec.sigma[i]
        images[real.h(i)] = {real.h(s): 1}
        images[real.simple_e(i)] = {real.simple_e(s): 1}
        images[real.simple_f(i)] = {real.simple_f(s): 1}
    idx = datum.root_index
    for r, i, b, p in real.recipe:
        si = idx[tuple(int(k == i) for k in range(n))]
        e_img = real.bracket_sparse(images[real.e(si)], images[real.e(b)])
        f_img = real.bracket_sparse(images[real.f(b)], images[real.f(si)])
        images[real.e(r)] = sscale(e_img, Fraction(1, p + 1))
        images[real.f(r)] = sscale(f_img, Fraction(1, p + 1))
    mat = np.zeros((real.dim, real.dim), dtype=np.int64)
    for col, img in enumerate(images):
        for row, x in img.items():
            if Fraction(x).denominator != 1:
                raise RealizationError(f"non-integral image of {real.labels[col]}")
            mat[row, col] = int(x)
    problems = []
    # homomorphism: sigma ad(a) = ad(sigma a) sigma
    for a in range(real.dim):
        ad_sa = np.tensordot(mat[:, a], real.ad, axes=(0, 0))
        if not np.array_equal(mat @ real.ad[a], ad_sa @ mat):
            problems.append(f"sigma fails to preserve brackets with {real.labels[a]}")
            break
    power = np.eye(real.dim, dtype=np.int64)
    for _ in range(spec.order):
        power = power @ mat
    if not np.array_equal(power, np.eye(real.dim, dtype=np.int64)):
        problems.append(f"sigma^{spec.order} is not the identity")
    if problems:
        raise RealizationError("; ".join(problems))
    return {"matrix": mat, "order": spec.order, "sign_correction": "none"}


@dataclass
class SubalgebraEmbedding:
    ambient: LieRealization
    spec: FoldingSpec
    sigma: np.ndarray
    fixed_dim: int
    realization: LieRealization            # the fixed subalgebra's own Chevalley realization
    member_basis: list                     # ambient coordinates of each realization basis vector
    generators: dict                       # "E","F","H" -> list of ambient vectors
    checks: dict

    def embed(self, v) -> list:
        out = [0] * self.ambient.dim
        for c, b in zip(v, self.member_basis):
            if c:
                for k, x in enumerate(b):
                    if x:
                        out[k] += c * x
        return [_normalize(x) for x in out]

    @property
    def matrix(self) -> list[list]:
        """ambient-dim x sub-dim matrix of the inclusion."""
        return exact.transpose(self.member_basis)


def fixed_subalgebra(ambient: LieRealization, sigma: np.ndarray, spec: FoldingSpec
                     ) -> SubalgebraEmbedding:
    dim = ambient.dim
    diff = [[int(sigma[i, j]) - int(i == j) for j in range(dim)] for i in range(dim)]
    fixed_dim = dim - exact.rank(diff)
    if fixed_dim != spec.target.dimension:
        raise RealizationError(
            f"fixed subspace has dim {fixed_dim}, expected {spec.target.dimension}")
    E, F, H = [], [], []
    for j, orbit in enumerate(spec.orbits):
        scale_f = 2 if max(spec.coroot_fold[j].values()) == 2 else 1
        ej = {ambient.simple_e(k): 1 for k in orbit}
        fj = {ambient.simple_f(k): scale_f for k in orbit}
        hj = {k: c for k, c in spec.coroot_fold[j].items()}
        if ambient.bracket_sparse(ej, fj) != hj:
            raise RealizationError(f"[E{j+1},F{j+1}] is not the folded coroot")
        E.append(ej)
        F.append(fj)
        H.append(hj)
    sub, basis = realization_from_model(spec.target, ambient.bracket_sparse, E, F,
                                        model=f"fixed points in {ambient.datum.name}")
    member = [dense(b, dim) for b in basis]
    checks = {}
    sig = sigma.astype(object)
    checks["sigma_fixed"] = all(list(sig.dot(np.array(v, dtype=object))) == v for v in member)
    checks["dimension"] = len(member) == fixed_dim
    checks["independent"] = exact.rank(member) == len(member)
    # Killing form of the ambient restricted to the subalgebra
    k = ambient.killing.astype(object)
    mb = np.array(member, dtype=object)
    gram = (mb.dot(k)).dot(mb.T)
    checks["killing_nondegenerate"] = exact.det(gram.tolist()) != 0
    checks["verify"] = verify_realization(sub)["verdict"] == "PASS"
    if not all(checks.values()):
        raise RealizationError(f"fixed subalgebra checks failed: {checks}")
    return SubalgebraEmbedding(
        ambient=ambient, spec=spec, sigma=sigma, fixed_dim=fixed_dim, realization=sub,
        member_basis=member,
        generators={"E": [dense(x, dim) for x in E], "F": [dense(x, dim) for x in F],
                    "H": [dense(x, dim) for x in H]},
        checks=checks,
    )


@lru_cache(maxsize=None)
def folded_embedding(pair: str, n: int = 0) -> SubalgebraEmbedding:
    spec = make_folding(pair, n)
    ambient = realize(spec.source)
    sigma = automorphism_matrix(ambient, spec)["matrix"]
    return fixed_subalgebra(ambient, sigma, spec)


# --- representations --------------------------------------------------------

def extend_representation(real: LieRealization, e_mats, f_mats) -> list[np.ndarray]:
    """Matrices of every basis element, from matrices of the simple generators."""
    n = real.rank
    N = len(real.datum.positive_roots)
    comm = lambda x, y: x.dot(y) - y.dot(x)
    e = [None] * N
    f = [None] * N
    idx = real.datum.root_index
    for i in range(n):
        r = idx[tuple(int(k == i) for k in range(n))]
        e[r] = np.array(e_mats[i], dtype=object)
        f[r] = np.array(f_mats[i], dtype=object)
    h = [comm(e[idx[tuple(int(k == i) for k in range(n))]],
              f[idx[tuple(int(k == i) for k in range(n))]]) for i in range(n)]
    for r, i, b, p in real.recipe:
        si = idx[tuple(int(k == i) for k in range(n))]
        e[r] = comm(e[si], e[b]) / (p + 1)
        f[r] = comm(f[b], f[si]) / (p + 1)
    mats = h + e + f
    return [np.vectorize(_normalize, otypes=[object])(m) for m in mats]


def verify_representation(real: LieRealization, mats) -> bool:
    for (a, b), res in real.table.items():
        if a > b:
            continue
        lhs = mats[a].dot(mats[b]) - mats[b].dot(mats[a])
        rhs = np.zeros_like(lhs)
        for c, x in res.items():
            rhs = rhs + x * mats[c]
        if not np.array_equal(lhs, rhs):
            return False
    # brackets that vanish must vanish in the representation too
    for a in range(real.dim):
        for b in range(a + 1, real.dim):
            if (a, b) not in real.table:
                if np.any(mats[a].dot(mats[b]) != mats[b].dot(mats[a])):
                    return False
    return True


def _unit_matrix(size, i, j):
    m = [[0] * size for _ in range(size)]
    m[i][j] = 1
    return np.array(m, dtype=object)


def standard_representation(real: LieRealization) -> dict:
    """Defining representation for types A (sl_{n+1}) and D (so_{2n}).

    For D the result also carries the symmetric form J with J X antisymmetric
    for every X in the image.
    """
    datum = real.datum
    n = datum.rank
    if datum.family == "A":
        size = n + 1
        e = [_unit_matrix(size, i, i + 1) for i in range(n)]
        f = [_unit_matrix(size, i + 1, i) for i in range(n)]
        form = None
    elif datum.family == "D":
        size = 2 * n
        pos = lambda i: i - 1
        neg = lambda i: 2 * n - i
        e, f = [], []
        for i in range(1, n):
            m = _unit_matrix(size, pos(i), pos(i + 1)) - _unit_matrix(size, neg(i + 1), neg(i))
            e.append(m)
            f.append(m.T.copy())
        m = _unit_matrix(size, pos(n - 1), neg(n)) - _unit_matrix(size, pos(n), neg(n - 1))
        e.append(m)
        f.append(m.T.copy())
        form = np.zeros((size, size), dtype=object)
        for i in range(1, n + 1):
            form[pos(i), neg(i)] = form[neg(i), pos(i)] = 1
    else:
        raise RealizationError(f"no standard representation coded for {datum.name}")
    mats = extend_representation(real, e, f)
    if not verify_representation(real, mats):
        raise RealizationError(f"standard representation of {datum.name} is not a homomorphism")
    if form is not None:
        for m in mats:
            jm = form.dot(m)
            if np.any(jm + jm.T != 0):
                raise RealizationError("standard so-representation does not preserve its form")
    return {"name": "standard", "matrices": mats, "form": form, "size": size}


def adjoint_representation(real: LieRealization) -> dict:
    return {"name": "adjoint", "matrices": [real.ad[a].astype(object) for a in range(real.dim)],
            "form": None, "size": real.dim}
