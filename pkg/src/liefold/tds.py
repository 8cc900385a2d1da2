"""Principal sl2-triples and the isotypic decomposition of the adjoint module."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .chevalley import (LieRealization, SubalgebraEmbedding, dense, folded_embedding,
                        sadd, sparse)
from .folding import FoldingSpec


class TDSError(ValueError):
    pass


@dataclass(frozen=True)
class Sl2Triple:
    """x is the principal nilpotent (image of the raising generator)."""
    x: tuple
    h: tuple
    y: tuple
    nullity: int = 0        # dimension of the affine solution set for y

    def to_json(self, labels) -> dict:
        return {name: _describe(vec, labels) for name, vec in
                (("x", self.x), ("h", self.h), ("y", self.y))}


@dataclass
class Component:
    m: int
    basis: list                 # 2m+1 vectors, highest weight first
    scalars: list = field(default_factory=list)   # v_{k+1} = scalar * [y, v_k]

    @property
    def dim(self) -> int:
        return 2 * self.m + 1


@dataclass
class IsotypicDecomposition:
    components: list
    dims: list
    highest_weight_spaces: dict     # m -> {"dim": k, "basis_choice": str}

    def component_span(self, m: int) -> list:
        return [v for c in self.components if c.m == m for v in c.basis]


def _describe(vec, labels) -> str:
    terms = []
    for c, lab in zip(vec, labels):
        if c:
            c = Fraction(c)
            coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
            terms.append(f"{coef}{lab}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


# --- nilpotents -------------------------------------------------------------

def principal_nilpotent(real: LieRealization) -> list:
    v = [0] * real.dim
    for i in range(real.rank):
        v[real.simple_e(i)] = 1
    return v


def folded_principal_nilpotent(spec: FoldingSpec, ambient: LieRealization, sigma: np.ndarray,
                               mode: str = "orbit") -> list:
    """Sigma-invariant principal nilpotent of the fixed subalgebra, in ambient coordinates.

    ``orbit`` sums each orbit once; ``literal`` sums sigma^i(x_n) for i = 1..ord(sigma),
    which multiplies the orbit of x_n by ord(sigma)/|orbit|.
    """
    if mode not in ("orbit", "literal"):
        raise TDSError(f"unknown mode {mode!r}")
    total = [0] * ambient.dim
    for j, rep in enumerate(spec.orbit_reps):
        xn = np.zeros(ambient.dim, dtype=np.int64)
        xn[ambient.simple_e(rep)] = 1
        if mode == "orbit":
            yn = np.zeros_like(xn)
            for k in spec.orbits[j]:
                yn[ambient.simple_e(k)] = 1
        else:
            yn = np.zeros_like(xn)
            cur = xn
            for _ in range(spec.order):
                cur = sigma @ cur
                yn = yn + cur
        if not yn.any():
            raise TDSError(f"y_{j+1} vanished")
        total = [a + int(b) for a, b in zip(total, yn)]
    return total


def ad_matrix(real: LieRealization, v) -> list[list]:
    """Exact ad(v) as a list of rows."""
    m = [[0] * real.dim for _ in range(real.dim)]
    for a, x in enumerate(v):
        if x:
            block = real.ad[a]
            rows, cols = np.nonzero(block)
            for r, c in zip(rows, cols):
                m[r][c] += x * int(block[r, c])
    return m


def nilpotency_index(real: LieRealization, v) -> int | None:
    """Smallest k with (ad v)^k = 0, or None if v is not ad-nilpotent."""
    sv = sparse(v)
    worst = 0
    for b in range(real.dim):
        cur = {b: 1}
        k = 0
        while cur:
            if k > real.dim:
                return None
            cur = real.bracket_sparse(sv, cur)
            k += 1
        worst = max(worst, k)
    return worst


def centralizer_dimension(real: LieRealization, v) -> int:
    return real.dim - exact.rank(ad_matrix(real, v))


def is_principal(real: LieRealization, v) -> dict:
    if nilpotency_index(real, v) is None:
        raise TDSError("element is not nilpotent")
    cdim = centralizer_dimension(real, v)
    return {"centralizer_dim": cdim, "rank": real.rank, "principal": cdim == real.rank}


# --- completing the triple ----------------------------------------------------

def _h_for(real: LieRealization, x) -> list:
    """The semisimple h with [h, x] = 2x."""
    n = real.rank
    simple = {real.simple_e(i) for i in range(n)}
    support = {k for k, c in enumerate(x) if c}
    if support and support <= simple:
        # h = 2 rho^vee: solve A^T c = 2
        at = exact.transpose(real.datum.cartan)
        c, _ = exact.solve(at, [2] * n)
        return dense({i: ci for i, ci in enumerate(c) if ci}, real.dim)
    # general route: h = [x, z] with -ad(x)^2 z = 2x
    adx = ad_matrix(real, x)
    adx2 = exact.matmul(adx, adx)
    z, _ = exact.solve([[-a for a in row] for row in adx2], [2 * c for c in x])
    if z is None:
        raise TDSError("no h with [h, x] = 2x in [x, g]")
    return real.bracket(x, z)


def complete_sl2(real: LieRealization, x) -> Sl2Triple:
    info = is_principal(real, x)
    if not info["principal"]:
        raise TDSError(f"centralizer dim {info['centralizer_dim']} != rank {real.rank}")
    h = _h_for(real, x)
    if real.bracket(h, x) != [2 * c for c in x]:
        raise TDSError("[h, x] != 2x")
    adx, adh = ad_matrix(real, x), ad_matrix(real, h)
    # [x, y] = h and [h, y] = -2y stacked
    rows = adx + [[a + 2 * int(i == j) for j, a in enumerate(row)] for i, row in enumerate(adh)]
    rhs = list(h) + [0] * real.dim
    y, nullity = exact.solve(rows, rhs)
    if y is None:
        raise TDSError("inconsistent system for y")
    y = dense(sparse(y), real.dim)
    triple = Sl2Triple(tuple(x), tuple(h), tuple(y), nullity)
    check_triple(real, triple)
    return triple


def check_triple(real: LieRealization, t: Sl2Triple) -> None:
    x, h, y = list(t.x), list(t.h), list(t.y)
    if real.bracket(h, x) != [2 * c for c in x]:
        raise TDSError("[h, x] != 2x")
    if real.bracket(h, y) != [-2 * c for c in y]:
        raise TDSError("[h, y] != -2y")
    if real.bracket(x, y) != h:
        raise TDSError("[x, y] != h")


# --- decomposition ----------------------------------------------------------

def _weight_spaces(real: LieRealization, h) -> dict:
    """ad-h eigenvalue -> basis of eigenvectors (exact)."""
    if all(c == 0 for c in h[real.rank:]):
        out: dict = {}
        cartan = real.datum.cartan
        for k, w in enumerate(real.weights):
            ev = sum(h[i] * sum(cartan[i][j] * w[j] for j in range(real.rank))
                     for i in range(real.rank))
            out.setdefault(Fraction(ev), []).append(real.unit(k))
        return out
    adh = ad_matrix(real, h)
    out = {}
    bound = 2 * real.dim
    for ev in range(-bound, bound + 1):
        shifted = [[a - ev * int(i == j) for j, a in enumerate(row)]
                   for i, row in enumerate(adh)]
        ker = exact.nullspace(shifted)
        if ker:
            out[Fraction(ev)] = ker
    if sum(len(v) for v in out.values()) != real.dim:
        raise TDSError("ad h is not diagonalizable over the integers")
    return out


def _contravariant(real: LieRealization, y, m: int, u, v):
    """kappa(u, (ad y)^{2m} v): symmetric and nondegenerate on a highest-weight space."""
    w = list(v)
    for _ in range(2 * m):
        w = real.bracket(y, w)
    return real.killing_form(u, w)


def _choose_basis(real: LieRealization, y, m: int, vectors: list) -> tuple[list, str]:
    if len(vectors) == 1:
        return vectors, "unique"
    out = []
    for v in vectors:
        w = list(v)
        for u in out:
            nu = _contravariant(real, y, m, u, u)
            w = [a - Fraction(_contravariant(real, y, m, u, v)) / nu * b for a, b in zip(w, u)]
        out.append([_frac_norm(a) for a in w])
    if any(_contravariant(real, y, m, u, u) == 0 for u in out):
        return vectors, "echelon"
    return out, "gram-schmidt (contravariant Killing form, declaration order)"


def _frac_norm(a):
    a = Fraction(a)
    return a.numerator if a.denominator == 1 else a


def decompose_adjoint(real: LieRealization, triple: Sl2Triple) -> IsotypicDecomposition:
    check_triple(real, triple)
    x, y = list(triple.x), list(triple.y)
    spaces = _weight_spaces(real, list(triple.h))
    components, hw = [], {}
    for ev in sorted(spaces, reverse=True):
        if ev < 0 or ev.denominator != 1 or ev % 2:
            if ev >= 0 and (ev.denominator != 1 or ev % 2):
                raise TDSError(f"odd ad-h eigenvalue {ev} in the adjoint module")
            continue
        m = int(ev) // 2
        basis = spaces[ev]
        images = [real.bracket(x, v) for v in basis]
        # kernel of ad x restricted to this weight space
        coeffs = exact.nullspace(exact.transpose(images)) if any(any(i) for i in images) \
            else [[int(i == j) for j in range(len(basis))] for i in range(len(basis))]
        highest = []
        for c in coeffs:
            v = [0] * real.dim
            for a, b in zip(c, basis):
                if a:
                    v = [p + a * q for p, q in zip(v, b)]
            highest.append([_frac_norm(a) for a in v])
        if not highest:
            continue
        highest, choice = _choose_basis(real, y, m, highest)
        hw[m] = {"dim": len(highest), "basis_choice": choice}
        for v in highest:
            string = [v]
            for _ in range(2 * m):
                string.append(real.bracket(y, string[-1]))
            if not any(string[-1]) or any(real.bracket(y, string[-1])):
                raise TDSError(f"string from weight {2*m} has the wrong length")
            components.append(Component(m, string, [1] * (2 * m)))
    dims = sorted(c.dim for c in components)
    if sum(dims) != real.dim:
        raise TDSError(f"components cover {sum(dims)} of {real.dim} dimensions")
    return IsotypicDecomposition(components, dims, hw)


def verify_decomposition(real: LieRealization, dec: IsotypicDecomposition) -> dict:
    expected = sorted(2 * m + 1 for m in real.datum.exponents)
    all_vectors = [v for c in dec.components for v in c.basis]
    spans = exact.rank(all_vectors) == real.dim
    ok = dec.dims == expected and spans and len(dec.components) == real.rank
    return {"type": real.datum.name, "dims": dec.dims, "expected": expected,
            "spans": spans, "verdict": "PASS" if ok else "FAIL"}


def ad_h_spectrum(real: LieRealization, triple: Sl2Triple) -> dict:
    spaces = _weight_spaces(real, list(triple.h))
    return {int(ev): len(v) for ev, v in sorted(spaces.items())}


# --- the folded construction ------------------------------------------------

def _coordinates(emb: SubalgebraEmbedding, v) -> list:
    coords, _ = exact.solve(exact.transpose(emb.member_basis), list(v))
    if coords is None:
        raise TDSError("vector is not in the fixed subalgebra")
    return [_frac_norm(c) for c in coords]


def folded_tds_report(pair: str, n: int = 0, mode: str = "orbit") -> dict:
    """Everything needed to see the folded nilpotent is principal in both algebras."""
    emb = folded_embedding(pair, n)
    spec, ambient, sub = emb.spec, emb.ambient, emb.realization
    xg = folded_principal_nilpotent(spec, ambient, emb.sigma, mode)
    sig = emb.sigma.astype(object)
    fixed = list(sig.dot(np.array(xg, dtype=object))) == xg
    positive = all(xg[ambient.simple_e(i)] > 0 for i in range(ambient.rank)) and \
        all(c == 0 for k, c in enumerate(xg) if k not in
            {ambient.simple_e(i) for i in range(ambient.rank)})
    pg = is_principal(ambient, xg)
    xk = _coordinates(emb, xg)
    pk = is_principal(sub, xk)
    tg = complete_sl2(ambient, xg)
    tk = complete_sl2(sub, xk)
    triple_fixed = all(list(sig.dot(np.array(v, dtype=object))) == list(v)
                       for v in (tg.x, tg.h, tg.y))
    same_triple = all(emb.embed(list(a)) == list(b) for a, b in
                      zip((tk.x, tk.h, tk.y), (tg.x, tg.h, tg.y)))
    dg = decompose_adjoint(ambient, tg)
    dk = decompose_adjoint(sub, tk)
    inside = []
    for comp in dk.components:
        span = dg.component_span(comp.m)
        emb_vecs = [emb.embed(v) for v in comp.basis]
        contained = bool(span) and exact.rank(span + emb_vecs) == exact.rank(span)
        inside.append({"m": comp.m, "contained": contained,
                       "equal": contained and len(span) == len(emb_vecs)})
    ok = (fixed and positive and pg["principal"] and pk["principal"] and triple_fixed
          and same_triple and all(c["contained"] for c in inside))
    return {
        "pair": spec.label,
        "mode": mode,
        "nilpotent": _describe(xg, ambient.labels),
        "sigma_fixed": fixed,
        "positive_on_simple_roots": positive,
        "centralizer_dim_g": pg["centralizer_dim"], "rank_g": ambient.rank,
        "centralizer_dim_k": pk["centralizer_dim"], "rank_k": sub.rank,
        "triple_sigma_fixed": triple_fixed,
        "triple_matches_subalgebra_triple": same_triple,
        "y_solution_nullity": tg.nullity,
        "dims_g": dg.dims, "dims_k": dk.dims,
        "k_components_in_g": inside,
        "verdict": "PASS" if ok else "FAIL",
    }
