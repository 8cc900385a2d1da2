"""Root systems, weights and characters of simple Lie algebras.

Conventions: simple roots are numbered as in Bourbaki.  The Cartan matrix
is stored as ``cartan[i][j] = <alpha_i^vee, alpha_j>`` so that the simple root
``alpha_j`` written in the fundamental-weight basis is column ``j``.  Roots are
integer tuples in the simple-root basis, weights integer tuples in the
fundamental-weight basis.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import exact

SCHEMA_VERSION = 1

DEFAULT_CHARACTER_CAP = 10 ** 4
DEFAULT_DIMENSION_CAP = 10 ** 7

# Bourbaki Planches I-IX, used as golden data only.
KNOWN_EXPONENTS = {
    ("A", 1): [1], ("A", 2): [1, 2], ("A", 3): [1, 2, 3], ("A", 4): [1, 2, 3, 4],
    ("A", 5): [1, 2, 3, 4, 5], ("A", 6): [1, 2, 3, 4, 5, 6],
    ("B", 2): [1, 3], ("B", 3): [1, 3, 5], ("B", 4): [1, 3, 5, 7],
    ("C", 2): [1, 3], ("C", 3): [1, 3, 5], ("C", 4): [1, 3, 5, 7],
    ("D", 3): [1, 2, 3], ("D", 4): [1, 3, 3, 5], ("D", 5): [1, 3, 4, 5, 7],
    ("D", 6): [1, 3, 5, 5, 7, 9],
    ("E", 6): [1, 4, 5, 7, 8, 11], ("F", 4): [1, 5, 7, 11], ("G", 2): [1, 5],
}


class RootSystemError(ValueError):
    pass


class CapExceeded(RootSystemError):
    pass


def _check_type(family: str, rank: int) -> None:
    ok = {
        "A": rank >= 1, "B": rank >= 2, "C": rank >= 2, "D": rank >= 3,
        "E": rank == 6, "F": rank == 4, "G": rank == 2,
    }.get(family)
    if not ok:
        raise RootSystemError(f"unsupported simple type {family}{rank}")


def _bonds(family: str, n: int):
    """Edges (i, j, (alpha_i, alpha_j)) and squared lengths, 0-based."""
    if family == "A":
        lengths = [2] * n
        edges = [(i, i + 1, -1) for i in range(n - 1)]
    elif family == "B":
        lengths = [4] * (n - 1) + [2]
        edges = [(i, i + 1, -2) for i in range(n - 2)] + [(n - 2, n - 1, -2)]
    elif family == "C":
        lengths = [2] * (n - 1) + [4]
        edges = [(i, i + 1, -1) for i in range(n - 2)] + [(n - 2, n - 1, -2)]
    elif family == "D":
        lengths = [2] * n
        edges = [(i, i + 1, -1) for i in range(n - 2)] + [(n - 3, n - 1, -1)]
    elif family == "E":
        lengths = [2] * n
        edges = [(0, 2, -1), (2, 3, -1), (3, 4, -1), (4, 5, -1), (1, 3, -1)]
    elif family == "F":
        lengths = [4, 4, 2, 2]
        edges = [(0, 1, -2), (1, 2, -2), (2, 3, -1)]
    else:  # G
        lengths = [2, 6]
        edges = [(0, 1, -3)]
    return lengths, edges


def cartan_matrix(family: str, rank: int) -> list[list[int]]:
    _check_type(family, rank)
    lengths, edges = _bonds(family, rank)
    form = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        form[i][i] = lengths[i]
    for i, j, v in edges:
        form[i][j] = form[j][i] = v
    return [[2 * form[i][j] // lengths[i] for j in range(rank)] for i in range(rank)]


@dataclass(frozen=True)
class RootDatum:
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def dimension(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    @cached_property
    def root_index(self) -> dict[tuple[int, ...], int]:
        return {r: i for i, r in enumerate(self.positive_roots)}

    @cached_property
    def form(self) -> list[list[int]]:
        """Symmetric form (alpha_i, alpha_j) with short simple roots of length^2 2."""
        return [[self.symmetrizer[i] * self.cartan[i][j] for j in range(self.rank)]
                for i in range(self.rank)]

    @cached_property
    def cartan_inverse(self) -> list[list[Fraction]]:
        return exact.inverse(exact.to_fraction_matrix(self.cartan))

    @cached_property
    def fundamental_gram(self) -> list[list[Fraction]]:
        """(varpi_i, varpi_k), normalized like ``form``."""
        inv = self.cartan_inverse
        n = self.rank
        return [[inv[k][i] * self.symmetrizer[k] for k in range(n)] for i in range(n)]

    def is_root(self, v) -> bool:
        t = tuple(v)
        if t in self.root_index:
            return True
        return tuple(-x for x in t) in self.root_index

    def height(self, root) -> int:
        return sum(root)

    def root_norm(self, root) -> int:
        f = self.form
        n = self.rank
        return sum(root[i] * root[j] * f[i][j] for i in range(n) for j in range(n))

    def coroot(self, root) -> tuple[Fraction, ...]:
        """Coordinates of root^vee in the basis of simple coroots."""
        half = Fraction(self.root_norm(root), 2)
        return tuple(Fraction(root[i] * self.symmetrizer[i]) / half for i in range(self.rank))

    def root_to_weight(self, root) -> tuple[int, ...]:
        return tuple(sum(self.cartan[i][j] * root[j] for j in range(self.rank))
                     for i in range(self.rank))

    def weight_to_root(self, weight) -> tuple[Fraction, ...]:
        return tuple(exact.matvec(self.cartan_inverse, weight))

    def pairing(self, weight, root) -> Fraction:
        """<weight, root^vee>."""
        c = self.coroot(root)
        return sum(w * x for w, x in zip(weight, c))

    def inner(self, w1, w2) -> Fraction:
        g = self.fundamental_gram
        n = self.rank
        return sum(w1[i] * g[i][j] * w2[j] for i in range(n) for j in range(n) if w1[i] and w2[j])

    def simple_root_weight(self, i: int) -> tuple[int, ...]:
        return tuple(self.cartan[k][i] for k in range(self.rank))

    @cached_property
    def highest_root(self) -> tuple[int, ...]:
        return max(self.positive_roots, key=lambda r: (sum(r), r))

    @cached_property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    def weight_height(self, weight) -> Fraction:
        return sum(self.weight_to_root(weight))

    def reflect(self, weight, i: int) -> tuple[int, ...]:
        c = weight[i]
        return tuple(w - c * self.cartan[k][i] for k, w in enumerate(weight))

    def to_dominant(self, weight) -> tuple[tuple[int, ...], int]:
        """Dominant Weyl-conjugate and the parity (+1/-1) of the reflection word used."""
        w = tuple(weight)
        sign = 1
        while True:
            i = next((k for k, c in enumerate(w) if c < 0), None)
            if i is None:
                return w, sign
            w = self.reflect(w, i)
            sign = -sign

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA_VERSION,
            "family": self.family,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "exponents": list(self.exponents),
            "positive_roots": len(self.positive_roots),
        }
        return json.dumps(doc, sort_keys=True)


def enumerate_positive_roots(cartan) -> list[tuple[int, ...]]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # alpha_i-string through beta: p = steps down, q = steps up
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pair = sum(cartan[i][j] * beta[j] for j in range(n))
                if p - pair > 0:
                    up = list(beta)
                    up[i] += 1
                    t = tuple(up)
                    if t not in roots:
                        roots.add(t)
                        nxt.append(t)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


def exponents_from_heights(positive_roots) -> list[int]:
    counts = defaultdict(int)
    for r in positive_roots:
        counts[sum(r)] += 1
    top = max(counts)
    part = [counts[h] for h in range(1, top + 1)]
    # dual partition: exponent m appears (part[m-1] - part[m]) times
    out = []
    for m in range(1, top + 1):
        nxt = part[m] if m < top else 0
        out.extend([m] * (part[m - 1] - nxt))
    return sorted(out)


def build_root_datum(family: str, rank: int) -> RootDatum:
    family = family.upper()
    cartan = cartan_matrix(family, rank)
    lengths, _ = _bonds(family, rank)
    short = min(lengths)
    sym = tuple(l // short for l in lengths)
    roots = enumerate_positive_roots(cartan)
    return RootDatum(
        family=family,
        rank=rank,
        cartan=tuple(tuple(r) for r in cartan),
        positive_roots=tuple(roots),
        symmetrizer=sym,
        exponents=tuple(exponents_from_heights(roots)),
    )


def parse_type(name: str) -> RootDatum:
    name = name.strip().upper()
    if len(name) < 2 or not name[1:].isdigit():
        raise RootSystemError(f"cannot parse Lie type {name!r}")
    return build_root_datum(name[0], int(name[1:]))


def exponents_via_heights(datum: RootDatum) -> list[int]:
    return exponents_from_heights(datum.positive_roots)


# --- weights and characters -----------------------------------------------

def _check_dominant(datum: RootDatum, lam) -> tuple[int, ...]:
    lam = tuple(int(x) for x in lam)
    if len(lam) != datum.rank:
        raise RootSystemError(f"weight {lam} has wrong length for {datum.name}")
    if any(x < 0 for x in lam):
        raise RootSystemError(f"weight {lam} is not dominant")
    return lam


def fundamental(datum: RootDatum, i: int, scale: int = 1) -> tuple[int, ...]:
    """scale * varpi_i (1-based index)."""
    return tuple(scale * int(k == i - 1) for k in range(datum.rank))


def weyl_dimension(datum: RootDatum, lam) -> int:
    lam = _check_dominant(datum, lam)
    num = 1
    den = 1
    d = datum.symmetrizer
    for r in datum.positive_roots:
        # <lam + rho, alpha^vee> * d_alpha = sum (lam_i + 1) r_i d_i
        num *= sum((lam[i] + 1) * r[i] * d[i] for i in range(datum.rank))
        den *= sum(r[i] * d[i] for i in range(datum.rank))
    assert num % den == 0
    return num // den


def dominant_weights(datum: RootDatum, lam) -> list[tuple[int, ...]]:
    """Dominant weights of V(lam), highest first (height, then lexicographic)."""
    lam = tuple(lam)
    seen = {lam}
    stack = [lam]
    root_weights = [datum.root_to_weight(r) for r in datum.positive_roots]
    while stack:
        mu = stack.pop()
        for a in root_weights:
            nu = tuple(m - x for m, x in zip(mu, a))
            if min(nu) >= 0 and nu not in seen:
                seen.add(nu)
                stack.append(nu)
    return sorted(seen, key=lambda w: (-datum.weight_height(w), tuple(-x for x in w)))


def dominant_character(datum: RootDatum, lam, cap: int = DEFAULT_CHARACTER_CAP) -> dict:
    """Multiplicities of the dominant weights of V(lam) via Freudenthal's recursion."""
    lam = _check_dominant(datum, lam)
    dim = weyl_dimension(datum, lam)
    if dim > cap:
        raise CapExceeded(f"dim V{lam} = {dim} exceeds character cap {cap}")
    doms = dominant_weights(datum, lam)
    mult = {lam: 1}
    lr = tuple(x + 1 for x in lam)
    top = datum.inner(lr, lr)
    root_weights = [datum.root_to_weight(r) for r in datum.positive_roots]
    for mu in doms[1:]:
        mr = tuple(x + 1 for x in mu)
        total = Fraction(0)
        for a in root_weights:
            k = 1
            while True:
                nu = tuple(m + k * x for m, x in zip(mu, a))
                dom, _ = datum.to_dominant(nu)
                m_nu = mult.get(dom, 0)
                if m_nu == 0 and dom not in mult:
                    break
                total += m_nu * datum.inner(nu, a)
                k += 1
        denom = top - datum.inner(mr, mr)
        value = 2 * total / denom
        assert value.denominator == 1 and value >= 0, (mu, value)
        mult[mu] = int(value)
    return {w: m for w, m in mult.items() if m}


def weyl_orbit(datum: RootDatum, weight) -> list[tuple[int, ...]]:
    start = tuple(weight)
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for i in range(datum.rank):
            if w[i] != 0:
                v = datum.reflect(w, i)
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return sorted(seen)


@dataclass(frozen=True)
class WeightMultiplicityMap:
    datum: RootDatum
    highest: tuple[int, ...]
    entries: dict = field(hash=False)

    @property
    def dimension(self) -> int:
        return sum(self.entries.values())

    def __getitem__(self, w) -> int:
        return self.entries.get(tuple(w), 0)


def freudenthal_multiplicities(datum: RootDatum, lam,
                               cap: int = DEFAULT_CHARACTER_CAP) -> WeightMultiplicityMap:
    dom = dominant_character(datum, lam, cap)
    entries = {}
    for w, m in dom.items():
        for v in weyl_orbit(datum, w):
            entries[v] = m
    return WeightMultiplicityMap(datum, tuple(lam), entries)


class RepRingElement:
    """Virtual character: dominant weight -> integer multiplicity."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: RootDatum, terms=None):
        self.datum = datum
        self.terms = {tuple(k): int(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def irreducible(cls, datum, lam, coeff: int = 1) -> RepRingElement:
        return cls(datum, {tuple(lam): coeff})

    @classmethod
    def one(cls, datum) -> RepRingElement:
        return cls(datum, {(0,) * datum.rank: 1})

    def _coerce(self, other) -> RepRingElement:
        if isinstance(other, RepRingElement):
            return other
        return RepRingElement(self.datum, {(0,) * self.datum.rank: int(other)})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return RepRingElement(self.datum, out)

    __radd__ = __add__

    def __neg__(self):
        return RepRingElement(self.datum, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return RepRingElement(self.datum, {k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        out = RepRingElement(self.datum)
        for a, m in self.terms.items():
            for b, n in other.terms.items():
                out = out + tensor_decompose(self.datum, a, b) * (m * n)
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RepRingElement.one(self.datum)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        return isinstance(other, RepRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        body = " + ".join(f"{v}*V{list(k)}" for k, v in sorted(self.terms.items()))
        return f"RepRingElement({body or '0'})"

    @property
    def dimension(self) -> int:
        return sum(v * weyl_dimension(self.datum, k) for k, v in self.terms.items())

    @property
    def is_genuine(self) -> bool:
        return all(v > 0 for v in self.terms.values())

    def to_json(self) -> list:
        return [[list(k), v] for k, v in sorted(self.terms.items())]


def tensor_decompose(datum: RootDatum, lam, mu, cap: int = DEFAULT_DIMENSION_CAP,
                     character_cap: int = DEFAULT_CHARACTER_CAP) -> RepRingElement:
    """V(lam) (x) V(mu) by the Brauer-Klimyk rule."""
    lam = _check_dominant(datum, lam)
    mu = _check_dominant(datum, mu)
    d_lam, d_mu = weyl_dimension(datum, lam), weyl_dimension(datum, mu)
    if d_lam * d_mu > cap:
        raise CapExceeded(f"product dimension {d_lam * d_mu} exceeds cap {cap}")
    if d_mu > d_lam:
        lam, mu = mu, lam
    chars = freudenthal_multiplicities(datum, mu, character_cap)
    out = defaultdict(int)
    for nu, m in chars.entries.items():
        shifted = tuple(a + b + 1 for a, b in zip(lam, nu))
        dom, sign = datum.to_dominant(shifted)
        if 0 in dom:
            continue
        out[tuple(x - 1 for x in dom)] += sign * m
    return RepRingElement(datum, out)


def character_product(c1: dict, c2: dict) -> dict:
    out = defaultdict(int)
    for a, m in c1.items():
        for b, n in c2.items():
            out[tuple(x + y for x, y in zip(a, b))] += m * n
    return dict(out)


def decompose_character(datum: RootDatum, character: dict,
                        cap: int = DEFAULT_CHARACTER_CAP, trace: list | None = None
                        ) -> RepRingElement:
    """Split a (full) character into irreducibles by dominant-weight subtraction.

    The highest remaining dominant weight (height, then lexicographic) is
    peeled off at each step.  Raises if a multiplicity would go negative.
    """
    remaining = {w: m for w, m in character.items() if m and min(w) >= 0}
    result = {}
    while remaining:
        top = min(remaining, key=lambda w: (-datum.weight_height(w), tuple(-x for x in w)))
        m = remaining[top]
        if m < 0:
            raise RootSystemError(f"negative multiplicity {m} at {top}")
        result[top] = m
        if trace is not None:
            trace.append((top, m))
        for w, k in dominant_character(datum, top, cap).items():
            left = remaining.get(w, 0) - m * k
            if left:
                remaining[w] = left
            else:
                remaining.pop(w, None)
    return RepRingElement(datum, result)


def tensor_decompose_by_characters(datum: RootDatum, lam, mu,
                                   cap: int = DEFAULT_CHARACTER_CAP) -> RepRingElement:
    """Independent route: multiply full characters, then peel dominant weights."""
    a = freudenthal_multiplicities(datum, lam, cap).entries
    b = freudenthal_multiplicities(datum, mu, cap).entries
    return decompose_character(datum, character_product(a, b), cap)


def adams(character: dict, k: int) -> dict:
    return {tuple(k * x for x in w): m for w, m in character.items()}


def exterior_powers(character: dict, top: int) -> list[dict]:
    """Characters of the exterior powers 0..top via Newton's identities."""
    rank = len(next(iter(character)))
    zero = (0,) * rank
    powers = [{zero: 1}]
    for k in range(1, top + 1):
        acc = defaultdict(int)
        for i in range(1, k + 1):
            prod = character_product(adams(character, i), powers[k - i])
            sign = 1 if i % 2 else -1
            for w, m in prod.items():
                acc[w] += sign * m
        out = {}
        for w, m in acc.items():
            if m:
                assert m % k == 0
                out[w] = m // k
        powers.append(out)
    return powers
