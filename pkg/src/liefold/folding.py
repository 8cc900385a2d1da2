"""Diagram automorphisms of simply-laced Dynkin diagrams and their foldings.

Index conventions follow the folding pictures used throughout the package:
the target simple root ``beta_j`` is the restriction of the source simple root
``alpha_{rep(j)}``.  The restriction matrix ``R`` (weights, fundamental basis)
is derived from the coroot folds, never typed in; the expected values of
``rho(varpi_i)`` are kept separately as golden data.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .rootsys import RootDatum, RootSystemError, build_root_datum

PAIRS = ("A2n1_C", "A2n_B", "Dn_B", "D4_G2", "E6_F4")


class FoldingError(ValueError):
    pass


@dataclass(frozen=True)
class FoldingSpec:
    pair: str
    n: int
    source: RootDatum
    sigma: tuple[int, ...]          # 0-based permutation of source nodes
    order: int
    orbits: tuple[tuple[int, ...], ...]   # orbit j <-> target simple root j
    orbit_reps: tuple[int, ...]
    target: RootDatum
    coroot_fold: tuple[dict, ...]   # target j -> {source k: coefficient}
    restriction: tuple[tuple[int, ...], ...]  # ell_k x ell

    @property
    def label(self) -> str:
        return f"({self.source.name},{self.target.name})"

    @property
    def is_identity(self) -> bool:
        return self.pair == "identity"

    def restrict_weight(self, lam) -> tuple[int, ...]:
        return tuple(sum(r * x for r, x in zip(row, lam)) for row in self.restriction)

    def long_short(self) -> list[str]:
        sym = self.target.symmetrizer
        top = max(sym)
        return ["long" if s == top else "short" for s in sym]

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "n": self.n,
            "source": self.source.name,
            "target": self.target.name,
            "sigma": [s + 1 for s in self.sigma],
            "order": self.order,
            "orbits": [[k + 1 for k in o] for o in self.orbits],
            "orbit_reps": [k + 1 for k in self.orbit_reps],
            "coroot_fold": [{str(k + 1): c for k, c in sorted(cf.items())}
                            for cf in self.coroot_fold],
            "restriction": [list(r) for r in self.restriction],
            "roots": self.long_short(),
        }


def _perm_from_pairs(ell: int, swaps) -> list[int]:
    sigma = list(range(ell))
    for a, b in swaps:
        sigma[a], sigma[b] = b, a
    return sigma


def _layout(pair: str, n: int):
    """(source type, target type, sigma, orbits in target order), 0-based nodes."""
    if pair == "A2n1_C":
        if n < 1:
            raise FoldingError("A2n1_C needs n >= 1")
        ell = 2 * n + 1
        sigma = [ell - 1 - i for i in range(ell)]
        orbits = [(i, ell - 1 - i) for i in range(n)] + [(n,)]
        return ("A", ell), ("C", n + 1), sigma, orbits
    if pair == "A2n_B":
        if n < 2:
            raise FoldingError("A2n_B needs n >= 2")
        ell = 2 * n
        sigma = [ell - 1 - i for i in range(ell)]
        orbits = [(i, ell - 1 - i) for i in range(n)]
        return ("A", ell), ("B", n), sigma, orbits
    if pair == "Dn_B":
        if n < 3:
            raise FoldingError("Dn_B needs n >= 3")
        sigma = _perm_from_pairs(n, [(n - 2, n - 1)])
        orbits = [(i,) for i in range(n - 2)] + [(n - 2, n - 1)]
        return ("D", n), ("B", n - 1), sigma, orbits
    if pair == "D4_G2":
        sigma = [2, 1, 3, 0]   # 1 -> 3 -> 4 -> 1
        orbits = [(0, 2, 3), (1,)]
        return ("D", 4), ("G", 2), sigma, orbits
    if pair == "E6_F4":
        sigma = _perm_from_pairs(6, [(0, 5), (2, 4)])
        orbits = [(1,), (3,), (2, 4), (0, 5)]
        return ("E", 6), ("F", 4), sigma, orbits
    if pair == "identity":
        rank = max(n, 1)
        return ("A", rank), ("A", rank), list(range(rank)), [(i,) for i in range(rank)]
    raise FoldingError(f"unknown folding pair {pair!r}")


def _order(sigma) -> int:
    k, cur = 1, list(sigma)
    while cur != list(range(len(sigma))):
        cur = [sigma[c] for c in cur]
        k += 1
    return k


def make_folding(pair: str, n: int = 0) -> FoldingSpec:
    if pair in ("D4_G2", "E6_F4"):
        n = 0
    (sf, sr), (tf, tr), sigma, orbits = _layout(pair, n)
    try:
        source = build_root_datum(sf, sr)
        target = build_root_datum(tf, tr)
    except RootSystemError as exc:
        raise FoldingError(str(exc)) from exc
    ell = source.rank
    for i in range(ell):
        for j in range(ell):
            if source.cartan[sigma[i]][sigma[j]] != source.cartan[i][j]:
                raise FoldingError(f"sigma is not a diagram automorphism at ({i+1},{j+1})")
    coroot_fold = []
    for orbit in orbits:
        if pair == "A2n_B" and len(orbit) == 2 and orbit[0] + 1 == orbit[1]:
            # the orbit of two adjacent nodes: doubled orbit sum
            coroot_fold.append({k: 2 for k in orbit})
        else:
            coroot_fold.append({k: 1 for k in orbit})
    # <rho(varpi_i), beta_j^vee> = sum_k c_jk <varpi_i, alpha_k^vee> = c_ji
    restriction = tuple(tuple(cf.get(i, 0) for i in range(ell)) for cf in coroot_fold)
    spec = FoldingSpec(
        pair=pair, n=n, source=source, sigma=tuple(sigma), order=_order(sigma),
        orbits=tuple(tuple(o) for o in orbits), orbit_reps=tuple(min(o) for o in orbits),
        target=target, coroot_fold=tuple(coroot_fold), restriction=restriction,
    )
    folded = folded_cartan(spec)
    if folded != [list(r) for r in target.cartan]:
        raise FoldingError(f"folded Cartan matrix {folded} does not match {target.name}")
    return spec


def folded_cartan(spec: FoldingSpec) -> list[list[int]]:
    """<beta_i^vee, beta_j> with beta_j = rho(alpha_rep(j))."""
    src = spec.source
    out = []
    for i in range(spec.target.rank):
        row = []
        for rep in spec.orbit_reps:
            row.append(spec.restrict_weight(src.simple_root_weight(rep))[i])
        out.append(row)
    return out


def restrict_weight(spec: FoldingSpec, lam) -> tuple[int, ...]:
    return spec.restrict_weight(lam)


# rho(varpi_i) as stated for each pair (1-based nu indices, with coefficient)
def expected_restrictions(spec: FoldingSpec) -> list[dict]:
    ell, lk = spec.source.rank, spec.target.rank
    if spec.pair == "E6_F4":
        table = {1: {4: 1}, 6: {4: 1}, 2: {1: 1}, 3: {3: 1}, 5: {3: 1}, 4: {2: 1}}
        return [table[i] for i in range(1, 7)]
    if spec.pair == "A2n_B":
        n = spec.n
        out = []
        for i in range(1, ell + 1):
            j = min(i, ell + 1 - i)
            out.append({n: 2} if j == n else {j: 1})
        return out
    out = []
    for i in range(1, ell + 1):
        if i <= lk:
            out.append({i: 1})
        else:
            # sigma-partner of a node shares its orbit
            rep = next(j for j, o in enumerate(spec.orbits) if i - 1 in o)
            out.append({rep + 1: 1})
    return out


def verify_weight_restriction(spec: FoldingSpec) -> dict:
    """Recompute <rho(varpi_i), beta_j^vee> from the coroot folds and compare."""
    src, tgt = spec.source, spec.target
    ell, lk = src.rank, tgt.rank
    pairings = []
    failures = []
    expected = expected_restrictions(spec)
    for i in range(ell):
        varpi = tuple(int(k == i) for k in range(ell))
        got = spec.restrict_weight(varpi)
        for j in range(lk):
            # pairing straight from the coroot fold: sum_k c_jk <varpi_i, alpha_k^vee>
            value = sum(c * varpi[k] for k, c in spec.coroot_fold[j].items())
            want = expected[i].get(j + 1, 0)
            pairings.append({"i": i + 1, "j": j + 1, "value": value, "expected": want})
            if value != want or got[j] != want:
                failures.append((i + 1, j + 1))
    cartan_ok = folded_cartan(spec) == [list(r) for r in tgt.cartan]
    return {
        "pair": spec.label,
        "pairings": pairings,
        "folded_cartan_matches": cartan_ok,
        "failures": failures,
        "verdict": "PASS" if not failures and cartan_ok else "FAIL",
    }


def dominant_image(spec: FoldingSpec) -> dict:
    """Generators of rho(dominant cone) and the lattice index of rho (Smith form)."""
    ell = spec.source.rank
    gens = []
    for i in range(ell):
        w = spec.restrict_weight(tuple(int(k == i) for k in range(ell)))
        if w not in gens and any(w):
            gens.append(w)
    gens.sort(key=lambda w: (sum(w), tuple(-x for x in w)), reverse=False)
    factors = exact.smith_normal_form(spec.restriction)
    index = 1
    for f in factors:
        index *= f
    full_rank = len(factors) == spec.target.rank
    return {
        "pair": spec.label,
        "generators": sorted(gens, key=lambda w: tuple(i for i, x in enumerate(w) if x)),
        "invariant_factors": factors,
        "lattice_index": index if full_rank else 0,
    }


def expected_dominant_generators(spec: FoldingSpec) -> list[tuple[int, ...]]:
    lk = spec.target.rank
    gens = []
    for j in range(lk):
        scale = 2 if (spec.pair == "A2n_B" and j == lk - 1) else 1
        gens.append(tuple(scale * int(k == j) for k in range(lk)))
    return gens


def coroot_vector(spec: FoldingSpec, j: int) -> list[Fraction]:
    """beta_j^vee in the basis of source simple coroots."""
    return [Fraction(spec.coroot_fold[j].get(k, 0)) for k in range(spec.source.rank)]


def fold_table(spec: FoldingSpec) -> str:
    """Plain-text rendering of the folding data."""
    d = spec.to_dict()
    lines = [f"{spec.label}  order(sigma) = {d['order']}",
             "  j  orbit        coroot fold              root"]
    for j, (orb, cf, ls) in enumerate(zip(d["orbits"], d["coroot_fold"], d["roots"])):
        fold = " + ".join(f"{c}*a{k}v" if c != 1 else f"a{k}v" for k, c in cf.items())
        lines.append(f"  {j+1}  {str(orb):12s} {fold:24s} {ls}")
    lines.append("  R = " + str(d["restriction"]))
    return "\n".join(lines)
