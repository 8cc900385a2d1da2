"""Verification pipeline and its JSON report.

Checks run in dependency order and every record carries a verdict.  When a
prerequisite fails or is skipped, dependants are recorded as SKIPPED with the
name of the blocking check, never as PASS.  The text rendering is produced
from the JSON document, so both views always agree.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import exact
from .branching import chevalley_branching, not_a_weight_check, verify_case
from .chevalley import RealizationError, folded_embedding, realize, verify_realization
from .folding import (PAIRS, dominant_image, expected_dominant_generators, make_folding,
                      verify_weight_restriction)
from .invariants import (MAX_EVAL_DEGREE, InvariantError, chevalley_restriction_check,
                         default_representation, hitchin_check,
                         verify_transgression_commutes)
from .rootsys import RootSystemError, parse_type
from .tds import complete_sl2, decompose_adjoint, folded_tds_report, principal_nilpotent

SCHEMA = 1
VERDICTS = ("PASS", "FAIL", "SKIPPED")
DEFAULT_N = {"A2n1_C": 1, "A2n_B": 2, "Dn_B": 4, "D4_G2": 0, "E6_F4": 0}
# representations bigger than this are not used for Hitchin evaluation of g
HITCHIN_REP_CAP = 60


class ConfigError(ValueError):
    """Invalid run configuration; raised before any computation starts."""


@dataclass
class RunConfig:
    pairs: tuple = PAIRS
    n: int | None = None
    degrees: tuple | None = None
    mode: str = "modular"
    prime: int | None = None
    seed: int = 0
    cap_dim: int = 100
    samples: int = 10
    timing: bool = False

    def validate(self) -> None:
        for p in self.pairs:
            if p not in PAIRS and p != "identity":
                raise ConfigError(f"unknown pair {p!r}; choose from {', '.join(PAIRS)}")
        if self.mode not in ("exact", "modular"):
            raise ConfigError(f"mode must be exact or modular, not {self.mode!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits")
        if self.cap_dim < 1:
            raise ConfigError("cap-dim must be positive")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.prime is not None:
            if not exact.PRIME_FLOOR < self.prime < 2 ** 32:
                raise ConfigError("explicit prime must lie strictly between 2**31 and 2**32")
            if not exact.is_probable_prime(self.prime):
                raise ConfigError(f"{self.prime} is not prime")
        if self.degrees is not None:
            for d in self.degrees:
                if d < 1 or d % 2 == 0:
                    raise ConfigError(f"degree {d} is not odd and positive")
        for p in self.pairs:
            try:
                make_folding(p, self.n_for(p))
            except (RootSystemError, ValueError) as exc:
                raise ConfigError(str(exc)) from exc

    def n_for(self, pair: str) -> int:
        if self.n is not None:
            return self.n
        return DEFAULT_N.get(pair, 2)

    def primes(self) -> list[int]:
        if self.prime is None:
            return exact.auto_primes(3, self.seed)
        out = [self.prime]
        while len(out) < 3:
            out.append(exact.next_prime(out[-1] + 1))
        return out

    def to_json(self) -> dict:
        d = asdict(self)
        d["pairs"] = list(self.pairs)
        d["degrees"] = None if self.degrees is None else list(self.degrees)
        d["prime_policy"] = "auto" if self.prime is None else "explicit"
        d.pop("timing")
        return d


@dataclass
class CheckRecord:
    name: str
    anchor: str
    inputs: dict
    verdict: str
    witness: dict = field(default_factory=dict)
    seconds: float | None = None

    def to_json(self, timing: bool) -> dict:
        d = {"name": self.name, "anchor": self.anchor, "inputs": self.inputs,
             "verdict": self.verdict, "witness": self.witness}
        if timing and self.seconds is not None:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class VerificationReport:
    config: RunConfig
    records: list = field(default_factory=list)

    def summary(self) -> dict:
        counts = {v: 0 for v in VERDICTS}
        for r in self.records:
            counts[r.verdict] = counts.get(r.verdict, 0) + 1
        return counts

    @property
    def ok(self) -> bool:
        return all(r.verdict != "FAIL" for r in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "config": self.config.to_json(),
                "checks": [r.to_json(self.config.timing) for r in self.records],
                "summary": self.summary()}

    def dumps(self) -> str:
        return dumps(self.to_json())


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_text(doc: dict) -> str:
    """One line per check, then the summary counts."""
    lines = []
    width = max((len(c["name"]) for c in doc["checks"]), default=10)
    for c in doc["checks"]:
        extra = ""
        if c["verdict"] == "SKIPPED" and "reason" in c["witness"]:
            extra = f"  ({c['witness']['reason']})"
        t = f"  {c['seconds']:.2f}s" if "seconds" in c else ""
        lines.append(f"{c['verdict']:<8} {c['name']:<{width}}  {c['anchor']}{t}{extra}")
    s = doc["summary"]
    lines.append(f"-- {s['PASS']} passed, {s['FAIL']} failed, {s['SKIPPED']} skipped")
    return "\n".join(lines) + "\n"


class _Runner:
    def __init__(self, config: RunConfig):
        self.config = config
        self.report = VerificationReport(config)
        self.status: dict[str, str] = {}

    def run(self, name: str, anchor: str, inputs: dict, fn: Callable[[], dict],
            needs: tuple = ()) -> dict | None:
        blocked = [n for n in needs if self.status.get(n) != "PASS"]
        if blocked:
            rec = CheckRecord(name, anchor, inputs, "SKIPPED",
                              {"reason": f"requires {', '.join(blocked)}"})
            return self._add(rec)
        t0 = time.perf_counter()
        try:
            out = fn()
        except (RealizationError, InvariantError, RootSystemError, ValueError,
                ArithmeticError) as exc:
            out = {"verdict": "FAIL", "error": f"{type(exc).__name__}: {exc}"}
        verdict = out.pop("verdict")
        if verdict not in VERDICTS:
            # an undecided certificate is not a pass
            out["undecided"] = verdict
            verdict = "FAIL"
        rec = CheckRecord(name, anchor, inputs, verdict, out, time.perf_counter() - t0)
        self._add(rec)
        return out

    def skip(self, name: str, anchor: str, inputs: dict, reason: str) -> None:
        self._add(CheckRecord(name, anchor, inputs, "SKIPPED", {"reason": reason}))

    def _add(self, rec: CheckRecord):
        self.status[rec.name] = rec.verdict
        self.report.records.append(rec)
        return None


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _fold_checks(r: _Runner, pair: str, n: int) -> str:
    spec = make_folding(pair, n)
    tag = spec.label
    inputs = {"pair": pair, "n": n}

    def restriction():
        out = verify_weight_restriction(spec)
        return {"verdict": out["verdict"], "failures": out["failures"],
                "folded_cartan_matches": out["folded_cartan_matches"],
                "pairings": len(out["pairings"])}

    def image():
        out = dominant_image(spec)
        want = sorted(expected_dominant_generators(spec))
        index = 2 if pair == "A2n_B" else 1
        ok = sorted(out["generators"]) == want and out["lattice_index"] == index
        return {"verdict": _verdict(ok), "generators": [list(g) for g in out["generators"]],
                "expected": [list(g) for g in want], "invariant_factors": out["invariant_factors"],
                "lattice_index": out["lattice_index"], "expected_index": index}

    r.run(f"{tag}/weight_restriction", "pairings of restricted fundamental weights with "
          "folded coroots", inputs, restriction)
    r.run(f"{tag}/dominant_image", "image of the dominant cone and its lattice index",
          inputs, image, needs=(f"{tag}/weight_restriction",))
    return tag


def _chevalley_checks(r: _Runner, pair: str, n: int, tag: str) -> None:
    spec = make_folding(pair, n)
    inputs = {"pair": pair, "n": n}
    dim = 2 * len(spec.source.positive_roots) + spec.source.rank
    fold = f"{tag}/weight_restriction"
    if dim > r.config.cap_dim:
        reason = f"dim g = {dim} exceeds cap-dim {r.config.cap_dim}"
        for name in ("realization_g", "fixed_subalgebra"):
            r.skip(f"{tag}/{name}", "Chevalley basis realization", inputs, reason)
        return

    def real_g():
        out = verify_realization(realize(spec.source, r.config.cap_dim))
        return {"verdict": out["verdict"], "dim": out["dim"], "problems": out["problems"]}

    def fixed():
        emb = folded_embedding(pair, n)
        out = verify_realization(emb.realization)
        ok = out["verdict"] == "PASS" and all(emb.checks.values())
        return {"verdict": _verdict(ok), "fixed_dim": emb.fixed_dim,
                "order": spec.order, "checks": emb.checks, "problems": out["problems"]}

    r.run(f"{tag}/realization_g", "Chevalley basis with exact integer structure constants",
          inputs, real_g, needs=(fold,))
    r.run(f"{tag}/fixed_subalgebra", "fixed points of the diagram automorphism form "
          "the folded algebra", inputs, fixed, needs=(f"{tag}/realization_g",))


def _expected_dims(datum) -> list[int]:
    return sorted(2 * m + 1 for m in datum.exponents)


def _tds_checks(r: _Runner, pair: str, n: int, tag: str) -> None:
    spec = make_folding(pair, n)
    inputs = {"pair": pair, "n": n}
    needs = (f"{tag}/fixed_subalgebra",)
    for mode in ("orbit", "literal"):
        def fn(mode=mode):
            out = folded_tds_report(pair, n, mode)
            dims_ok = (out["dims_g"] == _expected_dims(spec.source)
                       and out["dims_k"] == _expected_dims(spec.target))
            out["expected_dims_g"] = _expected_dims(spec.source)
            out["expected_dims_k"] = _expected_dims(spec.target)
            out["verdict"] = _verdict(out["verdict"] == "PASS" and dims_ok)
            out.pop("pair")
            return out
        r.run(f"{tag}/principal_tds_{mode}", "folded principal nilpotent is principal in "
              "both algebras", dict(inputs, mode=mode), fn, needs=needs)


def _branching_checks(r: _Runner, pair: str, n: int, tag: str) -> None:
    inputs = {"pair": pair, "n": n}
    fold = (f"{tag}/weight_restriction",)
    r.run(f"{tag}/branching_case", "branching identities in the representation ring of K",
          inputs, lambda: _drop_pair(verify_case(pair, n)), needs=fold)
    if pair == "E6_F4":
        r.run(f"{tag}/not_a_weight", "2 nu_1 is not a weight of V_4", inputs,
              not_a_weight_check, needs=fold)
    if make_folding(pair, n).is_identity:
        return
    r.run(f"{tag}/adjoint_branching", "adjoint branching agrees between characters and "
          "the realization", inputs, lambda: _drop_pair(chevalley_branching(pair, n)),
          needs=fold + (f"{tag}/fixed_subalgebra",))


def _drop_pair(out: dict) -> dict:
    out.pop("pair", None)
    return out


def _hitchin_for(r: _Runner, tag: str, side: str, real, inputs: dict, needs: tuple) -> None:
    cfg = r.config
    triple = complete_sl2(real, principal_nilpotent(real))
    dec = decompose_adjoint(real, triple)
    available = sorted(set(dec.dims))
    degrees = available if cfg.degrees is None else [d for d in cfg.degrees if d in available]
    rep = default_representation(real)
    for d in degrees:
        name = f"{tag}/hitchin_{side}_d{d}"
        anchor = "primitive form is nonzero on the irreducible component of this dimension"
        if d > MAX_EVAL_DEGREE:
            r.skip(name, anchor, dict(inputs, d=d), f"d > {MAX_EVAL_DEGREE}")
            continue
        if d > 3 and rep["size"] > HITCHIN_REP_CAP:
            r.skip(name, anchor, dict(inputs, d=d),
                   f"representation of size {rep['size']} > {HITCHIN_REP_CAP}")
            continue
        r.run(name, anchor, dict(inputs, d=d, mode=cfg.mode),
              lambda d=d: _drop_type(hitchin_check(real, triple, dec, d, cfg.mode,
                                                   cfg.primes(), cfg.seed)),
              needs=needs)


def _drop_type(out: dict) -> dict:
    out.pop("type", None)
    return out


def _hitchin_checks(r: _Runner, pair: str, n: int, tag: str) -> None:
    cfg = r.config
    inputs = {"pair": pair, "n": n}
    needs = (f"{tag}/fixed_subalgebra",)
    anchor = "primitive forms on the principal decomposition"
    if cfg.degrees is not None and not cfg.degrees:
        r.skip(f"{tag}/hitchin", anchor, inputs, "empty degree list")
    elif r.status.get(needs[0]) != "PASS":
        r.skip(f"{tag}/hitchin", anchor, inputs, f"requires {needs[0]}")
    else:
        emb = folded_embedding(pair, n)
        _hitchin_for(r, tag, "k", emb.realization, inputs, needs)
        _hitchin_for(r, tag, "g", emb.ambient, inputs, needs)


def _transgression_checks(r: _Runner, pair: str, n: int, tag: str) -> None:
    cfg = r.config
    r.run(f"{tag}/transgression_commutes", "transgression commutes with restriction",
          {"pair": pair, "n": n, "k": 2, "samples": cfg.samples},
          lambda: _drop_pair(verify_transgression_commutes(pair, n, 2, cfg.samples, cfg.seed)),
          needs=(f"{tag}/fixed_subalgebra",))


def _chevrestrict_checks(r: _Runner, pair: str, n: int, tag: str) -> None:
    r.run(f"{tag}/chevalley_restriction", "restricted generators have full Jacobian rank",
          {"pair": pair, "n": n},
          lambda: _drop_pair(chevalley_restriction_check(pair, n, r.config.seed)),
          needs=(f"{tag}/fixed_subalgebra",))


STAGES = {
    "chevalley": _chevalley_checks,
    "tds": _tds_checks,
    "branching": _branching_checks,
    "hitchin": _hitchin_checks,
    "transgression": _transgression_checks,
    "chevrestrict": _chevrestrict_checks,
}
ALL_STAGES = tuple(STAGES)


def run_stages(config: RunConfig, stages=ALL_STAGES) -> VerificationReport:
    """Folding checks, then the requested stages in pipeline order."""
    config.validate()
    unknown = set(stages) - set(STAGES)
    if unknown:
        raise ConfigError(f"unknown stages {sorted(unknown)}")
    r = _Runner(config)
    for pair in config.pairs:
        n = config.n_for(pair)
        tag = _fold_checks(r, pair, n)
        for name in ALL_STAGES:
            if name in stages:
                STAGES[name](r, pair, n, tag)
    return r.report


def run_all(config: RunConfig) -> VerificationReport:
    return run_stages(config, ALL_STAGES)


def hitchin_report(type_name: str, config: RunConfig) -> VerificationReport:
    """Hitchin checks for a single simple type, without any folding."""
    config.validate()
    try:
        datum = parse_type(type_name)
    except (RootSystemError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    r = _Runner(config)
    inputs = {"type": datum.name}
    dim = 2 * len(datum.positive_roots) + datum.rank
    if dim > config.cap_dim:
        raise ConfigError(f"dim {dim} exceeds cap-dim {config.cap_dim}")
    if config.degrees is not None:
        bad = [d for d in config.degrees if d not in _expected_dims(datum)]
        if bad:
            raise ConfigError(f"{datum.name} has no exponent giving dimension "
                              f"{', '.join(map(str, bad))}")

    def real_check():
        out = verify_realization(realize(datum, config.cap_dim))
        return {"verdict": out["verdict"], "dim": out["dim"], "problems": out["problems"]}

    r.run(f"{datum.name}/realization", "Chevalley basis with exact integer structure "
          "constants", inputs, real_check)
    if r.status[f"{datum.name}/realization"] == "PASS":
        _hitchin_for(r, datum.name, "g", realize(datum, config.cap_dim), inputs,
                     (f"{datum.name}/realization",))
    return r.report
