"""Command-line front end.

Every global flag can also come from the environment: ``--cap-dim`` reads
``LIEFOLD_CAP_DIM`` and so on.  An explicit flag beats the environment.
Exit status is 0 when nothing failed, 1 when a check failed and 2 for a bad
configuration.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import BACKEND, __version__
from .branching import BranchingError, branch
from .folding import PAIRS, dominant_image, fold_table, make_folding
from .report import ConfigError, RunConfig, dumps, hitchin_report, render_text, run_stages
from .rootsys import CapExceeded, RootSystemError

ENV_PREFIX = "LIEFOLD_"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

COMMAND_STAGES = {
    "lemma11": (),
    "branch": ("chevalley", "branching"),
    "tds": ("chevalley", "tds"),
    "hitchin": ("chevalley", "hitchin"),
    "transgression": ("chevalley", "transgression"),
    "chevrestrict": ("chevalley", "chevrestrict"),
}

GLOBAL_FLAGS = {
    # dest: (flag, env suffix)
    "pair": ("--pair", "PAIR"),
    "n": ("--n", "N"),
    "seed": ("--seed", "SEED"),
    "mode": ("--mode", "MODE"),
    "prime": ("--prime", "PRIME"),
    "json": ("--json", "JSON"),
    "cap_dim": ("--cap-dim", "CAP_DIM"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("global options")
    g.add_argument("--pair", help=f"one of {', '.join(PAIRS)}, identity, or 'all'")
    g.add_argument("--n", type=int, help="family rank parameter")
    g.add_argument("--seed", type=int, help="seed for all random choices")
    g.add_argument("--mode", choices=("exact", "modular"), help="arithmetic for form evaluation")
    g.add_argument("--prime", help="'auto' or an explicit prime between 2**31 and 2**32")
    g.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    g.add_argument("--cap-dim", type=int, metavar="N", help="largest Lie algebra to realize")
    g.add_argument("--degrees", type=_int_list, help="comma separated form degrees")
    g.add_argument("--samples", type=int, help="random tuples per commutativity check")
    g.add_argument("--timing", action="store_true", help="record wall time per check")

    p = _Parser(prog="liefold", description="Check statements about folded Lie algebras.",
                parents=[common])
    p.add_argument("--version", action="version",
                   version=f"liefold {__version__} ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)
    sub.add_parser("fold", parents=[common], help="print folding data")
    sub.add_parser("lemma11", parents=[common], help="weight restriction tables")
    b = sub.add_parser("branch", parents=[common], help="branching identities or one weight")
    b.add_argument("--lambda", dest="lam", type=_int_list,
                   help="branch this source weight, e.g. 0,1,0,0")
    sub.add_parser("tds", parents=[common], help="folded principal sl2 checks")
    h = sub.add_parser("hitchin", parents=[common], help="nonvanishing of primitive forms")
    h.add_argument("--type", dest="type_name", help="a single simple type such as G2")
    sub.add_parser("transgression", parents=[common], help="transgression vs restriction")
    sub.add_parser("chevrestrict", parents=[common], help="Chevalley restriction rank")
    sub.add_parser("all", parents=[common], help="the full pipeline")
    return p


def _merge_env(args: argparse.Namespace, environ) -> None:
    for dest, (flag, suffix) in GLOBAL_FLAGS.items():
        if getattr(args, dest, None) is None:
            value = environ.get(ENV_PREFIX + suffix)
            if value is not None:
                setattr(args, dest, value)
    if getattr(args, "degrees", None) is None and ENV_PREFIX + "DEGREES" in environ:
        args.degrees = _int_list(environ[ENV_PREFIX + "DEGREES"])


def _to_int(name: str, value, default=None):
    if value is None:
        return default
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {value!r}")


def config_from_args(args: argparse.Namespace, pairs=None) -> RunConfig:
    if pairs is None:
        pair = args.pair or "all"
        pairs = PAIRS if pair == "all" else tuple(p.strip() for p in pair.split(","))
    prime = args.prime
    if prime in (None, "auto"):
        prime = None
    else:
        prime = _to_int("--prime", prime)
    mode = args.mode or "modular"
    if mode not in ("exact", "modular"):
        raise ConfigError(f"mode must be exact or modular, not {mode!r}")
    cfg = RunConfig(pairs=pairs, n=_to_int("--n", args.n), degrees=args.degrees, mode=mode,
                    prime=prime, seed=_to_int("--seed", args.seed, 0),
                    cap_dim=_to_int("--cap-dim", args.cap_dim, 100),
                    samples=_to_int("--samples", args.samples, 10), timing=args.timing)
    cfg.validate()
    return cfg


def _emit(doc: dict, text: str, args, out) -> None:
    target = args.json
    if target == "-":
        out.write(dumps(doc))
        return
    out.write(text)
    if target:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))


def _fold(cfg: RunConfig, args, out) -> int:
    specs = [make_folding(p, cfg.n_for(p)) for p in cfg.pairs]
    doc = {"schema": 1, "command": "fold",
           "foldings": [dict(s.to_dict(), dominant_image=_jsonable(dominant_image(s)))
                        for s in specs]}
    _emit(doc, "\n".join(fold_table(s) for s in specs) + "\n", args, out)
    return EXIT_OK


def _jsonable(d: dict) -> dict:
    return {k: [list(x) for x in v] if k == "generators" else v for k, v in d.items()}


def _branch_weight(cfg: RunConfig, args, out) -> int:
    if len(cfg.pairs) != 1:
        raise ConfigError("--lambda needs a single --pair")
    spec = make_folding(cfg.pairs[0], cfg.n_for(cfg.pairs[0]))
    if len(args.lam) != spec.source.rank:
        raise ConfigError(f"--lambda needs {spec.source.rank} entries for {spec.source.name}")
    if any(x < 0 for x in args.lam):
        raise ConfigError("--lambda must be dominant")
    try:
        res = branch(spec, args.lam)
        doc = dict(res.to_json(), verdict="PASS")
    except BranchingError as exc:
        doc = {"pair": spec.label, "lambda": list(args.lam), "error": str(exc),
               "verdict": "FAIL"}
    doc = dict(doc, schema=1, command="branch")
    if doc["verdict"] == "PASS":
        parts = " + ".join(f"{c}*W{list(mu)}" if c != 1 else f"W{list(mu)}"
                           for mu, c in sorted(res.decomposition.terms.items()))
        text = f"{spec.label}: V{list(args.lam)} -> {parts}  (dim {res.dimension})\n"
    else:
        text = f"FAIL {doc['error']}\n"
    _emit(doc, text, args, out)
    return EXIT_OK if doc["verdict"] == "PASS" else EXIT_FAIL


def main(argv=None, environ=None, out=None) -> int:
    environ = os.environ if environ is None else environ
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    for dest in ("pair", "n", "seed", "mode", "prime", "json", "cap_dim", "degrees", "samples",
                 "lam", "type_name"):
        if not hasattr(args, dest):
            setattr(args, dest, None)
    args.timing = getattr(args, "timing", False)
    _merge_env(args, environ)
    try:
        if args.command == "hitchin" and args.type_name:
            cfg = config_from_args(args, pairs=())
            report = hitchin_report(args.type_name, cfg)
        else:
            cfg = config_from_args(args)
            if args.command == "fold":
                return _fold(cfg, args, out)
            if args.command == "branch" and args.lam is not None:
                return _branch_weight(cfg, args, out)
            stages = COMMAND_STAGES.get(args.command)
            report = run_stages(cfg) if stages is None else run_stages(cfg, stages)
    except (ConfigError, RootSystemError, CapExceeded) as exc:
        print(f"liefold: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"liefold: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    doc = report.to_json()
    doc["command"] = args.command
    _emit(doc, render_text(doc), args, out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
