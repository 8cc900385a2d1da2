import io
import json
from pathlib import Path

import pytest

from liefold import report
from liefold.chevalley import LieRealization
from liefold.cli import main
from liefold.report import ConfigError, RunConfig, render_text, run_all, run_stages

DATA = Path(__file__).parent / "data"


def run_cli(args, env=None):
    out = io.StringIO()
    code = main(args, environ=env or {}, out=out)
    return code, out.getvalue()


def test_golden_report_is_reproduced():
    text = run_all(RunConfig(pairs=("D4_G2",), seed=42)).dumps()
    assert text == (DATA / "report_D4_G2_seed42.json").read_text()


def test_report_shape():
    doc = run_stages(RunConfig(pairs=("A2n1_C",), n=1), ("chevalley", "branching")).to_json()
    assert doc["schema"] == 1
    assert set(doc["summary"]) == {"PASS", "FAIL", "SKIPPED"}
    for c in doc["checks"]:
        assert set(c) == {"name", "anchor", "inputs", "verdict", "witness"}
    case = next(c for c in doc["checks"] if c["name"].endswith("branching_case"))
    assert case["verdict"] == "PASS"
    holds = {x["identity"]: x["holds"] for x in case["witness"]["checks"]}
    assert holds["phi(V2) - phi(V0) = W2"]


def test_empty_degree_list_skips_hitchin_only():
    rep = run_all(RunConfig(pairs=("A2n1_C",), n=1, degrees=()))
    status = {r.name: r.verdict for r in rep.records}
    assert status["(A3,C2)/hitchin"] == "SKIPPED"
    assert status["(A3,C2)/transgression_commutes"] == "PASS"
    assert rep.exit_code == 0


def test_failure_propagates_as_skipped(monkeypatch):
    doc = json.loads((DATA / "realization_D4.json").read_text())
    doc["structure"][5][2][0][1] += 1
    bad = LieRealization.from_json(json.dumps(doc))
    monkeypatch.setattr(report, "realize", lambda datum, cap=100: bad)
    rep = run_all(RunConfig(pairs=("D4_G2",), seed=42))
    status = {r.name: r.verdict for r in rep.records}
    assert status["(D4,G2)/realization_g"] == "FAIL"
    assert status["(D4,G2)/fixed_subalgebra"] == "SKIPPED"
    assert status["(D4,G2)/principal_tds_orbit"] == "SKIPPED"
    assert status["(D4,G2)/transgression_commutes"] == "SKIPPED"
    # folding and character-level branching do not depend on the realization
    assert status["(D4,G2)/branching_case"] == "PASS"
    assert rep.exit_code == 1


def test_cap_dim_skips():
    rep = run_all(RunConfig(pairs=("E6_F4",), cap_dim=60, degrees=(3,)))
    status = {r.name: r.verdict for r in rep.records}
    assert status["(E6,F4)/realization_g"] == "SKIPPED"
    assert status["(E6,F4)/hitchin"] == "SKIPPED"
    assert rep.exit_code == 0


@pytest.mark.parametrize("kwargs", [dict(pairs=("nope",)), dict(mode="fast"), dict(seed=-1),
                                    dict(prime=15), dict(prime=2 ** 31 + 1), dict(degrees=(4,)),
                                    dict(cap_dim=0), dict(pairs=("A2n_B",), n=1)])
def test_config_errors_before_computation(kwargs):
    with pytest.raises(ConfigError):
        run_all(RunConfig(**kwargs))


def test_explicit_prime_is_used():
    p = 2147483659
    cfg = RunConfig(prime=p)
    cfg.validate()
    assert cfg.primes()[0] == p and len(set(cfg.primes())) == 3


def test_text_is_rendered_from_json(tmp_path):
    out = tmp_path / "r.json"
    code, text = run_cli(["lemma11", "--pair", "D4_G2", "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1 and doc["command"] == "lemma11"
    assert text == render_text(doc)


def test_cli_json_stdout_deterministic():
    a = run_cli(["tds", "--pair", "A2n1_C", "--n", "1", "--seed", "7", "--json", "-"])
    b = run_cli(["tds", "--pair", "A2n1_C", "--n", "1", "--seed", "7", "--json", "-"])
    assert a == b and a[0] == 0
    assert json.loads(a[1])["config"]["seed"] == 7


def test_env_overrides_and_flag_precedence():
    env = {"LIEFOLD_PAIR": "D4_G2", "LIEFOLD_SEED": "9"}
    code, text = run_cli(["lemma11", "--json", "-"], env)
    doc = json.loads(text)
    assert code == 0 and doc["config"]["pairs"] == ["D4_G2"] and doc["config"]["seed"] == 9
    code, text = run_cli(["lemma11", "--seed", "3", "--json", "-"], env)
    assert json.loads(text)["config"]["seed"] == 3


def test_env_bad_value_is_config_error():
    assert run_cli(["lemma11"], {"LIEFOLD_SEED": "x"})[0] == 2
    assert run_cli(["lemma11"], {"LIEFOLD_CAP_DIM": "-4"})[0] == 2


@pytest.mark.parametrize("args", [["bogus"], ["all", "--pair", "XX"], ["all", "--mode", "z"],
                                  ["hitchin", "--type", "G2", "--degrees", "5"],
                                  ["hitchin", "--type", "Q7"],
                                  ["branch", "--pair", "D4_G2", "--lambda", "1,0"],
                                  ["branch", "--lambda", "1,0,0,0"],
                                  ["lemma11", "--prime", "17"]])
def test_exit_code_2(args):
    assert run_cli(args)[0] == 2


def test_flags_before_subcommand():
    code, text = run_cli(["--pair", "D4_G2", "lemma11", "--json", "-"])
    assert code == 0 and json.loads(text)["config"]["pairs"] == ["D4_G2"]


def test_fold_json():
    code, text = run_cli(["fold", "--pair", "E6_F4", "--json", "-"])
    doc = json.loads(text)
    assert code == 0 and doc["schema"] == 1
    f = doc["foldings"][0]
    assert f["orbits"] == [[2], [4], [3, 5], [1, 6]]
    assert f["dominant_image"]["lattice_index"] == 1


def test_branch_lambda():
    code, text = run_cli(["branch", "--pair", "D4_G2", "--lambda", "0,1,0,0", "--json", "-"])
    doc = json.loads(text)
    assert code == 0 and doc["dimension"] == 28
    assert sorted(map(tuple, (t[0] for t in doc["decomposition"]))) == [(0, 1), (1, 0)]


def test_hitchin_type_g2():
    code, text = run_cli(["hitchin", "--type", "G2", "--degrees", "3,11", "--json", "-"])
    doc = json.loads(text)
    assert code == 0
    names = [c["name"] for c in doc["checks"]]
    assert names == ["G2/realization", "G2/hitchin_g_d3", "G2/hitchin_g_d11"]
    assert all(c["verdict"] == "PASS" for c in doc["checks"])


def test_fail_gives_exit_1(monkeypatch):
    import liefold.cli as cli
    real = report.verify_case

    def broken(pair, n=0):
        out = real(pair, n)
        out["verdict"] = "FAIL"
        return out

    monkeypatch.setattr(report, "verify_case", broken)
    assert cli.main(["branch", "--pair", "D4_G2"], environ={}, out=io.StringIO()) == 1


def test_timing_flag_adds_seconds():
    doc = json.loads(run_cli(["lemma11", "--pair", "D4_G2", "--timing", "--json", "-"])[1])
    assert all("seconds" in c for c in doc["checks"])
    doc = json.loads(run_cli(["lemma11", "--pair", "D4_G2", "--json", "-"])[1])
    assert all("seconds" not in c for c in doc["checks"])
