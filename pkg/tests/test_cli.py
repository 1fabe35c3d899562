import dataclasses
import json
import subprocess
import sys
from pathlib import Path

import pytest

from altlab import cli
from altlab.kripke import KripkeModel, dump_model
from altlab.zoo import ZOO, zoo

DATA = Path(__file__).resolve().parent.parent / "data"
FAST = ["deriv-muddy", "deriv-prop6B", "noncollapse", "collapse-nr", "cb-separation"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


class TestCommands:
    def test_classify(self, capsys):
        code, doc, _ = run(capsys, "classify", "[a][b][a] p")
        assert code == 0 and doc["alternating"] and not doc["nonrepeating"]
        code, doc, _ = run(capsys, "classify", "[a] p & [c] q", "--agents", "a,b,c")
        assert doc["universe"] == ["a", "b", "c"] and doc["nonrepeating"]

    def test_check(self, capsys):
        code, doc, _ = run(capsys, "check", "zoo:prop6-M", "w1", "<a>[b][a]p -> p")
        assert code == 1 and doc["holds"] is False
        code, doc, _ = run(capsys, "check", "zoo:prop6-M", "w1", "<a>[b][a]p")
        assert code == 0 and doc["holds"] is True

    def test_check_model_file(self, capsys, tmp_path):
        pm = zoo("chiD4-M")
        path = tmp_path / "m.json"
        path.write_text(dump_model(pm.model, pm.point))
        code, doc, _ = run(capsys, "check", str(path), "w1", "C p")
        assert code == 1 and not doc["holds"]

    def test_frame(self, capsys):
        code, doc, _ = run(capsys, "frame", "zoo:prop6-M")
        assert code == 0 and "S4" in doc["classes"] and "S5" not in doc["classes"]
        assert doc["properties"]["b"]["symmetric"]

    def test_bisim(self, capsys):
        code, doc, _ = run(capsys, "bisim", "alternating", "zoo:appB-S4-M", "zoo:appB-S4-N")
        assert code == 0 and doc["related"] and doc["points"] == ["l1", "l1'"]
        code, doc, _ = run(capsys, "bisim", "plain", "zoo:appB-S4-M", "zoo:appB-S4-N", "--depth", "2")
        assert code == 1 and not doc["related"]

    def test_unravel(self, capsys):
        code, doc, _ = run(capsys, "unravel", "zoo:prop6-M", "w1", "--depth", "2", "--complete", "k45")
        assert code == 0 and doc["point"] == "alt:w1" and "alt:w1/a:w2" in doc["worlds"]
        assert doc["traces"]["alt:w1"] == [["alt", "w1"]]

    def test_nrpartition(self, capsys):
        code, doc, _ = run(capsys, "nrpartition", "zoo:prop6-M", "w1")
        assert code == 0 and len(doc["worlds"]) > 1
        assert all(len(t) <= 3 for t in doc["traces"].values())

    def test_prove(self, capsys):
        code, doc, _ = run(capsys, "prove", "scripts/muddy-children.drv")
        assert code == 0 and doc["accepted"] and doc["final"] == "[1] m1"
        code, doc, _ = run(capsys, "prove", "--list")
        assert "prop6-B" in doc["scripts"]

    def test_prove_rejects(self, capsys, tmp_path):
        path = tmp_path / "bad.drv"
        path.write_text("logic: K\nagents: a b\n1. p -> p ; axiom K\n")
        code, doc, _ = run(capsys, "prove", str(path))
        assert code == 1 and not doc["accepted"] and "schema K" in doc["reason"]

    def test_countermodel(self, capsys):
        code, doc, _ = run(capsys, "countermodel", "(<a>(p | ~p) & [a]p) -> p", "--class", "KD",
                           "--max", "2", "--exhaustive")
        assert code == 1 and doc["found"]
        code, doc, _ = run(capsys, "countermodel", "[a]p -> p", "--class", "T", "--max", "2", "--exhaustive")
        assert code == 0 and not doc["found"]

    def test_countermodel_random_reports_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("ALTLAB_SEED", "77")
        code, doc, _ = run(capsys, "countermodel", "[a]p -> [a][a]p", "--class", "K", "--max", "3")
        assert doc["seed"] == 77 and code == 1

    def test_game(self, capsys):
        code, doc, _ = run(capsys, "game", "iesds", str(DATA / "mixture.json"))
        assert code == 0 and doc["survivors"]["1"] == ["Top", "Bottom"]
        code, doc, _ = run(capsys, "game", "verify", str(DATA / "prisoners-dilemma.json"), "w", "--depth", "4")
        assert code == 0 and doc["status"] == "pass"
        code, doc, _ = run(capsys, "game", "verify", str(DATA / "prisoners-dilemma.json"), "v", "--depth", "4")
        assert code == 0 and doc["status"] == "vacuous"

    def test_zoo(self, capsys):
        code, doc, _ = run(capsys, "zoo")
        assert code == 0 and set(doc["models"]) == set(ZOO)
        code, doc, _ = run(capsys, "zoo", "chi5-M")
        assert code == 0 and doc["point"] == zoo("chi5-M").point


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ["check", "zoo:missing", "w1", "p"],
        ["check", "zoo:prop6-M", "w1", "[a](p"],
        ["check", "zoo:prop6-M", "nowhere", "p"],
        ["check", "no/such/file.json", "w1", "p"],
        ["frobnicate"],
        [],
        ["prove", "no-such-script"],
        ["nrpartition", "zoo:chi5-M", "w0"],
        ["bisim", "weird", "zoo:prop6-M", "zoo:prop6-M"],
        ["game", "verify", str(DATA / "invalid-model.json"), "w", "--depth", "3"],
        ["game", "verify", str(DATA / "mixture.json"), "w", "--depth", "3"],
        ["verify-paper", "--only", "nope"],
        ["countermodel", "[a]p -> p", "--class", "K", "--max", "9", "--exhaustive"],
    ])
    def test_usage_errors_exit_2(self, capsys, argv):
        assert cli.main(argv) == 2
        out = capsys.readouterr().out
        if out.strip():
            assert "error" in json.loads(out)

    def test_invalid_model_names_clause(self, capsys):
        cli.main(["game", "verify", str(DATA / "invalid-model.json"), "w", "--depth", "3"])
        assert "support" in json.loads(capsys.readouterr().out)["error"]

    def test_bad_seed_env(self, capsys, monkeypatch):
        monkeypatch.setenv("ALTLAB_SEED", "abc")
        assert cli.main(["zoo"]) == 2


class TestVerifyPaper:
    def test_list(self, capsys):
        code, doc, _ = run(capsys, "verify-paper", "--list")
        assert code == 0 and "appB-K45" in doc["claims"] and len(doc["claims"]) == 13

    def test_subset_passes(self, capsys):
        argv = ["verify-paper", "--no-timing"] + [x for c in FAST for x in ("--only", c)]
        code, doc, _ = run(capsys, *argv)
        assert code == 0 and doc["seed"] == 1729
        assert [c["claim"] for c in doc["claims"]] == sorted(FAST)
        assert all(c["status"] == "pass" and c["elapsed_ms"] is None for c in doc["claims"])

    def test_byte_identical(self, capsys):
        argv = ["verify-paper", "--no-timing", "--only", "collapse-alt", "--only", "bisim-invariance"]
        _, _, first = run(capsys, *argv)
        _, _, second = run(capsys, *argv)
        assert first == second

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("ALTLAB_SEED", "5")
        _, doc, _ = run(capsys, "verify-paper", "--only", "deriv-muddy")
        assert doc["seed"] == 5 and doc["claims"][0]["seed"] == 5
        assert isinstance(doc["claims"][0]["elapsed_ms"], (int, float))

    def test_known_failure_exits_1(self, capsys):
        code, doc, _ = run(capsys, "verify-paper", "--no-timing", "--only", "appB-pairs", "--only", "deriv-muddy")
        assert code == 1
        assert {c["claim"]: c["status"] for c in doc["claims"]} == {"appB-pairs": "fail", "deriv-muddy": "pass"}

    def test_fault_injection(self, capsys, monkeypatch):
        """Removing the a-edge w1->w2 of prop6-M breaks exactly the claims built on its refutation."""
        def broken():
            worlds = ["w1", "w2"]
            loops = [(w, w) for w in worlds]
            return KripkeModel(worlds, "ab", {"a": loops, "b": loops}, {"p": ["w2"]}), "w1"

        monkeypatch.setitem(ZOO, "prop6-M", dataclasses.replace(ZOO["prop6-M"], build=broken))
        argv = ["verify-paper", "--no-timing"] + [x for c in FAST for x in ("--only", c)]
        code, doc, _ = run(capsys, *argv)
        status = {c["claim"]: c["status"] for c in doc["claims"]}
        assert code == 1
        assert status.pop("noncollapse") == "fail"
        assert set(status.values()) == {"pass"}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "altlab.cli", "classify", "[a][a]p"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["alternating"] is False
