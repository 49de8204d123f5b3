import json
import subprocess
import sys

import pytest

from mvmodal.cli import run
from mvmodal.datasets import data_path


def D(name):
    return str(data_path(name))


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--json")
    return code, json.loads(out)


class TestEval:
    def test_box_model(self, capsys):
        code, out, _ = call(capsys, "eval", "--model", D("model_box_l3.json"), "--formula", "<box>(p)")
        assert code == 0
        assert "w: 1/2" in out.splitlines()

    def test_json(self, capsys):
        code, obj = call_json(capsys, "eval", "--model", D("model_box_l3.json"), "--formula", "<box>(p)")
        assert obj["values"]["w"] == "1/2"

    def test_formula_file_with_comments(self, capsys, tmp_path):
        f = tmp_path / "f.txt"
        f.write_text("# a comment\n<box>(p) -> p   # trailing\n")
        code, out, _ = call(capsys, "eval", "--model", D("model_box_l3.json"), "--formula-file", str(f))
        assert code == 0 and "w: 1" in out

    def test_strict_prob_out_of_domain(self, capsys, tmp_path):
        m = tmp_path / "m.json"
        m.write_text(json.dumps({
            "algebra": {"kind": "lukasiewicz", "n": 3}, "functor": "distribution",
            "states": ["a", "b"], "sigma": {"a": {"a": "1/2", "b": "1/2"}, "b": {"b": "1"}},
            "valuation": {"p": {"a": "1/2", "b": "0"}}}))
        assert call(capsys, "eval", "--model", str(m), "--formula", "<prob>(p)")[0] == 2
        code, obj = call_json(capsys, "eval", "--model", str(m), "--formula", "<prob>(p)", "--prob-mode", "floor")
        assert code == 0 and obj["floored_sums"] == ["1/4"]


class TestExitCodes:
    def test_usage_errors(self, capsys):
        assert call(capsys, "no-such-command")[0] == 2
        assert call(capsys, "eval", "--model", D("model_box_l3.json"))[0] == 2

    def test_missing_file(self, capsys):
        code, _, err = call(capsys, "eval", "--model", "/nonexistent.json", "--formula", "p")
        assert code == 2 and "cannot read" in err

    def test_parse_error(self, capsys):
        assert call(capsys, "eval", "--model", D("model_box_l3.json"), "--formula", "p & & q")[0] == 2

    def test_cap(self, capsys):
        code, _, err = call(capsys, "validity", "--functor", "powerset", "--algebra", "L3",
                            "--formula", "<box>(p) -> <box>(p)", "--max-states", "4",
                            "--max-evaluations", "1000")
        assert code == 3 and "cap" in err

    def test_help(self, capsys):
        assert call(capsys, "--help")[0] == 0


class TestAlgebraCheck:
    def test_bundled(self, capsys):
        assert call(capsys, "algebra-check", D("l3.json"))[0] == 0
        code, out, _ = call(capsys, "algebra-check", D("l3_broken_impl.json"))
        assert code == 1 and "residuation" in out

    def test_json_witness(self, capsys):
        code, obj = call_json(capsys, "algebra-check", D("l3_broken_impl.json"))
        bad = [c for c in obj["laws"] if not c["passed"]]
        assert [(c["law"], c["witness"]) for c in bad] == [("residuation", [1, 2, 0])]


class TestTaut:
    def test_valid_and_not(self, capsys):
        assert call(capsys, "taut", "--algebra", D("l3.json"), "--formula", "p * p -> p")[0] == 0
        code, out, _ = call(capsys, "taut", "--algebra", "L3", "--formula", "p -> p * p")
        assert code == 1 and "p=1/2" in out

    def test_hypotheses(self, capsys):
        assert call(capsys, "taut", "--algebra", "L3", "--formula", "q", "--hyp", "p", "--hyp", "p -> q")[0] == 0

    def test_flavor(self, capsys):
        assert call(capsys, "taut", "--algebra", "L3", "--formula", "D p -> p")[0] == 2
        assert call(capsys, "taut", "--algebra", "L3", "--flavor", "delta", "--formula", "D p -> p")[0] == 0


class TestFilter:
    @pytest.mark.parametrize("name,kind", [
        ("model_box_l3.json", "powerset"), ("model_kripke_l2.json", "powerset"),
        ("model_fuzzy_l3.json", "fuzzy"), ("model_distribution_l3.json", "distribution"),
        ("model_neighborhood_l2.json", "neighborhood"), ("model_selection_l2.json", "selection")])
    def test_verify_bundled_models(self, capsys, name, kind):
        code, out, _ = call(capsys, "filter", "--model", D(name), "--formulas", D(f"formulas_{kind}.txt"),
                            "--verify", "--prob-mode", "floor")
        assert code == 0
        assert "filtration lemma: PASS" in out

    def test_output_and_sidecar(self, capsys, tmp_path):
        out = tmp_path / "quotient.json"
        code, _, _ = call(capsys, "filter", "--model", D("model_kripke_l2.json"), "--formula", "p",
                          "--output", str(out))
        assert code == 0
        assert json.loads((tmp_path / "quotient.map.json").read_text()) == {"u": "q0", "v": "q0", "w": "q1"}
        q = json.loads(out.read_text())
        assert q["states"] == ["q0", "q1"]
        # the quotient is itself a model
        assert call(capsys, "eval", "--model", str(out), "--formula", "p")[0] == 0


class TestFmpBound:
    def test_box(self, capsys):
        code, obj = call_json(capsys, "fmp-bound", "--algebra", D("l3.json"), "--formula", "<box>(p) -> p")
        assert code == 0 and obj["bound"] == 243 and obj["closure_size"] == 5

    def test_delta(self, capsys):
        code, obj = call_json(capsys, "fmp-bound", "--algebra", "L3", "--flavor", "delta", "--formula", "p")
        assert obj["bound"] == 81


class TestValidity:
    ARGS = ("validity", "--functor", "powerset", "--algebra", "L2", "--formula", "p -> <box>(p)",
            "--max-states", "2")

    def test_countermodel_round_trip(self, capsys, tmp_path):
        code, obj = call_json(capsys, *self.ARGS)
        assert code == 1 and obj["outcome"] == "countermodel"
        verdict = tmp_path / "verdict.json"
        verdict.write_text(json.dumps(obj))
        code, ev = call_json(capsys, "eval", "--model", str(verdict), "--formula", "p -> <box>(p)")
        assert code == 0
        assert ev["values"][obj["witness"]["state"]] == obj["witness"]["value"]

    def test_byte_identical(self, capsys):
        _, a, _ = call(capsys, *self.ARGS, "--json")
        _, b, _ = call(capsys, *self.ARGS, "--json", "--seed", "99")
        assert a == b

    def test_valid_up_to_bound(self, capsys):
        code, out, _ = call(capsys, "validity", "--functor", "powerset", "--algebra", "L2",
                            "--formula", "<box>(p & q) <-> <box>(p) & <box>(q)", "--max-states", "2")
        assert code == 0 and out.startswith("valid-up-to-bound")
        assert "not reached" in out

    def test_sat1(self, capsys):
        code, _, _ = call(capsys, "validity", "--functor", "fuzzy", "--algebra", "L3",
                          "--formula", "p & !p", "--mode", "sat-1", "--max-states", "1")
        assert code == 1


class TestOnestep:
    def test_congruence_shorthand(self, capsys):
        code, out, _ = call(capsys, "onestep-sound", "--rule", "C_fbox", "--functor", "fuzzy",
                            "--algebra", "L3", "--max-states", "2")
        assert code == 0 and "sound-up-to-bound" in out

    def test_rule_files(self, capsys):
        assert call(capsys, "onestep-sound", "--rule", D("rule_c_box.json"), "--functor", "powerset",
                    "--algebra", "L3")[0] == 0
        code, obj = call_json(capsys, "onestep-sound", "--rule", D("rule_box_unconditional.json"),
                              "--functor", "powerset", "--algebra", D("l2.json"))
        assert code == 1 and obj["witness"]["delta"] == ["s0"]
        assert obj["witness"]["marking"] == {"s0": {"p": "0"}}


class TestProofCheck:
    def test_ok(self, capsys):
        code, out, _ = call(capsys, "proof-check", "--system", D("system_box.json"),
                            "--proof", D("proof_box.json"), "--algebra", "L3")
        assert code == 0 and "5 nodes" in out

    def test_mutation(self, capsys, tmp_path):
        case = next(c for c in json.loads(data_path("proof_box_mutations.json").read_text())
                    if c["name"] == "bad_leaf")
        f = tmp_path / "p.json"
        f.write_text(json.dumps(case["proof"]))
        code, obj = call_json(capsys, "proof-check", "--system", D("system_box.json"),
                              "--proof", str(f), "--algebra", "L3")
        assert code == 1 and obj["error"]["path"] == [0, 0, 0] and obj["error"]["kind"] == "oracle"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mvmodal", "eval", "--model", D("model_box_l3.json"),
                           "--formula", "<box>(p)"], capture_output=True, text=True)
    assert proc.returncode == 0 and "w: 1/2" in proc.stdout
