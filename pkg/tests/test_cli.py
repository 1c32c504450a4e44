import io
import subprocess
import sys

from ultrafinite.cli import run
from ultrafinite.corpus import data_path


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


EROSION = "(erosion 1/1024)"


def test_radius_example():
    assert cli("fis", "radius", "--spec", "(linear 5)", "--sig", "unary", "--bound", "20") == (0, "4\n", "")


def test_radius_horizon_limited_is_inconclusive():
    code, out, _ = cli("fis", "radius", "--spec", "(table ((0 1)) 1/2)", "--bound", "6")
    assert code == 2 and out == "5\n"


def test_cred_example():
    code, out, _ = cli("proof", "cred", "--ttp", EROSION, "--theory", "parikh10.thy", "--proof", "chain_2.prf")
    assert (code, out) == (0, "1022/1024\n")
    code, out, _ = cli("proof", "cred", "--ttp", EROSION, "--theory", data_path("parikh10.thy"),
                       "--proof", data_path("chain_2.prf"), "--denom", "0")
    assert out == "511/512\n"


def test_consistency_example():
    code, out, _ = cli("theory", "consistency", "--theory", "parikh10.thy", "--ttp", EROSION, "--depth", "12")
    assert (code, out) == (0, "consistent-within-budget\n")


def test_refutation_exits_1():
    code, out, _ = cli("theory", "consistency", "--theory", "(axiom a A) (axiom na (not A))")
    assert code == 1 and out.startswith("refuted\n")


def test_consequence_records():
    code, out, _ = cli("theory", "consequence", "--theory", "parikh10.thy", "--goal", "(F (num 2))",
                       "--ttp", EROSION, "--depth", "3", "--format", "records")
    assert code == 0
    assert out.startswith("record=consequence status=feasible credibility=1022/1024 ")
    code, _, _ = cli("theory", "consequence", "--theory", "parikh10.thy", "--goal", "(F (num 9))",
                     "--ttp", EROSION, "--depth", "3")
    assert code == 2


def test_well_behaved():
    code, out, _ = cli("theory", "well-behaved", "--theory", "(axiom a A)", "--goal", "A")
    assert code == 0 and "agreement: true" in out
    code, out, _ = cli("theory", "well-behaved", "--theory", "parikh10.thy", "--goal", "(F (num 1024))",
                       "--ttp", EROSION, "--depth", "3")
    assert code == 2 and "agreement: inconclusive" in out


def test_unbalanced_input_is_exit_3_with_position():
    code, out, err = cli("theory", "consistency", "--theory", "(axiom a A")
    assert code == 3 and out == ""
    assert err.startswith("error: <inline>:1:1:")


def test_unbounded_schema_is_exit_3(tmp_path):
    p = tmp_path / "t.thy"
    p.write_text("(schema step (=> (F ?n) (F (S ?n))))\n")
    code, _, err = cli("theory", "consistency", "--theory", str(p))
    assert code == 3 and "infinite axiom schemas forbidden" in err


def test_unknown_flag_is_exit_3(capsys):
    assert cli("fis", "radius", "--spec", "(linear 5)", "--wibble")[0] == 3


def test_missing_file_is_exit_3():
    code, _, err = cli("fis", "check", "--spec", "no/such/file.fis")
    assert code == 3 and "no/such/file.fis" in err


def test_fis_commands():
    code, out, _ = cli("fis", "check", "--spec", "(linear 5)", "--horizon", "10", "--format", "records")
    assert code == 0 and "is_fis=true is_strict=true is_regular=true" in out
    assert cli("fis", "check", "--spec", "(table ((0 1) (1 0)) 0)", "--horizon", "2")[0] == 1
    code, out, _ = cli("fis", "eval", "--spec", "(log-rescale (linear 5))", "--at", "8", "--format", "records")
    assert "degree=1/5" in out
    code, out, _ = cli("fis", "dominates", "--spec", "(linear 5)", "--over", "(log-rescale (linear 5))",
                       "--horizon", "30", "--format", "records")
    assert code == 0 and "weak=true strict_paper=false" in out
    code, out, _ = cli("fis", "defuzzify", "--spec", "(linear 5)", "--cut", "strong", "--format", "records")
    assert "size=2" in out and "elements='0 inf'" in out


def test_rescale_and_small_closure():
    code, out, _ = cli("fis", "rescale", "--spec", "(linear 1024)", "--horizon", "1024", "--format", "records")
    assert code == 0 and "closed=true" in out and "dominates_weak=true" in out
    spec = "(table ((0 1) (1 1) (2 1) (3 3/4) (4 1/2)) 0)"
    code, out, _ = cli("fis", "small", "--spec", spec, "--horizon", "64", "--jobs", "2", "--format", "records")
    assert code == 0 and "closed=true" in out


def test_ttp_validate():
    assert cli("ttp", "validate", "--ttp", "(erosion 1/4)", "--grid", "8", "--no-analytic")[0] == 0
    code, out, _ = cli("ttp", "validate", "--ttp", "(per-rule (mp (constant 1/2)))", "--grid", "2",
                       "--format", "records")
    assert code == 1 and "rule=mp" in out and "point='(0 0)'" in out


def test_proof_check_and_normalize():
    th = "(axiom a A) (axiom b B)"
    code, out, _ = cli("proof", "check", "--theory", th, "--proof", "(mp (axiom a) (axiom b))")
    assert code == 1 and "valid: false" in out
    code, out, _ = cli("proof", "normalize", "--theory", th, "--format", "records",
                       "--proof", "(and-elim-l (and-intro (axiom a) (axiom b)))")
    assert code == 0 and "proof='(axiom a)'" in out and "sizes='4 1'" in out


def test_model_commands():
    code, out, _ = cli("model", "check", "--structure", "fo_crisp.str", "--theory", "fo.thy")
    assert code == 0
    code, out, _ = cli("model", "eval", "--structure", "prop_fuzzy.str", "--formula", "E", "(not E)",
                       "--format", "records")
    assert out.count("degree=1/2") == 2
    code, out, _ = cli("model", "audit", "--structure", "prop_adversarial.str", "--theory", "prop.thy",
                       "--goal", "(and A B)", "--depth", "3")
    assert code == 1 and "violations: " in out
    code, out, _ = cli("model", "audit", "--structure", "prop_crisp.str", "--theory", "prop.thy",
                       "--depth", "3")
    assert code == 0


def test_termmodel_output_is_a_model(tmp_path):
    code, out, _ = cli("model", "termmodel", "--theory", "fo.thy", "--depth", "4")
    assert code == 0
    p = tmp_path / "tm.str"
    p.write_text(out)
    assert cli("model", "check", "--structure", str(p), "--theory", "fo.thy")[0] == 0


def test_termmodel_rejects_factored_measure():
    code, _, err = cli("model", "termmodel", "--theory", "parikh10.thy", "--factored", "(linear 100)")
    assert code == 3 and "--ttp" in err


def test_output_is_deterministic():
    argv = ("theory", "consequence", "--theory", "prop.thy", "--goal", "(and A B)", "--format", "records")
    assert cli(*argv) == cli(*argv)


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "ultrafinite", "fis", "radius", "--spec", "(linear 17)"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "16\n"
