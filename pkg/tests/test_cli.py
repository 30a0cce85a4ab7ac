"""Job-file parsing, command dispatch, exit codes, deterministic reports."""

import io
import json

import pytest

from corings.cli import EXIT_CAP, EXIT_INPUT, EXIT_MATH, EXIT_OK, JobSpecError, parse_job, run

F2 = {"modulus": 2, "kind": "quotient", "poly": [0, 1]}
F4 = {"modulus": 2, "kind": "quotient", "poly": [1, 1, 1]}
F2X2 = {"modulus": 2, "kind": "quotient", "poly": [0, 1, 1]}

F4_EXT = {
    "base": "F2",
    "top": "F4",
    "eta": [[1, 0]],
    "basis": [[1, 0], [0, 1]],
}
F2X2_EXT = {
    "base": "F2",
    "top": F2X2,
    "eta": [[1, 0]],
    "basis": [[1, 0], [0, 1]],
}


def job(command, extension=F4_EXT, **rings):
    return {
        "rings": {"F2": F2, "F4": F4, **rings},
        "extension": extension,
        "command": command,
    }


def run_cli(tmp_path, doc, *args):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc))
    buf = io.BytesIO()
    code = run([str(path), *args], stdout=buf)
    return code, buf.getvalue()


def test_parse_minimal_h2_job():
    spec = parse_job(json.dumps(job({"name": "h2"})))
    assert spec.command == "h2"
    assert spec.extension.degree == 2


def test_parse_reports_wrong_twist_length():
    with pytest.raises(JobSpecError) as err:
        parse_job(json.dumps(job({"name": "cocycle-check", "twist": [1, 0, 0]})))
    assert "expected 8" in str(err.value)
    assert "command.twist" in str(err.value)


def test_parse_unknown_command_lists_valid_ones():
    with pytest.raises(JobSpecError) as err:
        parse_job(json.dumps(job({"name": "frobnicate"})))
    assert "h2" in str(err.value) and "classify" in str(err.value)


def test_parse_unresolved_reference():
    doc = job({"name": "h2"})
    doc["extension"] = dict(doc["extension"], top="NOPE")
    with pytest.raises(JobSpecError) as err:
        parse_job(json.dumps(doc))
    assert "unresolved" in str(err.value)


def test_parse_syntax_error_has_location():
    with pytest.raises(JobSpecError) as err:
        parse_job("{\n  broken\n}")
    assert "line 2" in str(err.value)


def test_h2_report(tmp_path):
    code, out = run_cli(tmp_path, job({"name": "h2"}), "--format", "json")
    assert code == EXIT_OK
    rep = json.loads(out)
    res = rep["result"]
    assert (res["z2_order"], res["b2_order"], res["h2_order"]) == (3, 3, 1)
    assert rep["version"] and rep["input_digest"]


def test_units_report(tmp_path):
    code, out = run_cli(tmp_path, job({"name": "units", "level": 2}), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["result"]["count"] == 9


def test_cocycle_check_passes_and_fails(tmp_path):
    ok = {"name": "cocycle-check", "twist": [1, 0, 0, 0, 0, 0, 0, 0]}
    code, out = run_cli(tmp_path, job(ok), "--format", "json")
    assert code == EXIT_OK
    bad = {"name": "cocycle-check", "twist": [0, 1, 0, 0, 0, 0, 0, 0]}  # a⊗1⊗1
    code, out = run_cli(tmp_path, job(bad), "--format", "json")
    assert code == EXIT_MATH
    assert json.loads(out)["result"]["is_cocycle"] is False


def test_normalize_command(tmp_path):
    doc = job({"name": "normalize", "twist": [0, 0, 1, 0, 0, 0, 0, 0]})  # 1⊗a⊗1
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK
    res = json.loads(out)["result"]
    assert res["normalized"] == [1, 0, 0, 0, 0, 0, 0, 0]
    assert res["norm_after"] == [1, 0]


def test_normalize_non_cocycle_is_math_error(tmp_path):
    doc = job({"name": "normalize", "twist": [0, 1, 0, 0, 0, 0, 0, 0]})
    code, _ = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_MATH


def test_twist_report(tmp_path):
    doc = job({"name": "twist", "twist": [0, 0, 1, 0, 0, 0, 0, 0]})
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK
    res = json.loads(out)["result"]
    assert res["azumaya"] and res["cosickle_condition"] == "u1*u3 == u2*u4"


def test_classify_census_columns(tmp_path):
    doc = job({"name": "classify"}, extension=F2X2_EXT)
    code, out = run_cli(tmp_path, doc)
    assert code == EXIT_OK
    text = out.decode()
    assert "element | unit? | cocycle? | cosickle? | almost-inv?" in text
    code, out = run_cli(tmp_path, doc, "--format", "json")
    res = json.loads(out)["result"]
    assert res["counts"]["elements"] == 256
    assert res["counts"]["unit_cocycles"] == 1


def test_gamma_verify(tmp_path):
    doc = job({"name": "gamma-verify", "twist": [1, 0, 0, 0, 0, 0, 0, 0]})
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["result"]["ok"] is True


def test_dual_algebra_table(tmp_path):
    doc = job({"name": "dual-algebra", "twist": [1, 0, 0, 0, 0, 0, 0, 0], "side": "right"})
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK
    res = json.loads(out)["result"]
    assert res["dimension"] == 4 and len(res["table"]) == 16


def test_azumaya_check_and_control(tmp_path):
    doc = job({"name": "azumaya-check", "twist": [1, 0, 0, 0, 0, 0, 0, 0]})
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK and json.loads(out)["result"]["azumaya"] is True
    doc = job({"name": "azumaya-check", "algebra": "top"})
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_MATH and json.loads(out)["result"]["azumaya"] is False


def test_compare_command(tmp_path):
    doc = job(
        {
            "name": "compare",
            "twist": [0, 0, 1, 0, 0, 0, 0, 0],
            "other": {
                "extension": F2X2_EXT,
                "twist": [1, 0, 0, 0, 0, 0, 0, 0],
            },
        }
    )
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK
    res = json.loads(out)["result"]
    assert res["equivalent"] is True and res["witness"] != []


def test_compare_empty_witness_is_empty_array(tmp_path):
    """The witness field is always present (an empty array when absent)."""
    doc = job(
        {
            "name": "compare",
            "twist": [1, 0, 0, 0, 0, 0, 0, 0],
            "other": {"extension": F4_EXT, "twist": [1, 0, 0, 0, 0, 0, 0, 0]},
        }
    )
    code, out = run_cli(tmp_path, doc, "--format", "json")
    assert code == EXIT_OK
    assert "witness" in json.loads(out)["result"]


def test_cap_exit_code(tmp_path):
    code, _ = run_cli(tmp_path, job({"name": "h2"}), "--cap", "2")
    assert code == EXIT_CAP


def test_input_error_exit_code(tmp_path):
    doc = job({"name": "cocycle-check", "twist": [1, 0]})
    code, _ = run_cli(tmp_path, doc)
    assert code == EXIT_INPUT


def test_reports_are_deterministic(tmp_path):
    doc = job({"name": "h2"})
    outputs = set()
    for fmt in ("text", "json"):
        a = run_cli(tmp_path, doc, "--format", fmt)
        b = run_cli(tmp_path, doc, "--format", fmt)
        j4 = run_cli(tmp_path, doc, "--format", fmt, "--jobs", "4")
        assert a == b == j4
        outputs.add(a[1])
    assert len(outputs) == 2


def test_console_entry_point(tmp_path):
    """The installed `corings` script runs a job end to end."""
    import shutil
    import subprocess

    exe = shutil.which("corings")
    if exe is None:
        pytest.skip("package not installed with console scripts")
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job({"name": "h2"})))
    proc = subprocess.run([exe, str(path), "--format", "json"], capture_output=True)
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["result"]["h2_order"] == 1
