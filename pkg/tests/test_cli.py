import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qtcorr import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_onepoint_exact(capsys):
    code, out, _ = run(["onepoint", "--q", "1/2", "--t", "1/3", "--order", "12"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["command"] == "onepoint"
    assert doc["config"] == {"q": "1/2", "t": "1/3", "order": 12}
    first = doc["results"][0]
    assert first["status"] == "pass" and first["deviation"] == "0/1"
    assert set(first) == {"name", "status", "deviation", "details"}


def test_onepoint_large_t(capsys):
    code, out, _ = run(["onepoint", "--q", "1/2", "--t", "2"], capsys)
    assert code == 0


def test_onepoint_domain_error(capsys):
    code, _, err = run(["onepoint", "--q", "1", "--t", "1/3"], capsys)
    assert code == 2
    assert "differ from 1" in err


def test_onepoint_rejects_decimal(capsys):
    code, _, err = run(["onepoint", "--q", "0.5", "--t", "1/3"], capsys)
    assert code == 2 and "exact rational" in err


def test_twopoint_exact(capsys):
    code, out, _ = run(["twopoint", "--params", "1/2,1/4,4,2", "--order", "10"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["config"]["mode"] == "exact"


def test_twopoint_numeric(capsys):
    code, out, _ = run(["twopoint", "--params", "0.3,0.2,0.25,0.15", "--v", "0.1"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["mode"] == "numeric"
    assert "tail_bound" in doc["results"][0]["details"]


def test_twopoint_rejects_slow_convergence(capsys):
    code, _, err = run(["twopoint", "--params", "1/2,1/3,1/2,1/3", "--v", "0.9999"], capsys)
    assert code == 2 and "certified" in err


def test_twopoint_needs_v_off_the_special_locus(capsys):
    code, _, _ = run(["twopoint", "--params", "1/2,1/3,1/2,1/3"], capsys)
    assert code == 2


def test_vertex_one(capsys):
    code, out, _ = run(["vertex", "--params", "1/2,1,1/3,1", "--kappa", "1", "--order", "8"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [r["status"] for r in doc["results"][:2]] == ["pass", "pass"]


def test_vertex_kappa_zero(capsys):
    code, out, _ = run(["vertex", "--params", "1/2,1,1/3,1", "--kappa", "0", "--order", "6"], capsys)
    doc = json.loads(out)
    assert code == 0
    closed = doc["results"][2]["details"]["series"]["coefficients"]
    assert closed == ["1/1"] + ["0/1"] * 6


def test_vertex_two(capsys):
    code, out, _ = run(["vertex", "--n", "2", "--params", "1/2,-1/3,2/5,3/4", "--params2", "2/3,1/5,-1/2,1/3",
                        "--order", "4", "--zeta-order", "3"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["results"][0]["status"] == "pass"
    assert doc["results"][1]["details"]["zeta_series"]["zeta_order"] == 3


def test_series_command_formats(capsys):
    code, out, _ = run(["series", "inv(1 - v)", "--order", "3", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "name,status,deviation,power,coefficient"
    assert [line.split(",")[-1] for line in lines[1:]] == ["1/1"] * 4
    code, out, _ = run(["series", "pochinf(1/2, 1) * 2", "--order", "2", "--format", "plain"], capsys)
    assert code == 0 and out.startswith("value: 2 + (-1)*v")


def test_series_evaluator_is_sandboxed():
    with pytest.raises(cli.UsageError):
        cli.evaluate_series("__import__('os').system('true')")
    with pytest.raises(cli.UsageError):
        cli.evaluate_series("v.coeffs")
    with pytest.raises(cli.UsageError):
        cli.evaluate_series("1/0")


def test_series_evaluator_arithmetic():
    s = cli.evaluate_series("exp(log(1 + v)) - v", 6)
    assert s == 1
    assert cli.evaluate_series("(1 - v)**-2", 4).coeffs == tuple(Fraction(k + 1) for k in range(5))
    assert cli.evaluate_series("poch(2, 3)", 3) == cli.evaluate_series("(1-2)*(1-2*v)*(1-2*v**2)", 3)


def test_rational_parsing():
    assert cli.parse_rational("-2/3") == Fraction(-2, 3)
    assert cli.parse_number("0.25") == 0.25
    assert isinstance(cli.parse_number("3"), Fraction)
    with pytest.raises(cli.UsageError):
        cli.parse_rational("1/0")
    with pytest.raises(cli.UsageError):
        cli.parse_list("1,2", 4)


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["onepoint", "--q", "1/2", "--t", "1/3", "--order", "-1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_verify_is_deterministic(capsys):
    code1, out1, _ = run(["verify", "twopoint", "--seed", "7"], capsys)
    code2, out2, _ = run(["verify", "twopoint", "--seed", "7"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_hypergeom_table(capsys):
    code, out, _ = run(["verify", "hypergeom", "--tol", "1e-8", "--format", "plain"], capsys)
    assert code == 0
    assert "q_binomial_residual" in out and "hall_hyper_residual" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    from qtcorr import verify
    monkeypatch.setitem(verify.SUITE_FUNCTIONS, "qseries",
                        lambda rng, tol: [verify.Check("broken", "fail", "1/1")])
    code, _, _ = run(["verify", "qseries"], capsys)
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qtcorr", "series", "v + v", "--order", "2"],
                          capture_output=True, text=True, check=True)
    doc = json.loads(proc.stdout)
    assert doc["results"][0]["details"]["series"]["coefficients"] == ["0/1", "2/1", "0/1"]


def test_threads_env_var(monkeypatch):
    from qtcorr import verify
    monkeypatch.setenv("QTCORR_THREADS", "3")
    assert verify.worker_count() == 3
    monkeypatch.setenv("QTCORR_THREADS", "zero")
    with pytest.raises(ValueError):
        verify.worker_count()
