import csv
import io
import json
import math

import pytest

from rmstat import cli
from rmstat.cli import ExperimentConfig, main, run


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_mean_sine_example(capsys):
    assert main(["mean", "--ensemble", "sine", "--f", "gaussian", "--alpha", "10"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert list(rows[0]) == ["alpha", "tr_operator", "closed_form", "deviation", "literal_mean"]
    assert abs(float(rows[0]["tr_operator"]) - 5.6419) < 1e-4
    assert abs(float(rows[0]["literal_mean"]) - 0.5 * float(rows[0]["tr_operator"])) < 1e-12


def test_mean_bessel_rows_sorted_and_deviation_shrinks(capsys):
    assert main(["mean", "--f", "gaussian", "--nu", "0.5", "--alpha", "40,10,20"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert [float(r["alpha"]) for r in rows] == [10.0, 20.0, 40.0]
    dev = [abs(float(r["deviation"])) for r in rows]
    assert all(b <= max(a, 1e-9) for a, b in zip(dev, dev[1:]))
    for r in rows:
        assert float(r["deviation"]) == pytest.approx(float(r["tr_operator"]) - float(r["closed_form"]), abs=1e-15)


@pytest.mark.parametrize("command", ["mean", "variance"])
def test_zero_function_gives_zeros(command):
    rep = run(ExperimentConfig(command=command, f_id="zero", alpha_list=[10.0], nu=0.0))
    assert all(v == 0 for row in rep.rows for v in row[1:])
    assert not rep.failed()


def test_variance_routes(capsys):
    assert main(["variance", "--f", "gaussian", "--nu", "0", "--alpha", "20", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    row = doc["rows"][0]
    assert abs(row["cosine_route"] - row["mellin_route"]) < 1e-5
    assert abs(row["operator_variance"] - 1 / (4 * math.pi)) < 0.01


def test_cf_zero_k_rows():
    rep = run(ExperimentConfig(command="cf", alpha_list=[10.0], k_list=[0.0, 0.1], nu=-0.5))
    zero = rep.rows[0]
    assert zero[1] == 0 and zero[2] == 1 and zero[3] == 1
    assert abs(rep.rows[1][4]) < 0.02
    assert not rep.failed()


def test_kernel_convergence_command(capsys):
    assert main(["kernel-convergence", "--ensemble", "bessel", "--nu", "1", "--N", "25,50"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert float(rows[1]["sup_distance"]) < float(rows[0]["sup_distance"])


def test_json_and_csv_carry_the_same_values(tmp_path):
    for fmt in ("csv", "json"):
        assert main(["kernel-convergence", "--ensemble", "sine", "--N", "25", "--format", fmt, "--out", str(tmp_path / fmt)]) == 0
    c = _csv((tmp_path / "csv").read_text())[0]
    j = json.loads((tmp_path / "json").read_text())["rows"][0]
    assert float(c["sup_distance"]) == j["sup_distance"]


def test_deterministic_output(tmp_path):
    args = ["montecarlo", "--ensemble", "bessel", "--N", "10", "--mc-replicates", "300", "--seed", "4", "--k", "0.2"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    assert (tmp_path / "a").read_text() == (tmp_path / "b").read_text()
    rows = _csv((tmp_path / "a").read_text())
    assert [r["statistic"] for r in rows] == ["mean", "variance", "cf"]


def test_complex_serialization():
    assert cli.fmt_csv(1 + 2j) == "1+2j"
    assert cli.to_json(1 - 2j) == {"re": 1.0, "im": -2.0}
    assert cli.fmt_csv(0.1) == "%.17g" % 0.1
    assert float(cli.fmt_csv(1 / 3)) == 1 / 3


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"ensemble": "sine", "N_list": [25, 50], "out_format": "json"}))
    assert main(["kernel-convergence", "--config", str(cfgfile), "--N", "25"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["N"] for r in doc["rows"]] == [25]


def test_unknown_config_key_is_an_error(tmp_path, capsys):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"alpha": [1]}))
    assert main(["mean", "--config", str(cfgfile)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "DomainError"


def test_errors_exit_nonzero_with_json(capsys):
    assert main(["mean", "--f", "nope"]) == 1
    assert "error" in json.loads(capsys.readouterr().err)
    assert main(["trace-powers", "--ensemble", "sine"]) == 1
    capsys.readouterr()


def test_failed_self_check_exits_nonzero(capsys):
    # a 12-node Bessel grid cannot resolve the determinant to 1e-6
    assert main(["cf", "--f", "gaussian", "--alpha", "40", "--quad-n", "12"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "SelfConvergenceError"
    assert err["error"]["failed_checks"]


def test_manifest(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["kernel-convergence", "--N", "25", "--out", str(out), "--manifest"]) == 0
    man = json.loads((tmp_path / "r.csv.manifest.json").read_text())
    assert man["command"] == "kernel-convergence" and man["N_list"] == [25]
    assert man["quad_n"] == 200


def test_nu_warning_for_sine():
    with pytest.warns(UserWarning, match="ignored"):
        run(ExperimentConfig(command="mean", ensemble="sine", nu=1.0, alpha_list=[5.0]))


def test_empty_list_rejected():
    with pytest.raises(Exception):
        run(ExperimentConfig(command="cf", k_list=[]))
