from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

from frachelm.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_THRESHOLD,
    EXIT_VALIDATION,
    ConfigError,
    RunConfig,
    basis_table,
    cmd_basis,
    cmd_converge,
    cmd_kernel,
    cmd_mlf,
    cmd_solve,
    cmd_verify,
    kernel_table,
    load_config,
    main,
    mlf_table,
)
from frachelm.frac_kernels import KernelParams, kernel_C, kernel_S
from frachelm.mittag_leffler import MLParams, ml_eval
from frachelm.solver import CompatibilityWarning

CLASSICAL = """
[problem]
kind = "D"
alpha = 1.0
eps = 0.0
c = 0.0
phi = "sin(y)"
psi = "0"
n_modes = 4

[verify]
ladder = [16, 32, 64]
residual_nx = 33
residual_ny = 33
"""

FRACTIONAL = """
[problem]
kind = "D"
alpha = 0.5
eps = 0.3
c = 0.5
phi = "sin(y)"
psi = "0"
n_modes = 4

[verify]
ladder = [16, 32, 64]
residual_nx = 33
residual_ny = 33
probes = 8

[run]
seed = 11
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def read_csv(path_or_text):
    text = path_or_text.read_text() if hasattr(path_or_text, "read_text") else path_or_text
    lines = [ln for ln in text.splitlines(keepends=True) if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def streams():
    return io.StringIO(), io.StringIO()


class TestSolve:
    def test_sinh_field(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL)
        out = tmp_path / "o"
        assert cmd_solve(cfg, out=out, stdout=io.StringIO()) == EXIT_OK
        rows = read_csv(out / "field.csv")
        assert list(rows[0]) == ["x", "y", "u"]
        best = min(rows, key=lambda r: abs(float(r["x"]) - 0.5) + abs(float(r["y"]) - math.pi / 2))
        assert float(best["x"]) == 0.5
        assert float(best["u"]) == pytest.approx(math.sinh(0.5) / math.sinh(1.0), abs=1e-12)
        report = json.loads((out / "report.json").read_text())
        assert report["command"] == "solve"

    def test_eps_out_of_range(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL.replace("eps = 0.0", "eps = 1.0"))
        out, err = streams()
        assert cmd_solve(cfg, out=tmp_path / "o", stdout=out, stderr=err) == EXIT_VALIDATION
        assert "|eps| < 1" in err.getvalue()

    def test_incompatible(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL.replace('"sin(y)"', '"cos(y)"'))
        out, err = streams()
        assert cmd_solve(cfg, out=tmp_path / "o", stdout=out, stderr=err) == EXIT_VALIDATION
        assert "|phi(pi)|: 1.000e+00 FAIL" in err.getvalue()

    def test_incompatible_lenient(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL.replace('"sin(y)"', '"cos(y)"'))
        out, err = streams()
        with pytest.warns(CompatibilityWarning):
            code = cmd_solve(cfg, out=tmp_path / "o", strict_compat=False, stdout=out, stderr=err)
        assert code == EXIT_OK

    def test_csv_boundary_relative(self, tmp_path):
        y = np.linspace(-math.pi, math.pi, 257)
        (tmp_path / "phi.csv").write_text("y,value\n" + "".join(f"{float(a)!r},{float(math.sin(a))!r}\n" for a in y))
        cfg = write(tmp_path, CLASSICAL.replace('phi = "sin(y)"', 'phi = "csv:phi.csv"'))
        assert cmd_solve(cfg, out=tmp_path / "o", stdout=io.StringIO()) == EXIT_OK


class TestConfig:
    @pytest.mark.parametrize(
        "text",
        [
            CLASSICAL + "\n[extra]\na = 1\n",
            CLASSICAL.replace("n_modes = 4", "n_modes = 4\nbogus = 2"),
            CLASSICAL.replace('kind = "D"\n', ""),
            CLASSICAL.replace("n_modes = 4", 'n_modes = "four"'),
            CLASSICAL.replace("n_modes = 4", "n_modes = 2.5"),
        ],
    )
    def test_rejected(self, tmp_path, text):
        cfg = write(tmp_path, text)
        with pytest.raises(ConfigError):
            load_config(cfg)
        out, err = streams()
        assert cmd_solve(cfg, out=tmp_path / "o", stdout=out, stderr=err) == EXIT_VALIDATION
        assert not (tmp_path / "o").exists()

    def test_missing_file(self, tmp_path):
        out, err = streams()
        assert cmd_solve(tmp_path / "nope.toml", stdout=out, stderr=err) == EXIT_VALIDATION

    def test_bad_expression(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL.replace('"sin(y)"', '"sin(y"'))
        out, err = streams()
        assert cmd_solve(cfg, out=tmp_path / "o", stdout=out, stderr=err) == EXIT_VALIDATION

    def test_defaults_and_overrides(self, tmp_path):
        cfg = load_config(write(tmp_path, CLASSICAL))
        assert cfg.get("grid", "nx") == 33 and cfg.threads == 1
        o = cfg.with_overrides(threads=4, out=tmp_path / "x")
        assert o.threads == 4 and o.out_dir() == tmp_path / "x"
        assert o.echo() == cfg.echo()

    def test_json_echo_round_trip(self, tmp_path):
        cfg = write(tmp_path, FRACTIONAL)
        assert cmd_verify(cfg, out=tmp_path / "a", stdout=io.StringIO()) == EXIT_OK
        echo = json.loads((tmp_path / "a" / "verify.json").read_text())["config"]
        again = write(tmp_path, json.dumps(echo), name="echo.json")
        assert cmd_verify(again, out=tmp_path / "b", stdout=io.StringIO()) == EXIT_OK
        for name in ("field.csv", "ladder.csv", "verify.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_out_in_config(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL + '\n[run]\nout = "results"\n')
        assert load_config(cfg).out_dir() == Path.cwd() / "results"
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, CLASSICAL + "\n[run]\nout = 3\n", name="bad.toml"))

    def test_from_mapping(self):
        cfg = RunConfig.from_mapping({"problem": {"kind": "N", "alpha": 0.5, "phi": "1", "psi": "cos(y)"}})
        spec = cfg.problem_spec(n_modes=3)
        assert spec.n_modes == 3 and spec.kind.value == "N"


class TestVerify:
    def test_classical(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL)
        out = io.StringIO()
        assert cmd_verify(cfg, out=tmp_path / "o", stdout=out) == EXIT_OK
        doc = json.loads((tmp_path / "o" / "verify.json").read_text())
        assert doc["passed"]
        assert max(doc["boundary"]["x0_error"], doc["boundary"]["x1_error"]) <= 1e-10
        assert "PASS max_boundary_error" in out.getvalue()

    def test_corrupted(self, tmp_path):
        cfg = write(tmp_path, CLASSICAL)
        out, err = streams()
        assert cmd_verify(cfg, out=tmp_path / "o", stdout=out, stderr=err, corrupt=True) == EXIT_THRESHOLD
        assert "max_boundary_error" in err.getvalue()
        assert "FAIL max_boundary_error" in out.getvalue()

    def test_fractional_ladder(self, tmp_path):
        cfg = write(tmp_path, FRACTIONAL)
        assert cmd_verify(cfg, out=tmp_path / "o", stdout=io.StringIO()) == EXIT_OK
        doc = json.loads((tmp_path / "o" / "verify.json").read_text())
        res = [r["max_residual"] for r in doc["ladder"]]
        assert doc["ladder_monotone"] and all(b <= a for a, b in zip(res, res[1:]))
        rows = read_csv(tmp_path / "o" / "ladder.csv")
        assert list(rows[0]) == ["level", "h", "max_residual", "observed_order"]
        assert rows[0]["observed_order"] == ""

    def test_residual_threshold(self, tmp_path):
        cfg = write(tmp_path, FRACTIONAL.replace("probes = 8", "probes = 8\nmax_residual = 1e-12"))
        out, err = streams()
        assert cmd_verify(cfg, out=tmp_path / "o", stdout=out, stderr=err) == EXIT_THRESHOLD
        assert "max_residual" in err.getvalue()

    def test_thread_determinism(self, tmp_path):
        cfg = write(tmp_path, FRACTIONAL.replace('phi = "sin(y)"', 'phi = "y*(pi^2 - y^2)"').replace("n_modes = 4", "n_modes = 12").replace("probes = 8", "probes = 8\nmax_boundary_error = 0.1"))
        assert cmd_verify(cfg, out=tmp_path / "t1", threads=1, stdout=io.StringIO()) == EXIT_OK
        assert cmd_verify(cfg, out=tmp_path / "t4", threads=4, stdout=io.StringIO()) == EXIT_OK
        for name in ("field.csv", "ladder.csv", "verify.json"):
            assert (tmp_path / "t1" / name).read_bytes() == (tmp_path / "t4" / name).read_bytes()


class TestConverge:
    def test_decreasing(self, tmp_path):
        text = CLASSICAL.replace('"sin(y)"', '"y*(pi^2 - y^2)"') + "\n[converge]\nlevels = [4, 8, 16]\n"
        cfg = write(tmp_path, text)
        assert cmd_converge(cfg, out=tmp_path / "o", stdout=io.StringIO()) == EXIT_OK
        rows = read_csv(tmp_path / "o" / "converge.csv")
        errs = [float(r["x0_error"]) for r in rows]
        assert [int(r["n_modes"]) for r in rows] == [4, 8, 16]
        assert errs[0] > errs[1] > errs[2]


class TestTables:
    def test_mlf_exponential(self):
        out = io.StringIO()
        assert cmd_mlf(1, 1, "0,1", stdout=out) == EXIT_OK
        rows = read_csv(out.getvalue())
        assert float(rows[0]["value"]) == 1.0
        assert float(rows[1]["value"]) == pytest.approx(2.718281828459045, rel=1e-15)

    def test_mlf_bitwise(self):
        zs = [-30.0, -2.5, 0.0, 0.7, 12.0]
        rows = read_csv(mlf_table(0.6, 1.3, ",".join(repr(z) for z in zs)))
        for z, row in zip(zs, rows):
            r = ml_eval(MLParams(0.6, 1.3), z, 1e-14)
            assert float(row["value"]) == r.value
            assert row["regime"] == r.regime.value

    def test_basis(self):
        out = io.StringIO()
        assert cmd_basis("D", 0.5, 2, stdout=out) == EXIT_OK
        rows = read_csv(out.getvalue())
        lam = {float(r["eigenvalue"]) for r in rows}
        assert 1.5 in lam and 0.125 in lam
        assert list(rows[0]) == ["mode", "parity", "k", "n", "family", "wavenumber", "eigenvalue", "norm_const"]

    def test_basis_bad_kind(self):
        out, err = streams()
        assert cmd_basis("Q", 0.5, 2, stdout=out, stderr=err) == EXIT_VALIDATION

    def test_kernel_sinh(self):
        rows = read_csv(kernel_table(1, 2, "0,0.5,1"))
        C = [float(r["C"]) for r in rows]
        assert C[0] == pytest.approx(1.0, abs=1e-13) and C[2] == pytest.approx(0.0, abs=1e-15)
        assert C[1] == pytest.approx(math.sinh(1.0) / math.sinh(2.0), rel=1e-14)
        assert C[1] == pytest.approx(0.3240271, abs=5e-8)

    def test_kernel_bitwise(self):
        t = np.linspace(0.0, 1.0, 11)
        rows = read_csv(kernel_table(0.5, 3.0, ",".join(repr(float(v)) for v in t)))
        p = KernelParams(0.5, 3.0)
        assert [float(r["C"]) for r in rows] == list(np.asarray(kernel_C(p, t), dtype=float))
        assert [float(r["S"]) for r in rows] == list(np.asarray(kernel_S(p, t), dtype=float))

    def test_kernel_invalid(self):
        out, err = streams()
        assert cmd_kernel(1.5, 2, "0.5", stdout=out, stderr=err) == EXIT_VALIDATION
        assert cmd_kernel(0.5, 2, "a,b", stdout=out, stderr=err) == EXIT_VALIDATION

    def test_numerical_failure(self):
        out, err = streams()
        assert cmd_mlf(0.5, 1, "800", stdout=out, stderr=err) == EXIT_NUMERICAL
        assert "numerical failure" in err.getvalue()

    def test_out_dir(self, tmp_path):
        assert cmd_basis("AP", 0.2, 3, out=tmp_path) == EXIT_OK
        assert (tmp_path / "basis.csv").read_text() == basis_table("AP", 0.2, 3)


class TestMain:
    def test_tables(self, capsys):
        assert main(["mlf", "1", "1", "0,1"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("z,value,est_abs_error,regime\n")
        assert main(["kernel", "1", "2", "0,0.5,1"]) == EXIT_OK
        assert main(["basis", "P", "0", "1"]) == EXIT_OK

    def test_config_commands(self, tmp_path, capsys):
        cfg = str(write(tmp_path, CLASSICAL))
        assert main(["solve", "--config", cfg, "--out", str(tmp_path / "s")]) == EXIT_OK
        assert main(["verify", "--config", cfg, "--out", str(tmp_path / "v"), "--threads", "2"]) == EXIT_OK
        assert main(["verify", "--config", cfg, "--out", str(tmp_path / "c"), "--corrupt"]) == EXIT_THRESHOLD
        bad = str(write(tmp_path, CLASSICAL.replace('"sin(y)"', '"cos(y)"'), name="bad.toml"))
        with pytest.warns(CompatibilityWarning):
            assert main(["solve", "--config", bad, "--no-strict-compat", "--out", str(tmp_path / "b")]) == EXIT_OK
        assert main(["solve", "--config", bad, "--out", str(tmp_path / "b2")]) == EXIT_VALIDATION

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["nonsense"])
        assert exc.value.code == 2
