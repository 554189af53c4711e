"""Command-line front end.

Subcommands::

    frachelm solve    --config run.toml [--out DIR] [--threads N] [--[no-]strict-compat]
    frachelm verify   --config run.toml [--out DIR] [--threads N] [--[no-]strict-compat]
    frachelm converge --config run.toml [--out DIR] [--threads N] [--[no-]strict-compat]
    frachelm mlf      ALPHA BETA ZLIST    [--rel-tol R] [--out DIR]
    frachelm basis    KIND EPS N          [--out DIR]
    frachelm kernel   ALPHA MU TLIST      [--out DIR]

Configs are TOML (``.toml``) or JSON (``.json``) with the sections
``problem``, ``quadrature``, ``grid``, ``verify``, ``converge`` and ``run``;
unknown sections or keys are rejected before any computation. The
``config`` echo in every JSON report is itself a valid JSON config.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a verify
threshold was missed.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boundary_data import InsufficientData
from .expressions import ParseError
from .frac_kernels import DegenerateSystem, DomainError, KernelParams, kernel_C, kernel_S
from .mittag_leffler import InvalidParams, MittagLefflerError, MLParams, ml_eval
from .quadrature import QuadSpec
from .solver import (
    CompatibilityFailure,
    ProblemSpec,
    UnknownMode,
    assemble,
    evaluate,
    evaluate_grid,
    evaluate_on,
)
from .spectral_basis import EpsOutOfRange, eigenpair, enumerate_modes, interleaved_index
from .verify import GridTooCoarse, boundary_report, pde_residual, residual_ladder

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = [
    "ConfigError",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_THRESHOLD",
    "EXIT_VALIDATION",
    "RunConfig",
    "ThresholdFailure",
    "cmd_basis",
    "cmd_converge",
    "cmd_kernel",
    "cmd_mlf",
    "cmd_solve",
    "cmd_verify",
    "load_config",
    "main",
]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_THRESHOLD = 4

# relative perturbation applied to psi coefficients by the hidden --corrupt flag
CORRUPTION = 1e-3


class ConfigError(ValueError):
    """Malformed or unknown configuration entry."""


class ThresholdFailure(RuntimeError):
    """A configured verify threshold was not met."""


def _fmt(v):
    return format(float(v), ".17g")


def _fmt_opt(v):
    return "" if v is None else _fmt(v)


# -- configuration -------------------------------------------------------------------

_SECTIONS = {
    "problem": {
        "kind": "D",
        "alpha": 1.0,
        "eps": 0.0,
        "c": 0.0,
        "phi": "0",
        "psi": "0",
        "n_modes": 32,
        "compat_tol": 1e-10,
        "strict_compat": True,
    },
    "quadrature": {"panels": None, "order": 32},
    "grid": {"nx": 33, "ny": 65},
    "verify": {
        "residual_nx": 129,
        "residual_ny": 129,
        "boundary_ny": 257,
        "ladder": [32, 64, 128, 256],
        "probes": 16,
        "max_boundary_error": 1e-8,
        "max_residual": None,
        "max_probe_mismatch": 1e-12,
        "require_monotone_ladder": True,
    },
    "converge": {"levels": [4, 8, 16, 32, 64], "boundary_ny": 257},
    "run": {"threads": 1, "seed": 0, "out": "out"},
}

_REQUIRED = {("problem", "kind"), ("problem", "alpha"), ("problem", "phi"), ("problem", "psi")}

# run keys that do not influence results and are left out of the echo
_NOT_ECHOED = {("run", "threads"), ("run", "out")}


def _check_type(section, key, value, default):
    where = f"{section}.{key}"
    if key in ("kind", "phi", "psi", "out"):
        if not isinstance(value, str):
            raise ConfigError(f"{where} must be a string")
        return value
    if key in ("strict_compat", "require_monotone_ladder"):
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be true or false")
        return value
    if key in ("ladder", "levels"):
        if not isinstance(value, list) or not value or not all(_is_int(v) and v > 0 for v in value):
            raise ConfigError(f"{where} must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ConfigError(f"{where} must be strictly increasing")
        return [int(v) for v in value]
    if value is None:
        if default is None:
            return None
        raise ConfigError(f"{where} may not be null")
    if isinstance(default, int) and not isinstance(default, bool) or key in ("panels", "seed"):
        if not _is_int(value):
            raise ConfigError(f"{where} must be an integer")
        return int(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return float(value)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration; ``sections`` mirrors the file layout with defaults filled in."""

    sections: dict
    base_dir: Path = field(default=Path("."), compare=False)

    @classmethod
    def from_mapping(cls, data, base_dir=Path(".")):
        if not isinstance(data, dict):
            raise ConfigError("config must be a table of sections")
        unknown = sorted(set(data) - set(_SECTIONS))
        if unknown:
            raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")
        for section, key in sorted(_REQUIRED):
            if key not in data.get(section, {}):
                raise ConfigError(f"missing required key {section}.{key}")
        sections = {}
        for name, defaults in _SECTIONS.items():
            given = data.get(name, {})
            if not isinstance(given, dict):
                raise ConfigError(f"section {name} must be a table")
            bad = sorted(set(given) - set(defaults))
            if bad:
                raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(bad)}")
            merged = dict(defaults)
            for key, value in given.items():
                merged[key] = _check_type(name, key, value, defaults[key])
            sections[name] = merged
        cfg = cls(sections, Path(base_dir))
        cfg._validate()
        return cfg

    def _validate(self):
        s = self.sections
        if s["run"]["threads"] < 1:
            raise ConfigError("run.threads must be >= 1")
        if s["quadrature"]["order"] < 1 or (s["quadrature"]["panels"] is not None and s["quadrature"]["panels"] < 1):
            raise ConfigError("quadrature.panels and quadrature.order must be >= 1")
        for key in ("nx", "ny"):
            if s["grid"][key] < 2:
                raise ConfigError(f"grid.{key} must be >= 2")
        if s["verify"]["probes"] < 0:
            raise ConfigError("verify.probes must be >= 0")
        # builds the problem once so that invalid parameters surface here
        self.problem_spec()

    def get(self, section, key):
        return self.sections[section][key]

    def with_overrides(self, threads=None, out=None, strict_compat=None):
        sections = {k: dict(v) for k, v in self.sections.items()}
        if threads is not None:
            if threads < 1:
                raise ConfigError("--threads must be >= 1")
            sections["run"]["threads"] = int(threads)
        if out is not None:
            sections["run"]["out"] = str(out)
        if strict_compat is not None:
            sections["problem"]["strict_compat"] = bool(strict_compat)
        return RunConfig(sections, self.base_dir)

    def _boundary(self, text):
        if text.startswith("csv:"):
            path = Path(text[4:])
            if not path.is_absolute():
                path = self.base_dir / path
            return f"csv:{path}"
        return text

    def problem_spec(self, n_modes=None):
        p = self.sections["problem"]
        q = self.sections["quadrature"]
        quad = None if q["panels"] is None else QuadSpec(q["panels"], q["order"])
        return ProblemSpec(
            kind=p["kind"],
            alpha=p["alpha"],
            eps=p["eps"],
            c=p["c"],
            phi=self._boundary(p["phi"]),
            psi=self._boundary(p["psi"]),
            n_modes=p["n_modes"] if n_modes is None else n_modes,
            quad=quad,
            compat_tol=p["compat_tol"],
            strict_compat=p["strict_compat"],
        )

    @property
    def threads(self):
        return self.sections["run"]["threads"]

    def out_dir(self):
        out = Path(self.sections["run"]["out"])
        return out if out.is_absolute() else Path.cwd() / out

    def echo(self):
        """The effective configuration minus thread count and output path."""
        return {
            name: {k: v for k, v in values.items() if (name, k) not in _NOT_ECHOED}
            for name, values in self.sections.items()
        }


def load_config(path):
    """Read and validate a TOML or JSON config file."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(raw.decode())
        else:
            data = tomllib.loads(raw.decode())
    except (ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return RunConfig.from_mapping(data, path.parent)


# -- output helpers ----------------------------------------------------------------


def _json_text(obj):
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False, default=str) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write(out_dir, name, text):
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(text)
    return path


def _emit(out, name, text, stream):
    """Write ``text`` to ``out/name``, or to ``stream`` without ``--out``."""
    if out is None:
        stream.write(text)
    else:
        _write(Path(out), name, text)


def _finite(obj):
    """Replace non-finite floats by None so the JSON stays standard."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


# -- workflows ---------------------------------------------------------------------


def _solve(cfg, corrupt=False):
    sol = assemble(cfg.problem_spec(), threads=cfg.threads)
    if corrupt:
        records = tuple(dataclasses.replace(r, psi=r.psi * (1.0 + CORRUPTION) + CORRUPTION) for r in sol.records)
        sol = dataclasses.replace(sol, records=records)
    return sol


def _report(cfg, sol, command):
    return {
        "command": command,
        "config": cfg.echo(),
        "solution": sol.report(),
    }


def _run_solve(cfg, stdout):
    sol = _solve(cfg)
    fld = evaluate_grid(sol, cfg.get("grid", "nx"), cfg.get("grid", "ny"), threads=cfg.threads)
    out = cfg.out_dir()
    _write(out, "field.csv", fld.to_csv())
    _write(out, "report.json", _json_text(_finite(_report(cfg, sol, "solve"))))
    stdout.write(f"wrote {out / 'field.csv'} and {out / 'report.json'}\n")
    return EXIT_OK


def _probe_mismatch(cfg, sol):
    """Pointwise evaluation at seeded random points against the grid path."""
    n = cfg.get("verify", "probes")
    if n == 0:
        return 0.0
    rng = np.random.default_rng(cfg.get("run", "seed"))
    x = rng.uniform(0.0, 1.0, n)
    y = rng.uniform(-math.pi, math.pi, n)
    pointwise = evaluate(sol, x, y)
    grid = np.array([evaluate_on(sol, [xi], [yi], cfg.threads).values[0, 0] for xi, yi in zip(x, y)])
    scale = max(1.0, float(np.max(np.abs(grid))))
    return float(np.max(np.abs(pointwise - grid))) / scale


def _run_verify(cfg, stdout, corrupt=False):
    v = cfg.sections["verify"]
    sol = _solve(cfg, corrupt=corrupt)
    threads = cfg.threads
    fld = evaluate_grid(sol, cfg.get("grid", "nx"), cfg.get("grid", "ny"), threads=threads)
    bnd = boundary_report(sol, ny=v["boundary_ny"], threads=threads)
    res = pde_residual(sol, v["residual_nx"], v["residual_ny"], threads=threads, with_boundary=False)
    ladder = residual_ladder(sol, tuple(v["ladder"]), threads=threads)
    probe = _probe_mismatch(cfg, sol)

    monotone = all(b.max_residual <= a.max_residual for a, b in zip(ladder, ladder[1:]))
    checks = [
        {
            "name": "max_boundary_error",
            "value": bnd.max_error,
            "threshold": v["max_boundary_error"],
            "passed": bnd.max_error <= v["max_boundary_error"],
        },
        {
            "name": "max_probe_mismatch",
            "value": probe,
            "threshold": v["max_probe_mismatch"],
            "passed": probe <= v["max_probe_mismatch"],
        },
    ]
    if v["max_residual"] is not None:
        checks.append(
            {
                "name": "max_residual",
                "value": res.max_abs_residual,
                "threshold": v["max_residual"],
                "passed": res.max_abs_residual <= v["max_residual"],
            }
        )
    if v["require_monotone_ladder"]:
        checks.append({"name": "monotone_ladder", "value": monotone, "threshold": True, "passed": monotone})

    out = cfg.out_dir()
    doc = _report(cfg, sol, "verify")
    doc.update(
        {
            "boundary": bnd.to_dict(),
            "residual": res.to_dict(),
            "ladder": [dataclasses.asdict(r) for r in ladder],
            "ladder_monotone": monotone,
            "checks": checks,
            "passed": all(c["passed"] for c in checks),
        }
    )
    _write(out, "field.csv", fld.to_csv())
    _write(
        out,
        "ladder.csv",
        _csv_text(
            ["level", "h", "max_residual", "observed_order"],
            [[r.level, _fmt(r.h), _fmt(r.max_residual), _fmt_opt(r.observed_order)] for r in ladder],
        ),
    )
    _write(out, "verify.json", _json_text(_finite(doc)))
    failed = [c for c in checks if not c["passed"]]
    for c in checks:
        stdout.write(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: {c['value']} (threshold {c['threshold']})\n")
    if failed:
        raise ThresholdFailure("threshold not met: " + ", ".join(c["name"] for c in failed))
    return EXIT_OK


def _run_converge(cfg, stdout):
    c = cfg.sections["converge"]
    rows = []
    for n in c["levels"]:
        sol = assemble(cfg.problem_spec(n_modes=n), threads=cfg.threads)
        bnd = boundary_report(sol, ny=c["boundary_ny"], threads=cfg.threads)
        rows.append((n, bnd.x0_error, bnd.x1_error))
    out = cfg.out_dir()
    _write(
        out,
        "converge.csv",
        _csv_text(["n_modes", "x0_error", "x1_error"], [[n, _fmt(a), _fmt(b)] for n, a, b in rows]),
    )
    doc = {
        "command": "converge",
        "config": cfg.echo(),
        "rows": [{"n_modes": n, "x0_error": a, "x1_error": b} for n, a, b in rows],
    }
    _write(out, "converge.json", _json_text(_finite(doc)))
    stdout.write(f"wrote {out / 'converge.csv'}\n")
    return EXIT_OK


# -- tabulations -------------------------------------------------------------------


def _float_list(text, what):
    try:
        values = [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"{what} must be a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise ConfigError(f"{what} is empty")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"{what} must be finite")
    return values


def mlf_table(alpha, beta, z_list, rel_tol=1e-14):
    """CSV text with columns ``z,value,est_abs_error,regime``."""
    params = MLParams(float(alpha), float(beta))
    rows = []
    for z in _float_list(z_list, "z list"):
        r = ml_eval(params, z, rel_tol)
        rows.append([_fmt(z), _fmt(r.value), _fmt(r.est_abs_error), r.regime.value])
    return _csv_text(["z", "value", "est_abs_error", "regime"], rows)


def basis_table(kind, eps, n):
    """CSV text with columns ``mode,parity,k,n,family,wavenumber,eigenvalue,norm_const``."""
    if not _is_int(n) or n < 0:
        raise ConfigError(f"N must be a non-negative integer, got {n!r}")
    rows = []
    for mode in enumerate_modes(kind, n):
        pair = eigenpair(mode, float(eps))
        idx, family = interleaved_index(mode)
        rows.append(
            [
                mode.label,
                mode.parity.value,
                mode.k,
                idx,
                family,
                _fmt(mode.wavenumber),
                _fmt(pair.eigenvalue),
                _fmt(mode.norm_const),
            ]
        )
    return _csv_text(["mode", "parity", "k", "n", "family", "wavenumber", "eigenvalue", "norm_const"], rows)


def kernel_table(alpha, mu, t_list):
    """CSV text with columns ``t,C,S``."""
    params = KernelParams(float(alpha), float(mu))
    t = np.array(_float_list(t_list, "t list"))
    C = np.atleast_1d(kernel_C(params, t))
    S = np.atleast_1d(kernel_S(params, t))
    return _csv_text(["t", "C", "S"], [[_fmt(a), _fmt(b), _fmt(c)] for a, b, c in zip(t, C, S)])


# -- error mapping -----------------------------------------------------------------

_VALIDATION_ERRORS = (
    ConfigError,
    InvalidParams,
    CompatibilityFailure,
    EpsOutOfRange,
    ParseError,
    InsufficientData,
    DomainError,
    UnknownMode,
    GridTooCoarse,
    ValueError,
    KeyError,
    OSError,
)
_NUMERICAL_ERRORS = (MittagLefflerError, DegenerateSystem, ArithmeticError, FloatingPointError)


def _guarded(fn, stderr):
    try:
        return fn()
    except ThresholdFailure as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_THRESHOLD
    except CompatibilityFailure as exc:
        stderr.write(f"error: boundary data violate the compatibility conditions\n{exc.report}\n")
        return EXIT_VALIDATION
    except EpsOutOfRange as exc:
        stderr.write(f"error: {exc} (the perturbation parameter must satisfy |eps| < 1)\n")
        return EXIT_VALIDATION
    except InvalidParams as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    # numerical errors before validation: some derive from ValueError
    except _NUMERICAL_ERRORS as exc:
        stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL
    except _VALIDATION_ERRORS as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_VALIDATION


# -- commands ----------------------------------------------------------------------


def _config_command(runner, config, out, threads, strict_compat, stdout, stderr, **kw):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def run():
        cfg = load_config(config).with_overrides(threads=threads, out=out, strict_compat=strict_compat)
        return runner(cfg, stdout, **kw)

    return _guarded(run, stderr)


def cmd_solve(config, out=None, threads=None, strict_compat=None, stdout=None, stderr=None):
    """Solve and write ``field.csv`` and ``report.json``; returns the exit code."""
    return _config_command(_run_solve, config, out, threads, strict_compat, stdout, stderr)


def cmd_verify(config, out=None, threads=None, strict_compat=None, stdout=None, stderr=None, corrupt=False):
    """Solve, check residual/boundary/ladder, write ``verify.json``, ``ladder.csv``, ``field.csv``."""
    return _config_command(_run_verify, config, out, threads, strict_compat, stdout, stderr, corrupt=corrupt)


def cmd_converge(config, out=None, threads=None, strict_compat=None, stdout=None, stderr=None):
    """Boundary error against truncation level; writes ``converge.csv`` and ``converge.json``."""
    return _config_command(_run_converge, config, out, threads, strict_compat, stdout, stderr)


def _table_command(build, name, out, stdout, stderr):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def run():
        _emit(out, name, build(), stdout)
        return EXIT_OK

    return _guarded(run, stderr)


def cmd_mlf(alpha, beta, z_list, rel_tol=1e-14, out=None, stdout=None, stderr=None):
    """Tabulate ``E_{alpha,beta}(z)``; CSV to ``out/mlf.csv`` or stdout."""
    return _table_command(lambda: mlf_table(alpha, beta, z_list, rel_tol), "mlf.csv", out, stdout, stderr)


def cmd_basis(kind, eps, n, out=None, stdout=None, stderr=None):
    """Tabulate eigenpairs with ``k <= n``; CSV to ``out/basis.csv`` or stdout."""
    return _table_command(lambda: basis_table(kind, eps, n), "basis.csv", out, stdout, stderr)


def cmd_kernel(alpha, mu, t_list, out=None, stdout=None, stderr=None):
    """Tabulate ``C`` and ``S``; CSV to ``out/kernel.csv`` or stdout."""
    return _table_command(lambda: kernel_table(alpha, mu, t_list), "kernel.csv", out, stdout, stderr)


# -- argument parsing --------------------------------------------------------------


def _parser():
    parser = argparse.ArgumentParser(
        prog="frachelm",
        description="Series solutions of the fractional Helmholtz equation with involution.",
        epilog="Exit codes: 0 ok, 2 invalid input, 3 numerical failure, 4 threshold missed.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def config_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", required=True, metavar="PATH", help="TOML or JSON run configuration")
        p.add_argument("--out", metavar="DIR", help="output directory (overrides run.out)")
        p.add_argument("--threads", type=int, metavar="N", help="worker threads (overrides run.threads)")
        p.add_argument(
            "--strict-compat",
            action=argparse.BooleanOptionalAction,
            default=None,
            help="fail (exit 2) on incompatible boundary data instead of warning",
        )
        return p

    config_cmd("solve", "solve and write field.csv (x,y,u) and report.json")
    v = config_cmd("verify", "solve, then check boundary, residual and refinement ladder; writes verify.json, ladder.csv")
    v.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    config_cmd("converge", "boundary error against n_modes; writes converge.csv (n_modes,x0_error,x1_error)")

    m = sub.add_parser("mlf", help="tabulate E_{alpha,beta}(z): CSV z,value,est_abs_error,regime")
    m.add_argument("alpha", type=float)
    m.add_argument("beta", type=float)
    m.add_argument("z", help="comma-separated z values")
    m.add_argument("--rel-tol", type=float, default=1e-14)
    m.add_argument("--out", metavar="DIR", help="write DIR/mlf.csv instead of stdout")

    b = sub.add_parser(
        "basis", help="tabulate eigenpairs: CSV mode,parity,k,n,family,wavenumber,eigenvalue,norm_const"
    )
    b.add_argument("kind", help="D, N, P or AP")
    b.add_argument("eps", type=float)
    b.add_argument("n", type=int, help="largest k in each family")
    b.add_argument("--out", metavar="DIR", help="write DIR/basis.csv instead of stdout")

    k = sub.add_parser("kernel", help="tabulate the kernels: CSV t,C,S")
    k.add_argument("alpha", type=float)
    k.add_argument("mu", type=float)
    k.add_argument("t", help="comma-separated t values in [0, 1]")
    k.add_argument("--out", metavar="DIR", help="write DIR/kernel.csv instead of stdout")
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command in ("solve", "verify", "converge"):
        kw = {"out": args.out, "threads": args.threads, "strict_compat": args.strict_compat}
        if args.command == "solve":
            return cmd_solve(args.config, **kw)
        if args.command == "verify":
            return cmd_verify(args.config, corrupt=args.corrupt, **kw)
        return cmd_converge(args.config, **kw)
    if args.command == "mlf":
        return cmd_mlf(args.alpha, args.beta, args.z, args.rel_tol, out=args.out)
    if args.command == "basis":
        return cmd_basis(args.kind, args.eps, args.n, out=args.out)
    return cmd_kernel(args.alpha, args.mu, args.t, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
