"""Truncated eigenfunction-series solutions on the rectangle.

The problem on ``0 < x < 1``, ``-pi < y < pi`` is

    D^a_x D^a_x u + u_yy(x, y) - eps u_yy(x, -y) - c^2 u = 0,
    u(0, y) = phi(y),   u(1, y) = psi(y),

plus one of the D/N/P/AP conditions in ``y``. Expanding in the eigenfunctions
``Y`` of :mod:`frachelm.spectral_basis` decouples it into two-point problems
for the modal profiles,

    D^a D^a u_m - mu_m^2 u_m = 0,  u_m(0) = phi_m,  u_m(1) = psi_m,
    mu_m^2 = lambda_m + c^2,

solved by ``u_m(x) = phi_m C(mu_m x) + psi_m S(mu_m x)``. A mode with
``mu_m = 0`` (the constant mode of N or P when ``c = 0``) gets the limit
profile ``(1 - x^a) phi_m + x^a psi_m``.

Summation runs over modes in a fixed order (odd family by ascending k, then
even family) with compensated accumulation, so results do not depend on the
thread count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _core
from .boundary_data import BoundaryFunction, CompatibilityReport, compatibility_check, expand
from .frac_kernels import DomainError, KernelParams, solve_two_point
from .quadrature import QuadSpec
from .spectral_basis import Eigenfunction, EpsOutOfRange, ModeIndex, ProblemKind, mu_of_mode

__all__ = [
    "CompatibilityFailure",
    "CompatibilityWarning",
    "DomainError",
    "Field",
    "ModeRecord",
    "ProblemSpec",
    "Solution",
    "UnknownMode",
    "assemble",
    "evaluate",
    "evaluate_grid",
    "evaluate_on",
    "modal_profile",
]


class CompatibilityFailure(ValueError):
    """Boundary data violate the endpoint conditions of the chosen kind."""

    def __init__(self, report):
        lines = ", ".join(f"{c.name}={c.mismatch:.3g}" for c in report.failures())
        super().__init__(f"boundary data incompatible with kind {report.kind.value}: {lines}")
        self.report = report


class CompatibilityWarning(UserWarning):
    pass


class UnknownMode(KeyError):
    pass


def _fmt(v):
    return format(float(v), ".17g")


@dataclass(frozen=True)
class ProblemSpec:
    """Full problem description.

    ``n_modes`` is the truncation: every mode with ``k <= n_modes`` in both
    families is kept. ``quad=None`` picks a rule from the largest wavenumber.
    With ``strict_compat`` an incompatible datum raises
    :class:`CompatibilityFailure`; otherwise a :class:`CompatibilityWarning`
    is issued.
    """

    kind: ProblemKind
    alpha: float
    eps: float
    c: float
    phi: BoundaryFunction
    psi: BoundaryFunction
    n_modes: int = 32
    quad: QuadSpec | None = None
    compat_tol: float = 1e-10
    strict_compat: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind.parse(self.kind))
        for name in ("phi", "psi"):
            object.__setattr__(self, name, BoundaryFunction.parse(getattr(self, name)))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "c", float(self.c))
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not (abs(self.eps) < 1.0):
            raise EpsOutOfRange(f"|eps| must be < 1, got {self.eps}")
        if not math.isfinite(self.c):
            raise ValueError("c must be finite")
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise ValueError(f"n_modes must be an integer >= 1, got {self.n_modes}")
        object.__setattr__(self, "n_modes", int(self.n_modes))

    def to_dict(self):
        d = {
            "kind": self.kind.value,
            "alpha": self.alpha,
            "eps": self.eps,
            "c": self.c,
            "phi": self.phi.label,
            "psi": self.psi.label,
            "n_modes": self.n_modes,
            "compat_tol": self.compat_tol,
            "strict_compat": self.strict_compat,
        }
        if self.quad is not None:
            d["quad"] = {"panels": self.quad.panels, "order": self.quad.order}
        return d

    def digest(self):
        """Short stable hash of :meth:`to_dict`."""
        text = json.dumps(self.to_dict(), sort_keys=True, default=_fmt)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ModeRecord:
    mode: ModeIndex
    mu: float
    phi: float
    psi: float

    @property
    def degenerate(self):
        return self.mu == 0.0

    @property
    def active(self):
        return self.phi != 0.0 or self.psi != 0.0


@dataclass(frozen=True)
class Solution:
    spec: ProblemSpec
    records: tuple
    compatibility: CompatibilityReport
    phi_quad_error: float = 0.0
    psi_quad_error: float = 0.0
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {r.mode: r for r in self.records})

    @property
    def modes(self):
        return tuple(r.mode for r in self.records)

    def record(self, mode):
        try:
            return self._index[mode]
        except KeyError:
            raise UnknownMode(f"mode {getattr(mode, 'label', mode)} is not part of this solution") from None

    @property
    def zero_mode(self):
        """The record with ``mu = 0``, if any."""
        return next((r for r in self.records if r.degenerate), None)

    def profile(self, mode, x):
        return modal_profile(self, mode, x)

    def __call__(self, x, y):
        return evaluate(self, x, y)

    def report(self):
        """JSON-ready summary: spec echo, coefficient table, norms."""
        return {
            "spec": self.spec.to_dict(),
            "spec_hash": self.spec.digest(),
            "compatibility": {
                "passed": self.compatibility.passed,
                "conditions": [
                    {"name": c.name, "mismatch": c.mismatch, "passed": c.passed}
                    for c in self.compatibility.conditions
                ],
            },
            "modes": [
                {
                    "mode": r.mode.label,
                    "mu": r.mu,
                    "phi": r.phi,
                    "psi": r.psi,
                    "degenerate": r.degenerate,
                }
                for r in self.records
            ],
            "norms": {
                "phi_l2_truncated": math.sqrt(math.fsum(r.phi**2 for r in self.records)),
                "psi_l2_truncated": math.sqrt(math.fsum(r.psi**2 for r in self.records)),
                "phi_quad_error": self.phi_quad_error,
                "psi_quad_error": self.psi_quad_error,
            },
        }


def assemble(spec, threads=1):
    """Coefficients and modal frequencies for every mode of the truncation."""
    report = compatibility_check(spec.phi, spec.psi, spec.kind, spec.compat_tol)
    if not report.passed:
        if spec.strict_compat:
            raise CompatibilityFailure(report)
        warnings.warn(str(report), CompatibilityWarning, stacklevel=2)
    data = (spec.phi, spec.psi)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, 2)) as pool:
            tables = list(pool.map(lambda f: expand(f, spec.kind, spec.n_modes, spec.quad), data))
    else:
        tables = [expand(f, spec.kind, spec.n_modes, spec.quad) for f in data]
    phi_t, psi_t = tables
    records = tuple(
        ModeRecord(m, mu_of_mode(m, spec.eps, spec.c), a, b)
        for m, a, b in zip(phi_t.modes, phi_t.values, psi_t.values)
    )
    return Solution(spec, records, report, phi_t.quad_error, psi_t.quad_error)


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if not np.all((x >= 0.0) & (x <= 1.0)):
        raise DomainError("x must lie in [0, 1]")
    return x


def _check_y(y):
    y = np.asarray(y, dtype=float)
    if not np.all(np.abs(y) <= math.pi * (1.0 + 1e-15)):
        raise DomainError("y must lie in [-pi, pi]")
    return y


def _profile(spec, rec, x):
    if not rec.active:
        return np.zeros_like(x)
    return np.asarray(solve_two_point(KernelParams(spec.alpha, rec.mu), rec.phi, rec.psi)(x))


def modal_profile(sol, mode, x):
    """``u_m(x) = phi_m C(mu x) + psi_m S(mu x)`` (limit profile when mu = 0)."""
    rec = sol.record(mode)
    xa = _check_x(x)
    out = _profile(sol.spec, rec, xa)
    return float(out) if np.ndim(x) == 0 else out


def _profiles(sol, x, threads):
    recs = sol.records
    if threads > 1 and len(recs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda r: _profile(sol.spec, r, x), recs))
    else:
        rows = [_profile(sol.spec, r, x) for r in recs]
    return np.array(rows).reshape(len(recs), x.size)


def _shapes(sol, y, order=0):
    rows = [Eigenfunction(r.mode).derivative(y, order) for r in sol.records]
    return np.array(rows).reshape(len(sol.records), y.size)


def evaluate(sol, x, y):
    """u(x, y) at broadcast points; scalar in, scalar out."""
    xa = _check_x(x)
    ya = _check_y(y)
    xb, yb = np.broadcast_arrays(xa, ya)
    flat_x = xb.ravel()
    flat_y = yb.ravel()
    if not sol.records:
        out = np.zeros(flat_x.shape)
    else:
        # unique x values keep kernel work proportional to distinct abscissae
        ux, inv = np.unique(flat_x, return_inverse=True)
        prof = _profiles(sol, ux, 1)[:, inv]
        shp = _shapes(sol, flat_y)
        out = _pointwise_sum(prof, shp)
    out = out.reshape(xb.shape)
    return float(out) if out.ndim == 0 else out


def _pointwise_sum(prof, shp):
    # compensated sum over modes of prof[m, i] * shp[m, i], fixed order
    s = np.zeros(prof.shape[1])
    c = np.zeros(prof.shape[1])
    for m in range(prof.shape[0]):
        v = prof[m] * shp[m]
        t = s + v
        c += np.where(np.abs(s) >= np.abs(v), (s - t) + v, (v - t) + s)
        s = t
    return s + c


@dataclass(frozen=True)
class Field:
    """Values ``u[i, j] = u(x[i], y[j])`` on a tensor grid."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.x.size, self.y.size):
            raise ValueError(f"values shape {self.values.shape} does not match grid ({self.x.size}, {self.y.size})")

    def to_csv(self, path=None):
        """Write (or return) CSV text: a ``# meta`` line, then ``x,y,u`` rows, y fastest."""
        buf = io.StringIO()
        buf.write("# meta " + json.dumps(self.metadata, sort_keys=True, default=_fmt) + "\n")
        buf.write("x,y,u\n")
        for i, xv in enumerate(self.x):
            xs = _fmt(xv)
            row = self.values[i]
            for j, yv in enumerate(self.y):
                buf.write(f"{xs},{_fmt(yv)},{_fmt(row[j])}\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source):
        """Parse text written by :meth:`to_csv` (a path or the text itself)."""
        text = Path(source).read_text() if isinstance(source, Path) or "\n" not in str(source) else str(source)
        lines = text.splitlines()
        meta = {}
        while lines and lines[0].startswith("#"):
            head = lines.pop(0)
            if head.startswith("# meta "):
                meta = json.loads(head[len("# meta ") :])
        reader = csv.reader(lines)
        header = next(reader)
        if [h.strip() for h in header] != ["x", "y", "u"]:
            raise ValueError(f"expected header x,y,u, got {','.join(header)}")
        rows = np.array([[float(v) for v in r] for r in reader if r], dtype=float)
        xs = list(dict.fromkeys(rows[:, 0]))
        ys = list(dict.fromkeys(rows[:, 1]))
        values = rows[:, 2].reshape(len(xs), len(ys))
        return cls(np.array(xs), np.array(ys), values, meta)


def evaluate_grid(sol, nx, ny, threads=1):
    """Uniform ``nx`` x ``ny`` grid on [0, 1] x [-pi, pi].

    Profiles are computed per mode (in parallel when ``threads > 1``), then
    rows of the grid are summed in parallel with a fixed mode order, so the
    result is bitwise independent of ``threads``.
    """
    if nx < 2 or ny < 2:
        raise ValueError("nx and ny must be >= 2")
    x = np.linspace(0.0, 1.0, nx)
    y = np.linspace(-math.pi, math.pi, ny)
    return evaluate_on(sol, x, y, threads)


def evaluate_on(sol, x, y, threads=1, y_derivative=0):
    """Tensor-product evaluation on given node vectors.

    ``y_derivative`` differentiates the eigenfunctions analytically, giving
    e.g. ``u_y`` for ``y_derivative=1``.
    """
    x = _check_x(np.atleast_1d(x))
    y = _check_y(np.atleast_1d(y))
    meta = {"spec_hash": sol.spec.digest(), "n_modes": sol.spec.n_modes, "kind": sol.spec.kind.value}
    if not sol.records:
        return Field(x, y, np.zeros((x.size, y.size)), meta)
    prof = _profiles(sol, x, threads)
    shp = _shapes(sol, y, y_derivative)
    if threads > 1 and x.size > 1:
        blocks = np.array_split(np.arange(x.size), min(threads, x.size))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _core.modal_sum(np.ascontiguousarray(prof[:, b]), shp), blocks))
        values = np.vstack(parts)
    else:
        values = np.asarray(_core.modal_sum(prof, shp))
    return Field(x, y, values, meta)
