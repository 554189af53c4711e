"""Boundary data on [-pi, pi]: representation, Fourier coefficients, checks.

A :class:`BoundaryFunction` wraps one of three sources:

* an expression in ``y`` (see :mod:`frachelm.expressions`), with symbolic
  derivatives;
* a named catalog entry, which is just a canned expression;
* tabulated samples, interpolated by a cubic spline. Spline derivatives are
  available but only approximate the underlying data, so using them emits
  :class:`SplineDerivativeWarning`.

Coefficients are inner products with the normalised eigenfunctions of
:mod:`frachelm.spectral_basis`, computed by composite Gauss-Legendre
quadrature.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .expressions import DifferentiationUnsupported, ParseError, parse
from .quadrature import AliasingRisk, QuadSpec
from .spectral_basis import (
    Eigenfunction,
    ModeIndex,
    Parity,
    ProblemKind,
    enumerate_modes,
)

__all__ = [
    "CATALOG",
    "AliasingRisk",
    "BoundaryFunction",
    "CoefficientTable",
    "CompatibilityReport",
    "Condition",
    "DecayFit",
    "DifferentiationUnsupported",
    "InsufficientData",
    "ParseError",
    "SmoothnessWarning",
    "SplineDerivativeWarning",
    "check_decay_class",
    "compatibility_check",
    "decay_estimate",
    "expand",
    "fourier_coefficient",
    "parse_expression",
]


class InsufficientData(ValueError):
    """Too few nonzero coefficients to fit a decay rate."""


class SplineDerivativeWarning(UserWarning):
    """A derivative was taken of interpolated (tabulated) data."""


CATALOG = {
    "zero": ("0", "identically zero"),
    "one": ("1", "constant 1"),
    "sin": ("sin({m}*y)", "sin(m y); parameter m (default 1)"),
    "cos": ("cos({m}*y)", "cos(m y); parameter m (default 1)"),
    "smooth_D": ("y*(pi^2 - y^2)", "odd cubic vanishing at +-pi"),
    "smooth_N": ("(pi^2 - y^2)^2", "even quartic with zero slope at +-pi"),
    "smooth_P": ("y*(pi^2 - y^2)", "equal values and slopes at +-pi"),
    "smooth_AP": ("y*(pi^2 - y^2)^2", "opposite values and slopes at +-pi"),
}


@dataclass(frozen=True)
class BoundaryFunction:
    """A boundary datum evaluable on [-pi, pi].

    ``source`` is ``"expression"``, ``"catalog"`` or ``"samples"``; ``label``
    is the expression text, catalog call or file name.
    """

    source: str
    label: str
    _expr: object = field(default=None, repr=False, compare=False)
    _spline: object = field(default=None, repr=False, compare=False)

    @classmethod
    def from_expression(cls, text):
        return cls("expression", text, _expr=parse(text))

    @classmethod
    def from_catalog(cls, name, **params):
        if name not in CATALOG:
            raise KeyError(f"unknown catalog entry {name!r}; available: {', '.join(sorted(CATALOG))}")
        template = CATALOG[name][0]
        if "{m}" in template:
            params.setdefault("m", 1)
        text = template.format(**{k: repr(float(v)) for k, v in params.items()})
        args = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
        return cls("catalog", f"{name}({args})", _expr=parse(text))

    @classmethod
    def from_mode(cls, mode, amplitude=1.0):
        """Single-mode datum ``amplitude * Y_mode(y)``."""
        w = mode.wavenumber
        if mode.is_constant:
            text = f"{amplitude * mode.norm_const!r}"
        else:
            fn = "sin" if mode.parity is Parity.ODD else "cos"
            text = f"{amplitude * mode.norm_const!r}*{fn}({w!r}*y)"
        return cls("catalog", f"mode({mode.label}, {amplitude!r})", _expr=parse(text))

    @classmethod
    def from_samples(cls, y, values, label="samples"):
        y = np.asarray(y, dtype=float)
        values = np.asarray(values, dtype=float)
        if y.ndim != 1 or y.shape != values.shape or y.size < 4:
            raise ValueError("samples need matching 1-D y and value arrays with at least 4 points")
        if not np.all(np.diff(y) > 0):
            raise ValueError("sample abscissae must be strictly increasing")
        if abs(y[0] + math.pi) > 1e-9 or abs(y[-1] - math.pi) > 1e-9:
            raise ValueError("samples must span [-pi, pi]")
        return cls("samples", label, _spline=CubicSpline(y, values))

    @classmethod
    def from_csv(cls, path):
        """Read a ``y,value`` CSV (header required)."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader)]
            if header != ["y", "value"]:
                raise ValueError(f"{path}: expected header 'y,value', got {','.join(header)!r}")
            rows = [(float(a), float(b)) for a, b in reader if a.strip()]
        data = np.array(rows, dtype=float)
        return cls.from_samples(data[:, 0], data[:, 1], label=str(path))

    @classmethod
    def parse(cls, spec):
        """Build from a user string: ``catalog:name[:m]``, ``csv:path`` or an expression."""
        if isinstance(spec, BoundaryFunction):
            return spec
        text = str(spec).strip()
        if text.startswith("catalog:"):
            parts = text.split(":")[1:]
            params = {"m": float(parts[1])} if len(parts) > 1 else {}
            return cls.from_catalog(parts[0], **params)
        if text.startswith("csv:"):
            return cls.from_csv(text[4:])
        return cls.from_expression(text)

    def __call__(self, y):
        return self.derivative(y, 0)

    def derivative(self, y, order=1):
        """``order``-th derivative at ``y``; orders above 3 are refused."""
        if order > 3:
            raise DifferentiationUnsupported("derivatives are available up to order 3")
        if self._spline is not None:
            if order > 0:
                warnings.warn(
                    f"derivative of order {order} taken from a cubic spline through tabulated data",
                    SplineDerivativeWarning,
                    stacklevel=2,
                )
            out = self._spline(np.asarray(y, dtype=float), order)
            return float(out) if np.ndim(out) == 0 else out
        return self._expr.derivative(order)(y)

    def to_dict(self):
        return {"source": self.source, "label": self.label}


def parse_expression(text):
    return BoundaryFunction.from_expression(text)


# -- coefficients ---------------------------------------------------------------


def _mode_matrix(modes, y):
    return np.array([Eigenfunction(m)(y) for m in modes]).reshape(len(modes), y.size)


def fourier_coefficient(f, mode, quad=None):
    """``(f, Y_mode)`` on [-pi, pi]. Warns :class:`AliasingRisk` on sparse rules."""
    quad = quad or QuadSpec.for_wavenumber(mode.wavenumber)
    quad.check_aliasing(mode.wavenumber)
    y, w = quad.rule()
    return float(np.dot(w, f(y) * Eigenfunction(mode)(y)))


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients of one datum against one basis, with quadrature metadata.

    ``quad_error`` is the largest change in any coefficient when the panel
    count is doubled. ``parseval_defect`` is ``int f^2 - sum coeff^2``.
    """

    kind: ProblemKind
    n_max: int
    modes: tuple
    values: tuple
    nodes: int
    quad_error: float
    norm_sq: float
    parseval_defect: float

    @property
    def entries(self):
        return dict(zip(self.modes, self.values))

    def __getitem__(self, mode):
        return self.entries[mode]

    def family(self, parity):
        parity = Parity.parse(parity)
        pairs = [(m.k, v) for m, v in zip(self.modes, self.values) if m.parity is parity]
        return [k for k, _ in pairs], np.array([v for _, v in pairs])

    def reconstruct(self, y):
        y = np.asarray(y, dtype=float)
        return np.asarray(self.values) @ _mode_matrix(self.modes, y.ravel())


def _coefficients(values_at_nodes, modes, quad):
    y, w = quad.rule()
    return _mode_matrix(modes, y) @ (w * values_at_nodes)


def expand(f, kind, n_max, quad=None):
    """All coefficients with ``k <= n_max`` in both families."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    kind = ProblemKind.parse(kind)
    modes = enumerate_modes(kind, n_max)
    w_max = max(m.wavenumber for m in modes)
    quad = quad or QuadSpec.for_wavenumber(w_max)
    quad.check_aliasing(w_max)
    fine = quad.refined()
    y, w = quad.rule()
    fy = np.asarray(f(y), dtype=float)
    coarse = _coefficients(fy, modes, quad)
    yf, wf = fine.rule()
    ff = np.asarray(f(yf), dtype=float)
    refined = _coefficients(ff, modes, fine)
    quad_err = float(np.max(np.abs(coarse - refined)))
    norm_sq = float(np.dot(w, fy * fy))
    defect = norm_sq - float(np.dot(coarse, coarse))
    return CoefficientTable(
        kind=kind,
        n_max=n_max,
        modes=tuple(modes),
        values=tuple(float(v) for v in coarse),
        nodes=quad.nodes,
        quad_error=quad_err,
        norm_sq=norm_sq,
        parseval_defect=defect,
    )


# -- compatibility --------------------------------------------------------------


@dataclass(frozen=True)
class Condition:
    name: str
    mismatch: float
    passed: bool


@dataclass(frozen=True)
class CompatibilityReport:
    kind: ProblemKind
    tol: float
    conditions: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.conditions)

    def failures(self):
        return [c for c in self.conditions if not c.passed]

    def __str__(self):
        lines = [f"compatibility for {self.kind.value}: {'pass' if self.passed else 'FAIL'}"]
        for c in self.conditions:
            lines.append(f"  {c.name}: {c.mismatch:.3e} {'ok' if c.passed else 'FAIL'}")
        return "\n".join(lines)


def _endpoint_conditions(f, name, kind):
    pi = math.pi
    if kind is ProblemKind.D:
        return [(f"|{name}(-pi)|", abs(f(-pi))), (f"|{name}(pi)|", abs(f(pi)))]
    d = f.derivative
    if kind is ProblemKind.N:
        return [(f"|{name}'(-pi)|", abs(d(-pi, 1))), (f"|{name}'(pi)|", abs(d(pi, 1)))]
    if kind is ProblemKind.P:
        return [
            (f"|{name}(-pi) - {name}(pi)|", abs(f(-pi) - f(pi))),
            (f"|{name}'(-pi) - {name}'(pi)|", abs(d(-pi, 1) - d(pi, 1))),
        ]
    return [
        (f"|{name}(-pi) + {name}(pi)|", abs(f(-pi) + f(pi))),
        (f"|{name}'(-pi) + {name}'(pi)|", abs(d(-pi, 1) + d(pi, 1))),
    ]


def compatibility_check(phi, psi, kind, tol=1e-10):
    """Endpoint conditions required for the series solution of ``kind``.

    D: both data vanish at +-pi. N: both slopes vanish at +-pi. P: values and
    slopes match. AP: values and slopes are opposite.
    """
    kind = ProblemKind.parse(kind)
    conds = []
    for f, name in ((phi, "phi"), (psi, "psi")):
        for label, mismatch in _endpoint_conditions(f, name, kind):
            conds.append(Condition(label, float(mismatch), bool(mismatch <= tol)))
    return CompatibilityReport(kind, tol, tuple(conds))


# -- decay ----------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    slope: float
    k_lo: int
    k_hi: int
    points: int


MIN_DECAY_POINTS = 8


def _fit_family(ks, vals, floor):
    ks = np.asarray(ks)
    vals = np.abs(np.asarray(vals, dtype=float))
    keep = ks >= 1
    ks, vals = ks[keep], vals[keep]
    if ks.size < MIN_DECAY_POINTS:
        return None
    k_hi = int(ks.max())
    lo = 1
    while lo <= k_hi:
        sel = ks >= lo
        if sel.sum() < MIN_DECAY_POINTS:
            return None
        if np.all(vals[sel] > floor):
            slope = np.polyfit(np.log(ks[sel]), np.log(vals[sel]), 1)[0]
            return DecayFit(float(slope), int(ks[sel].min()), k_hi, int(sel.sum()))
        lo *= 2
    return None


def decay_estimate(table, floor=None):
    """Fitted exponent ``s`` in ``|c_k| ~ k^s`` for each family.

    The fit uses the largest dyadic tail window ``[2^j, k_max]`` in which every
    coefficient exceeds ``floor`` (default: the larger of 10x the quadrature
    error and 1e-13 times the largest coefficient). Families without at least
    eight such coefficients map to ``None``; if neither family qualifies
    :class:`InsufficientData` is raised.
    """
    if isinstance(table, CoefficientTable):
        families = {p: table.family(p) for p in (Parity.ODD, Parity.EVEN)}
        scale = max((abs(v) for v in table.values), default=0.0)
        default_floor = max(10.0 * table.quad_error, 1e-13 * scale)
    else:
        families = {Parity.parse(p): (list(ks), np.asarray(v)) for p, (ks, v) in table.items()}
        scale = max((float(np.max(np.abs(v))) for _, v in families.values() if len(v)), default=0.0)
        default_floor = 1e-13 * scale
    floor = default_floor if floor is None else floor
    out = {p: _fit_family(ks, vals, floor) for p, (ks, vals) in families.items()}
    if all(v is None for v in out.values()):
        raise InsufficientData(f"need at least {MIN_DECAY_POINTS} nonzero coefficients in a family")
    return out


class SmoothnessWarning(UserWarning):
    """Measured coefficient decay is slower than a stated smoothness class."""


def check_decay_class(table, order):
    """Warn if some family decays slower than ``k^-(order) + 0.3``.

    ``order`` is the stated class ``m + delta``. The check is advisory only:
    returns True when every fitted family is consistent.
    """
    try:
        fits = decay_estimate(table)
    except InsufficientData:
        return True
    ok = True
    for parity, fit in fits.items():
        if fit is not None and fit.slope > -order + 0.3:
            ok = False
            warnings.warn(
                f"{parity.value} coefficients decay like k^{fit.slope:.2f}, slower than "
                f"the stated class {order:g} suggests",
                SmoothnessWarning,
                stacklevel=2,
            )
    return ok
