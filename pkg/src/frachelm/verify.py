"""Independent checks of assembled solutions.

The central tool is the L1 discretisation of the Caputo derivative on a
uniform grid ``x_n = n h``, ``h = 1/M``::

    (D^a f)(x_n) ~ h^-a / Gamma(2 - a) * sum_{j<n} b_j (f_{n-j} - f_{n-j-1}),
    b_j = (j + 1)^(1-a) - j^(1-a).

The x-part of the equation is the *composition* ``D^a D^a`` and is always
discretised as two successive L1 applications, never as a single operator
of order ``2a``.

Solutions behave like ``x^a`` near ``x = 0``. The first L1 pass returns 0 at
``x_0`` by construction while the true ``D^a u(0)`` is generally nonzero,
so :func:`composed_caputo` supplies that value from a local fit
``f ~ f_0 + B x^a + C x^2a`` through the first three nodes. Residual
statistics additionally skip the layer ``x < RESIDUAL_EXCLUSION_X`` where
the scheme's reduced accuracy dominates; the skipped zone is reported.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma

from . import _core
from .frac_kernels import KernelParams, kernel_C, kernel_S
from .quadrature import QuadSpec
from .solver import evaluate_on
from .spectral_basis import Eigenfunction, ProblemKind, first_modes

__all__ = [
    "AsymmetricGrid",
    "BoundaryReport",
    "CaputoGrid",
    "GramReport",
    "GridTooCoarse",
    "KernelBoundsReport",
    "LadderRow",
    "RESIDUAL_EXCLUSION_X",
    "ResidualReport",
    "boundary_report",
    "caputo_l1",
    "composed_caputo",
    "excluded_nodes",
    "gram_check",
    "helmholtz_separation",
    "kernel_bounds_check",
    "observed_orders",
    "pde_residual",
    "residual_ladder",
]

RESIDUAL_EXCLUSION_X = 0.1
MIN_EXCLUDED_NODES = 2
BOUND_TOL = 1e-9


class GridTooCoarse(ValueError):
    pass


class AsymmetricGrid(ValueError):
    pass


@dataclass(frozen=True)
class CaputoGrid:
    """Uniform nodes ``0 = x_0 < ... < x_M = 1``."""

    M: int
    alpha: float

    def __post_init__(self):
        if self.M < 4:
            raise GridTooCoarse(f"need M >= 4 intervals, got {self.M}")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def h(self):
        return 1.0 / self.M

    @property
    def x(self):
        return np.linspace(0.0, 1.0, self.M + 1)


def _weights(alpha, m):
    j = np.arange(m, dtype=float)
    b = (j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha)
    return np.ascontiguousarray(b)


def _columns(samples):
    f = np.asarray(samples, dtype=float)
    if f.ndim == 1:
        return f[:, None], True
    return f.reshape(f.shape[0], -1), False


def _grid_check(n_nodes):
    if n_nodes - 1 < 4:
        raise GridTooCoarse(f"need M >= 4 intervals, got {n_nodes - 1}")


def caputo_l1(samples, alpha, threads=1):
    """L1 Caputo derivative of order ``alpha`` at every node.

    ``samples`` holds f on the uniform grid of [0, 1] along axis 0 (extra
    axes are independent lines). The value at ``x_0`` is 0. At ``alpha = 1``
    the ordinary derivative is returned (second-order differences).
    """
    f, flat = _columns(samples)
    _grid_check(f.shape[0])
    m = f.shape[0] - 1
    h = 1.0 / m
    if alpha == 1.0:
        out = np.gradient(f, h, axis=0, edge_order=2)
        return out[:, 0] if flat else out.reshape(np.shape(samples))
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    w = _weights(alpha, m) * (h**-alpha / gamma(2.0 - alpha))
    diffs = np.ascontiguousarray(np.diff(f, axis=0).T)

    def line(i):
        return _core.l1_convolve(diffs[i], w)

    if threads > 1 and diffs.shape[0] > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cols = list(pool.map(line, range(diffs.shape[0])))
    else:
        cols = [line(i) for i in range(diffs.shape[0])]
    out = np.array(cols).T
    return out[:, 0] if flat else out.reshape(np.shape(samples))


def _start_value(f, alpha, h):
    # D^a f(0) from f ~ f0 + B x^a + C x^2a through nodes 0, 1, 2
    d1 = f[1] - f[0]
    d2 = f[2] - f[0]
    r = 2.0**alpha
    b = (d2 - r * r * d1) / (h**alpha * (r - r * r))
    return b * gamma(1.0 + alpha)


def composed_caputo(samples, alpha, threads=1):
    """``D^a D^a f`` on the grid by two L1 passes.

    Between the passes the value at ``x_0`` is replaced by the fitted
    ``D^a f(0)`` (see module notes). At ``alpha = 1`` this is the centred
    second difference, one-sided at the ends. The first two interior nodes
    are the least reliable; :func:`pde_residual` skips at least those.
    """
    f, flat = _columns(samples)
    _grid_check(f.shape[0])
    m = f.shape[0] - 1
    h = 1.0 / m
    if alpha == 1.0:
        out = np.empty_like(f)
        out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h)
        out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / (h * h)
    else:
        g = caputo_l1(f, alpha, threads)
        g[0] = _start_value(f, alpha, h)
        out = caputo_l1(g, alpha, threads)
    return out[:, 0] if flat else out.reshape(np.shape(samples))


# -- residuals ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryReport:
    """Maximum boundary mismatches on the sampled grid."""

    x0_error: float
    x1_error: float
    y_conditions: dict

    @property
    def max_error(self):
        return max([self.x0_error, self.x1_error, *self.y_conditions.values()])

    def to_dict(self):
        return {"x0_error": self.x0_error, "x1_error": self.x1_error, "y_conditions": dict(self.y_conditions)}


@dataclass(frozen=True)
class ResidualReport:
    """Residual of the discretised equation on interior probes.

    ``terms`` holds the max magnitude of each term (fractional, u_yy,
    involution, c^2 u) over the probes. Probes with ``x < excluded_below``
    are skipped.
    """

    max_abs_residual: float
    l2_residual: float
    nx: int
    ny: int
    excluded_below: float
    excluded_nodes: int
    terms: dict
    boundary: BoundaryReport | None = None

    def to_dict(self):
        d = {
            "max_abs_residual": self.max_abs_residual,
            "l2_residual": self.l2_residual,
            "nx": self.nx,
            "ny": self.ny,
            "excluded_below": self.excluded_below,
            "excluded_nodes": self.excluded_nodes,
            "terms": dict(self.terms),
        }
        if self.boundary is not None:
            d["boundary"] = self.boundary.to_dict()
        return d


def _y_nodes(ny):
    if np.ndim(ny) == 0:
        n = int(ny)
        if n < 5:
            raise GridTooCoarse("need at least 5 y nodes")
        return np.linspace(-math.pi, math.pi, n)
    y = np.asarray(ny, dtype=float)
    if y.ndim != 1 or y.size < 5 or not np.all(np.diff(y) > 0):
        raise ValueError("y nodes must be a strictly increasing 1-D array with >= 5 entries")
    if np.max(np.abs(y + y[::-1])) > 1e-14 * math.pi:
        raise AsymmetricGrid("y grid must be symmetric about 0 so that -y is a grid node")
    return y


def excluded_nodes(alpha, nx):
    """Number of leading x nodes (after x_0) skipped in residual statistics."""
    h = 1.0 / (nx - 1)
    zone = 0 if alpha == 1.0 else math.ceil(RESIDUAL_EXCLUSION_X / h - 1e-9)
    return max(MIN_EXCLUDED_NODES, zone)


def pde_residual(sol, nx, ny, threads=1, field_values=None, with_boundary=True):
    """Residual of ``D^a D^a u + u_yy(x,y) - eps u_yy(x,-y) - c^2 u`` on the grid.

    ``nx`` is the x node count (``M = nx - 1``); ``ny`` is either a node count
    for the uniform grid on [-pi, pi] or explicit nodes, which must be
    symmetric about 0. ``field_values`` replaces the solution samples (used
    for negative controls).
    """
    if nx < 5:
        raise GridTooCoarse("need nx >= 5")
    spec = sol.spec
    x = np.linspace(0.0, 1.0, nx)
    y = _y_nodes(ny)
    u = evaluate_on(sol, x, y, threads).values if field_values is None else np.asarray(field_values)
    hy = y[1] - y[0]
    frac = composed_caputo(u, spec.alpha, threads)
    uyy = np.full_like(u, np.nan)
    uyy[:, 1:-1] = (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / (hy * hy)
    mirror = uyy[:, ::-1]
    c2u = spec.c**2 * u
    res = frac + uyy - spec.eps * mirror - c2u

    skip = excluded_nodes(spec.alpha, nx)
    rows = slice(1 + skip, nx - 1)
    cols = slice(1, y.size - 1)
    probe = res[rows, cols]
    if probe.size == 0:
        raise GridTooCoarse("no interior probes left after exclusion")
    hx = 1.0 / (nx - 1)
    terms = {
        "fractional": float(np.max(np.abs(frac[rows, cols]))),
        "u_yy": float(np.max(np.abs(uyy[rows, cols]))),
        "involution": float(np.max(np.abs(spec.eps * mirror[rows, cols]))),
        "c2u": float(np.max(np.abs(c2u[rows, cols]))),
    }
    return ResidualReport(
        max_abs_residual=float(np.max(np.abs(probe))),
        l2_residual=float(math.sqrt(np.sum(probe**2) * hx * hy)),
        nx=nx,
        ny=y.size,
        excluded_below=float(x[1 + skip]),
        excluded_nodes=skip,
        terms=terms,
        boundary=boundary_report(sol, spec, y, x=x, threads=threads) if with_boundary else None,
    )


def boundary_report(sol, spec=None, ny=257, x=None, threads=1):
    """Boundary mismatches: ``u(0, y) - phi``, ``u(1, y) - psi`` and the y-side conditions.

    The y-side conditions are evaluated with analytic y-derivatives of the
    eigenfunctions at every x node: D ``u(x, +-pi)``, N ``u_y(x, +-pi)``,
    P ``u(x,-pi) - u(x,pi)`` and the same for ``u_y``, AP the sums.
    """
    spec = spec or sol.spec
    y = _y_nodes(ny)
    if y.size < 16:
        raise GridTooCoarse("boundary report needs ny >= 16")
    x = np.linspace(0.0, 1.0, 33) if x is None else np.asarray(x, dtype=float)
    edges = evaluate_on(sol, [0.0, 1.0], y, threads).values
    phi = np.asarray(spec.phi(y), dtype=float)
    psi = np.asarray(spec.psi(y), dtype=float)
    x0 = float(np.max(np.abs(edges[0] - phi)))
    x1 = float(np.max(np.abs(edges[1] - psi)))

    ends = np.array([-math.pi, math.pi])
    u = evaluate_on(sol, x, ends, threads).values
    uy = evaluate_on(sol, x, ends, threads, y_derivative=1).values
    kind = spec.kind
    if kind is ProblemKind.D:
        cond = {"u(x,-pi)": np.abs(u[:, 0]), "u(x,pi)": np.abs(u[:, 1])}
    elif kind is ProblemKind.N:
        cond = {"u_y(x,-pi)": np.abs(uy[:, 0]), "u_y(x,pi)": np.abs(uy[:, 1])}
    elif kind is ProblemKind.P:
        cond = {"u(x,-pi)-u(x,pi)": np.abs(u[:, 0] - u[:, 1]), "u_y(x,-pi)-u_y(x,pi)": np.abs(uy[:, 0] - uy[:, 1])}
    else:
        cond = {"u(x,-pi)+u(x,pi)": np.abs(u[:, 0] + u[:, 1]), "u_y(x,-pi)+u_y(x,pi)": np.abs(uy[:, 0] + uy[:, 1])}
    return BoundaryReport(x0, x1, {k: float(np.max(v)) for k, v in cond.items()})


@dataclass(frozen=True)
class LadderRow:
    level: int
    h: float
    max_residual: float
    observed_order: float | None


def observed_orders(hs, errors):
    """``log(e_{i-1}/e_i) / log(h_{i-1}/h_i)``; None for the first level or zero errors."""
    out = [None]
    for i in range(1, len(errors)):
        if errors[i] > 0.0 and errors[i - 1] > 0.0:
            out.append(math.log(errors[i - 1] / errors[i]) / math.log(hs[i - 1] / hs[i]))
        else:
            out.append(None)
    return out


def residual_ladder(sol, levels=(32, 64, 128, 256), threads=1):
    """Residual max-norm over refinement levels ``M`` (``nx = M + 1``, ``ny = M + 1``)."""
    res = [pde_residual(sol, m + 1, m + 1, threads, with_boundary=False).max_abs_residual for m in levels]
    hs = [1.0 / m for m in levels]
    orders = observed_orders(hs, res)
    return [LadderRow(m, h, r, o) for m, h, r, o in zip(levels, hs, res, orders)]


# -- kernel bounds and orthonormality ---------------------------------------------


@dataclass(frozen=True)
class KernelBoundsReport:
    passed: bool
    violations: int
    min_C: float
    max_C: float
    min_S: float
    max_S: float
    worst: tuple  # (kernel, alpha, mu, t, value)
    nonfinite: int = 0


def kernel_bounds_check(alphas, mus, samples=1000, tol=BOUND_TOL):
    """Scan ``C`` and ``S`` on ``samples`` points of [0, 1] for every (alpha, mu)."""
    if samples < 100:
        raise ValueError("samples must be >= 100")
    t = np.linspace(0.0, 1.0, samples)
    viol = 0
    bad = 0
    stats = {"C": [math.inf, -math.inf], "S": [math.inf, -math.inf]}
    worst = (None, None, None, None, 0.0)
    worst_excess = -math.inf
    for a in alphas:
        for mu in mus:
            p = KernelParams(a, mu)
            for name, vals in (("C", kernel_C(p, t)), ("S", kernel_S(p, t))):
                finite = np.isfinite(vals)
                bad += int(np.sum(~finite))
                v = np.where(finite, vals, 0.5)
                stats[name][0] = min(stats[name][0], float(v.min()))
                stats[name][1] = max(stats[name][1], float(v.max()))
                excess = np.maximum(-v, v - 1.0)
                viol += int(np.sum(excess > tol))
                i = int(np.argmax(excess))
                if excess[i] > worst_excess:
                    worst_excess = float(excess[i])
                    worst = (name, a, mu, float(t[i]), float(v[i]))
    return KernelBoundsReport(
        passed=viol == 0 and bad == 0,
        violations=viol,
        min_C=stats["C"][0],
        max_C=stats["C"][1],
        min_S=stats["S"][0],
        max_S=stats["S"][1],
        worst=worst,
        nonfinite=bad,
    )


@dataclass(frozen=True)
class GramReport:
    kind: ProblemKind
    n_per_family: int
    max_offdiag: float
    max_diag_dev: float
    matrix: np.ndarray = field(repr=False)

    @property
    def max_deviation(self):
        return max(self.max_offdiag, self.max_diag_dev)


def gram_check(kind, n, quad=None):
    """Gram matrix of the first ``n`` modes of each family under quadrature."""
    kind = ProblemKind.parse(kind)
    modes = first_modes(kind, n)
    w_max = max(m.wavenumber for m in modes)
    quad = quad or QuadSpec.for_wavenumber(2.0 * w_max, nodes_per_oscillation=4)
    quad.check_aliasing(w_max)
    y, w = quad.rule()
    vals = np.array([Eigenfunction(m)(y) for m in modes])
    g = (vals * w) @ vals.T
    dev = g - np.eye(len(modes))
    off = dev - np.diag(np.diag(dev))
    return GramReport(
        kind,
        n,
        float(np.max(np.abs(off))) if len(modes) > 1 else 0.0,
        float(np.max(np.abs(np.diag(dev)))),
        g,
    )


def helmholtz_separation(m, c, x, y):
    """``sin(m y) sinh(nu (1 - x)) / sinh(nu)`` with ``nu = sqrt(m^2 + c^2)``.

    The classical (alpha = 1, eps = 0) Dirichlet solution for ``phi = sin(m y)``,
    ``psi = 0``. Returned on the tensor grid ``x`` by ``y``.
    """
    nu = math.sqrt(m * m + c * c)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.outer(np.sinh(nu * (1.0 - x)) / np.sinh(nu), np.sin(m * y))

