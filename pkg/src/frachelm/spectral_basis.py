"""Eigenpairs of the involution-perturbed Sturm-Liouville problem.

    Y''(y) - eps Y''(-y) + lambda Y(y) = 0,   -pi < y < pi,

under Dirichlet (D), Neumann (N), periodic (P) or anti-periodic (AP)
conditions. On ``sin(w y)`` the reflected term flips sign and on ``cos(w y)``
it does not, so the sine (odd) family has ``lambda = (1 + eps) w^2`` and the
cosine (even) family ``lambda = (1 - eps) w^2``. Only the admissible
wavenumbers ``w`` depend on the boundary conditions:

======  ============  ===========  =====  =====
kind    odd w         even w       odd k  even k
======  ============  ===========  =====  =====
D       k             k - 1/2      >= 1   >= 1
N       k + 1/2       k            >= 0   >= 0
P       k             k            >= 1   >= 0
AP      k + 1/2       k + 1/2      >= 0   >= 0
======  ============  ===========  =====  =====

All eigenfunctions are L2(-pi, pi)-normalised: ``sin(w y)/sqrt(pi)``,
``cos(w y)/sqrt(pi)``, and ``1/sqrt(2 pi)`` for the constant mode.

Modes are addressed by ``(kind, parity, k)``. The interleaved numbering
``n`` used when writing the series as a single sum is available through
:func:`interleaved_index` and :func:`mode_from_interleaved`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenPair",
    "EpsOutOfRange",
    "Eigenfunction",
    "ModeIndex",
    "Parity",
    "ProblemKind",
    "eigenfunction",
    "eigenpair",
    "eigenvalue",
    "enumerate_modes",
    "first_modes",
    "interleaved_index",
    "k_min",
    "mode_from_interleaved",
    "mu_of_mode",
    "operator_apply",
    "wavenumber",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class EpsOutOfRange(ValueError):
    """|eps| >= 1: the cosine or sine family collapses."""


class ProblemKind(str, enum.Enum):
    D = "D"
    N = "N"
    P = "P"
    AP = "AP"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        aliases = {
            "DIRICHLET": "D",
            "NEUMANN": "N",
            "PERIODIC": "P",
            "ANTIPERIODIC": "AP",
            "ANTI-PERIODIC": "AP",
            "ANTI_PERIODIC": "AP",
        }
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown problem kind {value!r}; expected one of D, N, P, AP") from None

    @property
    def family(self):
        """Family number 1..4 (D, N, P, AP) of the interleaved numbering."""
        return {"D": 1, "N": 2, "P": 3, "AP": 4}[self.value]


class Parity(str, enum.Enum):
    ODD = "odd"
    EVEN = "even"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"sin": "odd", "sine": "odd", "cos": "even", "cosine": "even"}
        return cls(aliases.get(key, key))


_K_MIN = {
    (ProblemKind.D, Parity.ODD): 1,
    (ProblemKind.D, Parity.EVEN): 1,
    (ProblemKind.N, Parity.ODD): 0,
    (ProblemKind.N, Parity.EVEN): 0,
    (ProblemKind.P, Parity.ODD): 1,
    (ProblemKind.P, Parity.EVEN): 0,
    (ProblemKind.AP, Parity.ODD): 0,
    (ProblemKind.AP, Parity.EVEN): 0,
}

# wavenumber = k + shift
_SHIFT = {
    (ProblemKind.D, Parity.ODD): 0.0,
    (ProblemKind.D, Parity.EVEN): -0.5,
    (ProblemKind.N, Parity.ODD): 0.5,
    (ProblemKind.N, Parity.EVEN): 0.0,
    (ProblemKind.P, Parity.ODD): 0.0,
    (ProblemKind.P, Parity.EVEN): 0.0,
    (ProblemKind.AP, Parity.ODD): 0.5,
    (ProblemKind.AP, Parity.EVEN): 0.5,
}


def k_min(kind, parity):
    return _K_MIN[ProblemKind.parse(kind), Parity.parse(parity)]


@dataclass(frozen=True, order=True)
class ModeIndex:
    kind: ProblemKind
    parity: Parity
    k: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind.parse(self.kind))
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        if isinstance(self.k, bool) or int(self.k) != self.k:
            raise ValueError(f"k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        lo = _K_MIN[self.kind, self.parity]
        if self.k < lo:
            raise ValueError(f"{self.kind.value}-{self.parity.value} modes start at k={lo}, got k={self.k}")

    @property
    def is_constant(self):
        return self.parity is Parity.EVEN and self.wavenumber == 0.0

    @property
    def wavenumber(self):
        return self.k + _SHIFT[self.kind, self.parity]

    @property
    def norm_const(self):
        return 1.0 / _SQRT_2PI if self.is_constant else 1.0 / _SQRT_PI

    @property
    def label(self):
        return f"{self.kind.value}-{self.parity.value}-{self.k}"

    @classmethod
    def parse(cls, text, kind=None):
        """Parse ``"D-odd-3"`` or, with ``kind`` given, ``"odd-3"`` / ``"odd:3"``."""
        parts = [p for p in str(text).replace(":", "-").split("-") if p]
        if kind is not None and len(parts) == 2:
            parts = [ProblemKind.parse(kind).value, *parts]
        if len(parts) != 3:
            raise ValueError(f"cannot parse mode {text!r}; expected e.g. 'D-odd-3'")
        return cls(ProblemKind.parse(parts[0]), Parity.parse(parts[1]), int(parts[2]))


@dataclass(frozen=True)
class EigenPair:
    mode: ModeIndex
    eigenvalue: float
    frequency: float
    norm_const: float


def _check_eps(eps):
    if not (math.isfinite(eps) and abs(eps) < 1.0):
        raise EpsOutOfRange(f"|eps| must be < 1, got {eps}")


def wavenumber(mode):
    return mode.wavenumber


def eigenvalue(mode, eps):
    """``(1 + eps) w^2`` for the sine family, ``(1 - eps) w^2`` for cosines."""
    _check_eps(eps)
    w = mode.wavenumber
    factor = 1.0 + eps if mode.parity is Parity.ODD else 1.0 - eps
    return factor * w * w


def eigenpair(mode, eps):
    return EigenPair(mode, eigenvalue(mode, eps), mode.wavenumber, mode.norm_const)


def mu_of_mode(mode, eps, c):
    """Modal frequency ``sqrt(lambda + c^2)``."""
    return math.sqrt(eigenvalue(mode, eps) + float(c) ** 2)


@dataclass(frozen=True)
class Eigenfunction:
    """Normalised eigenfunction; evaluation and derivatives are vectorised."""

    mode: ModeIndex

    def __call__(self, y):
        return self.derivative(y, 0)

    def derivative(self, y, order=1):
        if order < 0:
            raise ValueError("order must be >= 0")
        y = np.asarray(y, dtype=float)
        m = self.mode
        w = m.wavenumber
        c = m.norm_const
        if m.is_constant:
            out = np.full_like(y, c if order == 0 else 0.0)
            return float(out) if out.ndim == 0 else out
        # d^n/dy^n sin(wy) = w^n sin(wy + n pi/2), likewise for cos;
        # the phase shift is applied exactly via a lookup
        phase = order % 4
        wy = w * y
        s, co = np.sin(wy), np.cos(wy)
        if m.parity is Parity.ODD:
            base = (s, co, -s, -co)[phase]
        else:
            base = (co, -s, -co, s)[phase]
        out = c * w**order * base
        return float(out) if out.ndim == 0 else out


def eigenfunction(mode):
    return Eigenfunction(mode)


def operator_apply(mode, eps):
    """``y -> Y''(y) - eps Y''(-y) + lambda Y(y)``, identically zero."""
    lam = eigenvalue(mode, eps)
    f = Eigenfunction(mode)

    def residual(y):
        y = np.asarray(y, dtype=float)
        out = f.derivative(y, 2) - eps * f.derivative(-y, 2) + lam * f(y)
        return out

    return residual


def enumerate_modes(kind, n_max):
    """Modes with ``k <= n_max``: the odd family in ascending k, then the even."""
    kind = ProblemKind.parse(kind)
    modes = []
    for parity in (Parity.ODD, Parity.EVEN):
        modes.extend(ModeIndex(kind, parity, k) for k in range(_K_MIN[kind, parity], n_max + 1))
    return modes


def first_modes(kind, count):
    """The first ``count`` modes of each family (odd family first)."""
    kind = ProblemKind.parse(kind)
    modes = []
    for parity in (Parity.ODD, Parity.EVEN):
        lo = _K_MIN[kind, parity]
        modes.extend(ModeIndex(kind, parity, k) for k in range(lo, lo + count))
    return modes


def interleaved_index(mode):
    """``(n, family)`` with sines on odd n and cosines on even n.

    D and P: odd k -> 2k - 1, even k -> 2k. N and AP: odd k -> 2k + 1,
    even k -> 2k.
    """
    if mode.parity is Parity.EVEN:
        n = 2 * mode.k
    elif mode.kind in (ProblemKind.D, ProblemKind.P):
        n = 2 * mode.k - 1
    else:
        n = 2 * mode.k + 1
    return n, mode.kind.family


def mode_from_interleaved(n, family):
    """Inverse of :func:`interleaved_index`."""
    kinds = {1: ProblemKind.D, 2: ProblemKind.N, 3: ProblemKind.P, 4: ProblemKind.AP}
    if family not in kinds:
        raise ValueError(f"family must be 1..4, got {family}")
    kind = kinds[family]
    n = int(n)
    if n % 2 == 0:
        return ModeIndex(kind, Parity.EVEN, n // 2)
    if kind in (ProblemKind.D, ProblemKind.P):
        return ModeIndex(kind, Parity.ODD, (n + 1) // 2)
    return ModeIndex(kind, Parity.ODD, (n - 1) // 2)
