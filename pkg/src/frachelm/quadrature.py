"""Composite Gauss-Legendre quadrature on [-pi, pi]."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = ["AliasingRisk", "QuadSpec", "gauss_legendre"]

# below this many nodes per oscillation of the integrand a warning is raised
MIN_NODES_PER_OSCILLATION = 4


class AliasingRisk(UserWarning):
    """Too few quadrature nodes for the oscillation of the integrand."""


@functools.lru_cache(maxsize=64)
def gauss_legendre(order):
    """Read-only Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@dataclass(frozen=True)
class QuadSpec:
    """``panels`` equal panels on [-pi, pi] with ``order`` nodes each."""

    panels: int = 8
    order: int = 32

    def __post_init__(self):
        if self.panels < 1 or self.order < 1:
            raise ValueError("panels and order must be >= 1")

    @property
    def nodes(self):
        return self.panels * self.order

    @classmethod
    def for_wavenumber(cls, w_max, nodes_per_oscillation=8, order=32, min_panels=4):
        """Enough panels that ``w_max`` oscillations get the requested density.

        ``sin(w y)`` completes ``w`` periods on [-pi, pi], so the node count
        is ``nodes_per_oscillation * w_max`` rounded up to whole panels.
        """
        need = nodes_per_oscillation * max(float(w_max), 1.0)
        panels = max(min_panels, math.ceil(need / order))
        return cls(panels, order)

    def refined(self):
        return QuadSpec(2 * self.panels, self.order)

    def rule(self):
        """Nodes and weights on [-pi, pi]."""
        return _rule(self.panels, self.order)

    def check_aliasing(self, w_max):
        """Warn if fewer than four nodes fall on each oscillation of ``w_max``."""
        if w_max > 0 and self.nodes < MIN_NODES_PER_OSCILLATION * w_max:
            warnings.warn(
                f"{self.nodes} quadrature nodes for wavenumber {w_max:g}: fewer than "
                f"{MIN_NODES_PER_OSCILLATION} nodes per oscillation",
                AliasingRisk,
                stacklevel=3,
            )
            return False
        return True

    def integrate(self, values):
        """Integral of samples taken at :meth:`rule` nodes (last axis)."""
        _, w = self.rule()
        return np.asarray(values, dtype=float) @ w


@functools.lru_cache(maxsize=64)
def _rule(panels, order):
    x, w = gauss_legendre(order)
    h = 2.0 * math.pi / panels
    left = -math.pi + h * np.arange(panels)
    nodes = (left[:, None] + 0.5 * h * (x[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * h * w, panels)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights
