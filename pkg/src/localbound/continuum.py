"""Grid-sampled local energies for continuum Schrodinger operators.

Convention here is H = -Laplacian + V (no 1/2m); the N-body module uses
-Laplacian/(2m) instead, and the two are never mixed. For an exact
eigenpair (V, phi) the profile V - (Laplacian phi)/phi is constant and
equals the eigenvalue; for anything else its grid extrema give bounds that
are only as good as the sampling, so they are reported rigorous=False. The
magnetized-hydrogen (Zeeman) local energy is available in closed form and
its supremum -1/2 + B/2 is an analytic, certified upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import BoundsResult, LocalEnergyProfile, downgrade_rigor, extrema


class NonPositiveTestFunction(ValueError):
    """Test function must be strictly positive on the grid."""


@dataclass(frozen=True)
class GridDomain:
    """Rectangular sampling lattice: per-axis (min, max, count), counts >= 2."""

    axes: tuple

    def __init__(self, axes: Sequence[tuple]):
        axes = tuple((float(lo), float(hi), int(count)) for lo, hi, count in axes)
        if not axes:
            raise ValueError("need at least one axis")
        for lo, hi, count in axes:
            if count < 2:
                raise ValueError("each axis needs at least 2 points")
            if not lo < hi:
                raise ValueError(f"axis range [{lo}, {hi}] is empty")
        object.__setattr__(self, "axes", axes)

    @property
    def dimension(self) -> int:
        return len(self.axes)

    def axis_points(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, count) for lo, hi, count in self.axes]

    def points(self) -> np.ndarray:
        """All grid points, shape (prod(counts), dimension), row-major."""
        mesh = np.meshgrid(*self.axis_points(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class ScalarField:
    """Pointwise field with an optional analytic Laplacian."""

    evaluate: Callable[[np.ndarray], float]
    laplacian: Optional[Callable[[np.ndarray], float]] = None


def local_energy_schrodinger(potential: ScalarField, phi: ScalarField,
                             grid: GridDomain) -> LocalEnergyProfile:
    """Profile V(x) - (Laplacian phi)(x) / phi(x) over the grid.

    The Laplacian must be supplied analytically; differentiating phi
    numerically here would contaminate the bounds.
    """
    if phi.laplacian is None:
        raise ValueError("phi needs an analytic laplacian")
    sites = []
    values = []
    for point in grid.points():
        value = phi.evaluate(point)
        if not value > 0:
            raise NonPositiveTestFunction(f"phi{tuple(point)} = {value}")
        sites.append(tuple(point))
        values.append(potential.evaluate(point) - phi.laplacian(point) / value)
    return LocalEnergyProfile(sites, values)


@dataclass(frozen=True)
class ZeemanPoint:
    """Cylindrical sample (rho >= 0, z) with field strength B >= 0."""

    rho: float
    z: float
    B: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be >= 0")
        if self.B < 0:
            raise ValueError("B must be >= 0")


def _zeeman_values(rho, z, b):
    """-1/2 + B/2 - rho^2 B / (2 sqrt(rho^2 + z^2)); the quotient is 0 at the
    origin (its limit along every path), handled by branching."""
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r_sq = rho * rho + z * z
    safe = np.where(r_sq > 0, r_sq, 1.0)
    quotient = np.where(r_sq > 0, rho * rho / np.sqrt(safe), 0.0)
    return -0.5 + 0.5 * b - 0.5 * b * quotient


def local_energy_zeeman(point: ZeemanPoint) -> float:
    """Local energy of exp(-sqrt(rho^2+z^2) - B rho^2/4) in the Zeeman
    Hamiltonian; bounded above by -1/2 + B/2, unbounded below as rho grows."""
    return float(_zeeman_values(point.rho, point.z, point.B))


def zeeman_profile(b: float, grid: GridDomain) -> LocalEnergyProfile:
    """Zeeman local energy sampled over a (rho, z) grid."""
    if grid.dimension != 2:
        raise ValueError("Zeeman grid must have (rho, z) axes")
    points = grid.points()
    values = _zeeman_values(points[:, 0], points[:, 1], b)
    return LocalEnergyProfile([tuple(p) for p in points], values)


def zeeman_upper_bound(b: float, grid: GridDomain) -> tuple[float, float]:
    """(analytic, sampled) upper bounds for the Zeeman ground energy.

    analytic = -1/2 + B/2 is the certified supremum of the local energy;
    sampled is the grid maximum, which never exceeds it and attains it
    exactly whenever the grid contains a rho = 0 point.
    """
    if b < 0:
        raise ValueError("B must be >= 0")
    analytic = -0.5 + 0.5 * b
    profile = zeeman_profile(b, grid)
    sampled = extrema(profile, rigorous=False).upper
    return analytic, sampled


def grid_extrema(profile: LocalEnergyProfile) -> BoundsResult:
    """Extrema of a sampled continuum profile, stamped rigorous=False."""
    return downgrade_rigor(extrema(profile))


def harmonic_oscillator_pair() -> tuple[ScalarField, ScalarField]:
    """Exact 1-d eigenpair V = x^2, phi = exp(-x^2/2); profile is 1."""
    potential = ScalarField(lambda x: float(x[0] ** 2))
    phi = ScalarField(lambda x: math.exp(-0.5 * x[0] ** 2),
                      lambda x: (x[0] ** 2 - 1.0) * math.exp(-0.5 * x[0] ** 2))
    return potential, phi


def hydrogen_pair(charge: float = 2.0) -> tuple[ScalarField, ScalarField]:
    """Exact 3-d s-state eigenpair for V = -charge/r under H = -Lap + V:
    phi = exp(-charge r / 2), eigenvalue -(charge/2)^2."""
    alpha = 0.5 * charge

    def radius(x):
        return math.sqrt(float(x @ x))

    potential = ScalarField(lambda x: -charge / radius(x))
    phi = ScalarField(
        lambda x: math.exp(-alpha * radius(x)),
        lambda x: (alpha ** 2 - 2.0 * alpha / radius(x)) * math.exp(-alpha * radius(x)))
    return potential, phi
