"""Domain-agnostic local-energy machinery.

For an operator H with a nonnegative eigenvector, the local energy of a
test function phi is the pointwise ratio E_phi(q) = Re(H phi)(q) / Re(phi)(q).
Its infimum and supremum bracket the eigenvalue attached to the positive
eigenvector, so every admissible phi yields a rigorous two-sided bound.
This module holds the profile container, its extrema, the Rayleigh-quotient
comparison and the optimization of the bounds over a parameterized family
of test functions (maximize the infimum, minimize the supremum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np
from scipy.optimize import minimize

UNDEFINED = math.nan
"""Marker for sites where the local energy is undefined (Re(phi) = 0)."""


class EmptyProfile(ValueError):
    """Profile has no sites."""


class AllUndefined(ValueError):
    """Every profile value carries the undefined marker."""


class DimensionMismatch(ValueError):
    """Vector lengths do not agree."""


class NonPositiveTestVector(ValueError):
    """A test vector required to be strictly positive is not."""


@dataclass(frozen=True)
class LocalEnergyProfile:
    """Sampled local-energy values over a finite ordered domain.

    ``values[i]`` is the local energy at ``sites[i]``; entries may be
    +-inf or the ``UNDEFINED`` (NaN) marker where the test function's
    real part vanishes.
    """

    sites: tuple
    values: tuple

    def __init__(self, sites: Sequence, values: Sequence[float]):
        sites = tuple(sites)
        values = tuple(float(v) for v in values)
        if len(sites) == 0:
            raise EmptyProfile("profile needs at least one site")
        if len(sites) != len(values):
            raise DimensionMismatch(
                f"{len(sites)} sites but {len(values)} values")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class BoundsResult:
    """Enclosure [lower, upper] of the eigenvalue, with extremizer sites.

    ``rigorous`` is True when the domain was enumerated exactly and False
    when the profile only samples a continuum.
    """

    lower: float
    upper: float
    argmin: Any
    argmax: Any
    rigorous: bool = True

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def encloses(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


@dataclass(frozen=True)
class TestFamily:
    """Parameterized family of positive test functions over a box.

    ``evaluate(lam)`` must return, for any parameter vector inside ``box``,
    a strictly positive test function in whatever representation the
    accompanying profile builder consumes.
    """

    dimension_lambda: int
    box: tuple
    evaluate: Callable[[np.ndarray], Any]

    __test__ = False  # not a pytest class, despite the name

    def __post_init__(self):
        if self.dimension_lambda < 1:
            raise ValueError("dimension_lambda must be >= 1")
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if len(box) != self.dimension_lambda:
            raise DimensionMismatch("box must have one interval per parameter")
        for lo, hi in box:
            if not lo <= hi:
                raise ValueError(f"empty box interval [{lo}, {hi}]")
        object.__setattr__(self, "box", box)


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 1000
    tolerance: float = 1e-8
    restarts: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be nonnegative")


@dataclass
class OptimizationOutcome:
    """Best parameter found, the bound it certifies, and the improvement history.

    ``bound`` is the extremum over every visited parameter, so it is a valid
    bound whenever the profile domain is exact, regardless of convergence.
    ``stalled`` only records that no start satisfied the simplex stopping
    test; it is a warning, not an error.
    """

    lambda_star: np.ndarray
    bound: float
    best_history: list = field(default_factory=list)
    stalled: bool = False

    def __iter__(self):  # allows  lam, bound = optimize_lower(...)
        return iter((self.lambda_star, self.bound))


def extrema(profile: LocalEnergyProfile, rigorous: bool = True) -> BoundsResult:
    """Infimum and supremum of a profile, with first-attaining sites.

    Undefined (NaN) entries are skipped; +-inf entries participate and
    dominate the corresponding extremum. Ties resolve to the lowest site
    index so results are deterministic.
    """
    lower = math.inf
    upper = -math.inf
    argmin = argmax = None
    for site, value in zip(profile.sites, profile.values):
        if math.isnan(value):
            continue
        if value < lower:
            lower, argmin = value, site
        if value > upper:
            upper, argmax = value, site
    if argmin is None:
        raise AllUndefined("every profile value is undefined")
    return BoundsResult(lower, upper, argmin, argmax, rigorous)


def profile_from_operator(apply_h: Callable[[np.ndarray], np.ndarray],
                          phi: Sequence[float],
                          sites: Sequence | None = None) -> LocalEnergyProfile:
    """Profile Re(H phi)/Re(phi) for an operator given by its action.

    Re(phi) must be nonnegative; sites where it vanishes are marked
    undefined rather than divided by zero.
    """
    phi = np.asarray(phi)
    re_phi = np.real(phi).astype(float)
    if np.any(re_phi < 0):
        raise NonPositiveTestVector("Re(phi) must be nonnegative")
    h_phi = np.asarray(apply_h(phi))
    if h_phi.shape != phi.shape:
        raise DimensionMismatch("apply_h changed the vector length")
    values = np.full(len(phi), UNDEFINED)
    ok = re_phi > 0
    values[ok] = np.real(h_phi)[ok] / re_phi[ok]
    if sites is None:
        sites = range(len(phi))
    return LocalEnergyProfile(sites, values)


def rayleigh_quotient(apply_h: Callable[[np.ndarray], np.ndarray],
                      phi: Sequence[float],
                      weights: Sequence[float]) -> float:
    """<phi|H phi> / <phi|phi> under the weighted inner product.

    The weights are the per-site measure; ``apply_h`` is assumed symmetric
    with respect to it. The profile supremum always dominates this value.
    """
    phi = np.asarray(phi, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if phi.shape != weights.shape:
        raise DimensionMismatch("phi and weights must have equal length")
    if np.any(phi <= 0):
        raise NonPositiveTestVector("phi must be strictly positive")
    if np.any(weights <= 0):
        raise ValueError("weights must be strictly positive")
    h_phi = np.asarray(apply_h(phi))
    if h_phi.shape != phi.shape:
        raise DimensionMismatch("apply_h changed the vector length")
    num = float(np.real(np.sum(weights * phi * h_phi)))
    den = float(np.sum(weights * phi * phi))
    return num / den


def _optimize(family: TestFamily,
              build_profile: Callable[[Any], LocalEnergyProfile],
              config: OptimizerConfig,
              sense: str) -> OptimizationOutcome:
    """Multi-start Nelder-Mead over the parameter box.

    sense="lower": maximize the profile infimum; sense="upper": minimize
    the supremum. Every evaluated parameter is recorded, and the returned
    bound is the best over all of them (merge order: better bound first,
    then earlier evaluation), so optimizer convergence is irrelevant to
    validity.
    """
    box = np.asarray(family.box, dtype=float)
    lo, hi = box[:, 0], box[:, 1]
    rng = np.random.default_rng(config.seed)
    starts = [0.5 * (lo + hi)]
    starts += [rng.uniform(lo, hi) for _ in range(config.restarts)]

    maximize = sense == "lower"
    state = {"best": -math.inf if maximize else math.inf, "lam": starts[0].copy()}
    history: list[float] = []

    def objective(lam):
        lam = np.clip(np.asarray(lam, dtype=float), lo, hi)
        bounds = extrema(build_profile(family.evaluate(lam)))
        value = bounds.lower if maximize else bounds.upper
        better = value > state["best"] if maximize else value < state["best"]
        if better:
            state["best"] = value
            state["lam"] = lam.copy()
        history.append(state["best"])
        return -value if maximize else value

    degenerate = bool(np.all(hi - lo <= 0))
    any_converged = False
    if degenerate:
        objective(lo)
        any_converged = True
    else:
        for x0 in starts:
            result = minimize(
                objective, x0, method="Nelder-Mead",
                bounds=list(zip(lo, hi)),
                options={"maxiter": config.max_iterations,
                         "maxfev": 4 * config.max_iterations,
                         "fatol": config.tolerance,
                         "xatol": 1e-10})
            any_converged = any_converged or bool(result.success)
    return OptimizationOutcome(lambda_star=state["lam"], bound=state["best"],
                               best_history=history, stalled=not any_converged)


def optimize_lower(family: TestFamily,
                   build_profile: Callable[[Any], LocalEnergyProfile],
                   config: OptimizerConfig = OptimizerConfig()) -> OptimizationOutcome:
    """Best lower bound over the family: max over lambda of inf E_phi."""
    return _optimize(family, build_profile, config, "lower")


def optimize_upper(family: TestFamily,
                   build_profile: Callable[[Any], LocalEnergyProfile],
                   config: OptimizerConfig = OptimizerConfig()) -> OptimizationOutcome:
    """Best upper bound over the family: min over lambda of sup E_phi."""
    return _optimize(family, build_profile, config, "upper")


def downgrade_rigor(bounds: BoundsResult) -> BoundsResult:
    """Same enclosure, stamped as sampled rather than exactly enumerated."""
    return replace(bounds, rigorous=False)
