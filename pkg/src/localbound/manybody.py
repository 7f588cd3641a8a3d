"""N-body local energies and the vertex-angle cosine sum.

For N attractive unit-charge, unit-mass particles in d > 1 dimensions with
pair test functions exp(-r / (d-1)), the local energy collapses to

    E(config) = -(1/(d-1)^2) [ N(N-1)/2 + F(config) ]

where F is the sum of cos over all N(N-1)(N-2)/2 vertex angles (vertex i,
unordered pair {j, k}) of the configuration. F is invariant under Euclidean
isometries and dilations; its infimum over configurations gives an upper
energy bound (aligned points) and any upper bound on F, e.g. from clustering
into M-point subsets, gives a lower energy bound. The best known F maxima
for 5, 6 and 8 points (triangular bipyramid, octahedron, twisted squares)
are numerical conjectures reproduced here by multi-start gradient ascent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .core import OptimizerConfig


class CoincidentPoints(ValueError):
    """Two configuration points (nearly) coincide; angles are undefined."""


class UndefinedPairFunction(ValueError):
    """No pair function available (or it is invalid) at a realized distance."""


class InvalidClusterSize(ValueError):
    """Clustering requires N >= M >= 3."""


class InvalidSource(ValueError):
    """Unknown or inapplicable angular-density source."""


class NonPositiveS(ValueError):
    """The log-derivative envelope s must be positive."""


class UnknownName(ValueError):
    """Not a recognized named configuration."""


_COINCIDENCE_RTOL = 1e-12


# ---------------------------------------------------------------------------
# configurations and systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """N labeled points in R^d, d >= 2."""

    points: np.ndarray

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be an (N, d) array")
        n, d = pts.shape
        if n < 2:
            raise ValueError("need at least two points")
        if d < 2:
            raise ValueError("dimension d must be >= 2")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class ParticleSystem:
    """Masses and symmetric Coulomb couplings e_ij (zero diagonal)."""

    masses: np.ndarray
    charges: np.ndarray

    def __init__(self, masses, charges):
        m = np.asarray(masses, dtype=float)
        e = np.asarray(charges, dtype=float)
        if m.ndim != 1 or np.any(m <= 0):
            raise ValueError("masses must be a vector of positive reals")
        n = m.size
        if e.shape != (n, n) or np.abs(e - e.T).max() > 0:
            raise ValueError("charges must be a symmetric N x N matrix")
        if np.abs(np.diag(e)).max() > 0:
            raise ValueError("charge matrix must have zero diagonal")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "charges", e)

    @classmethod
    def identical(cls, n: int, mass: float = 1.0, coupling: float = -1.0):
        e = np.full((n, n), coupling)
        np.fill_diagonal(e, 0.0)
        return cls(np.full(n, mass), e)

    @property
    def reduced_masses(self) -> np.ndarray:
        """m_ij = m_i m_j / (m_i + m_j)."""
        m = self.masses
        return np.outer(m, m) / (m[:, None] + m[None, :])


@dataclass(frozen=True)
class AngularValue:
    value: float
    gradient: Optional[np.ndarray] = None


@dataclass(frozen=True)
class PairFunctions:
    """Radial pair function phi(r) > 0 with its log-derivative and second
    derivative, plus (optionally) the two-body ground energy it solves."""

    phi: Callable[[float], float]
    log_derivative: Callable[[float], float]
    second_derivative: Callable[[float], float]
    two_body_energy: Optional[float] = None


class PairFunctionSet:
    """Per-pair radial functions with a construction-time consistency check.

    ``functions`` is either a single PairFunctions used for every pair or a
    mapping from unordered index pairs to PairFunctions. At construction the
    log-derivative of each distinct entry is checked against a central finite
    difference of phi at a few radii, so S' = phi'/phi analytically.
    """

    def __init__(self, functions, check_radii: Sequence[float] = (0.5, 1.0, 1.8, 3.0),
                 tolerance: float = 1e-8):
        if isinstance(functions, PairFunctions):
            self._uniform = functions
            self._table = None
            distinct = [functions]
        else:
            self._uniform = None
            self._table = {frozenset(k): v for k, v in dict(functions).items()}
            distinct = list(self._table.values())
        step = 1e-5
        for pf in distinct:
            for r in check_radii:
                value = pf.phi(r)
                if not value > 0:
                    raise UndefinedPairFunction(f"phi({r}) = {value} is not positive")
                numeric = (pf.phi(r + step) - pf.phi(r - step)) / (2 * step)
                exact = pf.log_derivative(r) * value
                if abs(numeric - exact) > tolerance * max(1.0, abs(numeric)):
                    raise UndefinedPairFunction(
                        f"log_derivative inconsistent with phi at r={r}: "
                        f"finite difference {numeric}, S'*phi {exact}")

    def get(self, i: int, j: int) -> PairFunctions:
        if self._uniform is not None:
            return self._uniform
        try:
            return self._table[frozenset((i, j))]
        except KeyError:
            raise UndefinedPairFunction(f"no pair function for ({i}, {j})") from None


# ---------------------------------------------------------------------------
# the angle cosine sum and its gradient
# ---------------------------------------------------------------------------

def _unit_vectors(pts: np.ndarray):
    """Pairwise unit vectors u[i, j] from point i to point j, with distances."""
    diff = pts[None, :, :] - pts[:, None, :]
    dist = np.linalg.norm(diff, axis=-1)
    n = pts.shape[0]
    off = dist[~np.eye(n, dtype=bool)]
    if off.min() <= _COINCIDENCE_RTOL * off.max():
        raise CoincidentPoints("two points (nearly) coincide")
    np.fill_diagonal(dist, 1.0)
    return diff / dist[:, :, None], dist


def angle_cosine_sum(config: Configuration, with_gradient: bool = False) -> AngularValue:
    """Sum of cos over all vertex angles (j^, i, k) of the configuration.

    cos(j^, i, k) = (r_j - r_i).(r_k - r_i) / (r_ij r_ik), summed over every
    vertex i and unordered pair {j, k} of distinct other points: exactly
    N(N-1)(N-2)/2 terms. Grouping the pair sum at each vertex,
    sum_{j<k} u_ij . u_ik = (|s_i|^2 - (N-1)) / 2 with s_i = sum_j u_ij,
    which evaluates the triple sum in O(N^2) and gives the gradient

        grad_m = sum_{i != m} (I - u_im u_im^T)(s_i - s_m) / r_im.

    The value is invariant under translations, rotations and dilations.
    """
    pts = config.points
    n = pts.shape[0]
    if n == 2:
        grad = np.zeros_like(pts) if with_gradient else None
        return AngularValue(0.0, grad)
    u, dist = _unit_vectors(pts)
    s = u.sum(axis=1)
    value = 0.5 * (float((s * s).sum()) - n * (n - 1))
    if not with_gradient:
        return AngularValue(value, None)
    ds = s[:, None, :] - s[None, :, :]                   # ds[i, m] = s_i - s_m
    proj = ds - u * (u * ds).sum(axis=-1, keepdims=True)  # u[i, m] spans i -> m
    contrib = proj / dist[:, :, None]
    idx = np.arange(n)
    contrib[idx, idx, :] = 0.0
    return AngularValue(value, contrib.sum(axis=0))


# ---------------------------------------------------------------------------
# local energies
# ---------------------------------------------------------------------------

def _pair_distances(config: Configuration) -> np.ndarray:
    pts = config.points
    dist = np.linalg.norm(pts[None, :, :] - pts[:, None, :], axis=-1)
    n = config.n
    off = dist[~np.eye(n, dtype=bool)]
    if off.min() <= _COINCIDENCE_RTOL * off.max():
        raise CoincidentPoints("two points (nearly) coincide")
    return dist


def local_energy_nbody(config: Configuration, system: ParticleSystem,
                       pairs: PairFunctionSet, potentials) -> float:
    """Local energy of a product of radial pair functions.

    E = sum_{i<j} [ -(phi_ij'' + (d-1)/r phi_ij') / (2 m_ij phi_ij) + v_ij(r_ij) ]
        - sum over vertex angles of S'_ij(r_ij) S'_ik(r_ik) cos(j^, i, k) / m_i.

    ``potentials`` is a single callable v(r) applied to every pair or a
    mapping from index pairs to callables. The angle sum is an explicit
    triple loop, deliberately kept close to the defining formula.
    """
    if isinstance(potentials, Mapping):
        table = {frozenset(k): v for k, v in potentials.items()}

        def v_of(i, j):
            try:
                return table[frozenset((i, j))]
            except KeyError:
                raise UndefinedPairFunction(f"no potential for ({i}, {j})") from None
    else:
        def v_of(i, j):
            return potentials

    n, d = config.n, config.d
    if system.masses.size != n:
        raise ValueError("system size does not match configuration")
    dist = _pair_distances(config)
    reduced = system.reduced_masses
    pts = config.points

    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            r = dist[i, j]
            pf = pairs.get(i, j)
            value = pf.phi(r)
            if not (np.isfinite(value) and value > 0):
                raise UndefinedPairFunction(f"phi({r}) not positive for pair ({i},{j})")
            second = pf.second_derivative(r)
            first = pf.log_derivative(r) * value
            total += -(second + (d - 1) / r * first) / (2.0 * reduced[i, j] * value)
            total += v_of(i, j)(r)
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for k in range(j + 1, n):
                if k == i:
                    continue
                a = pts[j] - pts[i]
                b = pts[k] - pts[i]
                cos = float(a @ b) / (dist[i, j] * dist[i, k])
                sj = pairs.get(i, j).log_derivative(dist[i, j])
                sk = pairs.get(i, k).log_derivative(dist[i, k])
                total -= sj * sk * cos / system.masses[i]
    return total


def local_energy_coulomb(config: Configuration, system: ParticleSystem) -> float:
    """Coulomb local energy with the constant log-derivative choice.

    Taking S'_ij = 2 e_ij m_ij / (d-1) cancels every 1/r singularity of
    v_ij = e_ij / r and leaves the bounded value

    E = -sum_{i<j} 2 m_ij e_ij^2 / (d-1)^2
        - (4/(d-1)^2) sum over vertex angles of m_ij m_ik e_ij e_ik cos / m_i.
    """
    n, d = config.n, config.d
    if system.masses.size != n:
        raise ValueError("system size does not match configuration")
    coef = system.reduced_masses * system.charges  # m_ij e_ij, zero diagonal
    iu = np.triu_indices(n, 1)
    total = float((-2.0 * coef[iu] * system.charges[iu] / (d - 1) ** 2).sum())

    u, _ = _unit_vectors(config.points)
    weighted = coef[:, :, None] * u        # row i: m_ij e_ij u_ij
    w = weighted.sum(axis=1)
    sq = (coef ** 2).sum(axis=1)
    angle_sums = 0.5 * ((w * w).sum(axis=1) - sq)  # sum_{j<k} m_ij m_ik e_ij e_ik cos
    total -= 4.0 / (d - 1) ** 2 * float((angle_sums / system.masses).sum())
    return total


def local_energy_identical(config: Configuration) -> float:
    """Unit masses, unit attractive couplings:
    E = -(1/(d-1)^2) (N(N-1)/2 + angle cosine sum)."""
    n, d = config.n, config.d
    f = angle_cosine_sum(config).value
    return -(0.5 * n * (n - 1) + f) / (d - 1) ** 2


# ---------------------------------------------------------------------------
# maximization of the angle sum
# ---------------------------------------------------------------------------

def maximize_angle_sum(n: int, d: int = 3,
                       config: OptimizerConfig = OptimizerConfig(restarts=20),
                       jobs: int = 1) -> tuple[float, Configuration]:
    """Multi-start gradient ascent on the angle cosine sum.

    Starts are standard-normal point clouds from the seeded generator; each
    runs backtracking-line-search ascent with the analytic gradient (the
    iterate is recentered and rescaled to unit rms radius, which changes
    nothing because the objective is gauge invariant). The best value found
    is a certified lower bound on the supremum, never an upper bound.
    Results do not depend on ``jobs``: starts are drawn up front and merged
    by best value, then lowest start index.
    """
    if n < 3:
        raise ValueError("need at least 3 points")
    if d < 2:
        raise ValueError("dimension d must be >= 2")
    rng = np.random.default_rng(config.seed)
    starts = []
    while len(starts) < max(1, config.restarts):
        candidate = rng.standard_normal((n, d))
        try:
            _unit_vectors(candidate)
        except CoincidentPoints:
            continue
        starts.append(candidate)

    def run(start):
        return _ascend(start, config.max_iterations, config.tolerance)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, starts))
    else:
        outcomes = [run(start) for start in starts]
    best_value = -math.inf
    best_points = None
    for value, points in outcomes:
        if value > best_value:
            best_value, best_points = value, points
    return best_value, Configuration(best_points)


def _ascend(points: np.ndarray, max_iterations: int, tolerance: float):
    x = points.copy()
    result = angle_cosine_sum(Configuration(x), with_gradient=True)
    value, grad = result.value, result.gradient
    step = 0.1
    for _ in range(max_iterations):
        grad_sq = float((grad * grad).sum())
        if math.sqrt(grad_sq) < 1e-11:
            break
        accepted = False
        while step > 1e-17:
            candidate = x + step * grad
            try:
                trial = angle_cosine_sum(Configuration(candidate), with_gradient=True)
            except CoincidentPoints:
                step *= 0.5
                continue
            if trial.value >= value + 1e-4 * step * grad_sq:
                x, value, grad = candidate, trial.value, trial.gradient
                step *= 1.3
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        x -= x.mean(axis=0)
        scale = math.sqrt(float((x * x).sum()) / len(x))
        if scale > 0:
            x /= scale
            refreshed = angle_cosine_sum(Configuration(x), with_gradient=True)
            value, grad = refreshed.value, refreshed.gradient
    return value, x


# ---------------------------------------------------------------------------
# reference geometries and closed forms
# ---------------------------------------------------------------------------

def bipyramid_height_polynomial(h: float) -> float:
    """Stationarity condition for the triangular-bipyramid height:
    9 h^4 - 6 h^3 + 3 h^2 - 2 h + 1/3."""
    return 9 * h ** 4 - 6 * h ** 3 + 3 * h ** 2 - 2 * h + 1.0 / 3.0


def bipyramid_best_height() -> float:
    """Largest real root of the height quartic, by bisection on [0.4, 1]."""
    lo, hi = 0.4, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bipyramid_height_polynomial(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def bipyramid_best_height_radical() -> float:
    """The same root in closed radical form (for cross-checking)."""
    u = (7.0 + 4.0 * math.sqrt(3.0)) ** (1.0 / 3.0)
    a = math.sqrt(-1.0 + u + 1.0 / u)
    b = math.sqrt(-2.0 - u - 1.0 / u + 8.0 / a)
    return (1.0 + a + b) / 6.0


def bipyramid_angle_sum(h: float) -> float:
    """Closed form of the angle sum of the unit-base triangular bipyramid:
    9/2 + 6(h+1)/sqrt(h^2 + 1/3) - 1/(h^2 + 1/3)."""
    ell_sq = h * h + 1.0 / 3.0
    return 4.5 + 6.0 * (h + 1.0) / math.sqrt(ell_sq) - 1.0 / ell_sq


_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)

#: Best known angle-sum maxima in d = 3. Values for 3 and 4 points are
#: proved (equilateral triangle, regular tetrahedron); 5, 6 and 8 are
#: numerically conjectured maxima at the named geometries.
BEST_KNOWN_ANGLE_SUM = {
    3: 1.5,
    4: 6.0,
    5: bipyramid_angle_sum(bipyramid_best_height_radical()),
    6: 12.0 * (1.0 + _SQRT2),
    8: 16.0 * (0.8 + 1.0 / _SQRT2 + 1.0 / math.sqrt(5.0)
               + 4.0 * (1.0 + _SQRT2) / (math.sqrt(5.0) * math.sqrt(5.0 + 4.0 * _SQRT2))
               + (3.0 + 2.0 * _SQRT2) / math.sqrt(5.0 + 4.0 * _SQRT2)
               - 1.0 / (5.0 + 4.0 * _SQRT2)),
}

CONJECTURAL_ANGLE_SUMS = frozenset({5, 6, 8})

SQUARE_PYRAMID_ANGLE_SUM = 7.5 + 5.0 * _SQRT2
CUBE_ANGLE_SUM = 8.0 * (3.0 * _SQRT2 + _SQRT3 + 1.5 + math.sqrt(6.0))

TWISTED_SQUARES_DEFAULT_HEIGHT = math.sqrt(1.0 + 2.0 * _SQRT2) / 2.0

# apex height above the unit square making the pyramid a local maximum
_SQUARE_PYRAMID_HEIGHT = math.sqrt((4.0 - 2.0 * _SQRT2) ** 2 - 0.5)


def fibonacci_sphere(n: int, offset: float = 0.0) -> np.ndarray:
    """n near-uniform points on the unit sphere (golden-angle spiral)."""
    k = np.arange(n)
    z = 1.0 - 2.0 * (k + 0.5) / n
    theta = math.pi * (3.0 - math.sqrt(5.0)) * k + offset
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def named_configuration(name: str, parameter: float | None = None) -> Configuration:
    """Reference geometries (all in d = 3, unit edge/base where applicable).

    aligned(N): N collinear points, attaining the angle-sum infimum.
    equilateral / tetrahedron: proved 3- and 4-point maxima.
    bipyramid(h): two mirror tetrahedra on a shared unit equilateral base,
        default h at the quartic's largest root (best known 5-point value).
    square_pyramid: unit square base, apex at the locally optimal height.
    octahedron: best known 6-point geometry.
    cube / twisted_squares(h): 8-point geometries; the twisted squares
        (parallel unit squares rotated by pi/4, default separation
        sqrt(1 + 2 sqrt(2))/2) beat the cube.
    fibonacci_sphere(N): near-uniform sphere points for the large-N regime.
    """
    if name == "aligned":
        n = int(parameter) if parameter is not None else 3
        if n < 2:
            raise UnknownName("aligned needs N >= 2")
        return Configuration([(float(i), 0.0, 0.0) for i in range(n)])
    if name == "equilateral":
        return Configuration([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0),
                              (0.5, _SQRT3 / 2.0, 0.0)])
    if name == "tetrahedron":
        return Configuration([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0),
                              (0.5, _SQRT3 / 2.0, 0.0),
                              (0.5, _SQRT3 / 6.0, math.sqrt(6.0) / 3.0)])
    if name == "bipyramid":
        h = float(parameter) if parameter is not None else bipyramid_best_height_radical()
        radius = 1.0 / _SQRT3
        angles = (math.pi / 2.0, math.pi / 2.0 + 2.0 * math.pi / 3.0,
                  math.pi / 2.0 + 4.0 * math.pi / 3.0)
        base = [(radius * math.cos(t), radius * math.sin(t), 0.0) for t in angles]
        return Configuration(base + [(0.0, 0.0, h), (0.0, 0.0, -h)])
    if name == "square_pyramid":
        return Configuration([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0),
                              (0.0, 1.0, 0.0), (0.5, 0.5, _SQUARE_PYRAMID_HEIGHT)])
    if name == "octahedron":
        return Configuration([(1, 0, 0), (-1, 0, 0), (0, 1, 0),
                              (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    if name == "cube":
        return Configuration([(x, y, z) for x in (0.0, 1.0)
                              for y in (0.0, 1.0) for z in (0.0, 1.0)])
    if name == "twisted_squares":
        h = float(parameter) if parameter is not None else TWISTED_SQUARES_DEFAULT_HEIGHT
        r = _SQRT2 / 2.0
        lower = [(0.5, 0.5, 0.0), (-0.5, 0.5, 0.0), (-0.5, -0.5, 0.0), (0.5, -0.5, 0.0)]
        upper = [(r, 0.0, h), (0.0, r, h), (-r, 0.0, h), (0.0, -r, h)]
        return Configuration(lower + upper)
    if name == "fibonacci_sphere":
        n = int(parameter) if parameter is not None else 100
        if n < 2:
            raise UnknownName("fibonacci_sphere needs N >= 2")
        return Configuration(fibonacci_sphere(n))
    raise UnknownName(f"unknown configuration name {name!r}")


# ---------------------------------------------------------------------------
# clustering and energy bounds
# ---------------------------------------------------------------------------

def clustering_upper_bound(n: int, m: int, sup_fm: float) -> float:
    """sup F_N <= N(N-1)(N-2) / (M(M-1)(M-2)) * sup F_M, from regrouping the
    angle sum over all M-point subsets."""
    if not (n >= m >= 3):
        raise InvalidClusterSize(f"need N >= M >= 3, got N={n}, M={m}")
    if sup_fm < 0:
        raise InvalidClusterSize("sup F_M must be nonnegative")
    return n * (n - 1) * (n - 2) / (m * (m - 1) * (m - 2)) * sup_fm


@dataclass(frozen=True)
class CoulombBounds:
    """Two-sided ground-energy bounds for identical attractive Coulomb
    particles, with the angular density alpha that produced the lower bound."""

    n: int
    d: int
    lower: float
    upper: float
    alpha: float
    alpha_source: str
    conjectural: bool

    def __iter__(self):
        return iter((self.lower, self.upper))


# alpha = sup F_M / (M(M-1)(M-2)); sources keyed by (alpha, M needed, conjectural)
def _alpha_sources():
    return {
        "lemma3": (0.25, 3, False),
        "lemma4": (0.25, 4, False),
        "c5": (BEST_KNOWN_ANGLE_SUM[5] / 60.0, 5, True),
        "c6": (BEST_KNOWN_ANGLE_SUM[6] / 120.0, 6, True),
        "c8": (BEST_KNOWN_ANGLE_SUM[8] / 336.0, 8, True),
        "cinf": (2.0 / 9.0, None, True),
    }


ALPHA_SOURCES = tuple(_alpha_sources().keys()) + ("custom",)


def identical_coulomb_bounds(n: int, d: int, alpha_source: str = "lemma3",
                             custom_sup_f: float | None = None,
                             custom_m: int | None = None) -> CoulombBounds:
    """Ground-energy enclosure for N identical attractive Coulomb particles.

    upper = -N(N-1)(N+1) / (6 (d-1)^2)       (aligned points minimize the
                                              angle sum at N(N-1)(N-2)/6)
    lower = -N(N-1)(1/2 + alpha (N-2)) / (d-1)^2

    with alpha the per-triangle angular density of the chosen source. The
    proved sources (lemma3, lemma4) use alpha = 1/4; c5/c6/c8 use the
    conjectured maxima and require N >= M; cinf uses the asymptotic uniform-
    sphere density 2/9 and is flagged conjectural like the others.
    """
    if n < 2:
        raise ValueError("need N >= 2")
    if d < 2:
        raise ValueError("dimension d must be >= 2")
    if alpha_source == "custom":
        if custom_sup_f is None or custom_m is None:
            raise InvalidSource("custom source needs custom_sup_f and custom_m")
        if custom_m < 3:
            raise InvalidSource("custom M must be >= 3")
        alpha = custom_sup_f / (custom_m * (custom_m - 1) * (custom_m - 2))
        m_needed, conjectural = custom_m, True
    else:
        try:
            alpha, m_needed, conjectural = _alpha_sources()[alpha_source]
        except KeyError:
            raise InvalidSource(f"unknown alpha source {alpha_source!r}") from None
    if m_needed is not None and n > 2 and n < m_needed:
        raise InvalidSource(
            f"source {alpha_source!r} clusters {m_needed}-point subsets; needs N >= {m_needed}")
    scale = (d - 1) ** 2
    upper = -n * (n - 1) * (n + 1) / (6.0 * scale)
    lower = -n * (n - 1) * (0.5 + alpha * (n - 2)) / scale
    return CoulombBounds(n, d, lower, upper, alpha, alpha_source, conjectural)


def pair_energy_bounds(n: int, epsilons, s: float, m: float) -> tuple[float, float]:
    """Enclosure from two-body ground energies and a log-derivative envelope.

    With epsilon_ij the two-body ground energies, s >= sup |S'_ij| and
    m = min_i m_i:  sum eps_ij -+ s^2 N(N-1)(N-2) / (2m).
    """
    if not s > 0:
        raise NonPositiveS(f"s = {s} must be positive")
    if not m > 0:
        raise ValueError("minimal mass must be positive")
    eps = np.asarray(epsilons, dtype=float)
    if eps.shape != (n, n) or np.abs(eps - eps.T).max() > 0:
        raise ValueError("epsilons must be a symmetric N x N matrix")
    total = float(eps[np.triu_indices(n, 1)].sum())
    spread = s * s * n * (n - 1) * (n - 2) / (2.0 * m)
    return total - spread, total + spread


def sphere_angle_density(n: int, seed: int = 0) -> float:
    """Angle sum per N^3 for a Fibonacci lattice on the unit sphere.

    For uniform sphere coverage the density tends to 2/9 as N grows; the
    seed only rotates the lattice azimuth, to which the value is insensitive.
    """
    if n < 50:
        raise ValueError("need N >= 50 for the large-N regime")
    offset = float(np.random.default_rng(seed).uniform(0.0, 2.0 * math.pi))
    points = fibonacci_sphere(n, offset)
    value = angle_cosine_sum(Configuration(points)).value
    return value / n ** 3


# ---------------------------------------------------------------------------
# configuration file format
# ---------------------------------------------------------------------------

def save_configuration(path, config: Configuration) -> None:
    """First line 'N d', then N lines of d coordinates."""
    with open(path, "w") as handle:
        handle.write(f"{config.n} {config.d}\n")
        for row in config.points:
            handle.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def load_configuration(path) -> Configuration:
    with open(path) as handle:
        tokens = handle.read().split()
    n, d = int(tokens[0]), int(tokens[1])
    coords = [float(t) for t in tokens[2:]]
    if len(coords) != n * d:
        raise ValueError(f"expected {n * d} coordinates, found {len(coords)}")
    return Configuration(np.array(coords).reshape(n, d))
