"""Discrete Hamiltonians: band operators, periodic potentials, Harper model.

A discrete Schrodinger operator (H phi)_q = -phi_{q+1} - phi_{q-1} + V(q) phi_q
with N-periodic V reduces, for positive solutions, to an N x N cyclic
tridiagonal matrix whose smallest eigenvalue is bracketed by the extrema of
the local energy -(phi_{q+1} + phi_{q-1})/phi_q + V(q + eta2) for any strictly
positive test vector phi. The Harper potential V(q) = -V0 cos(2 pi q M / N)
gives the bottom of the Hofstadter butterfly at rational flux M/N.

The exact-diagonalization oracle used to validate every bound is a cyclic
Jacobi rotation solver (dependency-free, adequate at desk scale); complex
Hermitian matrices are embedded into doubled real symmetric ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (BoundsResult, DimensionMismatch, LocalEnergyProfile,
                   NonPositiveTestVector, OptimizerConfig, extrema)


class NonHermitian(ValueError):
    """Stored band coefficients violate H_{q',q} = conj(H_{q,q'})."""


class PeriodTooSmall(ValueError):
    """Cyclic reduction needs period N >= 3."""


class NotSymmetric(ValueError):
    """Oracle input matrix is not symmetric (or Hermitian)."""


class SizeExceeded(ValueError):
    """Oracle input larger than the desk-scale limit."""


class NotCoprime(ValueError):
    """Flux numerator and denominator share a factor."""


class NotSquare(ValueError):
    """Matrix input is not square."""


_ORACLE_SIZE_LIMIT = 2048


def _as_site(q) -> tuple:
    return tuple(q) if isinstance(q, (tuple, list, np.ndarray)) else (int(q),)


@dataclass(frozen=True)
class PeriodicPotential:
    """N-periodic real potential, optionally of Harper (cosine) form.

    ``values[q]`` tabulates V at the integers; ``sample`` extends it to real
    arguments. Harper potentials are sampled from the closed cosine form;
    plain tables use periodic linear interpolation, which agrees with the
    table at integer arguments.
    """

    period: int
    values: tuple
    harper_params: tuple | None = None  # (V0, M)

    def __init__(self, values: Sequence[float], harper_params=None):
        values = tuple(float(v) for v in values)
        if len(values) < 1:
            raise ValueError("potential needs at least one value")
        if harper_params is not None:
            v0, m = float(harper_params[0]), int(harper_params[1])
            n = len(values)
            if v0 < 0:
                raise ValueError("Harper amplitude V0 must be >= 0")
            if math.gcd(m, n) != 1:
                raise NotCoprime(f"gcd({m}, {n}) != 1")
            for q, v in enumerate(values):
                if abs(v + v0 * math.cos(2 * math.pi * q * m / n)) > 1e-12:
                    raise ValueError("values do not match the Harper cosine form")
            harper_params = (v0, m)
        object.__setattr__(self, "period", len(values))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "harper_params", harper_params)

    @classmethod
    def harper(cls, n: int, m: int, v0: float) -> "PeriodicPotential":
        """V(q) = -V0 cos(2 pi q M / N) with gcd(M, N) = 1."""
        if n < 1 or m < 1:
            raise ValueError("need N >= 1 and M >= 1")
        values = [-float(v0) * math.cos(2 * math.pi * q * m / n) for q in range(n)]
        return cls(values, harper_params=(float(v0), m))

    def sample(self, x: float) -> float:
        """V at a real argument (used as V(q + eta2) in the Bloch matrix)."""
        n = self.period
        if self.harper_params is not None:
            v0, m = self.harper_params
            return -v0 * math.cos(2 * math.pi * x * m / n)
        x = x % n
        q = int(math.floor(x))
        frac = x - q
        if frac == 0.0:
            return self.values[q]
        return (1 - frac) * self.values[q] + frac * self.values[(q + 1) % n]


@dataclass(frozen=True)
class DiscreteTestVector:
    """Strictly positive test vector, indexed modulo N for periodic problems."""

    components: tuple

    def __init__(self, components: Sequence[float]):
        components = tuple(float(c) for c in components)
        if len(components) == 0 or any(not c > 0 for c in components):
            raise NonPositiveTestVector("all components must be > 0")
        object.__setattr__(self, "components", components)

    def __len__(self) -> int:
        return len(self.components)


def _positive_vector(phi, n: int | None = None) -> np.ndarray:
    arr = np.asarray(getattr(phi, "components", phi), dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch("test vector must be one-dimensional and nonempty")
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise NonPositiveTestVector("all components must be finite and > 0")
    if n is not None and arr.size != n:
        raise DimensionMismatch(f"expected length {n}, got {arr.size}")
    return arr


@dataclass(frozen=True)
class BlochMatrix:
    """Real symmetric N x N reduction at phase eta2: diagonal V(q + eta2),
    -1 on the wrapped sub/super diagonals."""

    matrix: np.ndarray
    eta2: float


@dataclass(frozen=True)
class BandOperator:
    """Hermitian band operator on a finite lattice box.

    ``coefficients`` maps (site q, offset nu) with |nu|_inf <= half_width to
    the complex entry H_{q, q+nu}. With ``periodic`` the box wraps; otherwise
    missing neighbors contribute zero (Dirichlet truncation).
    """

    d_lat: int
    half_width: int
    coefficients: dict
    shape: tuple
    periodic: bool = True

    def __init__(self, d_lat: int, half_width: int, coefficients: dict,
                 shape: Sequence[int], periodic: bool = True):
        if d_lat < 1:
            raise ValueError("lattice dimension must be >= 1")
        if half_width < 0:
            raise ValueError("half_width must be >= 0")
        shape = tuple(int(s) for s in shape)
        if len(shape) != d_lat or any(s < 1 for s in shape):
            raise ValueError("shape must give a positive extent per lattice axis")
        coeffs = {}
        for (q, nu), h in coefficients.items():
            q, nu = _as_site(q), _as_site(nu)
            if len(q) != d_lat or len(nu) != d_lat:
                raise DimensionMismatch("site/offset dimension mismatch")
            if max(abs(c) for c in nu) > half_width:
                raise ValueError(f"offset {nu} exceeds half_width {half_width}")
            coeffs[(q, nu)] = complex(h)
        object.__setattr__(self, "d_lat", d_lat)
        object.__setattr__(self, "half_width", half_width)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "periodic", periodic)

    def _wrap(self, q: tuple) -> tuple | None:
        if self.periodic:
            return tuple(c % s for c, s in zip(q, self.shape))
        if all(0 <= c < s for c, s in zip(q, self.shape)):
            return q
        return None

    def check_hermitian(self, tol: float = 1e-12) -> None:
        for (q, nu), h in self.coefficients.items():
            target = self._wrap(tuple(a + b for a, b in zip(q, nu)))
            if target is None:
                continue  # couples outside a truncated box: never applied
            mirror = (target, tuple(-c for c in nu))
            partner = self.coefficients.get(mirror, 0j)
            if abs(partner - h.conjugate()) > tol * max(1.0, abs(h)):
                raise NonHermitian(
                    f"H[{q},{nu}] = {h} but H[{mirror[0]},{mirror[1]}] = {partner}")


def apply_band(op: BandOperator, phi) -> np.ndarray:
    """(H phi)_q = sum over |nu|_inf <= half_width of H_{q, q+nu} phi_{q+nu}."""
    op.check_hermitian()
    arr = np.asarray(getattr(phi, "components", phi))
    if arr.shape != op.shape:
        raise DimensionMismatch(f"phi shape {arr.shape} vs lattice {op.shape}")
    out = np.zeros(op.shape, dtype=complex)
    for (q, nu), h in op.coefficients.items():
        target = op._wrap(tuple(a + b for a, b in zip(q, nu)))
        if target is None:
            continue
        out[q] += h * arr[target]
    return out


def band_from_potential(potential: PeriodicPotential, eta2: float = 0.0) -> BandOperator:
    """Periodic nearest-neighbor band operator with diagonal V(q + eta2)."""
    n = potential.period
    coeffs = {}
    for q in range(n):
        coeffs[(q, 0)] = potential.sample(q + eta2)
        coeffs[(q, 1)] = -1.0
        coeffs[(q, -1)] = -1.0
    return BandOperator(1, 1, coeffs, (n,), periodic=True)


def local_energy_discrete(potential: PeriodicPotential, phi,
                          eta2: float = 0.0) -> LocalEnergyProfile:
    """Local energy -(phi_{q+1} + phi_{q-1})/phi_q + V(q + eta2), indices mod N."""
    n = potential.period
    arr = _positive_vector(phi, n)
    vdiag = np.array([potential.sample(q + eta2) for q in range(n)])
    values = -(np.roll(arr, -1) + np.roll(arr, 1)) / arr + vdiag
    return LocalEnergyProfile(range(n), values)


def bloch_matrix(potential: PeriodicPotential, eta2: float = 0.0) -> BlochMatrix:
    """Cyclic tridiagonal reduction; rejects N <= 2 where the corner
    couplings would stack onto the diagonal or each other."""
    n = potential.period
    if n <= 2:
        raise PeriodTooSmall(f"period {n} <= 2")
    m = np.zeros((n, n))
    for q in range(n):
        m[q, q] = potential.sample(q + eta2)
        m[q, (q + 1) % n] = -1.0
        m[q, (q - 1) % n] = -1.0
    return BlochMatrix(m, float(eta2))


# ---------------------------------------------------------------------------
# exact diagonalization oracle (cyclic Jacobi)
# ---------------------------------------------------------------------------

def _jacobi_eigh(a: np.ndarray, sweep_limit: int = 100, tol: float = 1e-13):
    """Cyclic Jacobi rotations on a dense real symmetric matrix.

    Returns (eigenvalues, eigenvectors-as-columns), unsorted. Convergence:
    largest off-diagonal magnitude below tol relative to the matrix scale,
    or the sweep limit.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return np.array([a[0, 0]]), v
    scale = max(float(np.abs(a).max()), 1.0)
    iu = np.triu_indices(n, 1)
    for _ in range(sweep_limit):
        if np.abs(a[iu]).max() <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def exact_ground_energy(matrix) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and its eigenvector for a symmetric matrix.

    Accepts a BlochMatrix or a dense symmetric (real) / Hermitian (complex)
    array. Complex input is embedded into a doubled real symmetric matrix
    [[Re, -Im], [Im, Re]]. The returned vector is normalized and sign-fixed
    so its largest-magnitude component is positive (real positive for
    complex vectors).
    """
    if isinstance(matrix, BlochMatrix):
        matrix = matrix.matrix
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"shape {a.shape} is not square")
    n = a.shape[0]
    if n > _ORACLE_SIZE_LIMIT:
        raise SizeExceeded(f"{n} > {_ORACLE_SIZE_LIMIT}")
    scale = max(float(np.abs(a).max()), 1.0)
    if np.iscomplexobj(a):
        if np.abs(a - a.conj().T).max() > 1e-12 * scale:
            raise NotSymmetric("matrix is not Hermitian")
        re, im = a.real, a.imag
        doubled = np.block([[re, -im], [im, re]])
        eigvals, eigvecs = _jacobi_eigh(doubled)
        k = int(np.argmin(eigvals))
        vec = eigvecs[:n, k] + 1j * eigvecs[n:, k]
        vec = vec / np.linalg.norm(vec)
        j = int(np.argmax(np.abs(vec)))
        vec = vec * (vec[j].conjugate() / abs(vec[j]))
        return float(eigvals[k]), vec
    a = a.astype(float)
    if np.abs(a - a.T).max() > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric")
    eigvals, eigvecs = _jacobi_eigh(a)
    k = int(np.argmin(eigvals))
    vec = eigvecs[:, k]
    vec = vec / np.linalg.norm(vec)
    j = int(np.argmax(np.abs(vec)))
    if vec[j] < 0:
        vec = -vec
    return float(eigvals[k]), vec


# ---------------------------------------------------------------------------
# bound tightening by single-component variation
# ---------------------------------------------------------------------------

def _profile_values(phi: np.ndarray, vdiag: np.ndarray) -> np.ndarray:
    return -(np.roll(phi, -1) + np.roll(phi, 1)) / phi + vdiag


def _bounds_of(phi: np.ndarray, vdiag: np.ndarray) -> BoundsResult:
    values = _profile_values(phi, vdiag)
    return extrema(LocalEnergyProfile(range(len(phi)), values))


def _equalize_max(phi: np.ndarray, vdiag: np.ndarray, qm: int) -> bool:
    """Shrink phi[qm] until E(qm) meets the larger of its two neighbors.

    E(qm) grows with phi[qm] while the neighbor values fall, so the gap is
    monotone and bisection is safe. Returns whether phi moved.
    """
    n = len(phi)
    neighbors = ((qm - 1) % n, (qm + 1) % n)

    def gap(t):
        trial = phi.copy()
        trial[qm] = t
        values = _profile_values(trial, vdiag)
        return values[qm] - max(values[neighbors[0]], values[neighbors[1]])

    t0 = phi[qm]
    if not gap(t0) > 0:
        return False  # a neighbor ties the maximum: no single-site move helps
    t_lo = t0
    for _ in range(200):
        t_lo *= 0.5
        if gap(t_lo) < 0:
            break
    else:
        return False
    a, b = t_lo, t0
    for _ in range(90):
        mid = 0.5 * (a + b)
        if gap(mid) > 0:
            b = mid
        else:
            a = mid
    phi[qm] = 0.5 * (a + b)
    return True


def _equalize_min(phi: np.ndarray, vdiag: np.ndarray, qn: int) -> bool:
    """Mirror step: grow phi[qn] until E(qn) meets the smaller neighbor."""
    n = len(phi)
    neighbors = ((qn - 1) % n, (qn + 1) % n)

    def gap(t):
        trial = phi.copy()
        trial[qn] = t
        values = _profile_values(trial, vdiag)
        return values[qn] - min(values[neighbors[0]], values[neighbors[1]])

    t0 = phi[qn]
    if not gap(t0) < 0:
        return False
    t_hi = t0
    for _ in range(200):
        t_hi *= 2.0
        if gap(t_hi) > 0:
            break
    else:
        return False
    a, b = t0, t_hi
    for _ in range(90):
        mid = 0.5 * (a + b)
        if gap(mid) < 0:
            a = mid
        else:
            b = mid
    phi[qn] = 0.5 * (a + b)
    return True


def tighten_bounds(potential: PeriodicPotential, phi0, eta2: float = 0.0,
                   config: OptimizerConfig = OptimizerConfig()):
    """Iteratively tighten the enclosure by varying one component at a time.

    Each iteration bisects phi at the profile argmax (lowering the supremum)
    and then at the argmin (raising the infimum). Adjacent tied extrema make
    both single-site moves no-ops; when that happens, or when an iteration
    fails to shrink the width, a short burst of positivity-preserving
    smoothing steps phi <- (c - V) phi + phi_{+1} + phi_{-1} (c above the
    spectrum) pushes phi toward the ground eigenvector and the single-site
    moves resume. Every traced enclosure comes from an actual positive test
    vector, so all of them bracket the ground energy; the trace keeps only
    width improvements, making it nonincreasing.

    Returns (best test vector, best bounds, trace).
    """
    n = potential.period
    phi = _positive_vector(phi0, n).copy()
    phi /= phi.max()
    vdiag = np.array([potential.sample(q + eta2) for q in range(n)])
    smoothing_shift = vdiag.max() + 3.0  # strictly above the spectrum

    best = _bounds_of(phi, vdiag)
    best_phi = phi.copy()
    trace = [best]
    for _ in range(config.max_iterations):
        if best.width <= config.tolerance:
            break
        width_entry = _bounds_of(phi, vdiag).width
        values = _profile_values(phi, vdiag)
        moved = _equalize_max(phi, vdiag, int(np.argmax(values)))
        values = _profile_values(phi, vdiag)
        moved = _equalize_min(phi, vdiag, int(np.argmin(values))) or moved
        phi /= phi.max()
        current = _bounds_of(phi, vdiag)
        if not moved or current.width >= width_entry * (1 - 1e-3):
            for _ in range(25):
                phi = (smoothing_shift - vdiag) * phi + np.roll(phi, -1) + np.roll(phi, 1)
                phi /= phi.max()
            current = _bounds_of(phi, vdiag)
        if current.width < trace[-1].width:
            trace.append(current)
            best = current
            best_phi = phi.copy()
    return DiscreteTestVector(best_phi), best, trace


def coprime_fractions(n_max: int) -> list[tuple[int, int]]:
    """All (M, N) with 3 <= N <= n_max, 1 <= M < N, gcd(M, N) = 1, ordered by N then M."""
    return [(m, n) for n in range(3, n_max + 1)
            for m in range(1, n) if math.gcd(m, n) == 1]


def hofstadter_bottom(fractions: Iterable[tuple[int, int]], v0: float,
                      config: OptimizerConfig = OptimizerConfig(),
                      jobs: int = 1) -> list[tuple[int, int, float, float, float]]:
    """Bottom-of-spectrum enclosures for Harper fluxes M/N at eta = (0, 0).

    For each coprime pair, tightens from phi = 1 and reports
    (M, N, lower, upper, exact) with the Jacobi oracle value; the enclosure
    lower <= exact <= upper holds for every row.
    """
    fractions = list(fractions)
    for m, n in fractions:
        if n <= 2:
            raise PeriodTooSmall(f"period {n} <= 2")
        if math.gcd(m, n) != 1:
            raise NotCoprime(f"gcd({m}, {n}) != 1")

    def one(pair):
        m, n = pair
        potential = PeriodicPotential.harper(n, m, v0)
        _, bounds, _ = tighten_bounds(potential, np.ones(n), 0.0, config)
        exact, _ = exact_ground_energy(bloch_matrix(potential, 0.0))
        return (m, n, bounds.lower, bounds.upper, exact)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, fractions))
    return [one(pair) for pair in fractions]


# ---------------------------------------------------------------------------
# non-symmetric operators (Perron-Frobenius setting)
# ---------------------------------------------------------------------------

def nonsym_bounds(matrix, phi) -> tuple[float, float, float, float]:
    """Componentwise bounds for an eigenvalue with nonnegative eigenvector.

    For a square matrix K possessing an eigenvalue k0 whose eigenvector is
    real and nonnegative (guaranteed for irreducible nonnegative K), and any
    strictly positive phi, the four extrema of Re((K* phi)_q)/phi_q and
    -Im((K* phi)_q)/phi_q bracket Re(k0) and Im(k0). K* is the conjugate
    transpose. Returns (re_lower, re_upper, im_lower, im_upper).
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"shape {a.shape} is not square")
    vec = _positive_vector(phi, a.shape[0])
    adj_phi = a.conj().T @ vec
    re = np.real(adj_phi) / vec
    im = -np.imag(adj_phi) / vec
    return float(re.min()), float(re.max()), float(im.min()), float(im.max())


def perron_root_power(matrix, tol: float = 1e-10,
                      max_iterations: int = 100000) -> float:
    """Perron root of a nonnegative irreducible matrix by power iteration.

    Stops when the componentwise ratio enclosure (min and max of
    (Kx)_q / x_q, which always bracket the root) has width below tol.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"shape {a.shape} is not square")
    if np.any(a < 0):
        raise ValueError("power iteration oracle expects a nonnegative matrix")
    x = np.ones(a.shape[0])
    lo = hi = 0.0
    for _ in range(max_iterations):
        y = a @ x
        if not np.all(y > 0):
            raise ValueError("matrix appears reducible: iterate left the positive cone")
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * max(1.0, hi):
            break
        x = y / y.max()
    return 0.5 * (lo + hi)


def is_irreducible_nonnegative(matrix) -> bool:
    """Nonnegative with strongly connected adjacency graph."""
    a = np.asarray(matrix)
    if np.iscomplexobj(a) or np.any(a < 0):
        return False
    n = a.shape[0]
    reach = (a > 0) | np.eye(n, dtype=bool)
    for _ in range(max(1, int(math.ceil(math.log2(max(n, 2)))))):
        reach = reach @ reach
    return bool(reach.all())


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def save_potential(path, potential: PeriodicPotential) -> None:
    """Plain text, one real per line; line count is the period."""
    with open(path, "w") as handle:
        for v in potential.values:
            handle.write(f"{v:.17g}\n")


def load_potential(path) -> PeriodicPotential:
    with open(path) as handle:
        values = [float(line) for line in handle if line.strip()]
    return PeriodicPotential(values)
