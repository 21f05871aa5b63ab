"""Chain state, quenched couplings, and the heteropolymer energy function.

The energy of a conformation ``r`` (an ``(N, 3)`` float array) is

    E = h * sum_bonds d2(i, i+1)
        - A * sum_{i<j} 1 / d2(i,j)**3
        + R * sum_{i<j} 1 / d2(i,j)**6
        + sqrt(eps) * sum_{i<j} eta[i,j] / d2(i,j)**3

with ``d2`` the squared site-site distance.  The harmonic term runs over
adjacent pairs only; the Lennard-Jones and quenched-disorder terms run over
all unordered pairs (adjacent ones included unless ``exclude_adjacent_lj``
is set).  Reduced units throughout, k_B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularConfigurationError

__all__ = [
    "ModelParams",
    "NoiseMatrix",
    "EnergyBreakdown",
    "validate_conformation",
    "pairwise_distance_sq",
    "squared_distance_matrix",
    "total_energy",
    "energy_delta",
    "energy_gradient",
    "equilibrium_lj_distance",
    "generate_noise",
    "save_noise",
    "load_noise",
]


@dataclass(frozen=True)
class ModelParams:
    """Coupling constants that fully determine the Hamiltonian.

    Attributes
    ----------
    n_sites : int
        Chain length N (>= 2).
    h : float
        Harmonic bond stiffness (>= 0).
    a_attract : float
        Lennard-Jones attraction amplitude A (>= 0).
    r_repel : float
        Lennard-Jones repulsion amplitude R (>= 0).
    epsilon : float
        Quenched-disorder strength (>= 0).
    beta : float
        Inverse temperature (> 0); k_B = 1 in reduced units.
    d_min : float
        Coincidence floor: energy evaluation aborts when any pair
        distance drops below this, rather than returning astronomically
        large finite values.
    exclude_adjacent_lj : bool
        If True, LJ and disorder terms skip bonded (adjacent) pairs.
        Default False: all pairs interact.
    """

    n_sites: int
    h: float = 1.0
    a_attract: float = 0.0
    r_repel: float = 0.0
    epsilon: float = 0.0
    beta: float = 1.0
    d_min: float = 1e-6
    exclude_adjacent_lj: bool = False

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be >= 2")
        for name in ("h", "a_attract", "r_repel", "epsilon"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if not math.isfinite(self.beta) or self.beta <= 0:
            raise ValueError(f"beta must be finite and > 0, got {self.beta}")
        if self.d_min <= 0:
            raise ValueError("d_min must be > 0")

    @property
    def sqrt_epsilon(self) -> float:
        return math.sqrt(self.epsilon)


@dataclass(frozen=True)
class NoiseMatrix:
    """One quenched realization of the couplings eta[i, j].

    Symmetric, zero diagonal, entries i.i.d. with mean 0 and variance 1.
    A realization plays the role of one "native" disorder sample; `seed`
    plus `distribution` identify it reproducibly.
    """

    eta: np.ndarray
    seed: int
    distribution: str = "gaussian"

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=float)
        if eta.ndim != 2 or eta.shape[0] != eta.shape[1]:
            raise ValueError("eta must be a square matrix")
        if not np.allclose(eta, eta.T, atol=0.0):
            raise ValueError("eta must be exactly symmetric")
        if np.any(np.diagonal(eta) != 0.0):
            raise ValueError("eta must have a zero diagonal")
        object.__setattr__(self, "eta", eta)

    @property
    def n_sites(self) -> int:
        return self.eta.shape[0]


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy split term by term; ``total`` is their sum."""

    harmonic: float
    attractive: float
    repulsive: float
    disorder: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "total",
            self.harmonic + self.attractive + self.repulsive + self.disorder,
        )


def validate_conformation(positions: np.ndarray, n_sites: int | None = None) -> np.ndarray:
    """Check the Conformation invariants and return a float64 C-contiguous copy view.

    Raises ValueError on shape/finiteness violations.  Coincident sites are
    caught later by the coincidence floor in energy evaluation.
    """
    pos = np.ascontiguousarray(positions, dtype=np.float64)
    if pos.ndim != 2 or pos.shape[1] != 3:
        raise ValueError(f"positions must have shape (N, 3), got {pos.shape}")
    if n_sites is not None and pos.shape[0] != n_sites:
        raise ValueError(f"expected {n_sites} sites, got {pos.shape[0]}")
    if pos.shape[0] < 2:
        raise ValueError("need at least 2 sites")
    if not np.all(np.isfinite(pos)):
        raise ValueError("positions contain non-finite values")
    return pos


def pairwise_distance_sq(conf: np.ndarray, i: int, j: int) -> float:
    """Squared Euclidean distance between sites i and j."""
    d = conf[i] - conf[j]
    return float(d @ d)


def squared_distance_matrix(conf: np.ndarray) -> np.ndarray:
    """All-pairs squared distances as an (N, N) symmetric matrix."""
    diff = conf[:, None, :] - conf[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _check_floor(d2: np.ndarray, d_min: float) -> None:
    n = d2.shape[0]
    off = d2[~np.eye(n, dtype=bool)]
    if off.size and off.min() < d_min * d_min:
        raise SingularConfigurationError(
            f"pair distance {math.sqrt(float(off.min())):.3e} below floor {d_min:.3e}"
        )


def total_energy(conf: np.ndarray, params: ModelParams,
                 noise: NoiseMatrix | None = None) -> EnergyBreakdown:
    """Exact energy of a conformation, term by term.

    `noise` may be omitted when params.epsilon == 0.
    """
    pos = validate_conformation(conf, params.n_sites)
    d2 = squared_distance_matrix(pos)
    _check_floor(d2, params.d_min)

    n = params.n_sites
    bond_d2 = d2[np.arange(n - 1), np.arange(1, n)]
    harmonic = params.h * float(bond_d2.sum())

    iu, ju = np.triu_indices(n, k=1)
    if params.exclude_adjacent_lj:
        keep = (ju - iu) > 1
        iu, ju = iu[keep], ju[keep]
    attractive = repulsive = disorder = 0.0
    if params.a_attract or params.r_repel or params.epsilon:
        inv6 = 1.0 / d2[iu, ju] ** 3
        if params.a_attract:
            attractive = -params.a_attract * float(inv6.sum())
        if params.r_repel:
            repulsive = params.r_repel * float((inv6 * inv6).sum())
        if params.epsilon:
            if noise is None:
                raise ValueError("epsilon > 0 requires a NoiseMatrix")
            disorder = params.sqrt_epsilon * float((noise.eta[iu, ju] * inv6).sum())
    return EnergyBreakdown(harmonic, attractive, repulsive, disorder)


def energy_delta(conf: np.ndarray, params: ModelParams, noise: NoiseMatrix | None,
                 site: int, displacement: np.ndarray) -> float:
    """H(conf with `site` displaced) - H(conf), touching only O(N) terms.

    Raises SingularConfigurationError when the move (or the current state)
    violates the coincidence floor around `site`.
    """
    from . import backend  # deferred: keeps model importable during builds

    pos = validate_conformation(conf, params.n_sites)
    if not 0 <= site < params.n_sites:
        raise ValueError(f"site {site} out of range")
    delta = np.asarray(displacement, dtype=float)
    if delta.shape != (3,):
        raise ValueError("displacement must be a 3-vector")

    new = pos[site] + delta
    rest = np.delete(pos, site, axis=0)
    d2_old = np.einsum("ij,ij->i", rest - pos[site], rest - pos[site])
    d2_new = np.einsum("ij,ij->i", rest - new, rest - new)
    floor2 = params.d_min * params.d_min
    if d2_old.min() < floor2 or d2_new.min() < floor2:
        raise SingularConfigurationError(
            f"move of site {site} violates coincidence floor {params.d_min:.3e}"
        )

    eta = noise.eta if (noise is not None and params.epsilon > 0) else None
    if params.epsilon > 0 and eta is None:
        raise ValueError("epsilon > 0 requires a NoiseMatrix")
    d, _singular = backend.move_delta(
        pos, site, new[0], new[1], new[2],
        params.h, params.a_attract, params.r_repel, params.sqrt_epsilon, eta,
        params.exclude_adjacent_lj, params.d_min,
    )
    return d


def energy_gradient(conf: np.ndarray, params: ModelParams,
                    noise: NoiseMatrix | None = None) -> np.ndarray:
    """Analytic gradient dH/dr as an (N, 3) array.

    For a pair term f(s) with s = |r_i - r_j|**2 the gradient on site i is
    2 f'(s) (r_i - r_j); here f(s) = B s**-3 + R s**-6 with
    B = -A + sqrt(eps) * eta[i,j], plus h*s on bonds.
    """
    pos = validate_conformation(conf, params.n_sites)
    n = params.n_sites
    diff = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    _check_floor(d2, params.d_min)
    np.fill_diagonal(d2, 1.0)

    # 2 f'(s) for every ordered pair
    fprime = np.zeros_like(d2)
    if params.a_attract or params.r_repel or params.epsilon:
        inv = 1.0 / d2
        inv4 = inv * inv * inv * inv
        b = np.full((n, n), -params.a_attract)
        if params.epsilon:
            if noise is None:
                raise ValueError("epsilon > 0 requires a NoiseMatrix")
            b = b + params.sqrt_epsilon * noise.eta
        fprime += -3.0 * b * inv4
        if params.r_repel:
            fprime += -6.0 * params.r_repel * inv4 * inv * inv * inv
        if params.exclude_adjacent_lj:
            adj = np.eye(n, k=1, dtype=bool) | np.eye(n, k=-1, dtype=bool)
            fprime[adj] = 0.0
    bonds = np.eye(n, k=1, dtype=bool) | np.eye(n, k=-1, dtype=bool)
    fprime[bonds] += params.h
    np.fill_diagonal(fprime, 0.0)
    return 2.0 * np.einsum("ij,ijk->ik", fprime, diff)


def equilibrium_lj_distance(params: ModelParams) -> float:
    """Two-particle equilibrium distance d = (2R/A)**(1/6).

    At this separation the attractive energy magnitude is half the
    repulsive one: A/(2 d^6) = R/d^12.
    """
    if params.a_attract == 0 or params.r_repel == 0:
        raise ValueError("equilibrium distance needs A > 0 and R > 0")
    return (2.0 * params.r_repel / params.a_attract) ** (1.0 / 6.0)


def generate_noise(n_sites: int, seed: int, distribution: str = "gaussian") -> NoiseMatrix:
    """Draw one quenched coupling matrix; same (n, seed, distribution) is bit-reproducible."""
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n_sites, k=1)
    if distribution == "gaussian":
        vals = rng.standard_normal(iu.size)
    elif distribution == "binary":
        vals = rng.integers(0, 2, size=iu.size) * 2.0 - 1.0
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    eta = np.zeros((n_sites, n_sites))
    eta[iu, ju] = vals
    eta[ju, iu] = vals
    return NoiseMatrix(eta=eta, seed=seed, distribution=distribution)


def save_noise(noise: NoiseMatrix, path) -> None:
    """Write the flat text format: header `N seed distribution`, then the
    upper triangle row-major, one entry per line, full decimal precision."""
    n = noise.n_sites
    iu, ju = np.triu_indices(n, k=1)
    with open(path, "w") as fh:
        fh.write(f"{n} {noise.seed} {noise.distribution}\n")
        for v in noise.eta[iu, ju]:
            fh.write(repr(float(v)) + "\n")


def load_noise(path) -> NoiseMatrix:
    """Inverse of save_noise; round-trips bit-exactly."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"malformed noise header in {path}")
        n, seed, distribution = int(header[0]), int(header[1]), header[2]
        vals = np.array([float(line) for line in fh if line.strip()])
    iu, ju = np.triu_indices(n, k=1)
    if vals.size != iu.size:
        raise ValueError(f"expected {iu.size} entries, found {vals.size}")
    eta = np.zeros((n, n))
    eta[iu, ju] = vals
    eta[ju, iu] = vals
    return NoiseMatrix(eta=eta, seed=seed, distribution=distribution)
