"""Latent-space prior densities.

Three density variants over R^D, each exposing log-pdf evaluation and
seeded sampling:

- ``StandardNormal``: isotropic unit Gaussian.
- ``GaussianMixture``: finite mixture with full covariance components.
- ``UniformBox``: uniform density on an axis-aligned closed box.

``semicircle_prior`` builds the specific three-component mixture whose
first two coordinates form a horseshoe; it is the standard synthetic
test bed for interpolation paths that must avoid a low-density gap.

All densities are immutable after construction and safe to share across
threads. Sampling takes an explicit seed and uses ``numpy``'s PCG64
generator, so streams are reproducible across platforms for a fixed
numpy version.
"""

from __future__ import annotations

from typing import Union

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from .errors import ConfigError, DimensionMismatch

__all__ = [
    "StandardNormal",
    "GaussianMixture",
    "UniformBox",
    "PriorDensity",
    "semicircle_prior",
    "density_to_json",
    "density_from_json",
]

_LOG_2PI = np.log(2.0 * np.pi)


def _as_point(z, dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (dim,):
        raise DimensionMismatch(f"expected a point of shape ({dim},), got {z.shape}")
    return z


def _as_batch(Z, dim: int) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != dim:
        raise DimensionMismatch(f"expected points of shape (m, {dim}), got {Z.shape}")
    return Z


class StandardNormal:
    """Isotropic standard normal density on R^dim.

    Parameters
    ----------
    dim : int
        Latent dimension, at least 1.
    """

    def __init__(self, dim: int):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {dim!r}")
        self.dim = int(dim)
        self._log_norm = -0.5 * self.dim * _LOG_2PI

    def log_pdf(self, z) -> float:
        """Log density at a single point, shape (dim,)."""
        z = _as_point(z, self.dim)
        return float(self._log_norm - 0.5 * np.dot(z, z))

    def log_pdf_batch(self, Z) -> np.ndarray:
        """Log density at each row of Z, shape (m, dim) -> (m,)."""
        Z = _as_batch(Z, self.dim)
        return self._log_norm - 0.5 * np.sum(Z * Z, axis=1)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Draw n i.i.d. points, deterministic for a fixed seed."""
        if n < 1:
            raise ConfigError(f"n must be >= 1, got {n}")
        rng = np.random.default_rng(seed)
        return rng.standard_normal((int(n), self.dim))

    def __repr__(self) -> str:
        return f"StandardNormal(dim={self.dim})"


class GaussianMixture:
    """Finite Gaussian mixture with full covariance components.

    Parameters
    ----------
    weights : array-like, shape (K,)
        Nonnegative component weights summing to 1 within 1e-12.
    means : array-like, shape (K, dim)
        Component means.
    covariances : array-like, shape (K, dim, dim)
        Symmetric positive-definite component covariances. Symmetry is
        checked to 1e-12 and each matrix must admit a Cholesky
        factorization; construction fails fast otherwise.
    """

    def __init__(self, weights, means, covariances):
        weights = np.asarray(weights, dtype=float)
        means = np.asarray(means, dtype=float)
        covariances = np.asarray(covariances, dtype=float)

        if weights.ndim != 1 or len(weights) == 0:
            raise ConfigError(f"weights must be a nonempty vector, got shape {weights.shape}")
        K = len(weights)
        if np.any(weights < 0):
            raise ConfigError("mixture weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ConfigError(f"mixture weights must sum to 1 within 1e-12, got {weights.sum()!r}")
        if means.ndim != 2 or means.shape[0] != K:
            raise ConfigError(f"means must have shape ({K}, dim), got {means.shape}")
        dim = means.shape[1]
        if covariances.shape != (K, dim, dim):
            raise ConfigError(
                f"covariances must have shape ({K}, {dim}, {dim}), got {covariances.shape}"
            )
        for j in range(K):
            C = covariances[j]
            if np.max(np.abs(C - C.T)) > 1e-12:
                raise ConfigError(f"covariance {j} is not symmetric within 1e-12")
        try:
            chols = np.linalg.cholesky(covariances)
        except np.linalg.LinAlgError as exc:
            raise ConfigError(f"covariance matrices must be positive definite: {exc}") from exc

        self.weights = weights
        self.means = means
        self.covariances = covariances
        self.dim = int(dim)
        self._chols = chols
        # log of |2 pi C_j|^{-1/2} via the cached Cholesky diagonals
        self._log_norms = -0.5 * dim * _LOG_2PI - np.sum(
            np.log(np.diagonal(chols, axis1=1, axis2=2)), axis=1
        )
        with np.errstate(divide="ignore"):
            self._log_weights = np.log(weights)

    def _component_log_pdfs(self, Z: np.ndarray) -> np.ndarray:
        """Per-component log pdf matrix of shape (m, K)."""
        m = Z.shape[0]
        out = np.empty((m, len(self.weights)))
        for j in range(len(self.weights)):
            diff = (Z - self.means[j]).T
            y = solve_triangular(self._chols[j], diff, lower=True)
            out[:, j] = self._log_norms[j] - 0.5 * np.sum(y * y, axis=0)
        return out

    def log_pdf(self, z) -> float:
        """Log of the weighted average of component pdfs at one point."""
        z = _as_point(z, self.dim)
        comp = self._component_log_pdfs(z[None, :])
        return float(logsumexp(comp[0] + self._log_weights))

    def log_pdf_batch(self, Z) -> np.ndarray:
        Z = _as_batch(Z, self.dim)
        comp = self._component_log_pdfs(Z)
        return logsumexp(comp + self._log_weights, axis=1)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Categorical component choice, then a Cholesky-transformed normal."""
        if n < 1:
            raise ConfigError(f"n must be >= 1, got {n}")
        rng = np.random.default_rng(seed)
        comp = rng.choice(len(self.weights), size=int(n), p=self.weights)
        eps = rng.standard_normal((int(n), self.dim))
        return self.means[comp] + np.einsum("nij,nj->ni", self._chols[comp], eps)

    def __repr__(self) -> str:
        return f"GaussianMixture(K={len(self.weights)}, dim={self.dim})"


class UniformBox:
    """Uniform density on the closed axis-aligned box [lower, upper].

    Parameters
    ----------
    lower, upper : array-like, shape (dim,)
        Box corners with ``upper > lower`` componentwise.
    """

    def __init__(self, lower, upper):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ConfigError(
                f"lower and upper must be vectors of equal shape, got {lower.shape} and {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigError("box corners must be finite")
        if np.any(upper <= lower):
            raise ConfigError("upper must exceed lower componentwise")
        self.lower = lower
        self.upper = upper
        self.dim = int(len(lower))
        # pdf inside the box is 1/volume, so the density integrates to 1
        self._log_pdf_inside = -float(np.sum(np.log(upper - lower)))

    def contains(self, Z) -> np.ndarray:
        """Boolean membership of each row of Z in the closed box."""
        Z = _as_batch(Z, self.dim)
        return np.all((Z >= self.lower) & (Z <= self.upper), axis=1)

    def log_pdf(self, z) -> float:
        z = _as_point(z, self.dim)
        if np.all(z >= self.lower) and np.all(z <= self.upper):
            return self._log_pdf_inside
        return float("-inf")

    def log_pdf_batch(self, Z) -> np.ndarray:
        inside = self.contains(Z)
        out = np.full(len(inside), -np.inf)
        out[inside] = self._log_pdf_inside
        return out

    def sample(self, n: int, seed: int) -> np.ndarray:
        if n < 1:
            raise ConfigError(f"n must be >= 1, got {n}")
        rng = np.random.default_rng(seed)
        return rng.uniform(self.lower, self.upper, size=(int(n), self.dim))

    def __repr__(self) -> str:
        return f"UniformBox(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


PriorDensity = Union[StandardNormal, GaussianMixture, UniformBox]


def semicircle_prior(dim: int) -> GaussianMixture:
    """Three-component mixture whose first two coordinates form a horseshoe.

    Equal weights 1/3. The component means have first two coordinates
    (2, 6), (0, 0) and (2, -6), zeros elsewhere. Covariances are block
    diagonal: 2x2 blocks [[5, 2], [2, 2]], [[1, 0], [0, 3]] and
    [[5, -2], [-2, 2]], with 0.5 times the identity on the remaining
    dim - 2 coordinates.

    Parameters
    ----------
    dim : int
        Latent dimension, at least 2.
    """
    if dim < 2:
        raise ConfigError(f"semicircle prior needs dim >= 2, got {dim}")
    dim = int(dim)
    blocks = [
        np.array([[5.0, 2.0], [2.0, 2.0]]),
        np.array([[1.0, 0.0], [0.0, 3.0]]),
        np.array([[5.0, -2.0], [-2.0, 2.0]]),
    ]
    heads = [np.array([2.0, 6.0]), np.array([0.0, 0.0]), np.array([2.0, -6.0])]
    means = np.zeros((3, dim))
    covs = np.zeros((3, dim, dim))
    for j in range(3):
        means[j, :2] = heads[j]
        covs[j, :2, :2] = blocks[j]
        covs[j, range(2, dim), range(2, dim)] = 0.5
    return GaussianMixture(np.full(3, 1.0 / 3.0), means, covs)


def density_to_json(density: PriorDensity) -> dict:
    """JSON-ready dict for a density; matrices are row-major nested lists."""
    if isinstance(density, StandardNormal):
        return {"type": "standard_normal", "dim": density.dim}
    if isinstance(density, GaussianMixture):
        return {
            "type": "gaussian_mixture",
            "weights": density.weights.tolist(),
            "means": density.means.tolist(),
            "covariances": density.covariances.tolist(),
        }
    if isinstance(density, UniformBox):
        return {
            "type": "uniform_box",
            "lower": density.lower.tolist(),
            "upper": density.upper.tolist(),
        }
    raise ConfigError(f"not a known density: {density!r}")


def density_from_json(doc: dict) -> PriorDensity:
    """Inverse of :func:`density_to_json`."""
    if not isinstance(doc, dict) or "type" not in doc:
        raise ConfigError("density document must be an object with a 'type' field")
    kind = doc["type"]
    try:
        if kind == "standard_normal":
            return StandardNormal(doc["dim"])
        if kind == "gaussian_mixture":
            return GaussianMixture(doc["weights"], doc["means"], doc["covariances"])
        if kind == "uniform_box":
            return UniformBox(doc["lower"], doc["upper"])
    except KeyError as exc:
        raise ConfigError(f"density document is missing field {exc}") from exc
    raise ConfigError(f"unknown density type {kind!r}")
