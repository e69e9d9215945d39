"""Realisticity index of latent points.

The index of a point z under a prior density f is

    ri(z; f) = P(f(X) <= f(z)),   X ~ f,

the prior mass lying at density no greater than the density at z. It
calibrates raw density values into [0, 1] regardless of dimension or
normalization. Four interchangeable backends are provided:

- ``GaussianExact``: for the standard normal prior the index is
  1 - F(||z||^2; D) with F the chi-square CDF with D degrees of
  freedom, evaluated through the regularized lower incomplete gamma
  function.
- ``GaussianErfApprox``: the closed-form approximation
  ri(z) ~ 1/2 + 1/2 erf(sqrt(D - 1/2) - ||z||), clamped to [0, 1].
- ``UniformIndicator``: for a uniform prior on a box the index is the
  box membership indicator.
- ``Kde``: for arbitrary priors, a one-dimensional Gaussian-kernel CDF
  estimator over sampled log-density values; the index estimate is
  that CDF evaluated at log f(z).

``RealisticityModel`` wraps a backend with the rescaling factor alpha
and a positive floor applied before logarithms are taken downstream.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf, gammainc

from .errors import ConfigError, DegenerateSample, DimensionMismatch

__all__ = [
    "GaussianExact",
    "GaussianErfApprox",
    "UniformIndicator",
    "Kde",
    "KdeEstimator",
    "RealisticityModel",
    "ri_gaussian_exact",
    "ri_gaussian_erf_approx",
    "ri_uniform",
    "silverman_bandwidth",
    "kde_fit",
    "kde_cdf",
    "ri_estimate",
]


def _norm_cdf(x):
    """Standard normal CDF through erf (machine accurate)."""
    return 0.5 * (1.0 + erf(np.asarray(x, dtype=float) / np.sqrt(2.0)))


def _squared_norms(z, dim: int):
    """Squared norms of a (dim,) point or (m, dim) batch; flags scalar input.

    Single points go through the same row reduction as batches so that
    both call forms produce bit-identical values.
    """
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 1
    if scalar:
        if z.shape != (dim,):
            raise DimensionMismatch(f"expected shape ({dim},), got {z.shape}")
        z = z[None, :]
    if z.ndim != 2 or z.shape[1] != dim:
        raise DimensionMismatch(f"expected shape ({dim},) or (m, {dim}), got {z.shape}")
    # overflow to inf simply yields an index of 0, not worth a warning
    with np.errstate(over="ignore"):
        s = np.sum(z * z, axis=1)
    return (float(s[0]), True) if scalar else (s, False)


def ri_gaussian_exact(z, dim: int):
    """Exact index under the standard normal prior in R^dim.

    Returns 1 - F(||z||^2; dim) where F is the chi-square CDF,
    computed as the regularized upper incomplete gamma value.
    Accepts a single (dim,) point or an (m, dim) batch.
    """
    if dim < 1:
        raise ConfigError(f"dim must be >= 1, got {dim}")
    s, scalar = _squared_norms(z, dim)
    out = 1.0 - gammainc(dim / 2.0, s / 2.0)
    return float(out) if scalar else out


def ri_gaussian_erf_approx(z, dim: int):
    """Erf approximation of the standard normal index, clamped to [0, 1].

    Evaluates 1/2 + 1/2 erf(sqrt(dim - 1/2) - ||z||). Accepts a single
    (dim,) point or an (m, dim) batch.
    """
    if dim < 1:
        raise ConfigError(f"dim must be >= 1, got {dim}")
    s, scalar = _squared_norms(z, dim)
    out = np.clip(0.5 + 0.5 * erf(np.sqrt(dim - 0.5) - np.sqrt(s)), 0.0, 1.0)
    return float(out) if scalar else out


def ri_uniform(z, box):
    """Index under a uniform box prior: 1 inside the closed box, else 0."""
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        return float(box.contains(z[None, :])[0])
    return box.contains(z).astype(float)


def silverman_bandwidth(values) -> float:
    """Silverman's rule for a 1-D Gaussian-kernel estimator.

    h = (4 / (3 n))^(1/5) * sigma_hat, with sigma_hat the sample
    standard deviation (ddof=1) of the values.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n < 2:
        raise DegenerateSample(f"bandwidth needs at least 2 values, got {n}")
    sigma = float(np.std(values, ddof=1))
    if sigma == 0.0:
        raise DegenerateSample("degenerate log-density sample")
    return (4.0 / (3.0 * n)) ** 0.2 * sigma


class KdeEstimator:
    """One-dimensional Gaussian-kernel CDF estimator over log densities.

    Stores the sampled log-density values l_i and a bandwidth h; the
    estimated CDF is G(x) = (1/n) sum_i Phi((x - l_i) / h).

    The constructor accepts any positive bandwidth so hand-built
    estimators are possible; :func:`kde_fit` produces estimators whose
    bandwidth follows Silverman's rule.
    """

    def __init__(self, log_likelihoods, bandwidth: float, seed=None):
        log_likelihoods = np.asarray(log_likelihoods, dtype=float)
        if log_likelihoods.ndim != 1 or len(log_likelihoods) < 1:
            raise ConfigError("log_likelihoods must be a nonempty vector")
        if not np.all(np.isfinite(log_likelihoods)):
            raise ConfigError("log_likelihoods must be finite")
        if not (np.isfinite(bandwidth) and bandwidth > 0):
            raise ConfigError(f"bandwidth must be positive, got {bandwidth!r}")
        self.log_likelihoods = log_likelihoods
        self.bandwidth = float(bandwidth)
        self.n = len(log_likelihoods)
        self.seed = seed

    def cdf(self, x):
        """Estimated CDF at x (scalar or 1-D array), values in [0, 1]."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        arg = (np.atleast_1d(x)[:, None] - self.log_likelihoods[None, :]) / self.bandwidth
        out = np.mean(_norm_cdf(arg), axis=1)
        return float(out[0]) if scalar else out

    def to_json(self) -> dict:
        return {
            "log_likelihoods": self.log_likelihoods.tolist(),
            "bandwidth": self.bandwidth,
            "n": self.n,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "KdeEstimator":
        try:
            return cls(doc["log_likelihoods"], doc["bandwidth"], seed=doc.get("seed"))
        except KeyError as exc:
            raise ConfigError(f"estimator document is missing field {exc}") from exc

    def __repr__(self) -> str:
        return f"KdeEstimator(n={self.n}, bandwidth={self.bandwidth:.6g})"


def kde_fit(density, n: int = 5000, seed: int = 0) -> KdeEstimator:
    """Fit the CDF estimator to a prior by sampling n points.

    Samples are deterministic given the seed. Points where the density
    vanishes (log pdf of -inf) are rejected before fitting. Raises
    ``DegenerateSample`` when the retained log densities have zero
    spread, as happens for uniform priors; use ``UniformIndicator``
    for those instead.
    """
    if n < 2:
        raise ConfigError(f"kde_fit needs n >= 2, got {n}")
    w = density.sample(n, seed)
    ll = density.log_pdf_batch(w)
    ll = ll[np.isfinite(ll)]
    if len(ll) < 2:
        raise DegenerateSample("fewer than 2 samples with positive density")
    h = silverman_bandwidth(ll)
    return KdeEstimator(ll, h, seed=seed)


def kde_cdf(estimator: KdeEstimator, x):
    """Estimated CDF of log-density values at x."""
    return estimator.cdf(x)


class GaussianExact:
    """Exact chi-square backend for the standard normal prior."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ConfigError(f"dim must be >= 1, got {dim}")
        self.dim = int(dim)

    def ri(self, z):
        return ri_gaussian_exact(z, self.dim)


class GaussianErfApprox:
    """Erf-approximation backend for the standard normal prior."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ConfigError(f"dim must be >= 1, got {dim}")
        self.dim = int(dim)

    def ri(self, z):
        return ri_gaussian_erf_approx(z, self.dim)


class UniformIndicator:
    """Indicator backend for a uniform box prior."""

    def __init__(self, box):
        self.box = box
        self.dim = box.dim

    def ri(self, z):
        return ri_uniform(z, self.box)


class Kde:
    """Estimator backend: index is the fitted CDF at log f(z)."""

    def __init__(self, estimator: KdeEstimator, density):
        self.estimator = estimator
        self.density = density
        self.dim = density.dim

    def ri(self, z):
        z = np.asarray(z, dtype=float)
        if z.ndim == 1:
            ll = self.density.log_pdf(z)
            if ll == float("-inf"):
                return 0.0
            return self.estimator.cdf(ll)
        ll = self.density.log_pdf_batch(z)
        out = np.zeros(len(ll))
        finite = np.isfinite(ll)
        if np.any(finite):
            out[finite] = self.estimator.cdf(ll[finite])
        return out


class RealisticityModel:
    """A backend plus the rescaling factor alpha and the log floor.

    ``ri`` returns the raw index in [0, 1]. ``ri_alpha`` returns
    max(alpha * ri, floor_eps), so downstream logarithms stay finite
    while low-density regions keep a strong penalty.

    Parameters
    ----------
    backend : GaussianExact | GaussianErfApprox | UniformIndicator | Kde
    alpha : float in (0, 1], default 1.0
    floor_eps : float in (0, 1e-6], default 1e-9
    """

    def __init__(self, backend, alpha: float = 1.0, floor_eps: float = 1e-9):
        if not (0.0 < alpha <= 1.0):
            raise ConfigError(f"alpha must be in (0, 1], got {alpha!r}")
        if not (0.0 < floor_eps <= 1e-6):
            raise ConfigError(f"floor_eps must be in (0, 1e-6], got {floor_eps!r}")
        self.backend = backend
        self.alpha = float(alpha)
        self.floor_eps = float(floor_eps)
        self.dim = backend.dim

    def ri(self, z):
        """Raw index at a (dim,) point or (m, dim) batch."""
        return self.backend.ri(z)

    def ri_alpha(self, z):
        """Rescaled and floored index, in [floor_eps, alpha]."""
        return np.maximum(self.alpha * self.backend.ri(z), self.floor_eps)


def ri_estimate(model: RealisticityModel, z):
    """Index estimate for a model with a Kde backend."""
    if not isinstance(model.backend, Kde):
        raise ConfigError("ri_estimate requires a model with a Kde backend")
    return model.ri(z)
