"""Discretized path energy and its gradient-descent minimization.

A path between latent endpoints x and y is discretized into k segments
with k - 1 free midpoints. The objective is

    E = sum_i log^2((r_i + r_{i+1}) / 2) * ||delta_i||^2

where r_i is the rescaled, floored realisticity index at path point i
and delta_i is the difference of consecutive decoded points (or of the
latent points themselves, depending on the segment norm mode). Paths of
maximal curve realisticity are found by minimizing E from the linear
initialization, moving midpoints only.

Also provided: the curve realisticity index (the exponential of the
arclength-weighted log index along the decoded curve) and the pullback
Riemann metric log^2(ri(z)) dG(z)^T dG(z) whose length functional the
energy discretizes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .csvio import write_csv
from .errors import ConfigError, DimensionMismatch, NumericFailure

__all__ = [
    "SolverConfig",
    "InterpolationPath",
    "OptimizationTrace",
    "linear_init",
    "path_energy",
    "energy_gradient",
    "optimize",
    "curve_ri",
    "riemann_metric",
    "write_trace_csv",
]

_NORM_MODES = ("decoded", "latent")
_OPTIMIZERS = ("plain_gd", "momentum")


@dataclass(frozen=True)
class SolverConfig:
    """Discretization and optimizer choices.

    ``alpha`` and ``floor_eps`` are carried here for configuration
    surfaces that build the realisticity model from the same document;
    energy evaluation itself always uses the model's own values.
    """

    k: int = 50
    learning_rate: float = 0.1
    max_iters: int = 2000
    grad_tol: float = 1e-5
    segment_norm_mode: str = "decoded"
    optimizer: str = "plain_gd"
    alpha: float = 1.0
    floor_eps: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not (np.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate!r}")
        if self.max_iters < 0:
            raise ConfigError(f"max_iters must be >= 0, got {self.max_iters}")
        if not (np.isfinite(self.grad_tol) and self.grad_tol > 0):
            raise ConfigError(f"grad_tol must be positive, got {self.grad_tol!r}")
        if self.segment_norm_mode not in _NORM_MODES:
            raise ConfigError(f"segment_norm_mode must be one of {_NORM_MODES}")
        if self.optimizer not in _OPTIMIZERS:
            raise ConfigError(f"optimizer must be one of {_OPTIMIZERS}")


@dataclass
class InterpolationPath:
    """Endpoints plus k - 1 free midpoints, all in R^D."""

    start: np.ndarray
    end: np.ndarray
    midpoints: np.ndarray

    def __post_init__(self):
        self.start = np.asarray(self.start, dtype=float)
        self.end = np.asarray(self.end, dtype=float)
        self.midpoints = np.asarray(self.midpoints, dtype=float)
        if self.start.ndim != 1 or self.end.shape != self.start.shape:
            raise DimensionMismatch(
                f"endpoints must be vectors of equal shape, got {self.start.shape} "
                f"and {self.end.shape}"
            )
        D = len(self.start)
        if self.midpoints.size == 0:
            self.midpoints = np.zeros((0, D))
        if self.midpoints.ndim != 2 or self.midpoints.shape[1] != D:
            raise DimensionMismatch(
                f"midpoints must have shape (k-1, {D}), got {self.midpoints.shape}"
            )

    @property
    def dim(self) -> int:
        return len(self.start)

    @property
    def k(self) -> int:
        return len(self.midpoints) + 1

    def points(self) -> np.ndarray:
        """All k + 1 path points, endpoints included, shape (k+1, D)."""
        return np.vstack([self.start[None, :], self.midpoints, self.end[None, :]])

    def to_json(self) -> dict:
        return {"k": self.k, "points": self.points().tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "InterpolationPath":
        try:
            k, pts = doc["k"], np.asarray(doc["points"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"path document needs 'k' and 'points': {exc}") from exc
        if pts.ndim != 2 or len(pts) != k + 1:
            raise ConfigError(f"path document claims k={k} but carries {len(pts)} points")
        return cls(pts[0], pts[-1], pts[1:-1])


@dataclass
class OptimizationTrace:
    """Per-iteration energies and gradient norms.

    ``energies[i]`` is the energy after iteration i's update (repeated
    unchanged when no step was accepted); ``grad_norms[i]`` is the
    gradient infinity norm at the start of iteration i. Both have
    length ``iterations_run``.
    """

    energies: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    iterations_run: int = 0
    converged: bool = False
    initial_energy: float = float("nan")


def _validate_dims(path: InterpolationPath, model, generator) -> None:
    if model.dim != path.dim:
        raise DimensionMismatch(f"model dimension {model.dim} != path dimension {path.dim}")
    if generator.in_dim != path.dim:
        raise DimensionMismatch(
            f"generator input dimension {generator.in_dim} != path dimension {path.dim}"
        )


def linear_init(x, y, k: int) -> InterpolationPath:
    """Equally spaced midpoints on the segment from x to y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DimensionMismatch(f"endpoints must match, got {x.shape} and {y.shape}")
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    t = np.arange(1, k)[:, None] / float(k)
    # x + t*(y - x) rather than (1-t)*x + t*y: identical endpoints must
    # collapse to exactly x so degenerate paths have exactly zero length
    return InterpolationPath(x, y, x + t * (y - x))


def _energy_of_points(pts: np.ndarray, model, generator, mode: str) -> float:
    # overflow to inf is detected by the caller, not worth a warning
    with np.errstate(over="ignore", invalid="ignore"):
        r = model.ri_alpha(pts)
        logmeans = np.log(0.5 * (r[:-1] + r[1:]))
        dec = generator.decode(pts) if mode == "decoded" else pts
        deltas = dec[1:] - dec[:-1]
        return float(np.sum(logmeans * logmeans * np.sum(deltas * deltas, axis=1)))


def _gradient_of_points(pts: np.ndarray, model, generator, mode: str) -> np.ndarray:
    """Central-difference energy gradient with respect to the midpoints.

    Perturbing one midpoint changes only its two adjacent segment
    terms, so each probe recomputes those terms from a batched index
    and decode evaluation instead of the full sum.
    """
    n_mid, D = pts.shape[0] - 2, pts.shape[1]
    if n_mid <= 0:
        return np.zeros((0, D))
    mids = pts[1:-1]
    dec = generator.decode(pts) if mode == "decoded" else pts
    r = model.ri_alpha(pts)
    h = 1e-4 * (1.0 + np.linalg.norm(mids, axis=1))

    signs = np.array([1.0, -1.0])
    # perturbed copies of midpoint i along every coordinate: (2, n_mid, D, D)
    pert = mids[None, :, None, :] + (
        signs[:, None, None, None] * h[None, :, None, None] * np.eye(D)[None, None, :, :]
    )
    flat = pert.reshape(-1, D)
    r_pert = model.ri_alpha(flat).reshape(2, n_mid, D)
    dec_pert = (
        generator.decode(flat).reshape(2, n_mid, D, -1) if mode == "decoded" else pert
    )

    with np.errstate(over="ignore", invalid="ignore"):
        dl = dec_pert - dec[:-2][None, :, None, :]
        dr = dec[2:][None, :, None, :] - dec_pert
        log_l = np.log(0.5 * (r[:-2][None, :, None] + r_pert))
        log_r = np.log(0.5 * (r_pert + r[2:][None, :, None]))
        T = log_l * log_l * np.sum(dl * dl, axis=3) + log_r * log_r * np.sum(dr * dr, axis=3)
        return (T[0] - T[1]) / (2.0 * h[:, None])


def path_energy(path: InterpolationPath, model, generator, config: SolverConfig) -> float:
    """The discretized objective for the given path."""
    _validate_dims(path, model, generator)
    return _energy_of_points(path.points(), model, generator, config.segment_norm_mode)


def energy_gradient(path: InterpolationPath, model, generator, config: SolverConfig) -> np.ndarray:
    """Gradient of the objective with respect to the midpoints, (k-1, D)."""
    _validate_dims(path, model, generator)
    return _gradient_of_points(path.points(), model, generator, config.segment_norm_mode)


def optimize(path: InterpolationPath, model, generator, config: SolverConfig):
    """Minimize the path energy by gradient descent over the midpoints.

    Plain gradient descent uses a backtracking line search (the step is
    halved, at most 30 times, until the energy decreases; an accepted
    step lets the next trial step regrow twofold up to the configured
    learning rate). The momentum optimizer applies heavy-ball updates
    with factor 0.9 and no line search. Stops when the gradient
    infinity norm falls below ``grad_tol``, when no decrease can be
    found, or after ``max_iters`` iterations. Endpoints are never
    moved; the best-energy iterate is returned.

    Returns ``(optimized_path, trace)``. Raises ``NumericFailure``
    carrying the trace accumulated so far if a non-finite energy or
    gradient turns up.
    """
    _validate_dims(path, model, generator)
    mode = config.segment_norm_mode
    start, end = path.start.copy(), path.end.copy()
    M = path.midpoints.copy()

    def assemble(mid):
        return np.vstack([start[None, :], mid, end[None, :]])

    def fail(msg, energies, grad_norms):
        n = min(len(energies), len(grad_norms))
        trace = OptimizationTrace(energies[:n], grad_norms[:n], n, False, E0)
        return NumericFailure(msg, trace=trace)

    E = _energy_of_points(assemble(M), model, generator, mode)
    E0 = E
    if not np.isfinite(E):
        raise NumericFailure(
            "initial energy is not finite",
            trace=OptimizationTrace([], [], 0, False, E),
        )
    energies: list = []
    grad_norms: list = []
    best_E, best_M = E, M.copy()
    lr = config.learning_rate
    vel = np.zeros_like(M)
    converged = False

    for _ in range(config.max_iters):
        G = _gradient_of_points(assemble(M), model, generator, mode)
        gnorm = float(np.max(np.abs(G))) if G.size else 0.0
        if not np.isfinite(gnorm):
            raise fail("gradient is not finite", energies + [E], grad_norms + [gnorm])
        grad_norms.append(gnorm)
        if gnorm < config.grad_tol:
            energies.append(E)
            converged = True
            break

        if config.optimizer == "momentum":
            vel = 0.9 * vel - lr * G
            M_new = M + vel
            E_new = _energy_of_points(assemble(M_new), model, generator, mode)
            if not np.isfinite(E_new):
                raise fail("energy is not finite", energies + [E_new], grad_norms)
            M, E = M_new, E_new
        else:
            step = lr
            accepted = False
            for _ in range(31):
                M_try = M - step * G
                E_try = _energy_of_points(assemble(M_try), model, generator, mode)
                if not np.isfinite(E_try):
                    raise fail("energy is not finite", energies + [E_try], grad_norms)
                if E_try < E:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                # line search exhausted: gradient is at noise level, stop
                energies.append(E)
                break
            M, E = M_try, E_try
            lr = min(2.0 * step, config.learning_rate)

        energies.append(E)
        if E < best_E:
            best_E, best_M = E, M.copy()

    trace = OptimizationTrace(energies, grad_norms, len(grad_norms), converged, E0)
    return InterpolationPath(start, end, best_M), trace


def curve_ri(path: InterpolationPath, model, generator) -> float:
    """Curve realisticity index of the decoded path.

    The discretization of exp(integral of log ri weighted by decoded
    arclength): exp of the sum over segments of
    log((r_i + r_{i+1}) / 2) * ||decode(x_{i+1}) - decode(x_i)||,
    with r the rescaled, floored index so the logarithm stays finite.
    """
    _validate_dims(path, model, generator)
    pts = path.points()
    r = model.ri_alpha(pts)
    logmeans = np.log(0.5 * (r[:-1] + r[1:]))
    dec = generator.decode(pts)
    seg = np.linalg.norm(dec[1:] - dec[:-1], axis=1)
    return float(np.exp(np.sum(logmeans * seg)))


def riemann_metric(z, model, generator) -> np.ndarray:
    """Pullback metric log^2(ri(z)) dG(z)^T dG(z), symmetric PSD.

    Uses the same rescaled, floored index as the energy so that the
    quadrature of the induced length matches -log(curve_ri).
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or len(z) != model.dim or generator.in_dim != len(z):
        raise DimensionMismatch(
            f"z of shape {z.shape} does not match model dim {model.dim} "
            f"and generator input dim {generator.in_dim}"
        )
    r = float(model.ri_alpha(z))
    J = generator.jacobian(z)
    A = (np.log(r) ** 2) * (J.T @ J)
    return 0.5 * (A + A.T)


def write_trace_csv(trace: OptimizationTrace, path) -> None:
    """Trace as CSV with columns iter, energy, grad_norm."""
    rows = [
        (i, trace.energies[i], trace.grad_norms[i]) for i in range(trace.iterations_run)
    ]
    write_csv(path, ("iter", "energy", "grad_norm"), rows)


def path_to_json_file(path_obj: InterpolationPath, file_path) -> None:
    """Path as a JSON document {"k": ..., "points": [[...], ...]}."""
    with open(file_path, "w") as fh:
        json.dump(path_obj.to_json(), fh)


def path_from_json_file(file_path) -> InterpolationPath:
    with open(file_path) as fh:
        return InterpolationPath.from_json(json.load(fh))
