"""Path diagnostics.

Per-segment decoded distances, the pointwise index along a path, the
projection of path points onto the plane spanned by the endpoints, and
paired reports comparing two paths under one model and generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .csvio import write_csv
from .errors import ConfigError, DegenerateProjection, DimensionMismatch
from .solver import InterpolationPath, SolverConfig, curve_ri, path_energy

__all__ = [
    "PathReport",
    "ComparisonReport",
    "decoded_l2_distances",
    "ri_along_path",
    "project_to_endpoint_plane",
    "build_report",
    "compare",
]


def decoded_l2_distances(path: InterpolationPath, generator) -> np.ndarray:
    """Norms of consecutive decoded differences, shape (k,)."""
    if generator.in_dim != path.dim:
        raise DimensionMismatch(
            f"generator input dimension {generator.in_dim} != path dimension {path.dim}"
        )
    dec = generator.decode(path.points())
    return np.linalg.norm(dec[1:] - dec[:-1], axis=1)


def ri_along_path(path: InterpolationPath, model) -> np.ndarray:
    """Raw (un-rescaled) index at every path point, shape (k+1,)."""
    if model.dim != path.dim:
        raise DimensionMismatch(f"model dimension {model.dim} != path dimension {path.dim}")
    return np.asarray(model.ri(path.points()), dtype=float)


def project_to_endpoint_plane(path: InterpolationPath) -> np.ndarray:
    """Endpoint-plane coordinates of every path point, shape (k+1, 2).

    Each point is projected onto span{z_0, z_k} and expressed as
    coefficients (x, y) with x z_0 + y z_k equal to the projection, by
    solving the 2x2 normal equations. Endpoint rows are exactly (1, 0)
    and (0, 1). The plane passes through the origin.
    """
    z0, zk = path.start, path.end
    n0, nk = float(np.linalg.norm(z0)), float(np.linalg.norm(zk))
    if n0 == 0.0 or nk == 0.0:
        raise DegenerateProjection("degenerate projection basis: zero endpoint")
    cosang = float(np.clip(np.dot(z0, zk) / (n0 * nk), -1.0, 1.0))
    angle = float(np.arccos(cosang))
    if min(angle, np.pi - angle) <= 1e-6:
        raise DegenerateProjection("degenerate projection basis: collinear endpoints")
    X = np.column_stack([z0, zk])
    coeffs = np.linalg.solve(X.T @ X, X.T @ path.points().T).T
    coeffs[0] = (1.0, 0.0)
    coeffs[-1] = (0.0, 1.0)
    return coeffs


@dataclass
class PathReport:
    """Diagnostics of one path under one model and generator.

    ``projection`` is None when the endpoints do not span a plane.
    ``ri_values`` holds the raw index; ``ri_alpha_values`` the rescaled
    and floored one, so reports stay comparable across alpha settings.
    """

    decoded_l2: np.ndarray
    ri_values: np.ndarray
    ri_alpha_values: np.ndarray
    curve_ri: float
    energy: float
    projection: Optional[np.ndarray] = None

    def cumulative_decoded_length(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.decoded_l2)])

    def to_json(self) -> dict:
        return {
            "decoded_l2": self.decoded_l2.tolist(),
            "ri_values": self.ri_values.tolist(),
            "ri_alpha_values": self.ri_alpha_values.tolist(),
            "curve_ri": self.curve_ri,
            "energy": self.energy,
            "projection": None if self.projection is None else self.projection.tolist(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PathReport":
        try:
            proj = doc["projection"]
            return cls(
                decoded_l2=np.asarray(doc["decoded_l2"], dtype=float),
                ri_values=np.asarray(doc["ri_values"], dtype=float),
                ri_alpha_values=np.asarray(doc["ri_alpha_values"], dtype=float),
                curve_ri=float(doc["curve_ri"]),
                energy=float(doc["energy"]),
                projection=None if proj is None else np.asarray(proj, dtype=float),
            )
        except KeyError as exc:
            raise ConfigError(f"report document is missing field {exc}") from exc

    def write_csv(self, file_path) -> None:
        """One row per path point: index, ri, cumulative decoded length,
        and the projection coordinates when present."""
        cum = self.cumulative_decoded_length()
        if self.projection is None:
            header = ("index", "ri", "cum_decoded_length")
            rows = [(i, self.ri_values[i], cum[i]) for i in range(len(self.ri_values))]
        else:
            header = ("index", "ri", "cum_decoded_length", "proj_x", "proj_y")
            rows = [
                (i, self.ri_values[i], cum[i], self.projection[i, 0], self.projection[i, 1])
                for i in range(len(self.ri_values))
            ]
        write_csv(file_path, header, rows)


def build_report(path: InterpolationPath, model, generator, config: SolverConfig) -> PathReport:
    """Assemble the full diagnostics for one path.

    The projection is included when the endpoints admit one and left
    out (None) otherwise.
    """
    pts = path.points()
    try:
        projection = project_to_endpoint_plane(path)
    except DegenerateProjection:
        projection = None
    return PathReport(
        decoded_l2=decoded_l2_distances(path, generator),
        ri_values=ri_along_path(path, model),
        ri_alpha_values=np.asarray(model.ri_alpha(pts), dtype=float),
        curve_ri=curve_ri(path, model, generator),
        energy=path_energy(path, model, generator, config),
        projection=projection,
    )


@dataclass
class ComparisonReport:
    """Reports for two paths computed under identical model/generator."""

    first: PathReport
    second: PathReport

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "second": self.second.to_json()}

    @classmethod
    def from_json(cls, doc: dict) -> "ComparisonReport":
        return cls(PathReport.from_json(doc["first"]), PathReport.from_json(doc["second"]))


def compare(
    first: InterpolationPath,
    second: InterpolationPath,
    model,
    generator,
    config: SolverConfig,
) -> ComparisonReport:
    """Paired diagnostics of two paths with matching dimension and k."""
    if first.dim != second.dim:
        raise DimensionMismatch(
            f"paths have different dimensions: {first.dim} and {second.dim}"
        )
    if first.k != second.k:
        raise DimensionMismatch(f"paths have different segment counts: {first.k} and {second.k}")
    return ComparisonReport(
        first=build_report(first, model, generator, config),
        second=build_report(second, model, generator, config),
    )
