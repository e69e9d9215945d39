"""Decoders mapping latent points to data space.

A generator is a map G: R^D -> R^N with exact Jacobian access. Three
variants: affine maps, small feed-forward networks, and closed-form
analytic warps used as nonlinear test beds. Jacobians are computed by
the chain rule, never by differencing; finite differences are only a
test oracle.

Weight file format (JSON, matrices row-major):

    {"type": "mlp" | "linear",
     "layers": [{"w": [[...]], "b": [...], "act": "tanh" | "relu" | "id"}]}

A "linear" file must contain exactly one layer with activation "id".
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DimensionMismatch, NonInjectiveGenerator, WeightFormatError

__all__ = [
    "LinearGenerator",
    "MlpGenerator",
    "AnalyticWarp",
    "Generator",
    "load_generator",
    "save_generator",
]

_ACTIVATIONS = ("tanh", "relu", "id")


def _check_point(z, dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim == 1 and z.shape == (dim,):
        return z
    raise DimensionMismatch(f"expected a point of shape ({dim},), got {z.shape}")


def _as_rows(z, dim: int):
    """Return (rows, was_single) where rows has shape (m, dim)."""
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        if z.shape != (dim,):
            raise DimensionMismatch(f"expected shape ({dim},), got {z.shape}")
        return z[None, :], True
    if z.ndim == 2 and z.shape[1] == dim:
        return z, False
    raise DimensionMismatch(f"expected shape ({dim},) or (m, {dim}), got {z.shape}")


class LinearGenerator:
    """Affine decoder z -> A z + b with A injective.

    Injectivity is enforced at construction: the smallest singular
    value of A must exceed 1e-10.
    """

    def __init__(self, A, b=None):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2:
            raise WeightFormatError(f"A must be a matrix, got shape {A.shape}")
        N, D = A.shape
        if b is None:
            b = np.zeros(N)
        b = np.asarray(b, dtype=float)
        if b.shape != (N,):
            raise WeightFormatError(f"b must have shape ({N},), got {b.shape}")
        smin = np.linalg.svd(A, compute_uv=False).min() if min(N, D) > 0 else 0.0
        if N < D or smin <= 1e-10:
            raise NonInjectiveGenerator(
                f"linear map must be injective (smallest singular value {smin:.3g})"
            )
        self.A = A
        self.b = b
        self.in_dim = D
        self.out_dim = N

    def decode(self, z):
        rows, single = _as_rows(z, self.in_dim)
        out = rows @ self.A.T + self.b
        return out[0] if single else out

    def jacobian(self, z):
        _check_point(z, self.in_dim)
        return self.A.copy()

    def __repr__(self) -> str:
        return f"LinearGenerator({self.out_dim}x{self.in_dim})"


class MlpGenerator:
    """Feed-forward decoder built from (weight, bias, activation) layers.

    Layer weights have shape (fan_out, fan_in) and must chain. The relu
    derivative at exactly zero pre-activation is taken to be 0.
    """

    def __init__(self, layers):
        if not layers:
            raise WeightFormatError("an mlp needs at least one layer")
        parsed = []
        for idx, (W, b, act) in enumerate(layers):
            W = np.asarray(W, dtype=float)
            b = np.asarray(b, dtype=float)
            if W.ndim != 2:
                raise WeightFormatError(f"layer {idx}: weight must be a matrix, got {W.shape}")
            if b.shape != (W.shape[0],):
                raise WeightFormatError(
                    f"layer {idx}: bias shape {b.shape} does not match weight {W.shape}"
                )
            if act not in _ACTIVATIONS:
                raise WeightFormatError(f"layer {idx}: unknown activation {act!r}")
            if parsed and W.shape[1] != parsed[-1][0].shape[0]:
                raise WeightFormatError(
                    f"layer {idx}: fan_in {W.shape[1]} does not chain with previous fan_out "
                    f"{parsed[-1][0].shape[0]}"
                )
            parsed.append((W, b, act))
        self.layers = parsed
        self.in_dim = parsed[0][0].shape[1]
        self.out_dim = parsed[-1][0].shape[0]

    @staticmethod
    def _apply(act: str, pre: np.ndarray) -> np.ndarray:
        if act == "tanh":
            return np.tanh(pre)
        if act == "relu":
            return np.maximum(pre, 0.0)
        return pre

    def decode(self, z):
        rows, single = _as_rows(z, self.in_dim)
        h = rows
        for W, b, act in self.layers:
            h = self._apply(act, h @ W.T + b)
        return h[0] if single else h

    def jacobian(self, z):
        z = _check_point(z, self.in_dim)
        J = np.eye(self.in_dim)
        h = z
        for W, b, act in self.layers:
            pre = W @ h + b
            h = self._apply(act, pre)
            if act == "tanh":
                d = 1.0 - h * h
            elif act == "relu":
                d = (pre > 0.0).astype(float)
            else:
                d = np.ones_like(pre)
            J = d[:, None] * (W @ J)
        return J

    def __repr__(self) -> str:
        dims = [self.in_dim] + [W.shape[0] for W, _, _ in self.layers]
        return f"MlpGenerator({'->'.join(map(str, dims))})"


class AnalyticWarp:
    """Closed-form smooth warps of the latent space, for testing.

    Registered names:

    - "identity": z -> z in any dimension.
    - "swirl2d": rotation of R^2 by the radius-proportional angle
      strength * ||z||; param ``strength`` (default 1.0).
    - "blowup": radial exaggeration z -> z (1 + beta ||z||^2) in any
      dimension; param ``beta`` (default 0.25).
    """

    NAMES = ("identity", "swirl2d", "blowup")

    def __init__(self, name: str, dim: int, **params):
        if name not in self.NAMES:
            raise WeightFormatError(f"unknown warp {name!r}, known: {self.NAMES}")
        if dim < 1:
            raise WeightFormatError(f"dim must be >= 1, got {dim}")
        if name == "swirl2d" and dim != 2:
            raise WeightFormatError("swirl2d is defined on R^2 only")
        known = {"identity": (), "swirl2d": ("strength",), "blowup": ("beta",)}[name]
        extra = set(params) - set(known)
        if extra:
            raise WeightFormatError(f"warp {name!r} does not take params {sorted(extra)}")
        self.name = name
        self.in_dim = self.out_dim = int(dim)
        self.strength = float(params.get("strength", 1.0))
        self.beta = float(params.get("beta", 0.25))

    def decode(self, z):
        rows, single = _as_rows(z, self.in_dim)
        if self.name == "identity":
            out = rows.copy()
        elif self.name == "swirl2d":
            r = np.sqrt(np.sum(rows * rows, axis=1))
            theta = self.strength * r
            c, s = np.cos(theta), np.sin(theta)
            out = np.stack(
                [c * rows[:, 0] - s * rows[:, 1], s * rows[:, 0] + c * rows[:, 1]], axis=1
            )
        else:
            r2 = np.sum(rows * rows, axis=1, keepdims=True)
            out = rows * (1.0 + self.beta * r2)
        return out[0] if single else out

    def jacobian(self, z):
        z = _check_point(z, self.in_dim)
        if self.name == "identity":
            return np.eye(self.in_dim)
        if self.name == "swirl2d":
            r = float(np.linalg.norm(z))
            theta = self.strength * r
            c, s = np.cos(theta), np.sin(theta)
            R = np.array([[c, -s], [s, c]])
            if r == 0.0:
                return R
            # d/dz [R(strength r) z] = R + (strength / r) J R z z^T
            Jrot = np.array([[0.0, -1.0], [1.0, 0.0]])
            return R + (self.strength / r) * np.outer(Jrot @ R @ z, z)
        r2 = float(z @ z)
        return (1.0 + self.beta * r2) * np.eye(self.in_dim) + 2.0 * self.beta * np.outer(z, z)

    def __repr__(self) -> str:
        return f"AnalyticWarp({self.name!r}, dim={self.in_dim})"


Generator = LinearGenerator | MlpGenerator | AnalyticWarp


def save_generator(generator, path) -> None:
    """Write a linear or mlp generator to the JSON weight format."""
    if isinstance(generator, LinearGenerator):
        doc = {
            "type": "linear",
            "layers": [{"w": generator.A.tolist(), "b": generator.b.tolist(), "act": "id"}],
        }
    elif isinstance(generator, MlpGenerator):
        doc = {
            "type": "mlp",
            "layers": [
                {"w": W.tolist(), "b": b.tolist(), "act": act} for W, b, act in generator.layers
            ],
        }
    else:
        raise WeightFormatError("only linear and mlp generators have a weight-file form")
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_generator(path):
    """Read a generator from the JSON weight format.

    Raises ``WeightFormatError`` for malformed documents or layer
    shapes that do not chain, and ``NonInjectiveGenerator`` for a
    linear map whose smallest singular value is at most 1e-10.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise WeightFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") not in ("mlp", "linear"):
        raise WeightFormatError("weight file must be an object with type 'mlp' or 'linear'")
    layers_doc = doc.get("layers")
    if not isinstance(layers_doc, list) or not layers_doc:
        raise WeightFormatError("weight file must carry a nonempty 'layers' list")
    layers = []
    for idx, layer in enumerate(layers_doc):
        if not isinstance(layer, dict) or not {"w", "b", "act"} <= set(layer):
            raise WeightFormatError(f"layer {idx} must carry 'w', 'b' and 'act'")
        layers.append((layer["w"], layer["b"], layer["act"]))
    if doc["type"] == "linear":
        if len(layers) != 1 or layers[0][2] != "id":
            raise WeightFormatError("a linear file must have exactly one layer with act 'id'")
        return LinearGenerator(layers[0][0], layers[0][1])
    return MlpGenerator(layers)
