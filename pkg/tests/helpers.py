"""Shared test utilities."""

import numpy as np


class ConstantModel:
    """Realisticity model stub returning a fixed index everywhere.

    Lets closed-form energy and curve values be checked exactly.
    """

    def __init__(self, value: float, dim: int, alpha: float = 1.0, floor_eps: float = 1e-9):
        self.value = float(value)
        self.dim = dim
        self.alpha = float(alpha)
        self.floor_eps = float(floor_eps)

    def ri(self, z):
        z = np.asarray(z, dtype=float)
        if z.ndim == 1:
            return self.value
        return np.full(len(z), self.value)

    def ri_alpha(self, z):
        return np.maximum(self.alpha * np.asarray(self.ri(z)), self.floor_eps)


def fd_jacobian(generator, z, step: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian oracle."""
    z = np.asarray(z, dtype=float)
    cols = []
    for d in range(len(z)):
        e = np.zeros_like(z)
        e[d] = step
        cols.append((generator.decode(z + e) - generator.decode(z - e)) / (2.0 * step))
    return np.stack(cols, axis=1)
