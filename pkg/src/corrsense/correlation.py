"""Distance-based correlation structure of the source and sensor observations.

The correlation coefficient between two points decays exponentially with
their separation, rho(d) = exp(-(d/theta1)**theta2). Three structures are
supported: the full distance kernel applied to both source-node and
inter-node pairs ("full-rank"), the separable product form C = r r^T
("rank-one"), and all-ones coefficients ("unity").
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import ModelValidityError
from .geometry import NetworkGeometry

# Relative tolerance for positive-semidefiniteness of kernel matrices;
# absorbs floating-point round-off only.
PSD_TOL = 1e-10


class CorrelationModel(str, Enum):
    FULL_RANK = "full-rank"
    RANK_ONE = "rank-one"
    UNITY = "unity"


@dataclass(frozen=True)
class CorrelationParams:
    """Decay-kernel parameters: theta1 scales distance, theta2 the decay rate."""

    theta1: float
    theta2: float

    def __post_init__(self):
        if not self.theta1 > 0:
            raise ValueError("theta1 must be positive")
        if not 0 < self.theta2 <= 2:
            raise ValueError("theta2 must lie in (0, 2]")


def correlation_coefficient(d, params: CorrelationParams):
    """Exponential-decay correlation exp(-(d/theta1)**theta2).

    Accepts a scalar or array of nonnegative distances; strictly
    decreasing in d, equal to 1 at d = 0.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("distance must be nonnegative")
    out = np.exp(-((d / params.theta1) ** params.theta2))
    return float(out) if out.ndim == 0 else out


@dataclass(eq=False)
class CorrelationStructure:
    """Source-node correlation vector r and inter-node matrix C.

    r[i] is the correlation between the source and node i's noiseless
    observation; C[i, j] between the observations at nodes i and j.
    """

    r: np.ndarray
    C: np.ndarray
    model: CorrelationModel

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float).reshape(-1)
        C = np.asarray(self.C, dtype=float)
        n = r.shape[0]
        if C.shape != (n, n):
            raise ValueError("C must be square and match the length of r")
        if np.any(r <= 0) or np.any(r > 1):
            raise ValueError("source-node correlations must lie in (0, 1]")
        if np.any(C < 0) or np.any(C > 1):
            raise ValueError("inter-node correlations must lie in [0, 1]")
        if not np.array_equal(C, C.T):
            raise ValueError("C must be symmetric")
        self.r = r
        self.C = C
        self.model = CorrelationModel(self.model)

    @property
    def n_nodes(self) -> int:
        return self.r.shape[0]

    def joint_matrix(self) -> np.ndarray:
        """The (N+1) x (N+1) joint correlation matrix [[1, r^T], [r, C]]."""
        n = self.n_nodes
        joint = np.empty((n + 1, n + 1))
        joint[0, 0] = 1.0
        joint[0, 1:] = self.r
        joint[1:, 0] = self.r
        joint[1:, 1:] = self.C
        return joint

    @cached_property
    def _joint_eig_range(self) -> tuple[float, float]:
        eig = np.linalg.eigvalsh(self.joint_matrix())
        return float(eig[0]), float(eig[-1])

    def is_valid(self, tol: float = PSD_TOL) -> bool:
        """Whether the joint matrix is PSD within the relative tolerance."""
        lo, hi = self._joint_eig_range
        return lo >= -tol * max(hi, abs(lo), 1e-300)

    def require_valid(self, tol: float = PSD_TOL) -> None:
        if not self.is_valid(tol):
            lo, hi = self._joint_eig_range
            raise ModelValidityError(
                f"joint correlation matrix is indefinite beyond tolerance "
                f"(min eigenvalue {lo:.3e}, max {hi:.3e})"
            )


def build_correlation(
    geometry: NetworkGeometry,
    params: CorrelationParams,
    model: CorrelationModel,
) -> CorrelationStructure:
    """Build the correlation structure for a geometry under the given model."""
    model = CorrelationModel(model)
    n = geometry.n_nodes
    if model is CorrelationModel.UNITY:
        return CorrelationStructure(np.ones(n), np.ones((n, n)), model)
    r = correlation_coefficient(geometry.source_distances(), params)
    r = np.atleast_1d(r)
    if model is CorrelationModel.RANK_ONE:
        return CorrelationStructure(r, np.outer(r, r), model)
    C = correlation_coefficient(geometry.pairwise_distances(), params)
    np.fill_diagonal(C, 1.0)
    return CorrelationStructure(r, C, model)
