"""Planar sensor network layouts and their distance structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class NetworkGeometry:
    """Sensor node coordinates plus the location of the observed source.

    Attributes
    ----------
    nodes : (N, 2) float array
        Planar node coordinates in meters, N >= 1.
    source : (2,) float array
        Location of the event source.
    """

    nodes: np.ndarray
    source: np.ndarray

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        source = np.asarray(self.source, dtype=float).reshape(2)
        if nodes.ndim != 2 or nodes.shape[1] != 2 or nodes.shape[0] < 1:
            raise ValueError("nodes must be an (N, 2) array with N >= 1")
        if not (np.isfinite(nodes).all() and np.isfinite(source).all()):
            raise ValueError("coordinates must be finite")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "source", source)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    def source_distances(self) -> np.ndarray:
        """Distances d_i from each node to the source, shape (N,)."""
        return np.linalg.norm(self.nodes - self.source, axis=1)

    def pairwise_distances(self) -> np.ndarray:
        """Symmetric inter-node distance matrix d_ij with zero diagonal."""
        diff = self.nodes[:, None, :] - self.nodes[None, :, :]
        return np.sqrt((diff**2).sum(axis=2))


def sample_geometry(
    rng: np.random.Generator,
    n_nodes: int,
    side: float,
    source_distance: float,
) -> NetworkGeometry:
    """Draw node positions uniformly over a centered square.

    Nodes are i.i.d. uniform over the side x side square centered at the
    origin; the source sits at (source_distance, 0). Deterministic given
    the generator state.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    if side <= 0:
        raise ValueError("side must be positive")
    if source_distance < 0:
        raise ValueError("source_distance must be nonnegative")
    half = side / 2.0
    nodes = rng.uniform(-half, half, size=(n_nodes, 2))
    return NetworkGeometry(nodes=nodes, source=np.array([source_distance, 0.0]))
