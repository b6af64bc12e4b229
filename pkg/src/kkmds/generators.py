"""Synthetic instance families, deterministic per seed."""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import shortest_path
from scipy.spatial.distance import pdist

from .core import Instance

KINDS = ("euclidean-noise", "graph-shortest-path", "two-cluster", "geometric-line")
DEFAULT_GRAPH_RETRIES = 100


class GeneratorError(RuntimeError):
    pass


def euclidean_noise(n: int, k: int, noise: float = 0.0, span: float | None = None,
                    seed: int = 0, max_retries: int = 100) -> Instance:
    """Uniform points in [0, span]^k (default span n); each distance is
    multiplied by an independent factor 1 + U[-noise, noise]."""
    if not 0 <= noise < 1:
        raise ValueError("noise must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    span = float(n) if span is None else float(span)
    for _ in range(max_retries):
        P = rng.uniform(0.0, span, size=(n, k))
        d = pdist(P)
        if d.min() > 0:
            d = d * (1.0 + rng.uniform(-noise, noise, size=d.shape))
            return Instance(n, k, d)
    raise GeneratorError("could not draw distinct points")


def graph_shortest_path(n: int, k: int, p: float = 0.3, seed: int = 0,
                        max_retries: int = DEFAULT_GRAPH_RETRIES) -> Instance:
    """Hop distances of a connected G(n, p) graph; disconnected draws are redrawn."""
    if not 0 < p <= 1:
        raise ValueError("edge probability must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    for _ in range(max_retries):
        A = np.zeros((n, n))
        A[iu] = rng.random(iu[0].size) < p
        A = A + A.T
        D = shortest_path(A, method="D", unweighted=True)
        if np.all(np.isfinite(D)):
            return Instance.from_matrix(D, k)
    raise GeneratorError(f"no connected graph in {max_retries} draws")


def two_cluster(n: int, k: int = 1, delta: float = 8.0) -> Instance:
    """First n//2 objects form one cluster, the rest another: dissimilarity 1
    inside a cluster and ``delta`` across."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    labels = np.arange(n) >= n // 2
    iu = np.triu_indices(n, k=1)
    d = np.where(labels[iu[0]] == labels[iu[1]], 1.0, float(delta))
    return Instance(n, k, d)


def geometric_line(n: int, k: int = 1) -> Instance:
    """Distances of the points 2^0, ..., 2^(n-1) on a line."""
    x = 2.0 ** np.arange(n)
    return Instance(n, k, pdist(x[:, None]))


def generate(kind: str, n: int, k: int = 1, seed: int = 0, **params) -> Instance:
    if kind == "euclidean-noise":
        return euclidean_noise(n, k, seed=seed, **params)
    if kind == "graph-shortest-path":
        return graph_shortest_path(n, k, seed=seed, **params)
    if kind == "two-cluster":
        return two_cluster(n, k, **params)
    if kind == "geometric-line":
        return geometric_line(n, k, **params)
    raise ValueError(f"unknown instance kind {kind!r}; expected one of {', '.join(KINDS)}")
