"""Instances, embeddings and the Kamada-Kawai stress objective.

Dissimilarities are stored in condensed form: the row-major upper triangle
(i < j) of the n x n matrix, the same ordering used by
``scipy.spatial.distance.pdist``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Any

import numpy as np
from scipy.spatial.distance import pdist, squareform

PROVENANCES = ("rounded", "brute-force", "local-search", "discretized", "given")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def pair_index(n: int, i: int, j: int) -> int:
    """Position of the unordered pair {i, j} in condensed storage."""
    if i == j:
        raise ValueError("no self-dissimilarities")
    if i > j:
        i, j = j, i
    return n * i - i * (i + 1) // 2 + (j - i - 1)


def pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (I, J) of all pairs i < j in condensed order."""
    return np.triu_indices(n, k=1)


@dataclass(frozen=True)
class Instance:
    """Symmetric positive dissimilarities over ``n`` objects, target dimension ``k``."""

    n: int
    k: int
    d: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("an instance needs at least two objects")
        if self.k < 1:
            raise ValueError("target dimension must be >= 1")
        d = np.asarray(self.d, dtype=float).ravel()
        if d.shape[0] != comb(self.n, 2):
            raise ValueError(
                f"expected {comb(self.n, 2)} dissimilarities for n={self.n}, got {d.shape[0]}"
            )
        if not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise ValueError("dissimilarities must be finite and > 0")
        object.__setattr__(self, "d", _frozen(d))

    @classmethod
    def from_matrix(cls, D, k: int) -> "Instance":
        D = np.asarray(D, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError("dissimilarity matrix must be square")
        if not np.allclose(D, D.T):
            raise ValueError("dissimilarity matrix must be symmetric")
        iu = np.triu_indices(D.shape[0], k=1)
        return cls(n=D.shape[0], k=k, d=D[iu])

    @classmethod
    def from_points(cls, points, k: int | None = None) -> "Instance":
        """Instance whose dissimilarities are the Euclidean distances of ``points``."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(n=points.shape[0], k=k or points.shape[1], d=pdist(points))

    def matrix(self) -> np.ndarray:
        return squareform(self.d)

    def dist(self, i: int, j: int) -> float:
        return float(self.d[pair_index(self.n, i, j)])

    @property
    def num_pairs(self) -> int:
        return self.d.shape[0]

    def permuted(self, perm) -> "Instance":
        """Instance with objects relabelled so that new object a is old object perm[a]."""
        perm = np.asarray(perm)
        D = self.matrix()[np.ix_(perm, perm)]
        return Instance.from_matrix(D, self.k)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "k": self.k, "d": self.d.tolist()}

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "Instance":
        return cls(n=int(obj["n"]), k=int(obj["k"]), d=np.asarray(obj["d"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Embedding:
    """n points in R^k together with where they came from."""

    points: np.ndarray
    provenance: str = "given"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError("points must be an (n, k) array")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def k(self) -> int:
        return self.points.shape[1]

    def to_dict(self) -> dict[str, Any]:
        return {"k": self.k, "points": self.points.tolist()}

    @classmethod
    def from_dict(cls, obj: dict[str, Any], provenance: str = "given") -> "Embedding":
        pts = np.asarray(obj["points"], dtype=float).reshape(-1, int(obj["k"]))
        return cls(pts, provenance)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str, provenance: str = "given") -> "Embedding":
        return cls.from_dict(json.loads(text), provenance)


def pair_costs(points: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Per-pair terms (1 - |x_i - x_j| / d_ij)^2 in condensed order."""
    return (1.0 - pdist(points) / d) ** 2


def kk_stress(emb: Embedding, inst: Instance) -> float:
    """Kamada-Kawai stress: mean over unordered pairs of (1 - |x_i - x_j|/d_ij)^2."""
    if emb.n != inst.n or emb.k != inst.k:
        raise ValueError(
            f"embedding is {emb.n} points in R^{emb.k}, instance expects {inst.n} in R^{inst.k}"
        )
    return float(np.mean(pair_costs(emb.points, inst.d)))


def aspect_ratio(inst: Instance) -> float:
    return float(inst.d.max() / inst.d.min())


def normalize(inst: Instance) -> Instance:
    """Rescale so the smallest dissimilarity is exactly 1."""
    dmin = inst.d.min()
    if dmin == 1.0:
        return inst
    return Instance(n=inst.n, k=inst.k, d=inst.d / dmin)


def is_normalized(inst: Instance) -> bool:
    return bool(inst.d.min() == 1.0)
