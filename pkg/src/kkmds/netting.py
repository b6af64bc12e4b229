"""Finite eps-covers of the cube [-R, R]^k, nearest-point snapping, and
discretization of an embedding onto such a cover."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil, sqrt

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .core import Embedding, Instance, aspect_ratio, is_normalized

DEFAULT_NET_CAP = 10**6
DEFAULT_RADIUS_FACTOR = 10.0


class NetTooLargeError(RuntimeError):
    """Raised when a net (or its candidate lattice) would exceed the size cap."""


@dataclass(frozen=True)
class EpsNet:
    """Ordered point set covering [center - R, center + R]^k within radius ``eps``.

    ``separation`` is a strict lower bound on pairwise distances between net
    points, guaranteed by construction.
    """

    k: int
    R: float
    eps: float
    points: np.ndarray
    separation: float = 0.0
    center: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] != self.k or pts.shape[0] == 0:
            raise ValueError("net points must be a nonempty (m, k) array")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        c = np.zeros(self.k) if self.center is None else np.asarray(self.center, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.size

    @classmethod
    def from_points(cls, points, eps: float | None = None) -> "EpsNet":
        """Wrap an explicit point list as a net domain.

        A 1-D input is read as a list of scalars.  ``R`` is the smallest
        half-width of an origin-centred cube holding the points; ``eps``
        defaults to sqrt(k) times half the minimum spacing, which is the cover
        radius of a full product grid.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[0] == 1 and np.asarray(points).ndim == 1:
            pts = pts.T
        R = float(np.abs(pts).max()) if pts.size else 0.0
        sep = float(pdist(pts).min()) if pts.shape[0] > 1 else np.inf
        if eps is None:
            eps = sqrt(pts.shape[1]) * sep / 2 if np.isfinite(sep) else max(R, 1.0)
        # strict lower bound on separation
        return cls(k=pts.shape[1], R=R, eps=float(eps), points=pts,
                   separation=float(np.nextafter(sep, 0)) if np.isfinite(sep) else 0.0)

    def size_constant(self) -> float:
        """The c with |points| = (c R / eps)^k."""
        return float(self.eps / self.R * self.size ** (1.0 / self.k)) if self.R > 0 else 0.0

    def min_pairwise_distance(self) -> float:
        if self.size < 2:
            return float("inf")
        return float(pdist(self.points).min())

    def translated(self, offset) -> "EpsNet":
        offset = np.asarray(offset, dtype=float)
        return EpsNet(self.k, self.R, self.eps, self.points + offset, self.separation,
                      self.center + offset)

    def to_dict(self) -> dict:
        return {"k": self.k, "R": self.R, "eps": self.eps, "size": self.size,
                "separation": self.separation, "center": self.center.tolist(),
                "points": self.points.tolist()}

    def meta(self) -> dict:
        d = self.to_dict()
        del d["points"]
        return d

    @classmethod
    def from_dict(cls, obj: dict) -> "EpsNet":
        return cls(k=int(obj["k"]), R=float(obj["R"]), eps=float(obj["eps"]),
                   points=np.asarray(obj["points"], dtype=float).reshape(-1, int(obj["k"])),
                   separation=float(obj.get("separation", 0.0)),
                   center=obj.get("center"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _ball_offsets(k: int, radius: float) -> np.ndarray:
    r = int(np.floor(radius))
    axes = [np.arange(-r, r + 1)] * k
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    return grid[(grid**2).sum(axis=1) <= radius * radius * (1 + 1e-12)]


def build_net(k: int, R: float, eps: float, cap: int = DEFAULT_NET_CAP) -> EpsNet:
    """Greedy maximal separated subset of a half-spacing lattice on [-R, R]^k.

    Lattice points are scanned in lexicographic order and kept when they are
    farther than ``sigma`` from every point kept so far.  With lattice spacing
    at most sigma/2, every point of the cube lies within
    sigma * (1 + sqrt(k)/4) of the net, so sigma is chosen to make that
    equal to ``eps``.  Kept points are pairwise farther apart than sigma.
    """
    if k < 1 or R <= 0 or eps <= 0:
        raise ValueError("need k >= 1, R > 0, eps > 0")
    sigma = eps / (1.0 + sqrt(k) / 4.0)
    steps = max(1, ceil(2 * R / (sigma / 2)))
    h = 2 * R / steps
    t = sigma / h
    side = steps + 1
    if side**k > 16 * cap:
        raise NetTooLargeError(f"lattice of {side}^{k} points exceeds 16 * cap ({cap})")

    if k == 1:
        stride = int(np.floor(t * (1 + 1e-12))) + 1
        idx = np.arange(0, side, stride)[:, None]
    else:
        offsets = _ball_offsets(k, t)
        r = int(np.floor(t))
        blocked = np.zeros((side + 2 * r,) * k, dtype=bool)
        # pad so neighbourhood writes never need clipping
        flat = blocked.reshape(-1)
        strides = np.array([(side + 2 * r) ** (k - 1 - a) for a in range(k)])
        off_flat = offsets @ strides
        kept = []
        for a in np.ndindex(*(side,) * k):
            pos = int(np.dot(np.add(a, r), strides))
            if flat[pos]:
                continue
            kept.append(a)
            if len(kept) > cap:
                raise NetTooLargeError(f"net exceeds cap of {cap} points")
            flat[pos + off_flat] = True
        idx = np.asarray(kept)
    if idx.shape[0] > cap:
        raise NetTooLargeError(f"net exceeds cap of {cap} points")
    pts = -R + idx * h
    return EpsNet(k=k, R=float(R), eps=float(eps), points=pts, separation=float(sigma))


def snap_many(points, net: EpsNet) -> np.ndarray:
    """Index of the nearest net point for each row of ``points``; ties go to the lowest index."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    D = cdist(pts, net.points, "sqeuclidean")
    best = D.min(axis=1, keepdims=True)
    ties = D <= best + 1e-12 * np.maximum(best, 1.0)
    return np.argmax(ties, axis=1)


def snap(v, net: EpsNet) -> int:
    return int(snap_many(np.reshape(np.asarray(v, dtype=float), (1, -1)), net)[0])


def embedding_center(points: np.ndarray) -> int:
    """Index of the input point minimising the sum of distances to all others."""
    D = cdist(points, points)
    return int(np.argmin(D.sum(axis=1)))


def project_to_ball(points: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    """Radial projection of every point onto the closed ball B(center, radius)."""
    diff = points - center
    norms = np.linalg.norm(diff, axis=1)
    scale = np.where(norms > radius, radius / np.where(norms > 0, norms, 1.0), 1.0)
    return center + diff * scale[:, None]


def discretize_embedding(emb: Embedding, inst: Instance, eps: float,
                         radius_factor: float = DEFAULT_RADIUS_FACTOR,
                         cap: int = DEFAULT_NET_CAP,
                         return_net: bool = False):
    """Move an embedding onto an eps-net of a ball around its most central point.

    The ball has radius ``radius_factor * Delta / eps``; points outside it are
    projected radially onto its boundary before snapping.  Snapped points may
    coincide.
    """
    if not is_normalized(inst):
        raise ValueError("discretize_embedding expects a normalized instance (min d = 1)")
    if emb.n != inst.n or emb.k != inst.k:
        raise ValueError("embedding does not match instance")
    radius = radius_factor * aspect_ratio(inst) / eps
    c = emb.points[embedding_center(emb.points)]
    projected = project_to_ball(emb.points, c, radius)
    net = build_net(inst.k, radius, eps, cap=cap).translated(c)
    out = Embedding(net.points[snap_many(projected, net)], "discretized")
    return (out, net) if return_net else out


def target_aspect_constant(emb: Embedding, inst: Instance, eps: float) -> float:
    """Realized C in max |y_i - y_j| <= C * Delta / eps."""
    return float(pdist(emb.points).max() * eps / aspect_ratio(inst))
