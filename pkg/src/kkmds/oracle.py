"""Reference solvers: exhaustive search over a net, continuous local search,
and the Gaussian sketch used for dimension reduction."""

from __future__ import annotations

from itertools import permutations, product

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import gammaln

from .core import Embedding, Instance, kk_stress, pairs
from .netting import EpsNet

DEFAULT_BRUTE_CAP = 10**7
SMOOTHING = 1e-6
_CHUNK = 1 << 16


class EnumerationTooLargeError(RuntimeError):
    pass


def net_symmetries(net: EpsNet, tol: float = 1e-9) -> list[np.ndarray]:
    """Index permutations of the net induced by signed coordinate permutations
    about the net's centroid that map the net onto itself."""
    Z = net.points
    c = Z.mean(axis=0)
    k = net.k
    out = []
    for perm in permutations(range(k)):
        for signs in product((1.0, -1.0), repeat=k):
            img = (Z - c)[:, perm] * np.asarray(signs) + c
            D = cdist(img, Z)
            match = D.argmin(axis=1)
            if np.all(D[np.arange(len(Z)), match] <= tol) and len(set(match.tolist())) == len(Z):
                out.append(match)
    return out


def orbit_representatives(net: EpsNet) -> np.ndarray:
    """Smallest index in each orbit of the net's symmetry group."""
    syms = net_symmetries(net)
    reps = []
    for a in range(net.size):
        if all(g[a] >= a for g in syms):
            reps.append(a)
    return np.asarray(reps)


def brute_force_net_opt(inst: Instance, net: EpsNet, cap: int = DEFAULT_BRUTE_CAP,
                        use_symmetry: bool = False):
    """Exact minimum of the stress over all assignments of the objects to net points.

    Returns (embedding, value, assignment).  Assignments are scanned in
    lexicographic order (object 0 most significant) and the first minimiser
    is kept.  With ``use_symmetry`` object 0 only visits one net point per
    orbit of the net's isometries; the first minimiser is unchanged because
    any optimum maps to one whose first entry is its orbit's least index.
    """
    if net.k != inst.k:
        raise ValueError("net dimension does not match the instance")
    n, m = inst.n, net.size
    first = orbit_representatives(net) if use_symmetry else np.arange(m)
    total = len(first) * m ** (n - 1)
    if total > cap:
        raise EnumerationTooLargeError(f"{total} assignments exceed cap {cap}")
    ND = cdist(net.points, net.points)
    I, J = pairs(n)
    costs = [(1.0 - ND / inst.d[q]) ** 2 for q in range(len(I))]
    rest = m ** (n - 1)
    best_val, best_a = np.inf, None
    for a0 in first:
        for start in range(0, rest, _CHUNK):
            flat = np.arange(start, min(start + _CHUNK, rest))
            digits = np.empty((flat.size, n), dtype=np.int64)
            digits[:, 0] = a0
            if n > 1:
                digits[:, 1:] = np.stack(np.unravel_index(flat, (m,) * (n - 1)), axis=1)
            val = np.zeros(flat.size)
            for q, (i, j) in enumerate(zip(I, J)):
                val += costs[q][digits[:, i], digits[:, j]]
            t = int(np.argmin(val))
            if val[t] < best_val:
                best_val, best_a = float(val[t]), digits[t].copy()
    value = best_val / len(I)
    emb = Embedding(net.points[best_a], "brute-force")
    return emb, value, [int(a) for a in best_a]


def smoothed_stress(X: np.ndarray, inst: Instance, delta: float = SMOOTHING) -> float:
    """Mean over pairs of (1 - sqrt(|x_i - x_j|^2 + delta^2) / d_ij)^2."""
    I, J = pairs(inst.n)
    diff = X[I] - X[J]
    r = np.sqrt((diff**2).sum(axis=1) + delta**2)
    return float(np.mean((1.0 - r / inst.d) ** 2))


def smoothed_grad(X: np.ndarray, inst: Instance, delta: float = SMOOTHING) -> np.ndarray:
    I, J = pairs(inst.n)
    diff = X[I] - X[J]
    r = np.sqrt((diff**2).sum(axis=1) + delta**2)
    coef = -2.0 * (1.0 - r / inst.d) / (inst.d * r) / len(I)
    g_pair = coef[:, None] * diff
    G = np.zeros_like(X)
    np.add.at(G, I, g_pair)
    np.add.at(G, J, -g_pair)
    return G


def _descend(X: np.ndarray, inst: Instance, steps: int, step0: float, delta: float) -> np.ndarray:
    f = smoothed_stress(X, inst, delta)
    for _ in range(steps):
        G = smoothed_grad(X, inst, delta)
        gg = float((G**2).sum())
        if gg < 1e-30:
            break
        t = step0
        while t > 1e-16:
            Y = X - t * G
            fy = smoothed_stress(Y, inst, delta)
            if fy <= f - 1e-4 * t * gg:
                break
            t *= 0.5
        else:
            break
        if f - fy < 1e-15 * max(f, 1e-300):
            X, f = Y, fy
            break
        X, f = Y, fy
    return X


def classical_mds(inst: Instance) -> np.ndarray:
    """Torgerson embedding: top-k eigenvectors of the double-centred squared dissimilarities."""
    D2 = inst.matrix() ** 2
    n = inst.n
    H = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * H @ D2 @ H
    w, V = np.linalg.eigh(B)
    order = np.argsort(w)[::-1][: inst.k]
    return V[:, order] * np.sqrt(np.maximum(w[order], 0.0))


def local_search_opt(inst: Instance, restarts: int = 10, steps: int = 500,
                     rng: np.random.Generator | None = None, init=None,
                     delta: float = SMOOTHING) -> Embedding:
    """Backtracking gradient descent on the smoothed stress, best of several starts.

    The first start is ``init`` if given, else the classical MDS embedding;
    the remaining starts are uniform in a cube of side max d.  Every accepted
    step lowers the smoothed objective.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n, k = inst.n, inst.k
    scale = float(inst.d.max())
    # the smoothed objective is an average over pairs, so its gradient is O(1/n^2)
    step0 = float(n * n) * scale
    starts = [np.asarray(init, dtype=float).reshape(n, k) if init is not None else classical_mds(inst)]
    starts += [rng.uniform(-scale / 2, scale / 2, (n, k)) for _ in range(max(restarts - 1, 0))]
    best, best_val = None, np.inf
    for X0 in starts:
        X = _descend(X0.copy(), inst, steps, step0, delta)
        val = kk_stress(Embedding(X), inst)
        if val < best_val:
            best, best_val = X, val
    return Embedding(best, "local-search")


def gaussian_sketch(points, k_target: int, rng: np.random.Generator) -> np.ndarray:
    """Apply a random linear map with i.i.d. N(0, 1/k_target) entries to every point."""
    if k_target < 1:
        raise ValueError("k_target must be >= 1")
    P = np.atleast_2d(np.asarray(points, dtype=float))
    S = rng.normal(0.0, 1.0 / np.sqrt(k_target), size=(P.shape[1], k_target))
    return P @ S


def chi_mean(k: int) -> float:
    """E|g| / sqrt(k) for g standard Gaussian in R^k: sqrt(2/k) Gamma((k+1)/2) / Gamma(k/2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(np.sqrt(2.0 / k) * np.exp(gammaln((k + 1) / 2) - gammaln(k / 2)))
