"""Sherali-Adams pseudo-distributions over a finite net domain.

A pseudo-distribution is a family of local probability tables, one per
variable subset, whose marginals agree on every pairwise intersection.
Tables are dense numpy arrays of shape (m,) * |T| with axes in sorted
variable order, m being the net size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import ceil, comb
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .core import Instance, pair_index
from .lp import LinearProgram, LpSolution
from .netting import EpsNet

SCHEMA_VERSION = 1
SUM_TOL = 1e-7
CONSISTENCY_TOL = 1e-6
CLIP_TOL = 1e-9
ZERO_PROB_TOL = 1e-9
DEFAULT_VAR_CAP = 200_000
# dense constraint matrix entry cap (rows * vars)
DEFAULT_DENSE_CAP = 60_000_000


class FamilyError(ValueError):
    pass


class LpTooLargeError(RuntimeError):
    pass


class PseudoDistributionError(RuntimeError):
    pass


class ZeroProbabilityError(PseudoDistributionError):
    def __init__(self, variables, message=None):
        self.variables = tuple(variables)
        super().__init__(message or f"conditioning event has zero probability on variables {self.variables}")


@dataclass(frozen=True)
class SubsetFamily:
    """Variable subsets carrying local tables.

    ``kind`` is "full" (all ``level``-subsets) or "sparse" (base tuples of
    size ``level - 2`` each augmented with every pair).  ``base`` holds the
    sparse base tuples, the only sets a sparse rounding conditions on.
    """

    n: int
    subsets: tuple
    kind: str = "custom"
    level: int = 0
    base: tuple = ()
    seed: int | None = None

    def __post_init__(self):
        subs = tuple(tuple(sorted(int(v) for v in T)) for T in self.subsets)
        for T in subs:
            if len(set(T)) != len(T) or (T and (T[0] < 0 or T[-1] >= self.n)):
                raise FamilyError(f"bad subset {T} for n={self.n}")
        object.__setattr__(self, "subsets", subs)
        object.__setattr__(self, "base", tuple(tuple(sorted(B)) for B in self.base))

    def __len__(self):
        return len(self.subsets)

    def uncovered_pairs(self) -> list[tuple[int, int]]:
        covered = set()
        for T in self.subsets:
            covered.update(combinations(T, 2))
        return [p for p in combinations(range(self.n), 2) if p not in covered]

    def covers_all_pairs(self) -> bool:
        return not self.uncovered_pairs()

    @property
    def degree(self) -> int:
        return max((len(T) for T in self.subsets), default=0)


def _sample_base(n: int, size: int, count: int, rng: np.random.Generator, replace: bool):
    total = comb(n, size)
    if size == 0:
        return [()] * (count if replace else 1)
    if not replace and count >= total:
        return list(combinations(range(n), size))
    if total <= 200_000:
        allc = list(combinations(range(n), size))
        picks = rng.choice(total, size=count, replace=replace)
        return [allc[p] for p in picks]
    out, seen = [], set()
    while len(out) < count:
        T = tuple(sorted(rng.choice(n, size=size, replace=False).tolist()))
        if replace or T not in seen:
            seen.add(T)
            out.append(T)
    return out


def build_family(n: int, kind: str, tau: int, eps: float = 0.5,
                 rng: np.random.Generator | None = None, c0: float = 1.0,
                 num_base: int | None = None, replace: bool = False,
                 seed: int | None = None) -> SubsetFamily:
    """Full level-``tau`` family, or the sparsified family of base tuples plus pairs.

    The sparse family draws ceil(c0 * n / eps) base tuples of size tau - 2
    (``num_base`` overrides the count), without replacement unless
    ``replace`` is set.
    """
    if tau < 2:
        raise FamilyError("level must be >= 2 so pair marginals exist")
    if tau > n:
        raise FamilyError(f"level {tau} exceeds n = {n}")
    if kind == "full":
        return SubsetFamily(n, tuple(combinations(range(n), tau)), "full", tau)
    if kind != "sparse":
        raise FamilyError(f"unknown family kind {kind!r}")
    if rng is None:
        rng = np.random.default_rng(seed)
    count = num_base if num_base is not None else ceil(c0 * n / eps)
    base = _sample_base(n, tau - 2, count, rng, replace)
    subsets, seen = [], set()
    for B in base:
        for i, j in combinations(range(n), 2):
            T = tuple(sorted(set(B) | {i, j}))
            if T not in seen:
                seen.add(T)
                subsets.append(T)
    return SubsetFamily(n, tuple(subsets), "sparse", tau, tuple(base), seed)


def raw_sparse_count(family: SubsetFamily) -> int:
    """Number of augmented tuples before de-duplication."""
    return len(family.base) * comb(family.n, 2)


# ---------------------------------------------------------------------------
# LP encoding


@dataclass(frozen=True)
class SaLpIndex:
    """Where each local table lives in the LP variable vector."""

    family: SubsetFamily
    m: int
    offsets: tuple
    designated: dict = field(repr=False)
    num_sum_rows: int = 0
    num_consistency_rows: int = 0

    def table_slice(self, t: int) -> slice:
        size = self.m ** len(self.family.subsets[t])
        return slice(self.offsets[t], self.offsets[t] + size)


def enumerate_assignments(m: int, size: int) -> np.ndarray:
    """All points of {0..m-1}^size in C (mixed-radix) order, shape (m**size, size)."""
    if size == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack(np.unravel_index(np.arange(m**size), (m,) * size), axis=1)


def net_distances(net: EpsNet) -> np.ndarray:
    return cdist(net.points, net.points)


def designated_subsets(family: SubsetFamily) -> dict[tuple[int, int], int]:
    """Lowest-index family subset containing each pair."""
    out: dict[tuple[int, int], int] = {}
    for t, T in enumerate(family.subsets):
        for p in combinations(T, 2):
            out.setdefault(p, t)
    return out


def _shared_subsets(subs) -> list[tuple[tuple[int, ...], list[int]]]:
    """Every nonempty variable set lying in two or more family subsets, with those subsets."""
    holders: dict[tuple[int, ...], list[int]] = {}
    for t, T in enumerate(subs):
        for r in range(1, len(T) + 1):
            for U in combinations(T, r):
                holders.setdefault(U, []).append(t)
    return sorted(((U, ts) for U, ts in holders.items() if len(ts) > 1),
                  key=lambda item: (len(item[0]), item[0]))


def build_sa_lp(inst: Instance, net: EpsNet, family: SubsetFamily,
                var_cap: int = DEFAULT_VAR_CAP,
                dense_cap: int = DEFAULT_DENSE_CAP,
                rows: str = "pairwise") -> tuple[LinearProgram, SaLpIndex]:
    """LP over all local-table entries with the averaged pair cost read from
    each pair's designated table.

    ``rows="pairwise"`` writes sum-to-one rows plus the marginal-consistency
    rows of every intersecting pair of subsets.  ``rows="basis"`` writes an
    equivalent system without most of the redundancy: for each variable set U
    held by two or more subsets, the U-marginal of the first holder is
    equated with every other holder's, on assignments avoiding the last net
    point.  Any marginal on U is a combination of those entries and the
    table sums, so both systems have the same solutions.
    """
    if rows not in ("pairwise", "basis"):
        raise ValueError(f"unknown row system {rows!r}")
    if family.n != inst.n:
        raise FamilyError("family and instance disagree on n")
    missing = family.uncovered_pairs()
    if missing:
        raise FamilyError(f"family leaves pairs uncovered, e.g. {missing[0]}")
    m = net.size
    subs = family.subsets
    sizes = [m ** len(T) for T in subs]
    nvars = int(sum(sizes))
    if nvars > var_cap:
        raise LpTooLargeError(f"{nvars} LP variables exceed cap {var_cap}")
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)

    # blocks of (first subset, second subset, shared variables, row lookup over Omega^U)
    blocks = []
    nrows = len(subs)
    if rows == "pairwise":
        for s, t in combinations(range(len(subs)), 2):
            I = tuple(sorted(set(subs[s]) & set(subs[t])))
            if I:
                blocks.append((s, t, I, None))
                nrows += m ** len(I)
    else:
        for U, holders in _shared_subsets(subs):
            size = (m - 1) ** len(U)
            if size == 0:
                continue
            for t in holders[1:]:
                blocks.append((holders[0], t, U, size))
                nrows += size
    if nrows * nvars > dense_cap:
        raise LpTooLargeError(f"dense LP of {nrows} x {nvars} exceeds cap {dense_cap}")

    A = np.zeros((nrows, nvars))
    b = np.zeros(nrows)
    for t, off in enumerate(offsets):
        A[t, off: off + sizes[t]] = 1.0
        b[t] = 1.0

    assign_cache: dict[int, np.ndarray] = {}

    def assign(size):
        if size not in assign_cache:
            assign_cache[size] = enumerate_assignments(m, size)
        return assign_cache[size]

    lut_cache: dict[int, np.ndarray] = {}

    def lookup(size):
        # row number of each point of Omega^U whose coordinates avoid m-1, else -1
        if size not in lut_cache:
            ok = np.all(assign(size) < m - 1, axis=1)
            lut = np.full(m**size, -1)
            lut[ok] = np.arange(int(ok.sum()))
            lut_cache[size] = lut
        return lut_cache[size]

    def proj_rows(T, I):
        pos = [T.index(v) for v in I]
        X = assign(len(T))[:, pos]
        return np.ravel_multi_index(X.T, (m,) * len(I)) if I else np.zeros(len(X), int)

    row = len(subs)
    for s, t, I, reduced in blocks:
        for u, sign in ((s, 1.0), (t, -1.0)):
            target = proj_rows(subs[u], I)
            cols = offsets[u] + np.arange(sizes[u])
            if reduced is not None:
                target = lookup(len(I))[target]
                keep = target >= 0
                target, cols = target[keep], cols[keep]
            A[row + target, cols] += sign
        row += m ** len(I) if reduced is None else reduced

    D = net_distances(net)
    w = 1.0 / comb(inst.n, 2)
    c = np.zeros(nvars)
    designated = designated_subsets(family)
    for (i, j), t in designated.items():
        T = subs[t]
        cost = (1.0 - D / inst.d[pair_index(inst.n, i, j)]) ** 2
        X = assign(len(T))
        c[offsets[t]: offsets[t] + sizes[t]] += w * cost[X[:, T.index(i)], X[:, T.index(j)]]

    index = SaLpIndex(family, m, tuple(int(o) for o in offsets), designated,
                      len(subs), nrows - len(subs))
    return LinearProgram(c, A, b), index


def integral_point(index: SaLpIndex, assignment: Sequence[int]) -> np.ndarray:
    """LP vector of the deterministic assignment x_v = net point assignment[v].

    Always feasible, and a vertex of the relaxation, so it can seed the simplex.
    """
    x = np.zeros(index.offsets[-1] + index.m ** len(index.family.subsets[-1]))
    for t, T in enumerate(index.family.subsets):
        flat = np.ravel_multi_index(tuple(int(assignment[v]) for v in T), (index.m,) * len(T))
        x[index.offsets[t] + flat] = 1.0
    return x


# ---------------------------------------------------------------------------
# pseudo-distributions


@dataclass(frozen=True)
class Conditioning:
    """The event {x_v = net point a} for each (v, a) in ``assignments``."""

    assignments: dict

    def __post_init__(self):
        object.__setattr__(self, "assignments",
                           {int(v): int(a) for v, a in dict(self.assignments).items()})
        if any(a < 0 for a in self.assignments.values()):
            raise ValueError("net indices must be nonnegative")

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted(self.assignments))


@dataclass(frozen=True)
class PseudoDistribution:
    net: EpsNet
    n: int
    subsets: tuple
    tables: tuple
    fixed: tuple = ()  # sorted (variable, net index) pairs already conditioned on
    base: tuple = ()
    kind: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        m = self.net.size
        subs = tuple(tuple(int(v) for v in T) for T in self.subsets)
        tabs = []
        for T, tab in zip(subs, self.tables):
            if list(T) != sorted(T):
                raise ValueError(f"subset {T} must be sorted")
            arr = np.asarray(tab, dtype=float).reshape((m,) * len(T))
            arr.setflags(write=False)
            tabs.append(arr)
        if len(tabs) != len(subs):
            raise ValueError("one table per subset")
        object.__setattr__(self, "subsets", subs)
        object.__setattr__(self, "tables", tuple(tabs))
        object.__setattr__(self, "fixed", tuple(sorted((int(v), int(a)) for v, a in dict(self.fixed).items())))
        object.__setattr__(self, "base", tuple(tuple(B) for B in self.base))

    @property
    def fixed_map(self) -> dict[int, int]:
        return dict(self.fixed)

    @property
    def degree(self) -> int:
        return max((len(T) for T in self.subsets), default=0)

    def distances(self) -> np.ndarray:
        if "D" not in self._cache:
            self._cache["D"] = net_distances(self.net)
        return self._cache["D"]

    def covering(self, variables: Iterable[int]) -> int:
        """Index of the lowest-index subset containing every given variable."""
        V = set(variables)
        for t, T in enumerate(self.subsets):
            if V.issubset(T):
                return t
        raise PseudoDistributionError(f"no local table covers variables {sorted(V)}")

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "n": self.n, "kind": self.kind,
                "net": self.net.to_dict(), "subsets": [list(T) for T in self.subsets],
                "tables": [t.ravel().tolist() for t in self.tables],
                "fixed": {str(v): a for v, a in self.fixed},
                "base": [list(B) for B in self.base]}

    @classmethod
    def from_dict(cls, obj: dict) -> "PseudoDistribution":
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("unsupported pseudo-distribution schema version")
        return cls(EpsNet.from_dict(obj["net"]), int(obj["n"]),
                   tuple(tuple(T) for T in obj["subsets"]),
                   tuple(np.asarray(t, dtype=float) for t in obj["tables"]),
                   {int(v): int(a) for v, a in obj.get("fixed", {}).items()},
                   tuple(tuple(B) for B in obj.get("base", [])), obj.get("kind", "custom"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PseudoDistribution":
        return cls.from_dict(json.loads(text))


def extract_pd(sol: LpSolution, index: SaLpIndex, family: SubsetFamily | None = None,
               net: EpsNet | None = None, clip_tol: float = CLIP_TOL) -> PseudoDistribution:
    """Read local tables out of an optimal LP solution.

    Entries in [-clip_tol, 0) are set to zero and each table is renormalized;
    anything more negative, or residuals beyond tolerance, is an error.
    """
    if not sol.optimal:
        raise PseudoDistributionError(f"LP status is {sol.status}, not optimal")
    family = family or index.family
    if net is None:
        raise ValueError("extract_pd needs the net domain")
    tables = []
    for t, T in enumerate(family.subsets):
        tab = np.array(sol.x[index.table_slice(t)])
        if tab.min() < -clip_tol:
            raise PseudoDistributionError(f"table {T} has entry {tab.min():.3g} below -{clip_tol}")
        tab[tab < 0] = 0.0
        s = tab.sum()
        if abs(s - 1.0) > SUM_TOL:
            raise PseudoDistributionError(f"table {T} sums to {float(s)!r}")
        tables.append((tab / s).reshape((index.m,) * len(T)))
    pd = PseudoDistribution(net, family.n, family.subsets, tuple(tables),
                            base=family.base, kind=family.kind)
    _, cons = consistency_residuals(pd)
    if cons > CONSISTENCY_TOL:
        raise PseudoDistributionError(f"marginal consistency residual {cons:.3g}")
    return pd


def _table_marginal(T: Sequence[int], tab: np.ndarray, S: Sequence[int]) -> np.ndarray:
    S = sorted(S)
    drop = tuple(a for a, v in enumerate(T) if v not in S)
    return tab.sum(axis=drop) if drop else tab


def marginal(pd: PseudoDistribution, T, S) -> np.ndarray:
    """Marginal of the local table on subset ``T`` (a family member or its index) onto ``S``."""
    if isinstance(T, (int, np.integer)):
        t = int(T)
    else:
        T = tuple(sorted(T))
        if T not in pd.subsets:
            raise PseudoDistributionError(f"{T} is not a family subset")
        t = pd.subsets.index(T)
    Tset = pd.subsets[t]
    if not set(S).issubset(Tset):
        raise PseudoDistributionError(f"{sorted(S)} is not a subset of {Tset}")
    return _table_marginal(Tset, pd.tables[t], S)


def consistency_residuals(pd: PseudoDistribution) -> tuple[float, float]:
    """(max |table sum - 1|, max marginal disagreement over intersecting subset pairs)."""
    sum_err = max((abs(float(t.sum()) - 1.0) for t in pd.tables), default=0.0)
    cons = 0.0
    for s, t in combinations(range(len(pd.subsets)), 2):
        I = sorted(set(pd.subsets[s]) & set(pd.subsets[t]))
        if not I:
            continue
        a = _table_marginal(pd.subsets[s], pd.tables[s], I)
        b = _table_marginal(pd.subsets[t], pd.tables[t], I)
        cons = max(cons, float(np.abs(a - b).max()))
    return sum_err, cons


def local_marginal(pd: PseudoDistribution, variables: Sequence[int], via: int | None = None):
    """Joint law of the free variables among ``variables``.

    Returns (free variable tuple, probability table over them) taken from the
    covering table ``via`` or the lowest-index covering table.
    """
    fixed = pd.fixed_map
    free = tuple(sorted(v for v in set(variables) if v not in fixed))
    if not free:
        return free, np.ones(())
    t = pd.covering(free) if via is None else via
    if not set(free).issubset(pd.subsets[t]):
        raise PseudoDistributionError(f"table {pd.subsets[t]} does not cover {free}")
    return free, _table_marginal(pd.subsets[t], pd.tables[t], free)


def pseudo_expectation(pd: PseudoDistribution, f: Callable, variables: Sequence[int],
                       via: int | None = None):
    """pE f(x_V): expectation of ``f`` under the local table covering ``variables``.

    ``f`` receives an array of shape (N, |V|, k) holding N joint
    assignments of the variables (in the given order) and returns N values
    (scalars or arrays).  Conditioned variables are held at their fixed points.
    """
    variables = tuple(variables)
    free, table = local_marginal(pd, variables, via)
    fixed = pd.fixed_map
    Z = pd.net.points
    probs = table.ravel()
    keep = probs > 0
    idx = enumerate_assignments(pd.net.size, len(free))[keep]
    N = idx.shape[0]
    pts = np.empty((N, len(variables), pd.net.k))
    for a, v in enumerate(variables):
        if v in fixed:
            pts[:, a] = Z[fixed[v]]
        else:
            pts[:, a] = Z[idx[:, free.index(v)]]
    vals = np.asarray(f(pts), dtype=float)
    return np.tensordot(probs[keep], vals, axes=1)


def singleton_marginal(pd: PseudoDistribution, i: int) -> np.ndarray:
    fixed = pd.fixed_map
    m = pd.net.size
    if i in fixed:
        p = np.zeros(m)
        p[fixed[i]] = 1.0
        return p
    key = ("single", i)
    if key not in pd._cache:
        pd._cache[key] = local_marginal(pd, (i,))[1]
    return pd._cache[key]


def pair_marginal(pd: PseudoDistribution, i: int, j: int) -> np.ndarray:
    """P[a, b] = Pr(x_i = z_a, x_j = z_b) under the covering local table."""
    fixed = pd.fixed_map
    if i in fixed or j in fixed:
        return np.outer(singleton_marginal(pd, i), singleton_marginal(pd, j))
    free, tab = local_marginal(pd, (i, j))
    return tab if free == (i, j) else tab.T


def mean_position(pd: PseudoDistribution, i: int) -> np.ndarray:
    return singleton_marginal(pd, i) @ pd.net.points


def pair_expectation(pd: PseudoDistribution, i: int, j: int, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """pE g(|x_i - x_j|) for a function ``g`` applied to the net distance matrix."""
    if i == j:
        return float(g(np.zeros(1))[0])
    return float((pair_marginal(pd, i, j) * g(pd.distances())).sum())


def condition(pd: PseudoDistribution, cond: Conditioning) -> PseudoDistribution:
    """Condition on ``cond`` using every local table that contains all assigned variables.

    Each such table is restricted to the event and renormalized; assigned
    coordinates are dropped and duplicate residual subsets are merged (first
    occurrence kept).  Tables missing any assigned variable cannot be
    conditioned and are discarded.
    """
    m = pd.net.size
    fixed = pd.fixed_map
    assigned = {}
    for v, a in cond.assignments.items():
        if not 0 <= v < pd.n:
            raise ValueError(f"variable {v} out of range")
        if a >= m:
            raise ValueError(f"net index {a} out of range for net of size {m}")
        if v in fixed:
            if fixed[v] != a:
                raise ZeroProbabilityError([v], f"variable {v} is already fixed to {fixed[v]}")
            continue
        assigned[v] = a
    if not assigned:
        return pd
    I = set(assigned)
    subsets, tables, seen = [], [], set()
    used = 0
    for T, tab in zip(pd.subsets, pd.tables):
        if not I.issubset(T):
            continue
        used += 1
        sub = tab[tuple(assigned[v] if v in I else slice(None) for v in T)]
        mass = float(sub.sum())
        if mass <= ZERO_PROB_TOL:
            bad = [v for v in sorted(I)
                   if _table_marginal(T, tab, [v])[assigned[v]] <= ZERO_PROB_TOL]
            raise ZeroProbabilityError(bad or sorted(I))
        R = tuple(v for v in T if v not in I)
        if R and R not in seen:
            seen.add(R)
            subsets.append(R)
            tables.append(sub / mass)
    if used == 0:
        raise PseudoDistributionError(f"no local table contains all of {sorted(I)}")
    new_fixed = dict(fixed)
    new_fixed.update(assigned)
    return PseudoDistribution(pd.net, pd.n, tuple(subsets), tuple(tables), new_fixed,
                              (), pd.kind)


def _uniform64(rng: np.random.Generator) -> float:
    return float(rng.integers(0, 2**64, dtype=np.uint64)) / 2.0**64


def sample_local(pd: PseudoDistribution, T: Sequence[int], rng: np.random.Generator) -> dict[int, int]:
    """Draw x_T from the local table covering T by inverse CDF on a 64-bit uniform."""
    T = tuple(sorted(T))
    fixed = pd.fixed_map
    free, table = local_marginal(pd, T)
    probs = table.ravel()
    cdf = np.cumsum(probs)
    u = _uniform64(rng) * cdf[-1]
    flat = min(int(np.searchsorted(cdf, u, side="right")), probs.size - 1)
    while probs[flat] <= 0 and flat > 0:
        flat -= 1
    vals = np.unravel_index(flat, table.shape) if free else ()
    out = {v: fixed[v] for v in T if v in fixed}
    out.update({v: int(a) for v, a in zip(free, vals)})
    return out


def point_mass_pd(net: EpsNet, family: SubsetFamily, assignment: Sequence[int]) -> PseudoDistribution:
    """Pseudo-distribution of the deterministic assignment x_v = net point assignment[v]."""
    m = net.size
    tables = []
    for T in family.subsets:
        tab = np.zeros((m,) * len(T))
        tab[tuple(assignment[v] for v in T)] = 1.0
        tables.append(tab)
    return PseudoDistribution(net, family.n, family.subsets, tuple(tables), base=family.base,
                              kind=family.kind)


def mixture_pd(net: EpsNet, family: SubsetFamily, assignments: Sequence[Sequence[int]],
               weights: Sequence[float] | None = None) -> PseudoDistribution:
    """Actual distribution over finitely many assignments, written as local tables."""
    assignments = [list(a) for a in assignments]
    w = np.full(len(assignments), 1.0 / len(assignments)) if weights is None else np.asarray(weights, float)
    w = w / w.sum()
    m = net.size
    tables = []
    for T in family.subsets:
        tab = np.zeros((m,) * len(T))
        for a, wt in zip(assignments, w):
            tab[tuple(a[v] for v in T)] += wt
        tables.append(tab)
    return PseudoDistribution(net, family.n, family.subsets, tuple(tables), base=family.base,
                              kind=family.kind)


def product_pd(net: EpsNet, family: SubsetFamily, marginals: Sequence[np.ndarray]) -> PseudoDistribution:
    """Independent variables with the given one-variable laws."""
    tables = []
    for T in family.subsets:
        tab = np.ones(())
        for v in T:
            tab = np.multiply.outer(tab, np.asarray(marginals[v], dtype=float))
        tables.append(tab)
    return PseudoDistribution(net, family.n, family.subsets, tuple(tables), base=family.base,
                              kind=family.kind)
