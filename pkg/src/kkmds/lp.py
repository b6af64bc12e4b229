"""Dense equality-form linear programs and a two-phase tableau simplex.

    minimize  c . x   subject to   A x = b,  x >= 0

The entering column is the one with the largest objective decrease among the
most negative reduced costs; the method switches to Bland's smallest-index
rule while stalled on a degenerate vertex.  Phase 2 runs on a randomly
perturbed right-hand side, which removes most degeneracy; the true
right-hand side is then restored and any small sign violations are repaired
with dual simplex pivots.  The tableau is rebuilt from the original data
periodically so rounding error does not accumulate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg.blas import dger

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-7
OPT_TOL = 1e-9
DEFAULT_MAX_PIVOTS = 10**6
# consecutive degenerate pivots tolerated before switching to Bland's rule
STALL_LIMIT = 25
# entering-column candidates scored by objective decrease
PRICING_CANDIDATES = 20
REINVERT_EVERY = 100
# relative size of the phase-2 rhs perturbation
PERTURBATION = 1e-7
DUAL_FEAS_TOL = 1e-11


class LpError(RuntimeError):
    pass


class IterationLimitError(LpError):
    """The pivot budget ran out before the simplex method terminated."""


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float).ravel()
        if A.size == 0:
            A = A.reshape(b.shape[0], c.shape[0])
        if A.ndim != 2 or A.shape != (b.shape[0], c.shape[0]):
            raise ValueError(f"A has shape {A.shape}, expected ({b.shape[0]}, {c.shape[0]})")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("LP data must be finite")
        for name, arr in (("c", c), ("A", A), ("b", b)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_rows(self) -> int:
        return self.b.shape[0]


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective_value: float
    iterations: int
    basis: np.ndarray | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def check_feasible(lp: LinearProgram, x, tol: float = FEAS_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (lp.num_vars,):
        return False
    if np.any(x < -tol):
        return False
    if lp.num_rows == 0:
        return True
    return bool(np.max(np.abs(lp.A @ x - lp.b)) <= tol)


class _Tableau:
    """Row-reduced tableau [B^-1 M | B^-1 rhs] with a reduced-cost row.

    ``M`` and ``rhs`` are the original constraint data; the tableau is
    rebuilt from them periodically to stop rounding error
    from accumulating.
    """

    def __init__(self, M: np.ndarray, rhs: np.ndarray, basis: np.ndarray, max_pivots: int):
        self.M = M
        self.rhs = rhs
        self.basis = basis
        self.cost = None
        self.z = None
        self.pivots = 0
        self.max_pivots = max_pivots
        # a reinversion costs about as much as m pivots
        self.reinvert_every = max(REINVERT_EVERY, 2 * M.shape[0])
        self.reinvert()

    def reinvert(self):
        m = self.M.shape[0]
        B = self.M[:, self.basis]
        full = np.concatenate([self.M, self.rhs[:, None]], axis=1)
        T = np.linalg.solve(B, full)
        T[:, self.basis] = np.eye(m)
        self.T = np.asfortranarray(T)  # Fortran order lets dger update in place
        if self.cost is not None:
            self.set_costs(self.cost)

    def set_costs(self, cost: np.ndarray):
        self.cost = cost
        ncols = self.T.shape[1] - 1
        z = np.zeros(ncols + 1)
        z[: cost.shape[0]] = cost
        z -= z[self.basis] @ self.T
        z[self.basis] = 0.0
        self.z = z

    def drop_rows(self, keep: np.ndarray, ncols: int):
        self.M = self.M[keep, :ncols]
        self.rhs = self.rhs[keep]
        self.basis = self.basis[keep]
        self.cost = None
        self.reinvert()

    def pivot(self, r: int, col: int):
        T = self.T
        prow = T[r] / T[r, col]
        colv = T[:, col].copy()
        colv[r] = 0.0
        nzr = np.flatnonzero(colv)
        nzc = np.flatnonzero(prow)
        if nzr.size * nzc.size < 0.25 * T.size:
            # tableaux of consistency systems stay sparse; update only the touched block
            T[np.ix_(nzr, nzc)] -= np.outer(colv[nzr], prow[nzc])
        else:
            self.T = dger(-1.0, colv, prow, a=T, overwrite_a=True)
        self.T[r] = prow
        if self.z is not None:
            self.z -= self.z[col] * prow
            self.z[col] = 0.0
        self.basis[r] = col
        self.pivots += 1
        if self.pivots % self.reinvert_every == 0:
            self.reinvert()

    def run(self, eligible: int, floor: float | None = None) -> str:
        """Iterate to optimality over the first ``eligible`` columns.

        With ``floor`` set, stop as soon as the objective is at or below it
        (phase 1 can stop once the artificials are all zero).
        """
        stall = 0
        while True:
            if self.pivots >= self.max_pivots:
                raise IterationLimitError(f"simplex exceeded {self.max_pivots} pivots")
            if floor is not None and -self.z[-1] <= floor:
                return "optimal"
            bland = stall >= STALL_LIMIT
            zc = self.z[:eligible]
            neg = np.flatnonzero(zc < -OPT_TOL)
            if neg.size == 0:
                return "optimal"
            if bland:
                col = int(neg[0])
            else:
                col = self._best_improvement(zc, neg)
            a = self.T[:, col]
            amax = a.max()
            if amax <= PIVOT_TOL:
                return "unbounded"
            rows = np.flatnonzero(a > max(PIVOT_TOL, 1e-9 * amax))
            ratios = np.maximum(self.T[rows, -1], 0.0) / a[rows]
            near = rows[ratios <= ratios.min() * (1 + 1e-9) + 1e-15]
            if bland:
                r = int(near[np.argmin(self.basis[near])])
            else:
                # among tied rows take the largest pivot element
                r = int(near[np.argmax(a[near])])
            step = max(self.T[r, -1], 0.0) / a[r]
            stall = stall + 1 if step <= 1e-12 else 0
            self.pivot(r, col)

    def _best_improvement(self, zc: np.ndarray, neg: np.ndarray) -> int:
        """Entering column with the largest objective decrease among the
        PRICING_CANDIDATES most negative reduced costs."""
        if neg.size > PRICING_CANDIDATES:
            neg = neg[np.argpartition(zc[neg], PRICING_CANDIDATES)[:PRICING_CANDIDATES]]
        Tn = self.T[:, neg]
        rhs = np.maximum(self.T[:, -1], 0.0)
        with np.errstate(divide="ignore"):
            step = np.where(Tn > PIVOT_TOL, rhs[:, None] / np.where(Tn > PIVOT_TOL, Tn, 1.0), np.inf)
        gain = -zc[neg] * step.min(axis=0)
        return int(neg[np.argmax(gain)])

    def run_dual(self, eligible: int) -> str:
        """Dual simplex from a dual-feasible basis until the rhs is nonnegative."""
        while True:
            if self.pivots >= self.max_pivots:
                raise IterationLimitError(f"simplex exceeded {self.max_pivots} pivots")
            rhs = self.T[:, -1]
            r = int(np.argmin(rhs))
            if rhs[r] >= -DUAL_FEAS_TOL:
                return "optimal"
            row = self.T[r, :eligible]
            cand = np.flatnonzero(row < -PIVOT_TOL)
            if cand.size == 0:
                return "infeasible"
            ratios = np.maximum(self.z[cand], 0.0) / -row[cand]
            near = cand[ratios <= ratios.min() + 1e-12]
            self.pivot(r, int(near[np.argmin(row[near])]))


def solve_lp(lp: LinearProgram, max_pivots: int = DEFAULT_MAX_PIVOTS,
             start: np.ndarray | None = None) -> LpSolution:
    """Two-phase simplex.  Deterministic for a given LP.

    ``start`` is an optional feasible point whose support columns are
    linearly independent (a vertex).  Its support is pivoted into the
    initial basis, which leaves phase 1 with nothing to do.  An unusable
    start is ignored.
    """
    m, nv = lp.A.shape
    c = lp.c
    if m == 0:
        if np.any(c < -OPT_TOL):
            return LpSolution("unbounded", None, -np.inf, 0)
        return LpSolution("optimal", np.zeros(nv), 0.0, 0, np.zeros(0, dtype=int))

    if (start is not None and c.min() >= 0 and np.shape(start) == (nv,)
            and check_feasible(lp, start) and float(c @ start) <= OPT_TOL * OPT_TOL):
        # nonnegative costs: a feasible zero-cost start is already optimal
        x = _clean(np.asarray(start, dtype=float))
        return LpSolution("optimal", x, float(c @ x), 0)

    A = np.array(lp.A)
    b = np.array(lp.b)
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    M = np.concatenate([A, np.eye(m)], axis=1)
    tab = _Tableau(M, b, np.arange(nv, nv + m), max_pivots)

    if start is not None and not _crash(tab, lp, np.asarray(start, dtype=float), nv):
        # a partial crash can leave the basis primal infeasible
        tab = _Tableau(M, b, np.arange(nv, nv + m), max_pivots)

    # phase 1: minimise the sum of artificials; artificials never re-enter
    tab.set_costs(np.concatenate([np.zeros(nv), np.ones(m)]))
    scale = FEAS_TOL * max(1.0, float(np.abs(b).max()))
    tab.run(eligible=nv, floor=0.01 * scale)
    infeas = float(np.abs(tab.T[:, -1][tab.basis >= nv]).sum())
    if infeas > scale:
        return LpSolution("infeasible", None, np.nan, tab.pivots)

    # drive remaining (zero-level) artificials out of the basis; drop redundant rows
    keep = np.ones(m, dtype=bool)
    for r in np.flatnonzero(tab.basis >= nv):
        row = np.abs(tab.T[r, :nv])
        j = int(np.argmax(row))
        if row[j] > 1e-7:
            tab.pivot(r, j)
        else:
            keep[r] = False
    tab.drop_rows(keep, nv)
    rows_kept = np.flatnonzero(keep)

    tab.set_costs(c)
    if c.min() >= 0 and -tab.z[-1] <= OPT_TOL * OPT_TOL:
        # nonnegative costs: a zero-cost vertex is optimal
        return _finish(lp, tab, rows_kept)

    # phase 2 on a slightly perturbed rhs so that pivots are not degenerate,
    # then restore the true rhs and repair any sign violations with dual pivots
    true_rhs = tab.rhs
    jitter = np.random.default_rng(0).uniform(0.5, 1.0, true_rhs.shape[0])
    tab.rhs = true_rhs + PERTURBATION * max(1.0, float(np.abs(true_rhs).max())) * jitter
    tab.reinvert()
    tab.set_costs(c)
    status = tab.run(eligible=nv)
    if status == "unbounded":
        return LpSolution("unbounded", None, -np.inf, tab.pivots)
    tab.rhs = true_rhs
    tab.reinvert()
    if tab.run_dual(eligible=nv) != "optimal":
        raise LpError("lost feasibility after removing the rhs perturbation")
    status = tab.run(eligible=nv)
    if status == "unbounded":
        return LpSolution("unbounded", None, -np.inf, tab.pivots)

    return _finish(lp, tab, rows_kept)


def _finish(lp: LinearProgram, tab: _Tableau, rows_kept: np.ndarray) -> LpSolution:
    x = np.zeros(lp.num_vars)
    x[tab.basis] = tab.T[:, -1]
    x = _refine(lp, x, tab.basis, rows_kept)
    return LpSolution("optimal", x, float(lp.c @ x), tab.pivots, tab.basis.copy())


def _crash(tab: _Tableau, lp: LinearProgram, start: np.ndarray, nv: int) -> bool:
    """Pivot the support of a feasible vertex into the all-artificial basis."""
    if start.shape != (nv,) or not check_feasible(lp, start):
        return False
    for j in np.flatnonzero(start > 0):
        col = np.abs(tab.T[:, j])
        col[tab.basis < nv] = 0.0
        r = int(np.argmax(col))
        if col[r] <= 1e-9:
            return False
        tab.pivot(r, int(j))
    return bool(tab.T[:, -1].min() >= -FEAS_TOL)


def _refine(lp: LinearProgram, x_tab: np.ndarray, basis: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Recompute basic values from the original data; keep whichever is more accurate."""
    B = lp.A[np.ix_(rows, basis)]
    try:
        xb = np.linalg.solve(B, lp.b[rows])
    except np.linalg.LinAlgError:
        return _clean(x_tab)
    x = np.zeros_like(x_tab)
    x[basis] = xb
    x = _clean(x)
    x_tab = _clean(x_tab)

    def resid(v):
        return float(np.max(np.abs(lp.A @ v - lp.b))) if lp.num_rows else 0.0

    return x if resid(x) <= resid(x_tab) else x_tab


def _clean(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x[np.abs(x) < 1e-13] = 0.0
    return x


def lp_to_text(lp: LinearProgram) -> str:
    """Plain-text dump: sparse triplets for c, A and b (one entry per line)."""
    lines = [f"LP {lp.num_rows} {lp.num_vars}"]
    for j in np.flatnonzero(lp.c):
        lines.append(f"C {j} {float(lp.c[j])!r}")
    for i, j in zip(*np.nonzero(lp.A)):
        lines.append(f"A {i} {j} {float(lp.A[i, j])!r}")
    for i in np.flatnonzero(lp.b):
        lines.append(f"B {i} {float(lp.b[i])!r}")
    return "\n".join(lines) + "\n"


def lp_from_text(text: str) -> LinearProgram:
    it = iter(text.strip().splitlines())
    _, m, nv = next(it).split()
    m, nv = int(m), int(nv)
    c, A, b = np.zeros(nv), np.zeros((m, nv)), np.zeros(m)
    for line in it:
        tag, *rest = line.split()
        if tag == "C":
            c[int(rest[0])] = float(rest[1])
        elif tag == "A":
            A[int(rest[0]), int(rest[1])] = float(rest[2])
        elif tag == "B":
            b[int(rest[0])] = float(rest[1])
        else:
            raise ValueError(f"bad line in LP dump: {line!r}")
    return LinearProgram(c, A, b)
