"""End-to-end solver: net, Sherali-Adams relaxation, sample-and-condition
rounding to pseudo-expected positions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb, log

import numpy as np
from scipy.spatial.distance import cdist

from .core import (Embedding, Instance, aspect_ratio, is_normalized, kk_stress, pair_costs,
                   pair_index, pairs)
from .lp import LpError, LpSolution, solve_lp
from .netting import DEFAULT_NET_CAP, EpsNet, build_net, snap_many
from .oracle import classical_mds
from .sa import (
    DEFAULT_VAR_CAP,
    Conditioning,
    PseudoDistribution,
    SaLpIndex,
    SubsetFamily,
    ZeroProbabilityError,
    build_family,
    build_sa_lp,
    condition,
    consistency_residuals,
    enumerate_assignments,
    extract_pd,
    integral_point,
    local_marginal,
    pair_expectation,
    sample_local,
    singleton_marginal,
)

REPORT_SCHEMA_VERSION = 1
DEVIATION_BOUND_SLACK = 1e-8


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverParams:
    """Knobs of one solver run.

    ``tau`` is the size of the conditioning set.  The full family has level
    max(2 tau, tau + 2) (capped at n); the sparse family has level tau + 2 so
    its base tuples, the sets it conditions on, have size tau.

    ``net_override`` replaces the default unit-radius net of [-Delta/eps,
    Delta/eps]^k: an EpsNet, or a (half_width, cover_radius) pair.
    """

    eps: float = 0.5
    tau: int = 2
    family: str = "full"
    net_override: object = None
    seed: int = 0
    trials: int = 1
    c0: float = 1.0
    max_retries: int = 20
    net_cap: int = DEFAULT_NET_CAP
    var_cap: int = DEFAULT_VAR_CAP

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.family not in ("full", "sparse"):
            raise ValueError(f"unknown family kind {self.family!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")


def tau_formula(k: int, delta: float, eps: float) -> float:
    """Conditioning-set size prescribed by the runtime analysis, hidden constants set to 1.

    Natural logarithms; the inner log arguments are clamped at 1 so the
    value is never negative.  Reference value only.
    """
    if k < 1 or delta < 1 or eps <= 0:
        raise ValueError("need k >= 1, delta >= 1, eps > 0")
    loglog = log(max(log(delta) / eps, 1.0))
    logr = log(max(delta / eps, 1.0))
    if k == 1:
        return loglog * logr / eps
    if k == 2:
        return loglog**2 * logr / eps
    return k * loglog * logr ** (k / 2) / eps ** (k / 2)


def default_net(inst: Instance, params: SolverParams) -> EpsNet:
    ov = params.net_override
    if isinstance(ov, EpsNet):
        if ov.k != inst.k:
            raise ValueError("net dimension does not match the instance")
        return ov
    if ov is not None:
        half_width, radius = ov
        return build_net(inst.k, float(half_width), float(radius), cap=params.net_cap)
    return build_net(inst.k, aspect_ratio(inst) / params.eps, 1.0, cap=params.net_cap)


def family_level(n: int, tau: int, kind: str) -> int:
    if kind == "full":
        return min(n, max(2 * tau, tau + 2))
    return tau + 2


def _descend_assignment(x: list[int], D: np.ndarray, ND: np.ndarray, sweeps: int) -> list[int]:
    n = len(x)
    for _ in range(sweeps):
        changed = False
        for v in range(n):
            others = [u for u in range(n) if u != v]
            cost = ((1.0 - ND[:, [x[u] for u in others]] / D[v, others]) ** 2).sum(axis=1)
            best = int(np.argmin(cost))
            if cost[best] < cost[x[v]] - 1e-12:
                x[v] = best
                changed = True
        if not changed:
            break
    return x


def greedy_assignment(inst: Instance, net: EpsNet, sweeps: int = 20, restarts: int = 4) -> list[int]:
    """Best of several coordinate descents over net assignments.

    Starts: every object at the net's central point, classical MDS snapped
    to the net, and ``restarts`` random assignments from a fixed stream.
    """
    n, Z = inst.n, net.points
    D = inst.matrix()
    ND = cdist(Z, Z)
    centroid = Z.mean(axis=0)
    center = int(np.argmin(np.linalg.norm(Z - centroid, axis=1)))
    Y = classical_mds(inst)
    starts = [[center] * n, snap_many(Y - Y.mean(axis=0) + centroid, net).tolist()]
    rng = np.random.default_rng(0)
    starts += [rng.integers(0, net.size, n).tolist() for _ in range(restarts)]
    best, best_val = None, np.inf
    for x0 in starts:
        x = _descend_assignment([int(a) for a in x0], D, ND, sweeps)
        val = kk_stress(Embedding(Z[x]), inst)
        if val < best_val:
            best, best_val = x, val
    return best


@dataclass(frozen=True)
class Relaxation:
    """A solved relaxation, reusable across rounding seeds."""

    inst: Instance
    net: EpsNet
    family: SubsetFamily
    index: SaLpIndex
    solution: LpSolution
    pd: PseudoDistribution
    lp_shape: tuple

    @property
    def lp_value(self) -> float:
        return float(self.solution.objective_value)


def relax(inst: Instance, params: SolverParams, net: EpsNet | None = None,
          family: SubsetFamily | None = None) -> Relaxation:
    """Build the net and family, solve the LP and extract the pseudo-distribution."""
    if not is_normalized(inst):
        raise ValueError("solve expects a normalized instance (min d = 1)")
    net = default_net(inst, params) if net is None else net
    if family is None:
        level = family_level(inst.n, params.tau, params.family)
        fam_rng = np.random.default_rng(np.random.SeedSequence([int(params.seed), 0]))
        family = build_family(inst.n, params.family, level, eps=params.eps,
                              rng=fam_rng, c0=params.c0)
    lp, index = build_sa_lp(inst, net, family, var_cap=params.var_cap)
    sol = solve_lp(lp, start=integral_point(index, greedy_assignment(inst, net)))
    if sol.status != "optimal":
        # the uniform pseudo-distribution is always feasible and costs are bounded
        raise LpError(f"relaxation LP is {sol.status}; the encoding is broken")
    pd = extract_pd(sol, index, family, net)
    return Relaxation(inst, net, family, index, sol, pd, lp.A.shape)


def pseudo_deviation(pd: PseudoDistribution, i: int) -> float:
    """pE |x_i - pE x_i| from the singleton marginal."""
    p = singleton_marginal(pd, i)
    Z = pd.net.points
    mean = p @ Z
    return float(p @ np.linalg.norm(Z - mean, axis=1))


def pseudo_deviations(pd: PseudoDistribution) -> np.ndarray:
    return np.array([pseudo_deviation(pd, i) for i in range(pd.n)])


def round_pd(pd: PseudoDistribution) -> Embedding:
    """Embedding placing each point at its pseudo-expected position."""
    Z = pd.net.points
    fixed = pd.fixed_map
    pts = np.empty((pd.n, pd.net.k))
    for i in range(pd.n):
        pts[i] = Z[fixed[i]] if i in fixed else singleton_marginal(pd, i) @ Z
    return Embedding(pts, "rounded")


def deviation_bound_gaps(pd: PseudoDistribution, inst: Instance) -> np.ndarray:
    """rhs - lhs of the rounding inequality for every pair, condensed order:

        (1 - |pE x_i - pE x_j| / d)^2
            <= 2 pE (1 - |x_i - x_j| / d)^2 + 2 ((pdev_i + pdev_j) / d)^2
    """
    emb = round_pd(pd)
    lhs = pair_costs(emb.points, inst.d)
    pdev = pseudo_deviations(pd)
    out = np.empty_like(lhs)
    for q, (i, j) in enumerate(zip(*pairs(inst.n))):
        d = inst.d[q]
        exp_cost = pair_expectation(pd, i, j, lambda D: (1.0 - D / d) ** 2)
        out[q] = 2 * exp_cost + 2 * ((pdev[i] + pdev[j]) / d) ** 2 - lhs[q]
    return out


def deviation_bound_violations(pd: PseudoDistribution, inst: Instance, slack: float = DEVIATION_BOUND_SLACK) -> int:
    return int((deviation_bound_gaps(pd, inst) < -slack).sum())


def choose_conditioning_set(pd: PseudoDistribution, family: SubsetFamily, tau: int,
                            rng: np.random.Generator) -> tuple[int, ...]:
    if family.kind == "sparse":
        return tuple(family.base[int(rng.integers(len(family.base)))])
    size = min(tau, pd.n)
    return tuple(sorted(int(v) for v in rng.choice(pd.n, size=size, replace=False)))


def condition_on_sample(pd: PseudoDistribution, T, rng: np.random.Generator,
                        max_retries: int = 20):
    """Draw x_T from its local table and condition; redraw on zero-probability events."""
    for _ in range(max_retries):
        draw = sample_local(pd, T, rng)
        try:
            return draw, condition(pd, Conditioning(draw))
        except ZeroProbabilityError:
            continue
    raise SolverError(f"conditioning on {tuple(T)} hit zero-probability events {max_retries} times")


@dataclass
class SolveResult:
    embedding: Embedding
    report: dict = field(default_factory=dict)

    @property
    def stress(self) -> float:
        return float(self.report["best_stress"])


def solve_mds(inst: Instance, params: SolverParams, rng: np.random.Generator | None = None,
              relaxation: Relaxation | None = None) -> SolveResult:
    """Relax, then take ``params.trials`` independent sample-and-condition
    roundings and keep the lowest-stress one.

    Trial t uses its own stream spawned from the seed, so trials do not
    depend on each other.  ``rng`` (if given) supplies that seed instead of
    ``params.seed``.  A precomputed ``relaxation`` is reused as is.
    """
    rel = relax(inst, params) if relaxation is None else relaxation
    pd = rel.pd
    root = int(params.seed) if rng is None else int(rng.integers(0, 2**63))
    streams = np.random.SeedSequence([root, 1]).spawn(params.trials)
    pdev_before = pseudo_deviations(pd)
    sum_err, cons_err = consistency_residuals(pd)

    trials = []
    best, best_emb = None, None
    for t, ss in enumerate(streams):
        trng = np.random.default_rng(ss)
        T = choose_conditioning_set(pd, rel.family, params.tau, trng)
        draw, pd_T = condition_on_sample(pd, T, trng, params.max_retries)
        emb = round_pd(pd_T)
        stress = kk_stress(emb, inst)
        gaps = deviation_bound_gaps(pd_T, inst)
        trials.append({
            "T": list(T),
            "x_tilde": {str(v): int(a) for v, a in sorted(draw.items())},
            "x_tilde_points": {str(v): rel.net.points[a].tolist() for v, a in sorted(draw.items())},
            "stress": stress,
            "pdevs": pseudo_deviations(pd_T).tolist(),
            "deviation_bound_violations": int((gaps < -DEVIATION_BOUND_SLACK).sum()),
            "deviation_bound_min_gap": float(gaps.min()),
            "points": emb.points.tolist(),
        })
        if best is None or stress < trials[best]["stress"]:
            best, best_emb = t, emb

    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "lp_value": rel.lp_value,
        "lp_rows": int(rel.lp_shape[0]),
        "lp_vars": int(rel.lp_shape[1]),
        "lp_pivots": int(rel.solution.iterations),
        "consistency": {"sum_error": sum_err, "max_disagreement": cons_err},
        "family": {"kind": rel.family.kind, "level": rel.family.level,
                   "subsets": len(rel.family), "base": len(rel.family.base)},
        "net_meta": rel.net.meta(),
        "pdevs_before": pdev_before.tolist(),
        "trials": trials,
        "best_trial": best,
        "best_stress": trials[best]["stress"],
    }
    return SolveResult(best_emb, report)


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def relaxation_value(pd: PseudoDistribution, inst: Instance) -> float:
    """Average over pairs of pE (1 - |x_i - x_j| / d_ij)^2."""
    vals = [pair_expectation(pd, i, j, lambda D, d=inst.d[q]: (1.0 - D / d) ** 2)
            for q, (i, j) in enumerate(zip(*pairs(inst.n)))]
    return float(np.mean(vals))


def conditioning_outcomes(pd: PseudoDistribution, T):
    """Every positive-probability draw of x_T with its probability and conditioned pd."""
    free, table = local_marginal(pd, T)
    probs = table.ravel()
    idx = enumerate_assignments(pd.net.size, len(free))
    for a in np.flatnonzero(probs > 0):
        draw = {v: int(idx[a, free.index(v)]) for v in free}
        try:
            yield float(probs[a]), draw, condition(pd, Conditioning(draw))
        except ZeroProbabilityError:
            continue


def expected_rounded_cost(pd: PseudoDistribution, inst: Instance, T, pair_set) -> tuple[float, float]:
    """Exact expectation over x_T of the rounded cost summed over ``pair_set``,
    and the bound 4 |S| + 4 * value(pd) * C(n, 2)."""
    pos = [pair_index(inst.n, i, j) for i, j in pair_set]
    total = 0.0
    for p, _, pd_T in conditioning_outcomes(pd, T):
        total += p * float(pair_costs(round_pd(pd_T).points, inst.d)[pos].sum())
    return total, 4 * len(pos) + 4 * relaxation_value(pd, inst) * comb(inst.n, 2)
