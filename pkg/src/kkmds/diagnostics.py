"""Executable checks of the inequalities behind the rounding analysis.

Every check returns a plain dict verdict with a ``check`` name and a
``passed`` flag, so results serialize directly to JSON.
"""

from __future__ import annotations

import json
from math import ceil, comb, log, log2, sqrt

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .core import Embedding, Instance, kk_stress, pair_costs, pair_index, pairs
from .rounding import (condition_on_sample, conditioning_outcomes, pseudo_deviation,
                       relaxation_value, round_pd)
from .sa import FamilyError, PseudoDistribution, pair_expectation

VERDICT_SCHEMA_VERSION = 1


def quantile(values, q: float) -> float:
    """The ceil(q |S|)-th least element of the multiset (at least the first)."""
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise ValueError("quantile of an empty set")
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    # the small offset keeps q * |S| that is integral up to rounding from stepping up
    rank = max(1, ceil(q * v.size - 1e-9))
    return float(v[min(rank, v.size) - 1])


def _row_quantiles(M: np.ndarray, q: float) -> np.ndarray:
    return np.array([quantile(row, q) for row in M])


def verdict_to_json(verdicts) -> str:
    return json.dumps(verdicts, indent=2, sort_keys=True)


def check_quantile_lemma(points, eta: float, delta: float, C: float = 4.0, C_prime: float = 8.0,
                         span: float | None = None, witness_ratio: float = 1.0 / 3.0) -> dict:
    """Count pairs at distance >= 1 whose endpoint eta-quantiles of distances
    to all points sum to more than C (eta/delta)^(1/k) times their distance.

    The violating fraction is taken over all C(n, 2) pairs and compared with
    C' delta max(log2 span, 1), where ``span`` bounds |coordinates| (default:
    the largest one).  Pairs closer than 1 are never counted and are
    reported separately.  Also reports the fraction of pairs with an
    endpoint that has no other point within ``witness_ratio`` times the pair
    distance.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    n, k = P.shape
    if n < 2:
        raise ValueError("need at least two points")
    D = squareform(pdist(P))
    span = float(np.abs(P).max()) if span is None else float(span)
    Q = _row_quantiles(D, eta)
    I, J = pairs(n)
    dij = D[I, J]
    far = dij >= 1.0
    factor = C * (eta / delta) ** (1.0 / k)
    lhs = Q[I] + Q[J]
    viol = far & (lhs > factor * dij)
    ratio = np.where(far, lhs / np.where(far, dij, 1.0), 0.0)

    Doff = D + np.diag(np.full(n, np.inf))
    witness_missing = 0
    for i, j, d in zip(I, J, dij):
        for a, b in ((i, j), (j, i)):
            others = np.delete(Doff[a], b)
            if not np.any(others <= witness_ratio * d):
                witness_missing += 1
                break

    total = comb(n, 2)
    frac = float(viol.sum()) / total
    bound = C_prime * delta * max(log2(span) if span > 0 else 0.0, 1.0)
    return {
        "check": "quantile_lemma",
        "eta": eta, "delta": delta, "C": C, "C_prime": C_prime, "span": span,
        "violating_pairs": int(viol.sum()),
        "violating_pair_fraction": frac,
        "bound": bound,
        "excluded_close_pairs": int((~far).sum()),
        "worst_ratio": float(ratio.max()) if far.any() else 0.0,
        "no_witness_fraction": witness_missing / total,
        "passed": frac <= bound,
    }


def check_typical_distortion(inst: Instance, opt_emb: Embedding, pd: PseudoDistribution, c: float,
                             slack: float = 0.0, width: float = 2.0) -> dict:
    """Count pairs violating the three distortion sandwiches around ``opt_emb``
    (w = ``width``):

        (1 - w sqrt c) |x*_ij|^2 <= d^2 <= (1 + w sqrt c) |x*_ij|^2
        (1 - w sqrt c) |x*_ij| <= pE |x_i - x_j| <= (1 + w sqrt c) |x*_ij|
        (1 - w sqrt c) d^2 <= pE |x_i - x_j|^2 <= (2 + 2c) d^2

    Each count is compared with stress(opt_emb) / c * C(n, 2) + slack.  The
    count of pairs whose own cost exceeds c is reported as well; that one
    obeys the bound by Markov's inequality.  Width 2 is the first-order
    form; a pair of cost <= c only guarantees the first sandwich for every
    c < 1/4 with width 6.
    """
    if not 0 < c < 0.25:
        raise ValueError("c must lie in (0, 1/4)")
    s = kk_stress(opt_emb, inst)
    xs = pdist(opt_emb.points)
    d = inst.d
    r = width * sqrt(c)
    tol = 1e-12
    first = ((1 - r) * xs**2 > d**2 + tol) | (d**2 > (1 + r) * xs**2 + tol)
    e1 = np.empty_like(d)
    e2 = np.empty_like(d)
    for q, (i, j) in enumerate(zip(*pairs(inst.n))):
        e1[q] = pair_expectation(pd, i, j, lambda D: D)
        e2[q] = pair_expectation(pd, i, j, lambda D: D**2)
    second = ((1 - r) * xs > e1 + tol) | (e1 > (1 + r) * xs + tol)
    third = ((1 - r) * d**2 > e2 + tol) | (e2 > (2 + 2 * c) * d**2 + tol)
    heavy = pair_costs(opt_emb.points, d) > c
    bound = s / c * comb(inst.n, 2) + slack
    counts = {"opt_distance": int(first.sum()), "expected_distance": int(second.sum()),
              "expected_square": int(third.sum())}
    return {
        "check": "typical_distortion", "c": c, "width": width, "opt_stress": s, "bound": bound,
        "counts": counts, "heavy_pairs": int(heavy.sum()),
        "passed": all(v <= bound for v in counts.values()),
    }


def pseudo_sq_distances(pd: PseudoDistribution) -> np.ndarray:
    """n x n matrix of pE |x_i - x_j|^2 (zero diagonal)."""
    M = np.zeros((pd.n, pd.n))
    for i, j in zip(*pairs(pd.n)):
        M[i, j] = M[j, i] = pair_expectation(pd, i, j, lambda D: D**2)
    return M


def expected_sq_deviations(pd: PseudoDistribution, T) -> np.ndarray:
    """E over x_T of pdev^2 of every variable after conditioning, by enumeration."""
    out = np.zeros(pd.n)
    for p, _, pd_T in conditioning_outcomes(pd, T):
        out += p * np.array([pseudo_deviation(pd_T, i) ** 2 for i in range(pd.n)])
    return out


def check_deviation_reduction(pd: PseudoDistribution, inst: Instance, eps: float, tau_cond: int,
                              trials: int, rng: np.random.Generator, delta: float = 0.1) -> dict:
    """For ``trials`` random conditioning sets T of size ``tau_cond``, compare
    the exact mean over x_T of pdev^2(x_i) with Q({pE |x_i - x_j|^2}_j, eps).

    A variable fails when the share of sets T on which it exceeds the bound
    is above delta plus three standard errors of that share.
    """
    if pd.degree < tau_cond + 1:
        raise FamilyError(f"conditioning on {tau_cond} variables needs tables of size "
                          f"{tau_cond + 1}, have {pd.degree}")
    M = pseudo_sq_distances(pd)
    Q = _row_quantiles(M, eps)
    hits = np.zeros(pd.n)
    for _ in range(trials):
        T = tuple(sorted(int(v) for v in rng.choice(pd.n, size=tau_cond, replace=False)))
        hits += expected_sq_deviations(pd, T) > Q + 1e-12
    share = hits / trials
    allowed = delta + 3 * np.sqrt(delta * (1 - delta) / trials)
    failing = share > allowed
    return {
        "check": "deviation_reduction", "eps": eps, "tau_cond": tau_cond, "trials": trials,
        "delta": delta, "quantiles": Q.tolist(), "exceed_share": share.tolist(),
        "per_variable_pass": (~failing).tolist(),
        "failing_fraction": float(failing.mean()),
        "passed": not failing.any(),
    }


def check_closest_conditioning(pd: PseudoDistribution, T, draws: int, rng: np.random.Generator,
                               constant: float = 4.0, max_retries: int = 20) -> dict:
    """Mean over ``draws`` samples of x_T of pdev^2(x_i) against
    constant * min over j in T of pE |x_i - x_j|^2, with three standard errors."""
    T = tuple(sorted(int(v) for v in T))
    M = pseudo_sq_distances(pd)
    target = constant * M[:, list(T)].min(axis=1)
    samples = np.empty((draws, pd.n))
    for s in range(draws):
        _, pd_T = condition_on_sample(pd, T, rng, max_retries)
        samples[s] = [pseudo_deviation(pd_T, i) ** 2 for i in range(pd.n)]
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / sqrt(draws) if draws > 1 else np.zeros(pd.n)
    ok = mean <= target + 3 * se + 1e-12
    return {
        "check": "closest_conditioning", "T": list(T), "draws": draws, "constant": constant,
        "mean_sq_pdev": mean.tolist(), "stderr": se.tolist(), "bound": target.tolist(),
        "per_variable_pass": ok.tolist(), "passed": bool(ok.all()),
    }


def check_rounded_cost(pd: PseudoDistribution, inst: Instance, T, pair_set, draws: int,
                       rng: np.random.Generator, max_retries: int = 20) -> dict:
    """Mean over ``draws`` samples of x_T of the rounded cost summed over
    ``pair_set``, against 4 |S| + 4 value(pd) C(n, 2) plus three standard errors.

    Hard violations are single draws whose cost exceeds the bound; those
    are counted but allowed, since the bound holds in expectation.
    """
    T = tuple(sorted(int(v) for v in T))
    pos = [pair_index(inst.n, i, j) for i, j in pair_set]
    value = relaxation_value(pd, inst)
    bound = 4 * len(pos) + 4 * value * comb(inst.n, 2)
    costs = np.empty(draws)
    for s in range(draws):
        _, pd_T = condition_on_sample(pd, T, rng, max_retries)
        costs[s] = pair_costs(round_pd(pd_T).points, inst.d)[pos].sum()
    mean = float(costs.mean())
    se = float(costs.std(ddof=1) / sqrt(draws)) if draws > 1 else 0.0
    return {
        "check": "rounded_cost", "T": list(T), "pairs": len(pos), "draws": draws,
        "relaxation_value": value, "mean_cost": mean, "stderr": se, "bound": bound,
        "draws_above_bound": int((costs > bound).sum()),
        "passed": mean <= bound + 3 * se,
    }


def check_translating_quantiles(pd: PseudoDistribution, opt_emb: Embedding, inst: Instance,
                                eps: float, factor: float = 10.0, slack: float = 0.0) -> dict:
    """Share of indices i with
    Q({pE |x_i - x_j|^2}_j, eps) > factor * Q({|x*_i - x*_k|^2}_k, 16 sqrt s + eps),
    s the stress of ``opt_emb``, against sqrt s + eps + slack."""
    s = kk_stress(opt_emb, inst)
    left = _row_quantiles(pseudo_sq_distances(pd), eps)
    right = _row_quantiles(squareform(pdist(opt_emb.points)) ** 2, min(1.0, 16 * sqrt(s) + eps))
    bad = left > factor * right + 1e-12
    frac = float(bad.mean())
    bound = sqrt(s) + eps + slack
    return {
        "check": "translating_quantiles", "eps": eps, "factor": factor, "opt_stress": s,
        "violating_fraction": frac, "bound": bound, "passed": frac <= bound,
    }


def tau_for_failure_rate(eps: float, delta: float) -> int:
    """Conditioning-set size ceil(log(1/delta) / eps)."""
    return max(1, ceil(log(1.0 / delta) / eps))
