from itertools import product
from math import gamma, pi, sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kkmds.core import Embedding, Instance, kk_stress
from kkmds.netting import EpsNet
from kkmds.oracle import (EnumerationTooLargeError, brute_force_net_opt, chi_mean,
                          classical_mds, gaussian_sketch, local_search_opt, net_symmetries,
                          orbit_representatives, smoothed_grad, smoothed_stress)
from conftest import grid_net, line_net


def _enumerate(inst, net):
    best, arg = np.inf, None
    for a in product(range(net.size), repeat=inst.n):
        v = kk_stress(Embedding(net.points[list(a)]), inst)
        if v < best - 1e-15:
            best, arg = v, list(a)
    return best, arg


def test_two_points_on_two_point_net():
    emb, value, a = brute_force_net_opt(Instance(2, 1, np.array([1.0])), EpsNet.from_points([0.0, 1.0]))
    assert value == 0.0 and a == [0, 1]
    assert emb.provenance == "brute-force"


def test_three_equidistant_points_on_two_point_net():
    inst = Instance(3, 1, np.ones(3))
    _, value, a = brute_force_net_opt(inst, EpsNet.from_points([0.0, 1.0]))
    # any assignment puts two objects together: one pair costs 1, two cost 0
    assert value == pytest.approx(1 / 3)
    assert a == [0, 0, 1]
    assert (value, a) == pytest.approx(_enumerate(inst, EpsNet.from_points([0.0, 1.0])))


@given(st.integers(0, 10**6))
def test_brute_force_matches_naive_enumeration(seed):
    rng = np.random.default_rng(seed)
    inst = Instance(3, 1, rng.uniform(1.0, 3.0, 3))
    net = line_net(-2, 2)
    _, value, a = brute_force_net_opt(inst, net)
    ref, ref_a = _enumerate(inst, net)
    assert value == pytest.approx(ref, abs=1e-12)
    assert a == ref_a


@pytest.mark.parametrize("net", [line_net(-2, 2), grid_net(-1, 1)], ids=["line", "grid"])
def test_symmetry_reduction_matches_full_enumeration(net):
    rng = np.random.default_rng(1)
    for _ in range(3):
        n = 3 if net.k == 2 else 4
        inst = Instance(n, net.k, rng.uniform(1.0, 2.5, n * (n - 1) // 2))
        full = brute_force_net_opt(inst, net)
        sym = brute_force_net_opt(inst, net, use_symmetry=True)
        assert sym[1] == pytest.approx(full[1], abs=1e-12)
        assert sym[2] == full[2]


def test_net_symmetry_groups():
    assert len(net_symmetries(line_net(-2, 2))) == 2
    assert len(net_symmetries(grid_net(-1, 1))) == 8
    assert orbit_representatives(grid_net(-1, 1)).tolist() == [0, 1, 4]
    assert len(net_symmetries(EpsNet.from_points([0.0, 1.0, 3.0]))) == 1


def test_permutation_equivariance():
    rng = np.random.default_rng(2)
    inst = Instance(4, 1, rng.uniform(1.0, 3.0, 6))
    perm = rng.permutation(4)
    M = inst.matrix()[np.ix_(perm, perm)]
    other = Instance.from_matrix(M, 1)
    net = line_net(-2, 2)
    _, v1, a1 = brute_force_net_opt(inst, net)
    _, v2, a2 = brute_force_net_opt(other, net)
    assert v1 == pytest.approx(v2, abs=1e-12)
    assert kk_stress(Embedding(net.points[[a1[p] for p in perm]]), other) == pytest.approx(v2, abs=1e-12)


def test_cap_and_dimension_errors():
    with pytest.raises(EnumerationTooLargeError):
        brute_force_net_opt(Instance(6, 1, np.ones(15)), line_net(-5, 5), cap=1000)
    with pytest.raises(ValueError):
        brute_force_net_opt(Instance(2, 2, np.ones(1)), line_net(-1, 1))


def test_relaxation_lower_bounds_brute_force():
    from kkmds.sa import build_family, build_sa_lp
    from kkmds.lp import solve_lp
    rng = np.random.default_rng(3)
    net = line_net(-2, 2)
    for _ in range(3):
        inst = Instance(4, 1, rng.uniform(1.0, 3.0, 6))
        lp, _ = build_sa_lp(inst, net, build_family(4, "full", 2))
        _, value, _ = brute_force_net_opt(inst, net)
        assert solve_lp(lp).objective_value <= value + 1e-6


# local search

@given(st.integers(0, 10**6), st.integers(2, 6), st.integers(1, 3))
def test_gradient_matches_central_differences(seed, n, k):
    rng = np.random.default_rng(seed)
    inst = Instance(n, k, rng.uniform(0.5, 3.0, n * (n - 1) // 2))
    X = rng.normal(size=(n, k))
    G = smoothed_grad(X, inst)
    h = 1e-6
    num = np.zeros_like(X)
    for idx in np.ndindex(X.shape):
        E = np.zeros_like(X)
        E[idx] = h
        num[idx] = (smoothed_stress(X + E, inst) - smoothed_stress(X - E, inst)) / (2 * h)
    assert np.max(np.abs(G - num)) <= 1e-4 * max(np.max(np.abs(num)), 1e-3)


def test_two_points_converge_from_random_start():
    inst = Instance(2, 1, np.array([1.0]))
    rng = np.random.default_rng(4)
    emb = local_search_opt(inst, restarts=1, steps=200, rng=rng, init=rng.uniform(-3, 3, (2, 1)))
    assert kk_stress(emb, inst) <= 1e-8


def test_optimum_is_a_fixed_point():
    P = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0], [1.0, 1.0]])
    inst = Instance.from_points(P)
    emb = local_search_opt(inst, restarts=1, steps=100, init=P)
    assert kk_stress(emb, inst) <= 1e-8
    assert emb.provenance == "local-search"


def test_local_search_recovers_planar_points():
    rng = np.random.default_rng(5)
    inst = Instance.from_points(rng.uniform(0, 5, (8, 2)))
    assert kk_stress(local_search_opt(inst, restarts=3, rng=rng), inst) <= 1e-6


def test_descent_is_monotone():
    from kkmds.oracle import _descend
    rng = np.random.default_rng(6)
    inst = Instance(5, 2, rng.uniform(1.0, 4.0, 10))
    X = rng.normal(size=(5, 2))
    vals = [smoothed_stress(X, inst)]
    for _ in range(20):
        X = _descend(X, inst, 1, 25.0 * 4.0, 1e-6)
        vals.append(smoothed_stress(X, inst))
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_classical_mds_exact_on_euclidean_input():
    P = np.array([[0.0], [1.0], [3.0], [7.0]])
    inst = Instance.from_points(P)
    assert kk_stress(Embedding(classical_mds(inst)), inst) <= 1e-20


# sketching

def test_sketch_of_zero_is_zero():
    out = gaussian_sketch(np.zeros((1, 5)), 3, np.random.default_rng(0))
    assert out.shape == (1, 3) and np.all(out == 0)


def test_sketch_is_linear_and_seeded():
    P = np.random.default_rng(1).normal(size=(4, 6))
    a = gaussian_sketch(P, 2, np.random.default_rng(9))
    b = gaussian_sketch(P, 2, np.random.default_rng(9))
    assert np.array_equal(a, b)
    np.testing.assert_allclose(a[0] + a[1], gaussian_sketch(P[0] + P[1], 2, np.random.default_rng(9))[0])
    with pytest.raises(ValueError):
        gaussian_sketch(P, 0, np.random.default_rng(0))


def test_chi_mean_closed_forms():
    assert chi_mean(1) == pytest.approx(sqrt(2 / pi), rel=1e-14)
    assert chi_mean(2) == pytest.approx(sqrt(pi) / 2, rel=1e-14)
    for k in (3, 5, 10, 40):
        assert chi_mean(k) == pytest.approx(sqrt(2 / k) * gamma((k + 1) / 2) / gamma(k / 2), rel=1e-12)
    with pytest.raises(ValueError):
        chi_mean(0)


def test_chi_mean_rate_is_inverse_linear():
    ks = np.arange(1, 1001)
    vals = np.array([chi_mean(int(k)) for k in ks])
    assert np.all((vals > 0) & (vals <= 1))
    assert np.all(np.diff(vals) > 0)
    scaled = ks * (1 - vals)
    # k (1 - chi_mean(k)) tends to 1/4
    assert scaled.max() <= 0.25 + 1e-9
    assert scaled[-1] == pytest.approx(0.25, abs=1e-3)


def test_sketch_norm_matches_chi_mean():
    rng = np.random.default_rng(7)
    x = np.ones(3) / sqrt(3)
    for k in (1, 2, 4):
        norms = np.array([np.linalg.norm(gaussian_sketch(x, k, rng)) for _ in range(20000)])
        se = norms.std(ddof=1) / sqrt(norms.size)
        assert abs(norms.mean() - chi_mean(k)) <= 3 * se


def test_dimension_reduction_constant():
    # every pair's sketched distance ratio is |g| / sqrt(k') with g ~ N(0, I), so the
    # expected stress of a sketched zero-stress instance is 2 (1 - chi_mean(k'))
    rng = np.random.default_rng(8)
    P = rng.uniform(0, 6, (6, 4))
    inst4 = Instance.from_points(P)
    measured = {}
    for kp in (2, 4):
        inst = Instance(6, kp, inst4.d)
        s = np.array([kk_stress(Embedding(gaussian_sketch(P, kp, rng)), inst) for _ in range(100)])
        measured[kp] = kp * s.mean()
        assert s.mean() == pytest.approx(2 * (1 - chi_mean(kp)), abs=4 * s.std(ddof=1) / 10)
    assert measured[2] <= 1.0 and measured[4] <= 1.0
