import numpy as np
import pytest

from kkmds.core import aspect_ratio, kk_stress
from kkmds.generators import GeneratorError, KINDS, generate, graph_shortest_path
from kkmds.oracle import local_search_opt


@pytest.mark.parametrize("kind", KINDS)
def test_generators_are_deterministic(kind):
    a = generate(kind, 6, 2, seed=3)
    b = generate(kind, 6, 2, seed=3)
    assert a.to_json() == b.to_json()
    assert a.n == 6 and a.k == 2 and np.all(a.d > 0)


def test_noise_free_points_are_embeddable():
    inst = generate("euclidean-noise", 7, 2, seed=1, noise=0.0)
    assert kk_stress(local_search_opt(inst, restarts=3), inst) <= 1e-8


def test_noise_is_bounded_multiplicative():
    clean = generate("euclidean-noise", 8, 1, seed=4)
    noisy = generate("euclidean-noise", 8, 1, seed=4, noise=0.2)
    assert np.all(np.abs(noisy.d / clean.d - 1) <= 0.2)
    assert not np.allclose(noisy.d, clean.d)
    with pytest.raises(ValueError):
        generate("euclidean-noise", 4, 1, noise=1.0)


def test_two_cluster_dissimilarities():
    M = generate("two-cluster", 6, 1, delta=8.0).matrix()
    assert np.all(M[:3, :3][np.triu_indices(3, 1)] == 1.0)
    assert np.all(M[3:, 3:][np.triu_indices(3, 1)] == 1.0)
    assert np.all(M[:3, 3:] == 8.0)


def test_geometric_line_aspect_ratio():
    # points 1, 2, ..., 128: largest gap 127, smallest 1
    assert aspect_ratio(generate("geometric-line", 8)) == 2**7 - 1


def test_graph_distances_are_hop_counts():
    inst = generate("graph-shortest-path", 8, 1, seed=2, p=0.4)
    assert np.all(inst.d == np.round(inst.d)) and inst.d.min() == 1.0
    M = inst.matrix()
    assert np.all(M[:, :, None] <= M[:, None, :] + M.T[None, :, :] + 1e-12)
    assert np.all(generate("graph-shortest-path", 5, 1, p=1.0).d == 1.0)


def test_disconnected_graphs_exhaust_retries():
    with pytest.raises(GeneratorError):
        graph_shortest_path(30, 1, p=0.01, max_retries=3)


def test_unknown_kind():
    with pytest.raises(ValueError):
        generate("spiral", 4)
