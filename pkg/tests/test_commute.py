import numpy as np
import pytest

from dynwalks import chain, commute, graphs
from dynwalks.errors import GraphError


def test_exact_commute_oracles():
    # K2: each leg is geometric with success 1/2
    assert commute.exact_commute(graphs.complete_graph(2), 0, 1) == pytest.approx(4.0)
    # lazy path end-to-end: 4 (n-1)^2, cross-checked at several sizes
    for n in (3, 4, 5, 12):
        g = graphs.path_graph(n)
        assert commute.exact_commute(g, 0, n - 1) == pytest.approx(4.0 * (n - 1) ** 2)
    assert commute.exact_commute(graphs.path_graph(4), 2, 2) == 0.0
    with pytest.raises(GraphError):
        commute.exact_commute(graphs.StaticGraph(4, [(0, 1), (2, 3)]), 0, 2)


def test_hitting_times_first_step_consistency():
    rng = np.random.default_rng(0)
    for _ in range(10):
        g = graphs.gnp_connected_graph(int(rng.integers(3, 10)), 0.5, rng)
        P = chain.lazy_matrix(g).matrix
        for target in range(0, g.n, 2):
            tau = commute.hitting_times_to(g, target)
            resid = tau - (1.0 + P @ tau)
            assert abs(tau[target]) < 1e-9
            mask = np.arange(g.n) != target
            assert np.abs(resid[mask]).max() < 1e-8


def test_max_commute_symmetric_and_positive():
    g = graphs.circulant_graph(16, 2)
    C = commute.commute_matrix(g)
    assert np.allclose(C, C.T)
    assert commute.max_commute(g) == pytest.approx(C.max())
    assert np.abs(np.diag(C)).max() < 1e-8


def test_solve_voltage_k2_and_path():
    volt = commute.solve_voltage(graphs.complete_graph(2), 0, 1)
    assert np.allclose(volt.values, [0.0, 1.0])
    assert commute.voltage_commute_bound(graphs.complete_graph(2), volt) == pytest.approx(4.0)
    g = graphs.path_graph(5)
    v = commute.solve_voltage(g, 0, 4)
    # harmonicity forces linearity on a path
    assert np.allclose(v.values, [0, 0.25, 0.5, 0.75, 1.0])


def test_voltage_commute_identity_random():
    rng = np.random.default_rng(1)
    for _ in range(25):
        g = graphs.gnp_connected_graph(int(rng.integers(3, 11)), 0.5, rng)
        s, t = 0, g.n - 1
        volt = commute.solve_voltage(g, s, t)
        exact = commute.exact_commute(g, s, t)
        assert commute.voltage_commute_bound(g, volt) == pytest.approx(exact, rel=1e-6)


def test_voltage_is_the_maximiser():
    g = graphs.barbell_graph(9)
    s, t = 0, 8
    volt = commute.solve_voltage(g, s, t)
    best = commute.voltage_commute_bound(g, volt)
    rng = np.random.default_rng(2)
    for _ in range(100):
        cand = rng.random(g.n)
        cand[s], cand[t] = 0.0, 1.0
        assert 1.0 / chain.dirichlet_form_edges(g, cand) <= best + 1e-6


def test_cut_sum_upper_path_tight_and_k2():
    for n in (3, 6, 10):
        g = graphs.path_graph(n)
        lab, bounds = commute.cut_sum_upper(g, 0, n - 1)
        assert np.array_equal(lab.order, np.arange(n))
        assert np.all(lab.prefix_boundaries == 1)
        assert bounds.flow == pytest.approx(4.0 * (n - 1) ** 2, abs=1e-9)
        assert bounds.literal_2m == pytest.approx(2.0 * (n - 1) ** 2, abs=1e-9)
    _, k2b = commute.cut_sum_upper(graphs.complete_graph(2), 0, 1)
    assert k2b.flow == pytest.approx(4.0)


def test_cut_sum_upper_dominates_exact():
    rng = np.random.default_rng(3)
    for _ in range(40):
        g = graphs.gnp_connected_graph(int(rng.integers(4, 11)), 0.5, rng)
        s, t = sorted(rng.choice(g.n, size=2, replace=False))
        exact = commute.exact_commute(g, int(s), int(t))
        _, bounds = commute.cut_sum_upper(g, int(s), int(t))
        assert bounds.flow >= exact - 1e-9
        assert bounds.reversed_flow >= exact - 1e-9


def test_labelling_prefix_flows_match_boundaries():
    g = graphs.gnp_connected_graph(8, 0.5, 5)
    lab, _ = commute.cut_sum_upper(g, 0, 7)
    assert np.allclose(lab.prefix_flows, lab.prefix_boundaries / (4.0 * g.m))
    assert np.all(lab.prefix_boundaries >= 1)


def test_connected_labelling_path_identity_and_cycle():
    g = graphs.path_graph(6)
    volt = commute.solve_voltage(g, 0, 5)
    lab = commute.connected_labelling(g, volt)
    assert lab.status == "found-greedy"
    assert np.array_equal(lab.order, np.arange(6))
    c6 = graphs.cycle_graph(6)
    volt = commute.solve_voltage(c6, 0, 3)
    lab = commute.connected_labelling(c6, volt)
    assert lab.order is not None
    assert commute.prefixes_connected(c6, lab.order)
    assert np.all(np.diff(volt.values[lab.order]) >= -1e-9)


def test_connected_labelling_exhaustive_small():
    rng = np.random.default_rng(6)
    for _ in range(15):
        g = graphs.gnp_connected_graph(int(rng.integers(3, 7)), 0.5, rng)
        for s in range(g.n):
            for t in range(g.n):
                if s == t:
                    continue
                volt = commute.solve_voltage(g, s, t)
                lab = commute.connected_labelling(g, volt)
                assert lab.order is not None
                assert lab.order[0] == s
                assert commute.prefixes_connected(g, lab.order)


def test_nash_williams_path_exact_and_validation():
    n = 6
    g = graphs.path_graph(n)
    cutsets = [[(i, i + 1)] for i in range(n - 1)]
    nw = commute.nash_williams_lower(g, 0, n - 1, cutsets)
    assert nw.flow == pytest.approx(4.0 * (n - 1) ** 2)
    assert nw.literal_2m == pytest.approx(2.0 * (n - 1) ** 2)
    with pytest.raises(GraphError):  # shared edge between cutsets
        commute.nash_williams_lower(g, 0, n - 1, [[(0, 1)], [(0, 1)]])
    c6 = graphs.cycle_graph(6)
    with pytest.raises(GraphError):  # one cycle edge leaves 0 and 3 connected
        commute.nash_williams_lower(c6, 0, 3, [[(0, 1)]])
    # a full two-edge cycle cut is accepted
    nw2 = commute.nash_williams_lower(c6, 0, 3, [[(0, 1), (3, 4)]])
    assert nw2.flow == pytest.approx(4.0 * 6 / 2)


def test_distance_layer_cutsets_are_valid_and_bound():
    rng = np.random.default_rng(7)
    for _ in range(30):
        g = graphs.gnp_connected_graph(int(rng.integers(4, 11)), 0.4, rng)
        s, t = 0, g.n - 1
        cuts = commute.distance_layer_cutsets(g, s, t)
        assert len(cuts) >= 1
        nw = commute.nash_williams_lower(g, s, t, cuts)
        assert nw.flow <= commute.exact_commute(g, s, t) + 1e-9


def test_full_sandwich_random_graphs():
    rng = np.random.default_rng(8)
    for _ in range(30):
        g = graphs.gnp_connected_graph(int(rng.integers(4, 10)), 0.5, rng)
        for s in range(g.n):
            for t in range(s + 1, g.n):
                exact = commute.exact_commute(g, s, t)
                nw = commute.nash_williams_lower(
                    g, s, t, commute.distance_layer_cutsets(g, s, t))
                _, up = commute.cut_sum_upper(g, s, t)
                assert nw.flow - 1e-9 <= exact <= up.flow + 1e-9


def test_sandwich_on_larger_graphs():
    rng = np.random.default_rng(9)
    for _ in range(30):
        n = int(rng.integers(12, 25))
        g = graphs.gnp_connected_graph(n, 0.3, rng)
        for _ in range(3):
            s, t = rng.choice(n, size=2, replace=False)
            s, t = int(s), int(t)
            exact = commute.exact_commute(g, s, t)
            nw = commute.nash_williams_lower(
                g, s, t, commute.distance_layer_cutsets(g, s, t))
            _, up = commute.cut_sum_upper(g, s, t)
            assert nw.flow - 1e-8 <= exact <= up.flow + 1e-8


def test_profile_bound_and_eigen_sum():
    k4 = graphs.complete_graph(4)
    # lazy complete graph: n-1 eigenvalues at (n-2)/(2(n-1)) -> 2 (n-1)^2 / n
    assert commute.eigen_sum(k4) == pytest.approx(2 * 9 / 4)
    assert commute.eigen_sum(k4) <= commute.profile_bound(k4)
    k12 = graphs.complete_graph(12)
    assert commute.eigen_sum(k12) == pytest.approx(2 * 121 / 12)
    for n in (8, 12):
        prism = graphs.complete_prism_graph(n)
        assert commute.eigen_sum(prism) <= commute.profile_bound(prism)
    with pytest.raises(GraphError):
        commute.profile_bound(graphs.path_graph(5))


def test_connectivity_bound_shapes():
    # path: delta = rho = 1 -> n^2 * dbar scale
    n = 20
    path = graphs.path_graph(n)
    dbar = 2 * path.m / n
    assert commute.connectivity_bound(path) == pytest.approx(n * n * dbar)
    # complete graph: near n log n, far below the generic n^3
    kn = graphs.complete_graph(64)
    bound = commute.connectivity_bound(kn)
    assert bound < 64 ** 2 * 20
    assert bound >= commute.max_commute(kn) - 1e-6
    # circulant family: bound within a log factor of n^2 / rho
    g = graphs.circulant_graph(64, 2)
    assert commute.connectivity_bound(g) / (64 * 64 / 2) <= 4.0 * np.log2(4)
