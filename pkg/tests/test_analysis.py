import io

import numpy as np
import pytest
from scipy import stats

from covisit import (
    Hypergraph,
    NoQualifyingEdgesError,
    chebyshev,
    degree_ccdf,
    degree_heatmap,
    fit_degree_distribution,
    hyperedge_size_histogram,
    max_chebyshev,
    poi_degree_fit,
    power_law_fit,
)
from covisit.analysis import edge_span, write_ccdf_csv, write_heatmap_csv, write_sizes_csv


def test_ccdf_example():
    hg = Hypergraph.from_edges([(0, 2, 3), (1, 2, 3), (3,)], 4, 1)
    assert hg.degrees().tolist() == [1, 1, 2, 3]
    curve = degree_ccdf(hg)
    assert curve.points() == [(0, 1.0), (1, 1.0), (2, 0.5), (3, 0.25)]


def test_ccdf_edgeless_and_uniform():
    assert degree_ccdf(Hypergraph([], 2, 2)).points() == [(0, 1.0)]
    hg = Hypergraph.from_edges([(0, 1), (1, 2), (0, 2)], 3, 1)
    assert degree_ccdf(hg).points() == [(0, 1.0), (1, 1.0), (2, 1.0)]


def test_ccdf_counts_isolated_nodes(six_node):
    grid = Hypergraph(six_node.edges, 4, 2)  # two extra isolated cells
    assert degree_ccdf(grid).points()[1] == (1, 0.75)


def test_ccdf_non_increasing():
    rng = np.random.default_rng(0)
    edges = {tuple(sorted(rng.choice(30, size=rng.integers(2, 6), replace=False).tolist())) for _ in range(80)}
    p = degree_ccdf(Hypergraph.from_edges(sorted(edges), 6, 5)).p
    assert p[0] == 1.0 and np.all(np.diff(p) <= 0)


def test_fit_recovers_geometric():
    rng = np.random.default_rng(2024)
    # support {1, 2, ...}: P(k) proportional to exp(-0.5 k)
    x = rng.geometric(1 - np.exp(-0.5), size=10_000)
    fit = fit_degree_distribution(x)
    assert 0.45 <= fit.decay_rate <= 0.55
    assert fit.llr > 0 and fit.family == "exponential"


def test_fit_prefers_power_law_on_zipf():
    rng = np.random.default_rng(7)
    x = stats.zipf.rvs(2.5, size=10_000, random_state=rng)
    fit = fit_degree_distribution(x)
    assert fit.llr < 0 and fit.family == "power_law"
    assert abs(fit.alpha - 2.5) < 0.1


def test_fit_rejects_degenerate():
    with pytest.raises(ValueError, match="equal"):
        fit_degree_distribution([3] * 20)
    with pytest.raises(ValueError, match="at least 10"):
        fit_degree_distribution([1, 2, 3])


def test_fit_dict_shape():
    d = fit_degree_distribution([1, 1, 1, 2, 2, 3, 1, 4, 1, 2, 5]).to_dict()
    assert set(d) == {"family", "exponential", "power_law", "llr", "n"}
    assert d["power_law"]["xmin"] == 1 and d["exponential"]["lambda"] > 0


def test_size_histogram(six_node):
    assert hyperedge_size_histogram(six_node) == {2: 3, 3: 2}
    assert hyperedge_size_histogram(Hypergraph([], 1, 1)) == {}


@pytest.mark.parametrize("u, v, d", [((2, 2), (2, 2), 0), ((0, 0), (3, 2), 3), ((5, 1), (1, 5), 4)])
def test_chebyshev(u, v, d):
    assert chebyshev(u, v) == d


def test_edge_span_example():
    # cells (0,0), (2,1), (1,3) on a 4x4 grid
    hg = Hypergraph.from_edges([(0, 6, 13)], 4, 4)
    assert edge_span(hg, hg.edges[0]) == 3
    assert max_chebyshev(hg) == 3


def test_max_chebyshev_size_cut():
    hg = Hypergraph.from_edges([(0, 15), (0, 1, 5)], 4, 4)
    assert max_chebyshev(hg, 3) == 1
    assert max_chebyshev(hg, 2) == 3
    with pytest.raises(NoQualifyingEdgesError):
        max_chebyshev(hg, 4)


def test_max_chebyshev_subhypergraph_bound():
    rng = np.random.default_rng(1)
    edges = {tuple(sorted(rng.choice(64, size=rng.integers(3, 6), replace=False).tolist())) for _ in range(40)}
    hg = Hypergraph.from_edges(sorted(edges), 8, 8)
    full = max_chebyshev(hg)
    for k in range(3, 6):
        sub = hg.k_uniform(k)
        if sub.n_edges:
            assert max_chebyshev(sub) <= full


def test_heatmap():
    hg = Hypergraph.from_edges([(0, 4)], 3, 2)  # (0,0) and (1,1)
    heat = degree_heatmap(hg)
    assert heat.grid.tolist() == [[1, 0, 0], [0, 1, 0]]
    assert heat.max_degree == 1
    assert degree_heatmap(Hypergraph([], 3, 2)).grid.sum() == 0


def test_power_law_fit_exact():
    x = np.arange(1, 21)
    fit = power_law_fit(x, 2.0 * x**1.5)
    assert fit.a == pytest.approx(2.0, abs=1e-9)
    assert fit.b == pytest.approx(1.5, abs=1e-9)
    assert fit.r2 == pytest.approx(1.0, abs=1e-9)


def test_power_law_constant_and_zeros():
    fit = power_law_fit([1, 2, 3, 4, 0], [5, 5, 5, 5, 9])
    assert fit.b == pytest.approx(0.0, abs=1e-12) and fit.n == 4
    with pytest.raises(ValueError):
        power_law_fit([1, 2, 0], [1, 0, 3])


def test_poi_fit_uses_degree_as_response():
    # node k has degree k+1 and POI count (k+1)^2, so degree = POI^0.5
    edges = [tuple(range(k, 4)) for k in range(4)]
    hg = Hypergraph.from_edges(edges, 4, 1)
    assert hg.degrees().tolist() == [1, 2, 3, 4]
    fit = poi_degree_fit({0: 1, 1: 4, 2: 9, 3: 16}, hg)
    assert fit.b == pytest.approx(0.5, abs=1e-12) and fit.a == pytest.approx(1.0, abs=1e-12)


def test_writers(six_node):
    buf = io.StringIO()
    write_ccdf_csv(degree_ccdf(six_node), buf)
    assert buf.getvalue().splitlines()[:2] == ["k,p", "0,1.0"]
    buf = io.StringIO()
    write_sizes_csv(hyperedge_size_histogram(six_node), buf)
    assert buf.getvalue() == "size,count\n2,3\n3,2\n"
    buf = io.StringIO()
    write_heatmap_csv(degree_heatmap(six_node), buf)
    assert buf.getvalue() == "2,3,1,2,3,1\n"
