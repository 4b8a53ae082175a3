import math
from fractions import Fraction

import numpy as np
import pytest

from lattice_spectra.graph import Graph
from lattice_spectra.kagome import kagome_counting
from lattice_spectra.qgraph import (EquilateralMetricGraph, c3_cross_validation, correspondence_energies,
                                    dirichlet_multiplicity, in_sigma_d, metric_kagome_ids,
                                    metric_kagome_patch, triangle_graph)

from conftest import svd_nullity


def test_three_halves_branches():
    es = correspondence_energies(1.5, 50)
    assert es == pytest.approx([(2 * math.pi / 3) ** 2, (4 * math.pi / 3) ** 2])
    assert es[0] == pytest.approx(4.38649, abs=1e-5) and es[1] == pytest.approx(17.5460, abs=1e-4)


def test_lambda_zero_and_one():
    assert correspondence_energies(0, 200) == []
    es = correspondence_energies(1, 60)
    assert es == pytest.approx([(math.pi / 2) ** 2, (3 * math.pi / 2) ** 2])


def test_correspondence_properties(rng):
    for lam in rng.uniform(0, 2, size=30):
        es = correspondence_energies(float(lam), 300.0)
        assert all(b > a for a, b in zip(es, es[1:]))
        assert all(0 < e < 300 for e in es)
        assert not any(in_sigma_d(e) for e in es)
        assert all(abs(1 - math.cos(math.sqrt(e)) - lam) < 1e-9 for e in es)


def test_correspondence_errors():
    with pytest.raises(ValueError):
        correspondence_energies(2.5, 10)
    with pytest.raises(ValueError):
        correspondence_energies(1.0, 0)


def test_triangle_dirichlet():
    tri = triangle_graph()
    assert dirichlet_multiplicity(tri, 2) == 1
    assert dirichlet_multiplicity(tri, 1) == 0
    assert dirichlet_multiplicity(tri, 4) == 1
    with pytest.raises(ValueError):
        dirichlet_multiplicity(tri, 0)


def test_orientation_must_cover_edges():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        EquilateralMetricGraph(g, orientation=((0, 1),))


def _random_graph(rng, n):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35]
    return EquilateralMetricGraph(Graph.from_edges(n, edges))


def test_parity_dependence(rng):
    for _ in range(10):
        g = _random_graph(rng, int(rng.integers(3, 13)))
        if g.volume == 0:
            continue
        assert dirichlet_multiplicity(g, 1) == dirichlet_multiplicity(g, 3)
        assert dirichlet_multiplicity(g, 2) == dirichlet_multiplicity(g, 4)


def _signed_incidence(g, k):
    m = np.zeros((g.graph.n, g.volume))
    for e, (s, t) in enumerate(g.orientation):
        m[s, e] += 1
        m[t, e] -= (-1) ** k
    return m


def test_dirichlet_against_svd(rng):
    for _ in range(10):
        g = _random_graph(rng, int(rng.integers(3, 13)))
        if g.volume == 0:
            continue
        for k in (1, 2):
            assert dirichlet_multiplicity(g, k) == svd_nullity(_signed_incidence(g, k))


@pytest.mark.parametrize("L", [3, 4, 6])
def test_metric_patch_and_cycle_counts(L):
    mg = metric_kagome_patch(L)
    V, E = mg.graph.n, mg.volume
    assert V == 3 * L * L + 4 * L and E == 6 * L * L
    assert dirichlet_multiplicity(mg, 2) == E - V + 1
    assert dirichlet_multiplicity(mg, 1) == E - V


def test_kagome_patch_dirichlet_window():
    mg = metric_kagome_patch(4)
    for k in (1, 2):
        ratio = Fraction(dirichlet_multiplicity(mg, k), mg.volume)
        assert Fraction(1, 2) - Fraction(3, 4) <= ratio <= Fraction(1, 2)


def test_metric_ids_jumps():
    L = 6
    ids = metric_kagome_ids(L, 60)
    for e in ((2 * math.pi / 3) ** 2, (4 * math.pi / 3) ** 2):
        j = ids.jump_near(e)
        assert j["origin"] == "vertex_spectrum"
        assert abs(j["size"] - Fraction(1, 6)) <= Fraction(2, L)
    for e in (math.pi ** 2, 4 * math.pi ** 2):
        j = ids.jump_near(e)
        assert j["origin"] == "dirichlet"
        assert abs(j["size"] - Fraction(1, 2)) <= Fraction(3, L)
    assert ids(-1) == 0
    vals = ids.evaluate(np.linspace(0, 60, 600))
    assert np.all(np.diff(vals) >= 0)
    assert ids.metadata["construction"] == "correspondence-assembled"


def test_vertex_jump_matches_discrete():
    ids = metric_kagome_ids(4, 20)
    n = kagome_counting(4)
    j = ids.jump_near((2 * math.pi / 3) ** 2)
    assert j["multiplicity"] == n.exact_multiplicities[Fraction(3, 2)]


def test_dirichlet_boundary_option_adds_freedom():
    a = metric_kagome_ids(4, 12)
    b = metric_kagome_ids(4, 12, dirichlet_boundary=True)
    assert b.jump_near(math.pi ** 2)["multiplicity"] > a.jump_near(math.pi ** 2)["multiplicity"]


def test_c3():
    r = c3_cross_validation()
    assert r["passed"]
    rows = {row["m"]: row for row in r["rows"]}
    assert rows[1]["one_minus_cos"] == pytest.approx(1.5)
    assert rows[3]["dirichlet_multiplicity"] == 1
    assert rows[0]["energy"] == 0 and rows[0]["discrete"] == 0
