import math

import numpy as np
import pytest

from torusskein import analysis as an
from torusskein.analysis import (FunctionSample, SampleGrid, colinearity_mod4,
                                 colinearity_mod4_failures, dim_Gk, gauss_sample,
                                 generator_classes, horizontal_basis, image_dimension,
                                 inequality_check, inequality_sides, injectivity_verdict,
                                 kinnear_dim, nu_independence, expected_verdict, qa_rank,
                                 required_points, s_colinearity, s_colinearity_report,
                                 sample_ev, image_bound)
from torusskein.numth import RootOfUnity, in_U


def test_grid_domains():
    g = SampleGrid.U(30, max_order=60, seed=1)
    assert len(g) == 30 and all(in_U(p.order) for p in g.points)
    g0 = g.to_U0()
    assert all(p.order % 2 == 0 for p in g0.points)
    assert np.allclose(g0.values, -g.values)
    assert g0.to_U().points == g.points
    with pytest.raises(ValueError):
        SampleGrid([RootOfUnity(6, 1)])
    with pytest.raises(ValueError):
        SampleGrid([RootOfUnity(5, 1)], "U0")
    with pytest.raises(ValueError):
        g + g0
    with pytest.raises(ValueError):
        SampleGrid.U(10, max_order=4)


def test_grid_seeded():
    a = SampleGrid.U(20, seed=5).points
    assert a == SampleGrid.U(20, seed=5).points
    assert a != SampleGrid.U(20, seed=6).points


def test_sample_ev_constant_row():
    g = SampleGrid.U(10, seed=0, cond=lambda n: n % 2 == 1, max_order=99)
    s = sample_ev(3, [(0, 2)], g)
    assert np.allclose(s.values, -1)


def test_qa_rank_known_relations():
    g = SampleGrid.U(60, max_order=300, seed=0)
    x = g.values
    n = np.array([p.order for p in g.points], dtype=float)
    a = 1 / (x - 3)
    F = np.array([a, (x + 1 / x) * a, n * a])      # the order n is not rational in x
    rep = qa_rank(FunctionSample(["a", "b", "c"], F, g), D=4)
    assert rep.estimated == 2 and rep.relations == 1 and rep.stable
    assert qa_rank(FunctionSample(["a", "c"], F[[0, 2]], g), D=4).estimated == 2
    assert qa_rank(FunctionSample(["a"], F[:1], g), D=4).estimated == 1
    assert qa_rank(FunctionSample([], np.zeros((0, len(g))), g)).estimated == 0


def test_qa_rank_needs_points():
    g = SampleGrid.U(10, seed=0)
    with pytest.raises(ValueError):
        qa_rank(FunctionSample(["a", "b"], np.ones((2, 10)), g), D=4)
    assert required_points(2, 4) == 34


def test_qa_rank_ignores_vanishing_rows():
    # G(5,8) = xi^-3 G(5,2); both vanish when 5 divides the order
    g = SampleGrid.U(80, max_order=200, seed=2)
    s = gauss_sample(5, [2, 8], g)
    assert (np.abs(s.values[0]) < 1e-9).sum() > 10
    assert qa_rank(s, D=4).estimated == 1


def test_generator_classes():
    assert generator_classes(6) == {1: {1: [1, 5]}, 2: {1: [1, 2]}, 3: {1: [1]}, 6: {0: [0]}}
    total = sum(len(v) for c in generator_classes(30).values() for v in c.values())
    assert total == 30


@pytest.mark.parametrize("k,want", [(3, 2), (5, 3)])
def test_dim_Gk_small(k, want):
    rep = dim_Gk(k)
    assert rep.estimated == want and rep.verdict == "match"
    assert rep.exact_relations or k == 3
    assert sum(rep.parts.values()) == want


def test_nu_independence_small():
    assert nu_independence(3)


def test_image_and_verdicts_small():
    assert horizontal_basis(3) == [(0, 0), (1, 0), (0, 1), (0, 2), (1, 2)]
    assert [kinnear_dim(k) for k in (2, 3, 4, 5, 6)] == [6, 5, 7, 6, 8]
    assert image_bound(6) == 8 and image_bound(3) == 4
    rep = image_dimension(3)
    assert rep.estimated == 4
    v = injectivity_verdict(3, image=rep)
    assert v.verdict == "non-injective" == v.expected_verdict
    assert injectivity_verdict(6).verdict == "injective"
    assert [expected_verdict(k) for k in (2, 6, 10, 18, 12, 15)] == [
        "injective", "injective", "injective", "unknown", "non-injective", "non-injective"]


def test_colinearity_mod4():
    odd = SampleGrid([RootOfUnity(n, 1) for n in (5, 7, 9, 11, 13)])
    assert colinearity_mod4(4, odd)
    assert colinearity_mod4(8, odd)
    assert not colinearity_mod4(8, odd, exponent=32)
    bad = colinearity_mod4_failures(4)
    assert bad and all(p.order % 2 == 0 for p in bad)
    with pytest.raises(ValueError):
        colinearity_mod4(6)


def test_s_colinearity_single_point_and_errors():
    one = SampleGrid([RootOfUnity(14, 1)], "U0")
    assert s_colinearity(one)
    with pytest.raises(ValueError):
        s_colinearity(SampleGrid([RootOfUnity(16, 1)], "U0"))


def test_s_colinearity_rank():
    out = s_colinearity_report(D=4)
    assert out["dim"] == 2 and out["colinear"] is False


def test_inequality():
    assert inequality_sides(30) == (12, 16, 2)
    assert inequality_check(2) and inequality_check(18) and inequality_check(30)
    for k in (4, 7):
        with pytest.raises(ValueError):
            inequality_sides(k)


def test_threads_do_not_change_results():
    g = SampleGrid.U(100, seed=4)
    a = gauss_sample(6, [0, 2, 4], g).values
    an.set_threads(4)
    try:
        b = gauss_sample(6, [0, 2, 4], g).values
    finally:
        an.set_threads(1)
    assert np.array_equal(a, b)
