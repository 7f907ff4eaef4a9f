from fractions import Fraction as F

import pytest

from lowdeg import measures as ms


def test_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        ms.DiscreteMeasure(["a", "b"], [F(1, 2), F(1, 3)])
    m = ms.DiscreteMeasure(["a", "b"], [F(1, 2), F(1, 3)], normalize=True)
    assert sum(m.weights) == 1
    assert m.exact


def test_condition_map_product():
    m = ms.DiscreteMeasure(list(range(4)), [F(1, 4)] * 4)
    even = m.condition(lambda x: x % 2 == 0)
    assert sorted(even.outcomes) == [0, 2]
    assert all(w == F(1, 2) for w in even.weights)
    with pytest.raises(ValueError):
        m.condition(lambda x: x > 10)
    merged = m.map(lambda x: x % 2)
    assert dict(zip(merged.outcomes, merged.weights)) == {0: F(1, 2), 1: F(1, 2)}
    prod = m.product(m)
    assert len(prod) == 16 and sum(prod.weights) == 1
    p3 = ms.DiscreteMeasure(["x", "y"], [F(1, 3), F(2, 3)]).power(3)
    assert len(p3) == 8
    assert dict(zip(p3.outcomes, p3.weights))[("y", "y", "y")] == F(8, 27)


def test_likelihood_ratio_and_chi_square():
    q = ms.DiscreteMeasure(["a", "b"], [F(1, 2), F(1, 2)])
    p = ms.DiscreteMeasure(["a", "b"], [F(1, 4), F(3, 4)])
    table = p.likelihood_ratio_table(q)
    assert table == {"a": F(1, 2), "b": F(3, 2)}
    assert p.chi_square(q) == 2 * (F(1, 4) ** 2) / F(1, 2)
    p_bad = ms.DiscreteMeasure(["a", "c"], [F(1, 4), F(3, 4)])
    with pytest.raises(ValueError):
        p_bad.likelihood_ratio_table(q)


def test_er_measure_marginals():
    m = ms.er_graph_measure(3, F(1, 3))
    assert len(m) == 8 and m.exact
    # per-edge marginal is q
    assert m.mass(lambda g: (0, 1) in g) == F(1, 3)


def test_sbm_joint_marginals():
    joint = ms.sbm_joint_measure(3, 2, F(1), F(2, 5))
    # label marginal uniform
    assert joint.map(lambda x: x[0]).weights == [F(1, 8)] * 8
    # edge probability given equal labels
    eq = joint.condition(lambda x: x[0][0] == x[0][1])
    p_in = (1 + F(2, 5)) * F(1) / 3
    assert eq.mass(lambda x: (0, 1) in x[1]) == p_in


def test_correlated_joint_consistency():
    p, s = F(1, 2), F(2, 3)
    joint = ms.correlated_er_joint_measure(3, p, s)
    assert sum(joint.weights) == 1
    # A marginal is edge-(p*s)
    assert joint.mass(lambda x: (0, 1) in x[1]) == p * s
    assert joint.mass(lambda x: (0, 1) in x[2]) == p * s
    # permutation marginal is uniform
    pis = joint.map(lambda x: x[0])
    assert all(w == F(1, 6) for w in pis.weights)
    # with the parent kept, children pull back into it
    big = ms.correlated_er_joint_measure(3, p, s, keep_parent=True)
    for (pi, g, a, b), w in big:
        assert a <= g
        inv = {v: i for i, v in enumerate(pi)}
        assert frozenset(tuple(sorted((inv[u], inv[v]))) for u, v in b) <= g


def test_correlated_sbm_joint_reduces_to_er_at_zero_eps():
    lam, s = F(3, 2), F(1, 2)
    sbm = ms.correlated_sbm_joint_measure(3, 2, lam, F(0), s)
    er = ms.correlated_er_joint_measure(3, lam / 3, s)
    d_sbm = dict(zip(sbm.outcomes, sbm.weights))
    d_er = dict(zip(er.outcomes, er.weights))
    assert d_sbm == d_er
