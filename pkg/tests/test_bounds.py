import itertools
import math

import pytest

from cliquestats import bounds as bd
from cliquestats import moments as mo
from cliquestats.graphs import all_graphs, graph_probability


def test_moment_bound_examples():
    assert math.isclose(bd.moment_bound(0.5, 0.5, 1, 1, 1), 0.25, rel_tol=1e-14)
    assert bd.moment_bound(0.0, 0.5, 1, 1, 1) == 0.0
    one = bd.moment_bound(0.3, 0.6, 1.0, 2.0, 3.0)
    assert math.isclose(bd.moment_bound(0.3, 0.6, 2.0, 2.0, 3.0), 2 * one)
    with pytest.raises(ValueError):
        bd.moment_bound(1.2, 0.5, 1, 1, 1)
    with pytest.raises(ValueError):
        bd.moment_bound(0.5, 0.5, 0.0, 1, 1)


def test_convex_bound():
    assert bd.convex_bound(3, 0.0).value == 0.0
    want = 2.0 ** 3.5 * 3.0 ** -0.75
    assert math.isclose(bd.convex_bound(1, 1.0).value, want, rel_tol=1e-14)
    assert bd.convex_bound(2, 1.0).value > bd.convex_bound(1, 1.0).value
    assert bd.convex_bound(1, 2.0).value > bd.convex_bound(1, 1.0).value


def one_summand_instance(moment=1.0):
    idx = ("s", 1)
    return bd.DissociatedInstance(
        1, [[idx]], lambda s, j: [idx], lambda s, t, u: (moment, moment))


def test_generic_bound_single_fair_sign():
    # one +-1 summand, its own neighbourhood: (1/3)(0.5*1 + 1*1) = 0.5
    assert math.isclose(bd.generic_bound(one_summand_instance()).value, 0.5)


def test_generic_bound_empty():
    inst = bd.DissociatedInstance(1, [[]], lambda s, j: [], lambda s, t, u: (0, 0))
    assert bd.generic_bound(inst).value == 0.0


def test_generic_bound_iid_scaling():
    # N independent standardized summands, each its own neighbourhood,
    # scaled by N^(-1/2): B = N * (1/3) * (3/2) * N^(-3/2) = 0.5 / sqrt(N)
    def make(N):
        ids = [(i, 1) for i in range(N)]
        c = N ** -0.5
        return bd.DissociatedInstance(
            1, [ids], lambda s, j: [s], lambda s, t, u: (c ** 3, c ** 3))
    b100 = bd.generic_bound(make(100)).value
    b400 = bd.generic_bound(make(400)).value
    assert math.isclose(b100, 0.05, rel_tol=1e-12)
    assert math.isclose(b400 / b100, 0.5, rel_tol=1e-12)


def test_generic_bound_budget():
    with pytest.raises(bd.BudgetExceededError):
        bd.generic_bound(one_summand_instance(), term_budget=1)


def test_uniform_bound_examples():
    rep = bd.uniform_bound(1, [7], [[2.0]], [[[0.3]]])
    assert math.isclose(rep.value, (1 / 3) * 7 * 2.0 * (1.5 * 2.0 + 2 * 2.0) * 0.3)
    assert bd.uniform_bound(2, [3, 4], [[1, 1], [1, 1]],
                            [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]).value == 0.0
    with pytest.raises(ValueError):
        bd.uniform_bound(2, [3], [[1]], [[[1]]])


def test_uniform_majorizes_generic_on_enumerated_instance():
    for kind, n, d in [("clique", 5, 2), ("critical", 5, 1), ("link", 5, 1)]:
        t = (2,) if kind == "link" else ()
        inst = bd.subset_instance(n, d, 0.5, kind, t=t)
        gb = bd.generic_bound(inst)
        sizes = [len(x) for x in inst.index_sets]
        alpha = [[max((len(inst.neighborhood(s, j + 1)) for s in inst.index_sets[i]),
                      default=0) for j in range(d)] for i in range(d)]
        beta = [[[max(max(inst.abs_moment(s, t_, u))
                      for s in inst.index_sets[i]
                      for t_ in inst.index_sets[j]
                      for u in inst.index_sets[k])
                  for k in range(d)] for j in range(d)] for i in range(d)]
        ub = bd.uniform_bound(d, sizes, alpha, beta)
        assert ub.value >= gb.value - 1e-12, kind


def exact_abs_moments_instance(n, d, p):
    """Critical-count instance with moments from exhaustive enumeration."""
    inst = bd.subset_instance(n, d, p, "critical")
    idx = [s for comp in inst.index_sets for s in comp]
    sigma = [math.sqrt(mo.crit_variance(n, k, p)) for k in range(1, d + 1)]
    graphs = list(all_graphs(n))
    weights = [graph_probability(g, p) for g in graphs]
    cols = {}
    for s in idx:
        phi, i = s
        mu = sum(w for g, w in zip(graphs, weights)
                 if _crit_ind(g, phi))
        cols[s] = [((1 if _crit_ind(g, phi) else 0) - mu) / sigma[i - 1]
                   for g in graphs]

    def abs_moment(s, t, u):
        xs, xt, xu = cols[s], cols[t], cols[u]
        triple = sum(w * abs(a * b * c) for w, a, b, c in zip(weights, xs, xt, xu))
        st = sum(w * abs(a * b) for w, a, b in zip(weights, xs, xt))
        eu = sum(w * abs(c) for w, c in zip(weights, xu))
        return triple, st * eu

    return bd.DissociatedInstance(d, inst.index_sets, inst.neighborhood, abs_moment)


def _crit_ind(g, phi):
    from cliquestats.morse import _crit_indicator
    if any(not g.has_edge(a, b) for a, b in itertools.combinations(phi, 2)):
        return 0
    return _crit_indicator(g, phi)


def test_crit_bound_dominates_generic():
    n, d, p = 5, 1, 0.5
    cb = bd.crit_bound(n, d, p).smooth
    capped_inst = bd.subset_instance(n, d, p, "critical")
    gb_capped = bd.generic_bound(capped_inst).value
    gb_exact = bd.generic_bound(exact_abs_moments_instance(n, d, p)).value
    # exact moments <= Bernoulli moment caps <= grouped evaluation,
    # and the grouping slack stays moderate
    assert gb_exact <= gb_capped + 1e-9
    assert gb_capped <= cb.value + 1e-9
    assert cb.value <= 10 * gb_capped


def test_crit_bound_basic():
    pair = bd.crit_bound(12, 2, 0.5)
    assert pair.smooth.value >= 0.0 and math.isfinite(pair.smooth.value)
    assert math.isclose(pair.convex.value,
                        bd.convex_bound(2, pair.smooth.value).value, rel_tol=1e-12)
    with pytest.raises(ValueError):
        bd.crit_bound(5, 5, 0.5)
    with pytest.raises(ValueError):
        bd.crit_bound(5, 1, 1.0)


def test_link_bound_values():
    pair = bd.link_bound(50, 1, 1, 0.5)
    want = (7.0 / 6.0) * 3 ** 13.5 * 2 ** 6
    assert math.isclose(pair.smooth.params["constant"], want, rel_tol=1e-12)
    assert math.isclose(pair.smooth.value, want / math.sqrt(49), rel_tol=1e-12)
    # halves when n - |t| quadruples
    v1 = bd.link_bound(101, 1, 1, 0.5).smooth.value
    v2 = bd.link_bound(401, 1, 1, 0.5).smooth.value
    assert math.isclose(v2 / v1, 0.5, rel_tol=1e-12)
    # (p^-|t| - 1)^(-3/2) divergence as p -> 1
    assert bd.link_bound(50, 1, 1, 0.999).smooth.value > 100 * pair.smooth.value
    with pytest.raises(ValueError):
        bd.link_bound(1, 1, 1, 0.5)


def test_clique_bound_values():
    assert math.isclose(bd.clique_bound(1, 1, 0.5).smooth.params["constant"],
                        32.0 / 3.0, rel_tol=1e-14)
    d2 = bd.clique_bound(1, 2, 0.5).smooth.params["constant"]
    assert math.isclose(d2, (16.0 / 3.0) * 2 ** 9 * 2 ** 8 * (7.0 / 8.0), rel_tol=1e-12)
    v_n = bd.clique_bound(100, 2, 0.5).smooth.value
    v_2n = bd.clique_bound(200, 2, 0.5).smooth.value
    assert math.isclose(v_2n, v_n / 2, rel_tol=1e-12)


def test_ustat_bounds():
    a, b = 0.4, 1.7
    rep = bd.ustat_bound([1], [a], b)
    assert math.isclose(rep.value, 4 * b / (3 * a ** 1.5), rel_tol=1e-12)
    assert bd.ustat_bound([2, 3], [1.0, 1.0], 0.0).value == 0.0
    assert math.isclose(bd.ustat_no_x_bound([1], [a], b).value, 8 * rep.value,
                        rel_tol=1e-12)
    assert rep.rate_exponent == -0.5
    assert bd.ustat_no_x_bound([1], [a], b).rate_exponent == -1.0
    with pytest.raises(ValueError):
        bd.ustat_bound([0], [1.0], 1.0)
    with pytest.raises(ValueError):
        bd.ustat_bound([1], [0.0], 1.0)


def test_convex_member_is_exact_transfer_of_smooth():
    for pair in (bd.clique_bound(50, 2, 0.5), bd.link_bound(50, 1, 2, 0.5),
                 bd.crit_bound(10, 2, 0.5)):
        assert pair.smooth.value >= 0.0
        assert math.isclose(pair.convex.value,
                            bd.convex_bound(pair.smooth.params["d"],
                                            pair.smooth.value).value,
                            rel_tol=1e-14)


def test_vacuous_flag():
    assert not bd.BoundReport("x", 1.9).vacuous
    assert bd.BoundReport("x", 2.0).vacuous
    with pytest.raises(ValueError):
        bd.BoundReport("x", -0.1)


def test_instance_independence_factorization():
    # disjoint supports under the applicable overlap rule mean the joint
    # indicator expectation factorizes (checked by enumeration)
    n, p = 5, 0.45
    graphs = list(all_graphs(n))
    weights = [graph_probability(g, p) for g in graphs]

    def clique_ind(g, phi):
        return 1 if all(g.has_edge(a, b) for a, b in itertools.combinations(phi, 2)) else 0

    # clique kind, share >= 2 rule: psi sharing <= 1 vertex with phi
    phi, psi = (1, 2, 3), (3, 4, 5)
    e_joint = sum(w * clique_ind(g, phi) * clique_ind(g, psi)
                  for g, w in zip(graphs, weights))
    e_prod = (sum(w * clique_ind(g, phi) for g, w in zip(graphs, weights))
              * sum(w * clique_ind(g, psi) for g, w in zip(graphs, weights)))
    assert math.isclose(e_joint, e_prod, abs_tol=1e-12)

    # critical kind, share >= 1 rule: disjoint phi, psi
    phi, psi = (2, 3), (4, 5)
    e_joint = sum(w * _crit_ind(g, phi) * _crit_ind(g, psi)
                  for g, w in zip(graphs, weights))
    e_prod = (sum(w * _crit_ind(g, phi) for g, w in zip(graphs, weights))
              * sum(w * _crit_ind(g, psi) for g, w in zip(graphs, weights)))
    assert math.isclose(e_joint, e_prod, abs_tol=1e-12)


def test_subset_instance_neighborhood_rules():
    inst = bd.subset_instance(5, 2, 0.5, "clique")
    s = ((1, 2), 1)
    hood = inst.neighborhood(s, 1)
    assert s in hood  # self always dependent
    assert all(len(set(phi) & {1, 2}) >= 2 for phi, _ in hood)
    inst = bd.subset_instance(5, 1, 0.5, "critical")
    hood = inst.neighborhood(((1, 2), 1), 1)
    assert all(len(set(phi) & {1, 2}) >= 1 for phi, _ in hood)
