import numpy as np
import pytest

from stablecut import (
    apply_cut,
    build_graph,
    certify_partition,
    fiedler,
    fiedler_identity_residual,
    fiedler_sum_check,
    necessary_internal_cost,
    sufficient_external_cost,
    zero_valuation_components,
)
from stablecut.certify import StabilityThreshold, SumCase, Verdict
from stablecut.errors import NotBipartition, TooSmall
from stablecut.graph import make_partition
from stablecut.spectral import algebraic_connectivity

from conftest import random_bipartition, random_connected_graph


def test_threshold_validation():
    with pytest.raises(ValueError):
        StabilityThreshold(-0.1)
    with pytest.raises(ValueError):
        certify_partition(build_graph([("a", "b", 1)]), apply_cut(build_graph([("a", "b", 1)]), []), -1)


def test_fig1a_c1_stable_at_3(fig1a, fig1a_c1):
    cert = certify_partition(fig1a, fig1a_c1, 3)
    assert cert.overall is Verdict.CERTIFIED_STABLE
    lams = [v.exact_lambda2 for v in cert.per_component]
    assert lams[0] == pytest.approx(6, abs=1e-9)
    # closed form of lambda^2 - 16 lambda + 45; printed elsewhere as 4.26
    assert lams[1] == pytest.approx((16 - np.sqrt(76)) / 2, abs=1e-7)
    assert necessary_internal_cost(fig1a, fig1a_c1, 3) == [True, True]


def test_fig1a_c2_component(fig1a, fig1a_c2):
    assert fig1a_c2.components[0] == ("v1", "v2", "v3")
    cert = certify_partition(fig1a, fig1a_c2, 2)
    assert cert.per_component[0].exact_lambda2 == pytest.approx(2.354, abs=0.01)
    assert cert.overall is Verdict.CERTIFIED_STABLE
    assert certify_partition(fig1a, fig1a_c2, 3).overall is Verdict.CERTIFIED_UNSTABLE


def test_fig1b_threshold(fig1b, fig1b_c):
    cert = certify_partition(fig1b, fig1b_c, 0.2)
    assert cert.per_component[0].exact_lambda2 == pytest.approx(0.2, abs=1e-9)
    assert cert.overall is Verdict.CERTIFIED_STABLE
    assert certify_partition(fig1b, fig1b_c, 0.3).overall is Verdict.CERTIFIED_UNSTABLE


def test_necessary_fails_fig1b(fig1b, fig1b_c):
    # {v1,v4}: internal costs 0.1, 0.1 sum to 0.2
    assert necessary_internal_cost(fig1b, fig1b_c, 0.2) == [True, True]
    assert necessary_internal_cost(fig1b, fig1b_c, 0.21) == [False, True]


def test_sufficient_test(fig1a, fig1a_c1):
    # both sides have max external cost 3 (v2 and v5) against lambda2(G) = 3.625
    assert sufficient_external_cost(fig1a, fig1a_c1, 0.6) == [True, True]
    assert sufficient_external_cost(fig1a, fig1a_c1, 0.7) == [False, False]


def test_singleton_is_degenerate(fig1a):
    p = make_partition(fig1a, [["v1"], ["v2", "v3", "v4", "v5"]])
    cert = certify_partition(fig1a, p, 0.1)
    assert cert.per_component[0].degenerate
    assert cert.per_component[0].necessary_pass is None
    assert cert.overall is Verdict.INCONCLUSIVE


def test_small_graph_skips_theorem_tests():
    g = build_graph([("a", "b", 1), ("b", "c", 1)])
    p = make_partition(g, [["a", "b"], ["c"]])
    v = certify_partition(g, p, 0.5).per_component[0]
    assert v.necessary_pass is None and v.sufficient_pass is None


def test_zero_valuation_path():
    # unweighted P5: the Fiedler vector vanishes on the middle node
    g = build_graph([("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "e", 1)])
    res = zero_valuation_components(g, 0.0)
    assert res.zero_set == ("c",)
    assert res.components == (("a", "b"), ("d", "e"))
    lam = fiedler(g).value
    # both sides have max external cost 1 (b-c and d-c)
    for v in res.verdicts:
        assert v.evidence["max_external_cost"] == 1
        assert v.sufficient_pass is (1 <= lam - 0.0)


def test_zero_valuation_empty_and_small(fig1a):
    assert zero_valuation_components(fig1a, 1).no_zero_set
    with pytest.raises(TooSmall):
        zero_valuation_components(build_graph([("a", "b", 1)]), 0)


def test_sum_check_symmetric_cut_is_case_three(fig1b, fig1b_c):
    # the mirror symmetry v1<->v4, v2<->v3 makes the side sums vanish
    for tau in (0.9, 1.0):
        for side in (0, 1):
            chk = fiedler_sum_check(fig1b, fig1b_c, tau, side=side)
            assert chk.case is SumCase.ZERO
            assert chk.indeterminate and chk.holds


def test_sum_check_hold_and_fail(fig1b):
    p = make_partition(fig1b, [["v1", "v2"], ["v3", "v4"]])
    ok = fiedler_sum_check(fig1b, p, 0.9)
    assert ok.case is SumCase.POSITIVE and ok.holds
    assert ok.lhs == pytest.approx(-0.362588917, abs=1e-8)
    assert ok.rhs == pytest.approx(-0.407883214, abs=1e-8)
    bad = fiedler_sum_check(fig1b, p, 1.0)
    assert not bad.holds
    assert bad.lhs == pytest.approx(-0.448196932, abs=1e-8)
    # the other side has a negative sum
    other = fiedler_sum_check(fig1b, p, 0.9, side=1)
    assert other.case is SumCase.NEGATIVE and other.holds
    assert not fiedler_sum_check(fig1b, p, 1.0, side=1).holds


def test_sum_check_disconnected_sides(fig1b):
    # {v1} | {v2, v3, v4}; and a split with an internally disconnected side
    p = make_partition(fig1b, [["v1"], ["v2", "v3", "v4"]])
    assert fiedler_sum_check(fig1b, p, 0.9).holds
    assert not fiedler_sum_check(fig1b, p, 1.0).holds
    q = make_partition(fig1b, [["v1", "v3"], ["v2", "v4"]], require_connected=False)
    assert fiedler_sum_check(fig1b, q, 0.95).holds


def test_sum_check_needs_bipartition(fig1a):
    p = make_partition(fig1a, [["v1", "v2"], ["v3", "v4"], ["v5"]])
    with pytest.raises(NotBipartition):
        fiedler_sum_check(fig1a, p, 1)


def test_identity_residual_examples(fig1a, fig1a_c1, fig1b, fig1b_c):
    assert fiedler_identity_residual(fig1a, fig1a_c1) <= 1e-10
    assert fiedler_identity_residual(fig1b, fig1b_c) <= 1e-10


def test_theorem_properties(rng):
    for _ in range(200):
        g = random_connected_graph(rng, n_min=4)
        p = random_bipartition(rng, g, connected=False)
        if p is None:
            continue
        lam = fiedler(g).value
        assert fiedler_identity_residual(g, p) <= 1e-8
        tau = float(rng.uniform(0, 1.2 * lam))
        for side in (0, 1):
            chk = fiedler_sum_check(g, p, tau, side=side)
            if lam >= tau + 1e-9:
                assert chk.holds
            elif not chk.indeterminate and lam < tau - 1e-7:
                assert not chk.holds


def test_inequality_chain(rng):
    for _ in range(200):
        g = random_connected_graph(rng, n_min=3)
        p = random_bipartition(rng, g, connected=True)
        if p is None:
            continue
        lam = fiedler(g).value
        tau = float(rng.uniform(0, lam))
        suff = sufficient_external_cost(g, p, tau, graph_lambda2=lam)
        nec = necessary_internal_cost(g, p, tau)
        for comp, s, n in zip(p.components, suff, nec):
            if len(comp) < 2:
                continue
            sub = g.subgraph(comp)
            lam_i = algebraic_connectivity(sub)
            if s:
                assert lam_i >= tau - 1e-9
            if lam_i >= tau + 1e-9:
                assert n
