from fractions import Fraction
from math import comb

from hypothesis import given, strategies as st
import pytest

from clusterloops import laurent as lp
from clusterloops import loops
from clusterloops import quiver as qv
from clusterloops import seed as sd
from clusterloops.seed import ClusterAutomorphism as Aut


def a2():
    return qv.from_arrows(2, [(1, 0)])


def test_first_mutations_of_a2_are_the_pentagon_values():
    s = sd.Seed.initial(a2())
    s = sd.mutate_seed(s, 0)
    assert lp.to_text(s.vars[0]) in ("a1^-1 + a1^-1*a2", "a1^-1*a2 + a1^-1")
    # the pentagon recurrence x_{m+1} x_{m-1} = x_m + 1 at x = (1, 1)
    vals = [Fraction(1), Fraction(1)]
    for _ in range(5):
        vals.append((vals[-1] + 1) / vals[-2])
    assert vals[5:7] == [1, 1]


def test_kalman_a2_order_is_five_by_both_routes():
    phi = Aut.from_cycles([0], [[0, 1]], 2)
    q = a2()
    assert sd.is_automorphism(q, phi)
    assert sd.order(q, phi, method="tropical") == sd.Order(5)
    assert sd.order(q, phi, method="laurent") == sd.Order(5)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("label,count", [("A1", 2), ("A2", catalan(3)), ("A3", catalan(4)), ("A4", catalan(5)),
                                         ("D4", (3 * 4 - 2) * comb(6, 3) // 4)])
def test_exchange_graph_cluster_counts(label, count):
    eg = sd.exchange_graph(qv.dynkin(label), max_clusters=1000)
    assert not eg.truncated
    assert len(eg.clusters) == count


def test_exchange_graph_of_kronecker_is_infinite():
    assert sd.exchange_graph(qv.kronecker(), max_clusters=50).truncated


def test_markov_first_mutation():
    s = sd.mutate_seed(sd.Seed.initial(qv.markov()), 0)
    x = [lp.LaurentPoly.var(3, i) for i in range(3)]
    assert s.vars[0] * x[0] == x[1] ** 2 + x[2] ** 2


def test_compose_applies_right_argument_first():
    q = qv.dynkin("A3")
    f = Aut([0], [0, 1, 2])
    g = Aut([], [1, 0, 2])
    h = sd.compose(g, f)
    s = sd.Seed.initial(q)
    assert sd.apply_aut(s, h) == sd.relabel_seed(sd.mutate_seed(s, 0), [1, 0, 2])
    assert sd.compose_all(f, g) == h


def test_inverse_and_power():
    phi = loops.kalman_rho(3, 4)
    q = loops.torus_fence(3, 4).quiver()
    assert sd.acts_trivially(q, sd.compose(sd.inverse(phi), phi))
    assert sd.acts_trivially(q, sd.power(phi, 7))
    assert not sd.acts_trivially(q, sd.power(phi, 3))
    assert sd.action_equal(q, sd.power(phi, -2), sd.power(phi, 5), method="laurent")


def test_reduce_word_cancels_pairs():
    assert sd.reduce_word(Aut([1, 2, 2, 1, 0], [0, 1, 2])).word == (0,)


def test_not_an_automorphism_is_rejected():
    phi = Aut([0], [0, 1])
    assert not sd.is_automorphism(a2(), phi)
    with pytest.raises(sd.SeedError):
        sd.order(a2(), phi)


def test_orientation_reversal_flag():
    phi = Aut([], [1, 0])
    assert not sd.is_automorphism(a2(), phi)
    assert sd.is_automorphism(a2(), phi, allow_reversal=True)


def test_perm_may_not_mix_frozen_and_mutable():
    q = qv.from_arrows(2, [(0, 1)], n_frozen=1)
    assert not sd.is_automorphism(q, Aut([], [1, 0]))


def test_cycle_convention():
    phi = Aut.from_cycles([], [[0, 1, 2]], 3)
    assert phi.perm == (1, 2, 0)
    assert phi.cycles() == [(0, 1, 2)]
    assert phi.relabeled([2, 0, 1]).cycles() == [(0, 1, 2)]


def test_text_round_trips():
    phi = Aut.from_cycles([3, 1, 1, 0], [[0, 3], [1, 2]], 4)
    assert sd.from_text(sd.to_text(phi), 4) == phi
    labels = ["a", "b", "c", "d"]
    assert sd.from_text(sd.to_text(phi, labels), 4, labels) == phi
    s = sd.mutate_seed(sd.Seed.initial(qv.dynkin("A3")), 1)
    assert sd.seed_from_text(sd.seed_to_text(s)) == s
    with pytest.raises(sd.SeedError):
        sd.from_text("mut: 0 ; perm: (0 9)", 2)


def test_fixed_vertices_routes_agree_on_named_maps():
    cases = [(loops.torus_fence(3, 4).quiver(), loops.kalman_rho(3, 4)),
             (qv.markov(), Aut.from_cycles([0], [[0, 1]], 3))]
    spec = loops.TnQuiverSpec([3, 2, 2])
    cases += [(loops.build_tn(spec), loops.build_tau(spec, i)) for i in (1, 2, 3)]
    cases.append((qv.from_arrows(3, [(1, 0), (2, 0)], n_frozen=1), Aut([0, 0], [0, 1, 2])))
    for q, phi in cases:
        for m in range(1, 5):
            pm = sd.power(phi, m)
            assert sd.fixed_vertices(q, pm) == sd.fixed_vertices(q, pm, method="laurent")


def p_map(q, a):
    """X_j = prod_i A_i^{b_ij}."""
    out = []
    for j in range(q.n):
        v = Fraction(1)
        for i in range(q.n):
            v *= Fraction(a[i]) ** int(q.b[i, j])
        out.append(v)
    return out


@given(st.lists(st.integers(1, 9), min_size=3, max_size=3), st.integers(0, 2))
def test_x_mutation_matches_a_mutation_through_the_monomial_map(a, k):
    q = qv.from_arrows(3, [(0, 1), (1, 2, 2), (2, 0)])
    s = sd.mutate_seed(sd.Seed.initial(q), k)
    a1 = [lp.eval_positive(v, a) for v in s.vars]
    assert p_map(s.quiver, a1) == sd.mutate_x(p_map(q, a), q, k)


@given(st.lists(st.fractions(min_value=Fraction(1, 9), max_value=9), min_size=3, max_size=3), st.integers(0, 2))
def test_x_mutation_is_an_involution(x, k):
    q = qv.markov()
    y = sd.mutate_x(x, q, k)
    assert sd.mutate_x(y, qv.mutate(q, k), k) == x


@given(st.integers(-8, 8), st.integers(-8, 8))
def test_tropical_and_laurent_action_equality_agree(a, b):
    q = loops.torus_fence(2, 4).quiver()
    rho = loops.kalman_rho(2, 4)
    pa, pb = sd.power(rho, a), sd.power(rho, b)
    expect = (a - b) % 6 == 0
    assert sd.action_equal(q, pa, pb, method="tropical") == expect
    assert sd.action_equal(q, pa, pb, method="laurent") == expect
