from hypothesis import given, strategies as st
import pytest

from clusterloops import fence as fn
from clusterloops import loops
from clusterloops import quiver as qv
from clusterloops import seed as sd
from clusterloops.seed import ClusterAutomorphism as Aut


@st.composite
def fences(draw, max_rows=4, max_len=9):
    rows = draw(st.integers(2, max_rows))
    cols = draw(st.lists(st.tuples(st.integers(1, rows - 1), st.sampled_from("wb")), min_size=1, max_size=max_len))
    return fn.PlabicFence(rows, cols)


def move_is_mutation(f, res):
    """The quiver after the move is the mutation at the destroyed face,
    relabelled by the face correspondence."""
    phi = Aut([res.vertex], res.face_map)
    return sd.apply_quiver(f.quiver(), phi) == res.fence.quiver()


@given(fences())
def test_every_square_move_is_a_mutation(f):
    cols = f.columns
    for p in range(len(cols) - 1):
        (r, c), (s, d) = cols[p], cols[p + 1]
        if r == s and c != d:
            assert move_is_mutation(f, fn.square_move(f, p))


@given(fences())
def test_every_braid_move_is_a_mutation(f):
    cols = f.columns
    for p in range(len(cols) - 2):
        (i, c1), (j, c2), (i2, c3) = cols[p: p + 3]
        if i == i2 and abs(i - j) == 1 and c1 == c2 == c3:
            assert move_is_mutation(f, fn.r3_move(f, p))


@given(fences())
def test_commutations_preserve_the_quiver(f):
    w = fn.FenceWalk(f)
    for p in range(len(f) - 1):
        if fn.commutes(w.cols[p], w.cols[p + 1]):
            w.swap(p)
            assert sd.apply_quiver(f.quiver(), w.induced()) == w.fence().quiver()
            return


def test_face_count_and_quiver_of_two_row_fence():
    f = fn.fence_from_braid([1] * 4, 2)
    assert len(f.faces()) == 3
    assert qv.finite_type(f.quiver()).label == "A3"


def test_torus_fences_give_expected_types():
    assert qv.finite_type(loops.torus_fence(3, 3).quiver()).label == "D4"
    assert qv.finite_type(loops.torus_fence(3, 4).quiver()).label == "E6"
    assert isinstance(qv.finite_type(loops.torus_fence(3, 6).quiver()), qv.Infinite)


def test_fence_to_braid():
    f = fn.PlabicFence(3, [(1, "w"), (2, "b"), (1, "w")])
    # the black edge on row 2 enters the reversed second factor as s2
    assert fn.fence_to_braid(f).letters == (1, 1, 2)
    assert fn.fence_to_braid(fn.fence_from_braid([1, 2, 1])).letters == (1, 2, 1)


def test_invalid_fences_and_moves():
    with pytest.raises(fn.FenceError):
        fn.PlabicFence(2, [(2, "w")])
    with pytest.raises(fn.FenceError):
        fn.PlabicFence(2, [(1, "x")])
    with pytest.raises(fn.FenceError):
        fn.r3_move(fn.fence_from_braid([1, 1, 1]), 0)
    with pytest.raises(fn.FenceError):
        fn.square_move(fn.fence_from_braid([1, 1]), 0)


def test_cyclic_rotation_is_a_seed_map():
    f = loops.torus_fence(3, 4)
    g, phi = fn.cyclic_rotation(f)
    assert sd.apply_quiver(f.quiver(), phi) == g.quiver()


@pytest.mark.parametrize("n,order", [(1, 2), (2, 5), (3, 6), (4, 7), (5, 8)])
def test_dt_order_on_type_a(n, order):
    # DT has order h + 2 for A_n, n >= 2 (h = n + 1), and (h + 2) / 2 = 2 for A_1
    f = fn.fence_from_braid([1] * (n + 1), 2)
    dt = fn.dt_sequence(f)
    assert sd.is_automorphism(f.quiver(), dt)
    assert sd.order(f.quiver(), dt) == sd.Order(order)


@pytest.mark.parametrize("k,n,order", [(3, 3, 4), (3, 4, 14), (3, 5, 16), (4, 4, 4)])
def test_dt_order_on_torus_fences(k, n, order):
    # D4: (6 + 2) / 2, E6: 12 + 2, E8: (30 + 2) / 2; Gr(4, 8) by the square rule below
    f = loops.torus_fence(k, n)
    assert sd.order(f.quiver(), fn.dt_sequence(f)) == sd.Order(order)


@pytest.mark.parametrize("f", [fn.fence_from_braid([1] * m, 2) for m in range(2, 7)]
                         + [loops.torus_fence(3, 4), loops.torus_fence(4, 4), loops.torus_fence(4, 5)])
def test_dt_squared_is_the_full_rotation(f):
    dt = fn.dt_sequence(f)
    q = f.quiver()
    assert sd.action_equal(q, sd.power(dt, 2), fn.full_rotation(f, direction=-1), method="tropical")


def test_single_face_dt_is_one_mutation():
    f = fn.fence_from_braid([1, 1], 2)
    dt = fn.dt_sequence(f)
    assert dt.word == (0,) and dt.perm == (0,)


def test_dt_needs_all_white():
    with pytest.raises(fn.FenceError):
        fn.dt_sequence(fn.PlabicFence(2, [(1, "w"), (1, "b")]))


@given(st.lists(st.integers(1, 3), min_size=2, max_size=7), st.randoms(use_true_random=False))
def test_braid_path_replays_to_target(word, rnd):
    # scramble by random legal moves, then find the way back
    cur = list(word)
    for _ in range(10):
        opts = [m for _, m in fn._braid_neighbours(tuple(cur))]
        if not opts:
            break
        kind, p = rnd.choice(opts)
        cur = [*cur[:p], cur[p + 1], cur[p], *cur[p + 2:]] if kind == "c" else [*cur[:p], cur[p + 1], cur[p], cur[p + 1], *cur[p + 3:]]
    path = fn.braid_path(cur, word)
    assert path is not None
    w = tuple(cur)
    for kind, p in path:
        w = dict((m, x) for x, m in fn._braid_neighbours(w))[(kind, p)]
    assert w == tuple(word)


def test_text_format_and_braid_parsing():
    f = fn.PlabicFence(3, [(1, "w"), (2, "b")])
    assert fn.from_text(fn.to_text(f)) == f
    assert fn.parse_braid("s1^2 s3 s2 D2").letters == (1, 1, 3, 2)
    assert fn.parse_braid("1,2,1").strands == 3
    with pytest.raises(fn.FenceError):
        fn.parse_braid("s1 q")
    with pytest.raises(fn.FenceError):
        fn.from_text("fence 2\nw1 z1")
