"""Named Legendrian loops compiled to cluster automorphisms.

theta loops of satellites, the Kalman loop rho, the tau generators of T_n
quivers, and helpers to check group relations and to match figure labels to
computed ones.
"""

from dataclasses import dataclass
import itertools
import re

from . import fence as fn
from . import quiver as qv
from .seed import (
    ClusterAutomorphism,
    Seed,
    action_equal,
    compose,
    identity,
    is_automorphism,
    power,
)


class LoopError(ValueError):
    pass


# ---------------------------------------------------------------------------
# theta loops


@dataclass(frozen=True)
class ThetaInput:
    """Q_gamma and Q_i as left-to-right vertex lists, in terms of ``vertices``."""

    q_gamma: tuple
    q_i: tuple
    vertices: tuple = None

    def __init__(self, q_gamma, q_i, vertices=None):
        q_gamma, q_i = tuple(q_gamma), tuple(q_i)
        if vertices is None:
            vertices = tuple(sorted(set(q_gamma) | set(q_i)))
        vertices = tuple(vertices)
        for v in q_gamma + q_i:
            if v not in vertices:
                raise LoopError("vertex %r is not in the vertex list" % (v,))
        if len(set(q_gamma)) != len(q_gamma) or len(set(q_i)) != len(q_i):
            raise LoopError("repeated vertex in Q_gamma or Q_i")
        object.__setattr__(self, "q_gamma", q_gamma)
        object.__setattr__(self, "q_i", q_i)
        object.__setattr__(self, "vertices", vertices)
        # overlap must sit in the same relative order in both lists
        ov_i = [v for v in q_i if v in q_gamma]
        ov_g = [v for v in q_gamma if v in q_i]
        if ov_i != ov_g:
            raise LoopError("overlap vertices are ordered differently in Q_gamma and Q_i")

    @property
    def overlap(self):
        return tuple(v for v in self.q_i if v in self.q_gamma)

    def relabeled(self, names):
        """Rename vertices through ``names`` (index or dict lookup)."""
        def f(v):
            return names[v]
        return ThetaInput([f(v) for v in self.q_gamma], [f(v) for v in self.q_i],
                          [f(v) for v in self.vertices])


READINGS = ("example", "lemma")


def theta_sequence(t, reading="auto", quiver=None):
    """Mutation word and permutation of a satellite theta loop.

    Word: gamma_p..gamma_1, gamma_1, then the row-i vertices with each overlap
    vertex gamma_j replaced by gamma_{j+1}.  The two readings differ only at
    the last Q_gamma vertex: "example" drops it, "lemma" wraps to gamma_1.
    Cycles: for each overlap vertex, the row-i run ending at it followed by the
    Q_gamma vertices strictly between it and the previous overlap, descending.

    reading="auto" needs ``quiver`` (vertices in ``t.vertices`` order) and
    returns the first reading that is an automorphism of it.
    """
    if reading == "auto":
        if quiver is None:
            reading = "example"
        else:
            for r in READINGS:
                phi = theta_sequence(t, r)
                if is_automorphism(quiver, phi):
                    return phi
            raise LoopError("neither reading of the theta sequence is an automorphism")
    if reading not in READINGS:
        raise LoopError("unknown reading %r" % reading)
    g, qi = t.q_gamma, t.q_i
    if not g:
        raise LoopError("Q_gamma is empty")
    idx = {v: n for n, v in enumerate(t.vertices)}
    gpos = {v: j for j, v in enumerate(g)}

    word = list(reversed(g)) + [g[0]]
    for v in qi:
        if v not in gpos:
            word.append(v)
        elif gpos[v] + 1 < len(g):
            word.append(g[gpos[v] + 1])
        elif reading == "lemma":
            word.append(g[0])

    cycles = []
    prev_i, prev_g = 0, -1
    for a, v in enumerate(qi):
        if v not in gpos:
            continue
        j = gpos[v]
        cyc = list(qi[prev_i: a + 1]) + [g[x] for x in range(j - 1, prev_g, -1)]
        if len(cyc) > 1:
            cycles.append(cyc)
        prev_i, prev_g = a + 1, j
    n = len(t.vertices)
    return ClusterAutomorphism.from_cycles(
        [idx[v] for v in word], [[idx[v] for v in c] for c in cycles], n)


def cable(beta, i, k):
    """2-cable strand i of a positive braid and append the sigma_i^(k-2) satellite.

    Returns the letters of the satellite braid on strands+1 strands and the
    column of the first satellite crossing (the basepoint crossing c).
    """
    if isinstance(beta, fn.BraidWord):
        strands, letters = beta.strands, beta.letters
    else:
        letters = list(beta)
        strands = max(letters) + 1 if letters else 2
    if not 1 <= i <= strands:
        raise LoopError("strand %d outside 1..%d" % (i, strands))
    if k < 3:
        raise LoopError("satellite exponent k must be at least 3, got %d" % k)
    p = i
    out = []
    for j in letters:
        if p == j:
            out += [j + 1, j]
            p = j + 1
        elif p == j + 1:
            out += [j, j + 1]
            p = j
        elif j + 1 < p:
            out.append(j)
        else:
            out.append(j + 1)
    if p != i:
        raise LoopError("strand %d is not fixed by the braid's permutation" % i)
    c = len(out)
    out += [i] * (k - 2)
    return fn.BraidWord(strands + 1, out), c


def _crossing_left(w, p):
    """Move the crossing at column p as far left as commutations and braid
    moves allow.  Returns its final column."""
    while p > 0:
        cols = w.cols
        r = cols[p][0]
        if fn.commutes(cols[p - 1], cols[p]):
            w.swap(p - 1)
            p -= 1
            continue
        if cols[p - 1][0] == r:
            break
        q = p - 2
        while q >= 0 and cols[q][0] != r:
            q -= 1
        if q < 0:
            break
        if all(fn.commutes(cols[q], cols[t]) for t in range(q + 1, p - 1)):
            for t in range(q, p - 2):
                w.swap(t)
            w.r3(p - 2)
            p -= 2
            continue
        break
    return p


@dataclass
class ThetaRun:
    fence: fn.PlabicFence
    theta: ThetaInput
    simulated: ClusterAutomorphism
    crossing: int


def simulate_theta(f, c):
    """Carry the crossing at column c once around the closure of fence f.

    The crossing is pushed left through braid moves, rotated from the left end
    to the right end, and the fence is put back in its starting column order
    with commutations.  Returns the ThetaRun with the recorded automorphism
    and the Q_gamma / Q_i lists (face indices) read off along the way.
    """
    if f.columns[c][1] != fn.WHITE or not f.all_white():
        raise LoopError("theta simulation expects an all-white fence")
    row = f.columns[c][0]
    w = fn.FenceWalk(f)
    p = _crossing_left(w, c)
    q_gamma = list(reversed(w.word))
    if any(w.cols[t][0] == row for t in range(p)):
        raise LoopError("crossing did not reach the left end of its row")
    w.rotate(p)
    if not w.normalize_to(f.columns):
        raise LoopError("loop did not return to the starting fence")
    aut = w.induced()
    fs = f.faces()
    q_i = [x for x, fc in enumerate(fs) if fc[0] == row]
    q_i.sort(key=lambda x: fs[x][1])
    q_gamma.sort(key=lambda x: fs[x][1])
    return ThetaRun(f, ThetaInput(q_gamma, q_i, range(len(fs))), aut, c)


def theta_from_satellite(beta, i, k):
    """Fence of the satellite and its ThetaInput (face indices, row-major)."""
    run = theta_run(beta, i, k)
    return run.fence, run.theta


def theta_run(beta, i, k):
    if isinstance(beta, str):
        beta = fn.parse_braid(beta)
    word, c = cable(beta, i, k)
    f = fn.fence_from_braid(word)
    return simulate_theta(f, c)


def theta_loop(beta, i, k, reading="auto"):
    """theta automorphism via the combinatorial rule, cross-checked against
    the direct fence simulation."""
    run = theta_run(beta, i, k)
    phi = theta_sequence(run.theta, reading, run.fence.quiver())
    return run, phi


# ---------------------------------------------------------------------------
# affine D fences and the named loops on them


def dtilde_braid(n):
    """(s2 s1 s3 s2)^2 s1^(n-4): a 4-strand braid whose fence quiver is of
    affine type D_n (n+1 faces)."""
    if n < 4:
        raise LoopError("affine D_n needs n >= 4")
    return fn.BraidWord(4, [2, 1, 3, 2] * 2 + [1] * (n - 4))


def dtilde_theta1(n):
    """theta~_1 in figure labels 0..n."""
    word = [5, 0, 3, 1, 1, 4] + list(range(6, n + 1))
    return ClusterAutomorphism.from_cycles(word, [[1, 4, 5, 0, 3]], n + 1)


def dtilde_theta2(n):
    """theta~_2 in figure labels 0..n."""
    return ClusterAutomorphism.from_cycles([1, 4], [[1, 4, 0, 3]], n + 1)


def dtilde_theta_input(n):
    return ThetaInput([1, 3, 0, 5], [4, 5] + list(range(6, n + 1)), range(n + 1))


def dn_theta(n):
    """The D_n theta word (3, 2, 4, ..., n; (1 2 3)) on vertices 1..n, as 0-based
    automorphism on n vertices (figure label v sits at index v-1)."""
    word = [3, 2] + list(range(4, n + 1))
    return ClusterAutomorphism.from_cycles([v - 1 for v in word], [[0, 1, 2]], n)


# ---------------------------------------------------------------------------
# T_n quivers and tau generators


@dataclass(frozen=True)
class TnQuiverSpec:
    tails: tuple

    def __init__(self, tails):
        tails = tuple(int(x) for x in tails)
        if not tails or any(x < 2 for x in tails):
            raise LoopError("tail lengths must all be >= 2, got %r" % (tails,))
        object.__setattr__(self, "tails", tails)

    def labels(self):
        out = ["v0", "v1"]
        for t, m in enumerate(self.tails, 1):
            out += ["%d_%d" % (t, j) for j in range(2, m + 1)]
        return out

    def vertex(self, tail, j):
        """Index of tail vertex i_j (j >= 2); tails are numbered from 1."""
        if not 1 <= tail <= len(self.tails) or not 2 <= j <= self.tails[tail - 1]:
            raise LoopError("no vertex %d_%d" % (tail, j))
        return 2 + sum(m - 1 for m in self.tails[: tail - 1]) + (j - 2)

    @property
    def n(self):
        return 2 + sum(m - 1 for m in self.tails)


V0, V1 = 0, 1


def build_tn(spec):
    """T_n quiver: a double arrow v1 => v0, an oriented triangle v0 -> i_2 -> v1
    for every tail, and tails alternating with i_2 a source once v0 is removed."""
    if not isinstance(spec, TnQuiverSpec):
        spec = TnQuiverSpec(spec)
    arrows = [(V1, V0, 2)]
    for t, m in enumerate(spec.tails, 1):
        i2 = spec.vertex(t, 2)
        arrows += [(V0, i2), (i2, V1)]
        for j in range(3, m + 1):
            a, b = spec.vertex(t, j - 1), spec.vertex(t, j)
            arrows.append((a, b) if j % 2 == 1 else (b, a))
    return qv.from_arrows(spec.n, arrows, labels=spec.labels())


def build_tau(spec, tail):
    """tau_i: odd tail vertices (descending), even ones (descending), then
    i_2, v0, v1, followed by the 3-cycle i_2 -> v0 -> v1 -> i_2."""
    if not isinstance(spec, TnQuiverSpec):
        spec = TnQuiverSpec(spec)
    if not 1 <= tail <= len(spec.tails):
        raise LoopError("tail %d outside 1..%d" % (tail, len(spec.tails)))
    m = spec.tails[tail - 1]
    odd = [spec.vertex(tail, j) for j in range(m, 2, -1) if j % 2 == 1]
    even = [spec.vertex(tail, j) for j in range(m, 2, -1) if j % 2 == 0]
    i2 = spec.vertex(tail, 2)
    word = odd + even + [i2, V0, V1]
    return ClusterAutomorphism.from_cycles(word, [[i2, V0, V1]], spec.n)


# ---------------------------------------------------------------------------
# Kalman loop


def torus_fence(k, n):
    """All-white fence of (s1 ... s_{k-1})^n on k lines."""
    if k < 2 or n < 2:
        raise LoopError("need k, n >= 2")
    return fn.fence_from_braid(list(range(1, k)) * n, k)


def kalman_rho(k, n):
    """rho = delta^(k-1) on the torus-link fence, as a map of its face seed."""
    f = torus_fence(k, n)
    g, phi = fn.rotation_power(f, k - 1)
    if g != f:
        raise LoopError("delta^(k-1) did not return to the starting fence")
    return phi


# ---------------------------------------------------------------------------
# relations


@dataclass
class RelationReport:
    relation: str
    holds: bool


_TOKEN = re.compile(r"([A-Za-z_][\w~]*)(?:\^(-?\d+))?")


def evaluate_word(expr, generators, n):
    """Compose a word like 't1^4 t2^-1' (applied left to right)."""
    out = identity(n)
    expr = expr.strip()
    if expr in ("", "1", "id"):
        return out
    for m in re.finditer(r"\S+", expr):
        tok = m.group(0)
        mm = _TOKEN.fullmatch(tok)
        if not mm or mm.group(1) not in generators:
            raise LoopError("unknown generator in %r" % tok)
        g = power(generators[mm.group(1)], int(mm.group(2) or 1))
        out = compose(g, out)
    return out


def verify_relations(seed, generators, relations):
    """Check 'lhs = rhs' relations as equalities of actions on ``seed``."""
    if isinstance(seed, qv.Quiver):
        seed = Seed.initial(seed)
    q = seed.quiver
    for name, g in generators.items():
        if not is_automorphism(q, g):
            raise LoopError("generator %s is not an automorphism of the seed" % name)
    out = []
    for rel in relations:
        if isinstance(rel, str):
            if "=" not in rel:
                raise LoopError("relation %r has no '='" % rel)
            lhs, rhs = rel.split("=", 1)
        else:
            lhs, rhs = rel
            rel = "%s = %s" % (lhs, rhs)
        a = evaluate_word(lhs, generators, q.n)
        b = evaluate_word(rhs, generators, q.n)
        out.append(RelationReport(rel.strip(), action_equal(seed, a, b, method="tropical")))
    return out


# ---------------------------------------------------------------------------
# labeling search


def _valid_under(q, templates, lab):
    for t in templates:
        if not is_automorphism(q, t.relabeled(lab)):
            return False
    return True


def labeling_search(q, templates, limit=None):
    """Find a bijection lab (template label -> vertex of q) under which every
    template passes is_automorphism.  Returns the list lab or None.

    Plain search over all n! bijections in lexicographic order, so the answer
    is deterministic; ``limit`` caps the number of candidates tried.
    """
    if isinstance(templates, ClusterAutomorphism):
        templates = [templates]
    n = q.n
    if any(t.n != n for t in templates):
        return None
    tried = 0
    for lab in itertools.permutations(range(n)):
        tried += 1
        if limit is not None and tried > limit:
            return None
        if _valid_under(q, templates, list(lab)):
            return list(lab)
    return None
