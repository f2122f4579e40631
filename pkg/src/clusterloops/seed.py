"""Cluster seeds, A- and X-mutation, and cluster automorphisms.

An automorphism is a mutation word (applied left to right) followed by a
relabelling: the variable and quiver row/column at vertex v move to vertex
perm[v].  Cycle notation (a b c) means a -> b -> c -> a.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
import re

import numpy as np

from . import _kernels
from . import laurent as lp
from .laurent import LaurentPoly
from .quiver import Quiver, QuiverError
from . import quiver as qv


class SeedError(ValueError):
    pass


class Seed:
    __slots__ = ("quiver", "vars")

    def __init__(self, quiver, variables):
        variables = tuple(variables)
        if len(variables) != quiver.n:
            raise SeedError("seed needs %d variables, got %d" % (quiver.n, len(variables)))
        self.quiver = quiver
        self.vars = variables

    @classmethod
    def initial(cls, quiver):
        n = quiver.n
        return cls(quiver, [LaurentPoly.var(n, i) for i in range(n)])

    @property
    def n(self):
        return self.quiver.n

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        return self.quiver == other.quiver and self.vars == other.vars

    def __hash__(self):
        return hash((self.quiver, self.vars))

    def cluster(self):
        """Unlabelled mutable cluster."""
        return frozenset(self.vars[: self.quiver.n_mut])

    def __repr__(self):
        return "Seed(%r, %s)" % (self.quiver, [str(v) for v in self.vars])


def exchange_monomials(b, k, values, one):
    """The two exchange products for vertex k (column k of b)."""
    pos = one
    neg = one
    for i, bik in enumerate(b[:, k]):
        if bik > 0:
            pos = pos * values[i] ** int(bik)
        elif bik < 0:
            neg = neg * values[i] ** int(-bik)
    return pos, neg


def mutate_seed(s, k):
    q = s.quiver
    k = q.index(k)
    if k >= q.n_mut:
        raise SeedError("cannot mutate at frozen vertex %d" % k)
    one = LaurentPoly.const(s.n, 1)
    pos, neg = exchange_monomials(q.b, k, s.vars, one)
    try:
        new = lp.div_exact(lp.add(pos, neg), s.vars[k])
    except lp.NotDivisible as exc:  # would mean the Laurent phenomenon failed
        raise SeedError("exchange relation at %d is not Laurent: %s" % (k, exc)) from exc
    variables = list(s.vars)
    variables[k] = new
    return Seed(qv.mutate(q, k), variables)


def mutate_x(point, q, k):
    """X-mutation of a positive point (one value per vertex, frozen included).

    x_k -> 1/x_k and, for j != k, x_j (1 + x_k)^(-b_kj) if b_kj <= 0,
    x_j (1 + x_k^-1)^(-b_kj) if b_kj >= 0.
    """
    k = q.index(k)
    if k >= q.n_mut:
        raise SeedError("cannot mutate at frozen vertex %d" % k)
    pts = list(point)
    if len(pts) != q.n:
        raise SeedError("point needs %d values" % q.n)
    if any(not x > 0 for x in pts):
        raise SeedError("X-points must be strictly positive")
    xk = pts[k]
    out = []
    for j, xj in enumerate(pts):
        if j == k:
            out.append(1 / Fraction(xk) if isinstance(xk, (int, Fraction)) else 1.0 / xk)
            continue
        bkj = int(q.b[k, j])
        if bkj <= 0:
            out.append(xj * (1 + xk) ** (-bkj))
        else:
            inv = 1 / Fraction(xk) if isinstance(xk, (int, Fraction)) else 1.0 / xk
            out.append(xj / (1 + inv) ** bkj)
    return out


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class ClusterAutomorphism:
    word: tuple
    perm: tuple

    def __init__(self, word, perm):
        object.__setattr__(self, "word", tuple(int(v) for v in word))
        perm = tuple(int(v) for v in perm)
        if sorted(perm) != list(range(len(perm))):
            raise SeedError("perm is not a permutation: %r" % (perm,))
        object.__setattr__(self, "perm", perm)

    @property
    def n(self):
        return len(self.perm)

    @classmethod
    def identity(cls, n):
        return cls((), range(n))

    @classmethod
    def from_cycles(cls, word, cycles, n):
        perm = list(range(n))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                perm[a] = b
        return cls(word, perm)

    def cycles(self):
        seen = set()
        out = []
        for v in range(self.n):
            if v in seen or self.perm[v] == v:
                continue
            cyc = []
            u = v
            while u not in seen:
                seen.add(u)
                cyc.append(u)
                u = self.perm[u]
            out.append(tuple(cyc))
        return out

    def relabeled(self, mapping, n=None):
        """Transport along a vertex bijection old -> mapping[old]."""
        n = self.n if n is None else n
        perm = [0] * n
        for v in range(self.n):
            perm[mapping[v]] = mapping[self.perm[v]]
        return ClusterAutomorphism([mapping[v] for v in self.word], perm)

    def __str__(self):
        return to_text(self)


def identity(n):
    return ClusterAutomorphism.identity(n)


def _check_perm_split(q, phi):
    if phi.n != q.n:
        raise SeedError("automorphism acts on %d vertices, quiver has %d" % (phi.n, q.n))
    for v, p in enumerate(phi.perm):
        if (v < q.n_mut) != (p < q.n_mut):
            raise SeedError("permutation mixes mutable and frozen vertices (%d -> %d)" % (v, p))
    for k in phi.word:
        if not 0 <= k < q.n_mut:
            raise SeedError("word mutates at non-mutable vertex %d" % k)


def relabel_seed(s, perm):
    variables = [None] * s.n
    for v, p in enumerate(perm):
        variables[p] = s.vars[v]
    return Seed(s.quiver.permuted(perm).with_labels(s.quiver.labels), variables)


def apply_quiver(q, phi):
    _check_perm_split(q, phi)
    return qv.mutate_word(q, phi.word).permuted(phi.perm).with_labels(q.labels)


def apply_aut(s, phi):
    _check_perm_split(s.quiver, phi)
    for k in phi.word:
        s = mutate_seed(s, k)
    return relabel_seed(s, phi.perm)


def is_automorphism(q, phi, allow_reversal=False):
    """True when the quiver returns to itself (optionally up to global reversal)."""
    if isinstance(q, Seed):
        q = q.quiver
    try:
        image = apply_quiver(q, phi)
    except (SeedError, QuiverError):
        return False
    if np.array_equal(image.b, q.b):
        return True
    return bool(allow_reversal and np.array_equal(image.b, -q.b))


def compose(phi2, phi1):
    """phi2 after phi1."""
    if phi1.n != phi2.n:
        raise SeedError("automorphisms act on different vertex sets")
    inv1 = inverse_perm(phi1.perm)
    word = list(phi1.word) + [inv1[v] for v in phi2.word]
    perm = [phi2.perm[phi1.perm[v]] for v in range(phi1.n)]
    return ClusterAutomorphism(word, perm)


def compose_all(*phis):
    """compose_all(a, b, c) applies a first, then b, then c."""
    out = identity(phis[0].n)
    for phi in phis:
        out = compose(phi, out)
    return out


def inverse_perm(perm):
    inv = [0] * len(perm)
    for v, p in enumerate(perm):
        inv[p] = v
    return inv


def inverse(phi):
    word = [phi.perm[v] for v in reversed(phi.word)]
    return ClusterAutomorphism(word, inverse_perm(phi.perm))


def power(phi, m):
    if m < 0:
        return power(inverse(phi), -m)
    out = identity(phi.n)
    base = phi
    while m:
        if m & 1:
            out = compose(base, out)
        m >>= 1
        if m:
            base = compose(base, base)
    return out


def reduce_word(phi):
    """Cancel adjacent repeated mutations (mu_v mu_v = id)."""
    stack = []
    for v in phi.word:
        if stack and stack[-1] == v:
            stack.pop()
        else:
            stack.append(v)
    return ClusterAutomorphism(stack, phi.perm)


# ---------------------------------------------------------------------------
# tropical (principal coefficient) tracking


class TropicalState:
    """Extended exchange matrix with principal coefficients.

    Rows 0..n-1 are the quiver, rows n..n+m-1 the c-vectors (m = n_mut).  By
    sign-coherence and the synchronicity of seeds with their C-matrices, the
    labelled seed is back at the start exactly when B and C both are.
    """

    def __init__(self, q):
        self.q = q
        n, m = q.n, q.n_mut
        self.ext = np.vstack([q.b[:, :m], np.eye(m, dtype=np.int64)])
        # switches to exact Python ints once int64 entries get large
        self.big = False
        # accumulated permutation (only its frozen part is needed)
        self.perm = list(range(n))

    def apply(self, phi):
        m = self.q.n_mut
        if not self.big:
            out, overflow = _kernels.mutate_word(self.ext, phi.word)
            if overflow:
                self.big = True
                self.ext = self.ext.astype(object)
            else:
                self.ext = out
        if self.big:
            ext = self.ext
            for k in phi.word:
                ext = _kernels.np_mutate(ext, k)
            self.ext = ext
        self.perm = [phi.perm[p] for p in self.perm]
        perm = phi.perm[:m]
        n = self.q.n
        new = np.empty_like(self.ext)
        rows = list(phi.perm) + list(range(n, n + m))
        new[rows, :] = self.ext
        out = np.empty_like(new)
        out[:, list(perm)] = new
        self.ext = out

    def fixed(self):
        """Vertices whose cluster variable is back at its initial value."""
        n, m = self.q.n, self.q.n_mut
        c = self.ext[n:, :]
        out = [v for v in range(m) if all(c[v, j] == (1 if j == v else 0) for j in range(m))]
        return out + [v for v in range(m, n) if self.perm[v] == v]

    def at_start(self):
        n, m = self.q.n, self.q.n_mut
        return bool((self.ext[:n, :] == self.q.b[:, :m]).all() and (self.ext[n:, :] == np.eye(m, dtype=np.int64)).all())


@dataclass
class Order:
    value: int


@dataclass
class ExceedsBound:
    bound: int


def order(s, phi, bound=10000, method="tropical"):
    """Least m <= bound with phi^m acting trivially on the initial seed."""
    q = s.quiver if isinstance(s, Seed) else s
    if not is_automorphism(q, phi):
        raise SeedError("not an automorphism of the seed")
    if method == "tropical":
        st = TropicalState(q)
        for m in range(1, bound + 1):
            st.apply(phi)
            if st.at_start():
                return Order(m)
        return ExceedsBound(bound)
    if method == "laurent":
        s0 = s if isinstance(s, Seed) else Seed.initial(q)
        cur = s0
        for m in range(1, bound + 1):
            cur = apply_aut(cur, phi)
            if cur == s0:
                return Order(m)
        return ExceedsBound(bound)
    raise SeedError("unknown order method %r" % method)


def acts_trivially(q, phi, method="tropical"):
    if method == "tropical":
        st = TropicalState(q)
        st.apply(phi)
        return st.at_start()
    s0 = Seed.initial(q)
    return apply_aut(s0, phi) == s0


def action_equal(s, phi1, phi2, method="laurent"):
    """Do phi1 and phi2 send the initial seed to the same labelled seed?"""
    q = s.quiver if isinstance(s, Seed) else s
    if method == "laurent":
        s0 = s if isinstance(s, Seed) else Seed.initial(q)
        return apply_aut(s0, phi1) == apply_aut(s0, phi2)
    if method == "tropical":
        return acts_trivially(q, compose(inverse(phi2), phi1), "tropical")
    raise SeedError("unknown method %r" % method)


def fixed_vertices(s, phi, method="tropical"):
    """Vertices v whose cluster variable phi leaves in place.

    "laurent" compares the Laurent polynomials of ``s``.  "tropical" works on
    the initial seed of ``s``'s quiver: g-vectors determine cluster variables,
    and for skew-symmetric B the g-matrix is the inverse transpose of the
    c-matrix, so x_v is fixed exactly when row v of C is the unit vector e_v.
    Frozen variables are fixed exactly when the permutation fixes them.
    """
    q = s.quiver if isinstance(s, Seed) else s
    if method == "laurent":
        s0 = s if isinstance(s, Seed) else Seed.initial(q)
        image = apply_aut(s0, phi)
        return [v for v in range(s0.n) if image.vars[v] == s0.vars[v]]
    if method != "tropical":
        raise SeedError("unknown method %r" % method)
    st = TropicalState(q)
    st.apply(phi)
    return st.fixed()


# ---------------------------------------------------------------------------
# exchange graph


@dataclass
class ExchangeGraph:
    clusters: set
    truncated: bool


def exchange_graph(q, max_clusters=500):
    """Unlabelled clusters reachable by mutation, breadth first."""
    s0 = Seed.initial(q)
    seen = {s0.cluster()}
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        for k in range(q.n_mut):
            t = mutate_seed(s, k)
            c = t.cluster()
            if c in seen:
                continue
            if len(seen) >= max_clusters:
                return ExchangeGraph(seen, True)
            seen.add(c)
            queue.append(t)
    return ExchangeGraph(seen, False)


# ---------------------------------------------------------------------------
# text formats


def _name(v, labels):
    return labels[v] if labels is not None else "v%d" % v


def to_text(phi, labels=None):
    word = " ".join(_name(v, labels) for v in phi.word)
    cyc = "".join("(%s)" % " ".join(_name(v, labels) for v in c) for c in phi.cycles()) or "()"
    return "mut: %s ; perm: %s" % (word, cyc)


def _lookup(tok, labels):
    if labels is not None and tok in labels:
        return labels.index(tok)
    m = re.fullmatch(r"v?(\d+)", tok)
    if not m:
        raise SeedError("unknown vertex name %r" % tok)
    return int(m.group(1))


def from_text(text, n, labels=None):
    m = re.fullmatch(r"\s*mut:(.*);\s*perm:(.*)", text.strip(), re.S)
    if not m:
        raise SeedError("expected 'mut: ... ; perm: (...)'")
    word = [_lookup(t, labels) for t in m.group(1).split()]
    cycles = []
    for body in re.findall(r"\(([^()]*)\)", m.group(2)):
        toks = body.replace(",", " ").split()
        if toks:
            cycles.append([_lookup(t, labels) for t in toks])
    rest = re.sub(r"\([^()]*\)", "", m.group(2)).strip()
    if rest:
        raise SeedError("junk in permutation: %r" % rest)
    for v in word + [v for c in cycles for v in c]:
        if not 0 <= v < n:
            raise SeedError("vertex %d out of range" % v)
    return ClusterAutomorphism.from_cycles(word, cycles, n)


def seed_to_text(s):
    lines = [qv.to_text(s.quiver).rstrip("\n")]
    lines += [lp.to_text(v) for v in s.vars]
    return "\n".join(lines) + "\n"


def seed_from_text(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    n = int(head[1]) + int(head[2])
    narrows = 0
    for ln in lines[1:]:
        if re.fullmatch(r"\s*\d+\s+\d+\s+\d+\s*", ln):
            narrows += 1
        else:
            break
    q = qv.from_text("\n".join(lines[: 1 + narrows]))
    variables = [lp.from_text(ln, n) for ln in lines[1 + narrows:]]
    return Seed(q, variables)
