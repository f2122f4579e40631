"""Quivers as integer exchange matrices: mutation, isomorphism, mutation classes
and the finite-type decision.

Vertices are 0..n-1 with the mutable ones first.  The exchange matrix is kept
square, b[i, j] = (#arrows i->j) - (#arrows j->i), and frozen-frozen entries
are always zero.
"""

from collections import deque
from dataclasses import dataclass
import json

import numpy as np

from . import _kernels

MAX_CANONICAL_VERTICES = 24


class QuiverError(ValueError):
    pass


class Quiver:
    __slots__ = ("n_mut", "n_frozen", "b", "labels", "_key")

    def __init__(self, b, n_mut=None, labels=None):
        b = np.array(b, dtype=np.int64)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise QuiverError("exchange matrix must be square")
        n = b.shape[0]
        n_mut = n if n_mut is None else int(n_mut)
        if not 0 <= n_mut <= n:
            raise QuiverError("bad mutable count %d" % n_mut)
        if (b != -b.T).any():
            raise QuiverError("exchange matrix is not skew-symmetric")
        if b[n_mut:, n_mut:].any():
            raise QuiverError("arrows between frozen vertices are not allowed")
        b.setflags(write=False)
        self.b = b
        self.n_mut = n_mut
        self.n_frozen = n - n_mut
        self.labels = tuple(str(x) for x in labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise QuiverError("label count does not match vertex count")
        self._key = None

    @property
    def n(self):
        return self.b.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.n_mut == other.n_mut and np.array_equal(self.b, other.b)

    def __hash__(self):
        if self._key is None:
            self._key = hash((self.n_mut, self.b.tobytes()))
        return self._key

    def __repr__(self):
        return "Quiver(n_mut=%d, n_frozen=%d, arrows=%s)" % (self.n_mut, self.n_frozen, self.arrows())

    def index(self, v):
        """Vertex index from a label or an int."""
        if isinstance(v, (int, np.integer)):
            if not 0 <= v < self.n:
                raise QuiverError("vertex %d out of range" % v)
            return int(v)
        try:
            return self.labels.index(str(v))
        except ValueError:
            raise QuiverError("unknown vertex %r" % (v,)) from None

    def arrows(self):
        """List of (i, j, w) with w = b[i, j] > 0."""
        ii, jj = np.nonzero(self.b > 0)
        return [(int(i), int(j), int(self.b[i, j])) for i, j in zip(ii, jj)]

    def mutable_part(self):
        return Quiver(self.b[: self.n_mut, : self.n_mut], labels=self.labels[: self.n_mut])

    def with_labels(self, labels):
        return Quiver(self.b, self.n_mut, labels)

    def opposite(self):
        return Quiver(-self.b, self.n_mut, self.labels)

    def permuted(self, perm):
        """Relabel: vertex v moves to perm[v]."""
        perm = np.asarray(perm, dtype=np.int64)
        out = np.zeros_like(self.b)
        out[np.ix_(perm, perm)] = self.b
        labels = [None] * self.n
        for v, p in enumerate(perm):
            labels[p] = self.labels[v]
        return Quiver(out, self.n_mut, labels)

    def subquiver(self, keep):
        keep = list(keep)
        return Quiver(self.b[np.ix_(keep, keep)], sum(1 for v in keep if v < self.n_mut), [self.labels[v] for v in keep])

    def max_multiplicity(self, mutable_only=True):
        m = self.n_mut if mutable_only else self.n
        return int(np.abs(self.b[:m, :m]).max(initial=0))


def from_arrows(n, arrows, n_frozen=0, labels=None):
    """Build from (i, j, w) triples meaning w arrows i -> j."""
    b = np.zeros((n, n), dtype=np.int64)
    for i, j, *w in arrows:
        w = w[0] if w else 1
        b[i, j] += w
        b[j, i] -= w
    return Quiver(b, n - n_frozen, labels)


def mutate(q, k):
    k = q.index(k)
    if k >= q.n_mut:
        raise QuiverError("cannot mutate at frozen vertex %d" % k)
    b = _kernels.mutate(q.b, k)
    b[q.n_mut:, q.n_mut:] = 0
    return Quiver(b, q.n_mut, q.labels)


def mutate_word(q, word):
    for k in word:
        q = mutate(q, k)
    return q


# ---------------------------------------------------------------------------
# canonical forms and isomorphism


def _refine(b, colors):
    """Colour refinement from an initial colouring; colours are canonical ranks."""
    n = b.shape[0]
    nbrs = [[(int(b[v, u]), u) for u in range(n) if b[v, u]] for v in range(n)]
    ncol = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted((w, colors[u]) for w, u in nbrs[v]))) for v in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == ncol:
            return colors
        ncol = len(ranks)


def _leaves(b, colors):
    """Individualisation-refinement: yields discrete vertex orders."""
    colors = _refine(b, colors)
    n = len(colors)
    if len(set(colors)) == n:
        order = [0] * n
        for v, c in enumerate(colors):
            order[c] = v
        yield order
        return
    counts = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    target = min((k, c) for c, k in counts.items() if k > 1)[1]
    for v in range(n):
        if colors[v] == target:
            split = [2 * c + (0 if u == v else 1) if c == target else 2 * c for u, c in enumerate(colors)]
            yield from _leaves(b, split)


def canonical_form(q):
    """(key, order): key is the lexicographically least flattened matrix over the
    leaves of an individualisation-refinement search.  ``order[i]`` is the
    original vertex placed at position i."""
    if q.n > MAX_CANONICAL_VERTICES:
        raise QuiverError("canonical form limited to %d vertices, got %d" % (MAX_CANONICAL_VERTICES, q.n))
    b = q.b
    best = None
    best_order = None
    start = [0 if v < q.n_mut else 1 for v in range(q.n)]
    for order in _leaves(b, start):
        key = tuple(b[np.ix_(order, order)].ravel().tolist())
        if best is None or key < best:
            best, best_order = key, order
    return (q.n_mut, q.n, best), best_order


def canonical(q):
    return canonical_form(q)[0]


def canonical_quiver(q):
    _, order = canonical_form(q)
    return Quiver(q.b[np.ix_(order, order)], q.n_mut)


def isomorphic(q1, q2, allow_reversal=False):
    """A permutation p (vertex v of q1 -> p[v] of q2) with q1 relabelled == q2,
    or None.  With ``allow_reversal`` an isomorphism onto the opposite quiver
    also counts; the result is then (perm, reversed_flag)."""
    if q1.n != q2.n or q1.n_mut != q2.n_mut:
        return None
    targets = [(q2, False)] + ([(q2.opposite(), True)] if allow_reversal else [])
    k1, o1 = canonical_form(q1)
    for target, flag in targets:
        k2, o2 = canonical_form(target)
        if k1 != k2:
            continue
        perm = [0] * q1.n
        for pos, v in enumerate(o1):
            perm[v] = o2[pos]
        return (perm, flag) if allow_reversal else perm
    return None


# ---------------------------------------------------------------------------
# mutation classes and finite type


@dataclass
class MutationClass:
    quivers: list
    truncated: bool

    def __len__(self):
        return len(self.quivers)


def mutation_class(q, max_size=10000):
    """Breadth-first exploration of the (unlabelled) mutation class."""
    if q.n_mut < 1:
        raise QuiverError("need at least one mutable vertex")
    start = canonical_quiver(q)
    seen = {canonical(start)}
    out = [start]
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for k in range(cur.n_mut):
            nxt = mutate(cur, k)
            key = canonical(nxt)
            if key in seen:
                continue
            if len(out) >= max_size:
                return MutationClass(out, True)
            seen.add(key)
            nxt = canonical_quiver(nxt)
            out.append(nxt)
            queue.append(nxt)
    return MutationClass(out, False)


@dataclass
class Finite:
    label: str
    witness: Quiver


@dataclass
class Infinite:
    witness: Quiver
    path: list


def _components(b):
    n = b.shape[0]
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in range(n):
                if b[v, u] and not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _dynkin_of_tree(adj):
    """Dynkin label of a simply laced tree given as an adjacency dict, else None."""
    n = len(adj)
    if n == 1:
        return "A1"
    degs = {v: len(ns) for v, ns in adj.items()}
    if max(degs.values()) <= 2:
        return "A%d" % n
    branch = [v for v, d in degs.items() if d >= 3]
    if len(branch) != 1 or degs[branch[0]] != 3:
        return None
    c = branch[0]
    legs = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return "D%d" % n
    if legs[0] == 1 and legs[1] == 2 and legs[2] in (2, 3, 4):
        return "E%d" % n
    return None


def _tree_label(b):
    """Label if the unit-multiplicity underlying graph of b is a Dynkin forest."""
    n = b.shape[0]
    labels = []
    for comp in _components(b):
        edges = sum(1 for i in comp for j in comp if i < j and b[i, j])
        if edges != len(comp) - 1:
            return None
        adj = {v: [u for u in comp if b[v, u]] for v in comp}
        lab = _dynkin_of_tree(adj)
        if lab is None:
            return None
        labels.append(lab)
    return "x".join(sorted(labels, key=lambda s: (s[0], int(s[1:]))))


def finite_type(q, max_size=200000):
    """Decide finite type of the mutable part.

    Explores the mutation class, stopping as soon as some quiver has an edge of
    multiplicity >= 2 (then the algebra is of infinite type).  If exploration
    closes with all multiplicities <= 1 the class is finite and contains a
    Dynkin forest, whose shape gives the label.
    """
    m = q.mutable_part()
    if m.n < 1:
        raise QuiverError("need at least one mutable vertex")
    start = canonical_quiver(m)
    if start.max_multiplicity() >= 2:
        return Infinite(m, [])
    seen = {canonical(start): []}
    queue = deque([(start, [])])
    label = _tree_label(start.b)
    witness = start
    while queue:
        cur, path = queue.popleft()
        for k in range(cur.n):
            nxt = mutate(cur, k)
            if nxt.max_multiplicity() >= 2:
                return Infinite(nxt, path + [k])
            key, order = canonical_form(nxt)
            if key in seen:
                continue
            if len(seen) >= max_size:
                raise QuiverError("finite-type exploration exceeded %d quivers" % max_size)
            nxt = Quiver(nxt.b[np.ix_(order, order)], nxt.n_mut)
            seen[key] = path + [k]
            if label is None:
                label = _tree_label(nxt.b)
                if label is not None:
                    witness = nxt
            queue.append((nxt, path + [k]))
    if label is None:
        # every finite 2-finite class contains a Dynkin orientation
        raise QuiverError("finite class without a Dynkin representative (should not happen)")
    return Finite(label, witness)


# ---------------------------------------------------------------------------
# standard quivers


def path_quiver(n, alternating=False):
    arrows = []
    for i in range(n - 1):
        if alternating and i % 2:
            arrows.append((i + 1, i))
        else:
            arrows.append((i, i + 1))
    return from_arrows(n, arrows)


def dynkin(label):
    """Some orientation of a simply laced Dynkin diagram, e.g. 'A3', 'D5', 'E6'."""
    t, n = label[0].upper(), int(label[1:])
    if t == "A":
        return path_quiver(n)
    if t == "D":
        if n < 4:
            raise QuiverError("D_n needs n >= 4")
        return from_arrows(n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)])
    if t == "E":
        if n not in (6, 7, 8):
            raise QuiverError("E_n needs n in 6..8")
        # chain 0..n-2 with the extra vertex hanging off vertex 2
        return from_arrows(n, [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)])
    raise QuiverError("unknown Dynkin type %r" % label)


def kronecker(m=2):
    return from_arrows(2, [(0, 1, m)])


def markov():
    return from_arrows(3, [(0, 1, 2), (1, 2, 2), (2, 0, 2)])


def oriented_cycle(n):
    return from_arrows(n, [(i, (i + 1) % n) for i in range(n)])


# ---------------------------------------------------------------------------
# text / json formats


def to_text(q):
    lines = ["quiver %d %d" % (q.n_mut, q.n_frozen)]
    lines += ["%d %d %d" % a for a in q.arrows()]
    return "\n".join(lines) + "\n"


def from_text(text):
    lines = [(no, ln.split("#")[0].strip()) for no, ln in enumerate(text.splitlines(), 1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise QuiverError("empty quiver file")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 3 or parts[0] != "quiver":
        raise QuiverError("line %d: expected header 'quiver <nMut> <nFrozen>'" % no)
    try:
        n_mut, n_frozen = int(parts[1]), int(parts[2])
    except ValueError:
        raise QuiverError("line %d: non-integer vertex counts" % no) from None
    n = n_mut + n_frozen
    b = np.zeros((n, n), dtype=np.int64)
    for no, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise QuiverError("line %d: expected 'i j w'" % no)
        try:
            i, j, w = (int(x) for x in parts)
        except ValueError:
            raise QuiverError("line %d: non-integer entry" % no) from None
        if not (0 <= i < n and 0 <= j < n) or i == j or w <= 0:
            raise QuiverError("line %d: bad arrow %d %d %d" % (no, i, j, w))
        if i >= n_mut and j >= n_mut:
            raise QuiverError("line %d: arrow between frozen vertices %d and %d" % (no, i, j))
        b[i, j] += w
        b[j, i] -= w
    return Quiver(b, n_mut)


def to_json(q):
    return {"nMut": q.n_mut, "nFrozen": q.n_frozen, "labels": list(q.labels),
            "arrows": [list(a) for a in q.arrows()]}


def from_json(d):
    if isinstance(d, str):
        d = json.loads(d)
    n = d["nMut"] + d["nFrozen"]
    q = from_arrows(n, [tuple(a) for a in d["arrows"]], d["nFrozen"], d.get("labels"))
    if q.b[q.n_mut:, q.n_mut:].any():
        raise QuiverError("arrows between frozen vertices are not allowed")
    return q
