"""Folding quivers along finite group actions.

A group is given by generating permutations of the quiver's vertices.  The
folded exchange matrix sums rows over an orbit: bG[I, J] = sum_{i in I} b[i, j]
for any j in J, and bG @ diag(|orbit|) is skew-symmetric on the mutable block.
"""

from collections import deque
from dataclasses import dataclass
import re

import numpy as np

from . import _kernels
from . import quiver as qv


class FoldingError(ValueError):
    pass


class NotInvariant(FoldingError):
    def __init__(self, generator, witness):
        super().__init__("generator %d does not preserve the quiver (entry %r)" % (generator, witness))
        self.generator = generator
        self.witness = witness


@dataclass(frozen=True)
class GAction:
    n: int
    generators: tuple

    def __init__(self, n, generators):
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(n)):
                raise FoldingError("generator %r is not a permutation of %d vertices" % (g, n))
            gens.append(g)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def from_cycles(cls, n, generators):
        """Each generator is a list of cycles, e.g. [[0, 2]] or [[1, 2, 3]]."""
        perms = []
        for cycles in generators:
            p = list(range(n))
            for c in cycles:
                for a, b in zip(c, list(c[1:]) + [c[0]]):
                    p[a] = b
            perms.append(p)
        return cls(n, perms)

    @classmethod
    def trivial(cls, n):
        return cls(n, [])

    def orbits(self):
        """Orbits sorted by smallest element."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for v in range(self.n):
                a, b = find(v), find(g[v])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted((tuple(o) for o in groups.values()), key=lambda o: o[0])

    def orbit_of(self, v):
        for o in self.orbits():
            if v in o:
                return o
        raise FoldingError("vertex %r out of range" % v)


@dataclass(frozen=True)
class Admissible:
    pass


@dataclass(frozen=True)
class Violation:
    condition: int
    witness: tuple


def check_invariant(q, g):
    b = q.b
    for t, p in enumerate(g.generators):
        p = np.asarray(p)
        moved = np.empty_like(b)
        moved[np.ix_(p, p)] = b
        if not np.array_equal(moved, b):
            i, j = map(int, np.argwhere(moved != b)[0])
            raise NotInvariant(t, (i, j))


def is_admissible(q, g):
    """Admissible() or the first Violation(condition, witness vertices).

    Conditions: (1) orbits do not mix mutable and frozen vertices; (2) the
    action preserves arrow counts; (3) no arrows inside an orbit; (4) two
    mutable vertices of one orbit never have opposite arrows to a common vertex.
    The local conditions 1, 3, 4 are tested before invariance, so a swap of
    the two ends of one arrow reports condition 3.
    """
    if g.n != q.n:
        raise FoldingError("action on %d vertices, quiver has %d" % (g.n, q.n))
    b = q.b
    orbits = g.orbits()
    for o in orbits:
        kinds = {v < q.n_mut for v in o}
        if len(kinds) > 1:
            return Violation(1, o)
    for o in orbits:
        for i in o:
            for i2 in o:
                if b[i, i2] != 0:
                    return Violation(3, (i, i2))
    for o in orbits:
        mut = [v for v in o if v < q.n_mut]
        for x, i in enumerate(mut):
            for i2 in mut[x + 1:]:
                for j in range(q.n):
                    if int(b[i, j]) * int(b[i2, j]) < 0:
                        return Violation(4, (i, i2, j))
    try:
        check_invariant(q, g)
    except NotInvariant as e:
        return Violation(2, e.witness)
    return Admissible()


@dataclass(frozen=True)
class FoldedQuiver:
    orbits: tuple
    bG: np.ndarray
    D: tuple
    n_mut: int

    def __eq__(self, other):
        return (isinstance(other, FoldedQuiver) and self.orbits == other.orbits
                and np.array_equal(self.bG, other.bG) and self.D == other.D)

    def __hash__(self):
        return hash((self.orbits, self.bG.tobytes()))

    def symmetrized(self):
        return self.bG @ np.diag(self.D)

    def is_skew_symmetrizable(self):
        m = self.symmetrized()[: self.n_mut, : self.n_mut]
        return bool(np.array_equal(m, -m.T))


def _folded_matrix(b, orbits):
    m = len(orbits)
    out = np.zeros((m, m), dtype=np.int64)
    for I, oi in enumerate(orbits):
        for J, oj in enumerate(orbits):
            out[I, J] = sum(int(b[i, oj[0]]) for i in oi)
    return out


def fold(q, g):
    verdict = is_admissible(q, g)
    if isinstance(verdict, Violation):
        raise FoldingError("quiver is not G-admissible: condition %d at %r" % (verdict.condition, verdict.witness))
    orbits = g.orbits()
    # mutable orbits first, as in the source quiver
    orbits = sorted(orbits, key=lambda o: (o[0] >= q.n_mut, o[0]))
    n_mut = sum(1 for o in orbits if o[0] < q.n_mut)
    return FoldedQuiver(tuple(orbits), _folded_matrix(q.b, orbits), tuple(len(o) for o in orbits), n_mut)


def mutate_folded(fq, I):
    """Skew-symmetrizable matrix mutation at orbit index I."""
    if not 0 <= I < fq.n_mut:
        raise FoldingError("orbit %d is not mutable" % I)
    b = _kernels.mutate(fq.bG, I)
    b.setflags(write=False)
    return FoldedQuiver(fq.orbits, b, fq.D, fq.n_mut)


def _orbit_index(g, orbit):
    if isinstance(orbit, int):
        return g.orbit_of(orbit)
    return tuple(sorted(orbit))


def orbit_mutate(q, g, orbit, order=None):
    """Mutate at every vertex of the orbit (``orbit`` may be any member vertex)."""
    o = _orbit_index(g, orbit)
    if o not in g.orbits():
        raise FoldingError("%r is not an orbit" % (o,))
    if any(v >= q.n_mut for v in o):
        raise FoldingError("orbit %r is frozen" % (o,))
    verdict = is_admissible(q, g)
    if isinstance(verdict, Violation):
        raise FoldingError("quiver is not G-admissible: condition %d at %r" % (verdict.condition, verdict.witness))
    return qv.mutate_word(q, list(order) if order is not None else list(o))


def fold_commutes(q, g, orbit):
    """fold then mutate at the orbit == orbit-mutate then fold."""
    o = _orbit_index(g, orbit)
    fq = fold(q, g)
    I = fq.orbits.index(o)
    after = orbit_mutate(q, g, o)
    return fold(after, g) == mutate_folded(fq, I)


@dataclass(frozen=True)
class Yes:
    explored: int


@dataclass(frozen=True)
class CounterexampleWord:
    word: tuple
    violation: Violation


@dataclass(frozen=True)
class Truncated:
    explored: int


def globally_foldable(q, g, bound=10000):
    """Breadth-first search over orbit-mutation words, deduplicated on the exact
    exchange matrix.  Returns Yes, the shortest violating word, or Truncated."""
    verdict = is_admissible(q, g)
    if isinstance(verdict, Violation):
        return CounterexampleWord((), verdict)
    orbits = [o for o in g.orbits() if o[0] < q.n_mut]
    seen = {q.b.tobytes()}
    queue = deque([(q, ())])
    while queue:
        cur, word = queue.popleft()
        for o in orbits:
            nxt = qv.mutate_word(cur, list(o))
            key = nxt.b.tobytes()
            if key in seen:
                continue
            w = word + (o,)
            v = is_admissible(nxt, g)
            if isinstance(v, Violation):
                return CounterexampleWord(w, v)
            if len(seen) >= bound:
                return Truncated(len(seen))
            seen.add(key)
            queue.append((nxt, w))
    return Yes(len(seen))


def folded_cluster_count(q, g, bound=5000):
    """Number of G-invariant clusters reachable from the initial seed by orbit
    mutations (None when the bound is hit).  For a globally foldable quiver
    this is the cluster count of the folded type, e.g. 6 for B2 and 8 for G2.
    """
    from .seed import Seed, mutate_seed

    orbits = [o for o in g.orbits() if o[0] < q.n_mut]
    start = Seed.initial(q)
    seen = {frozenset(start.vars)}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for o in orbits:
            nxt = cur
            for v in o:
                nxt = mutate_seed(nxt, v)
            key = frozenset(nxt.vars)
            if key not in seen:
                if len(seen) >= bound:
                    return None
                seen.add(key)
                queue.append(nxt)
    return len(seen)


# text format: one generator per line in cycle notation over vertex names


def action_to_text(g, labels=None):
    def name(v):
        return labels[v] if labels else "v%d" % v

    lines = []
    for p in g.generators:
        seen, cycles = set(), []
        for v in range(g.n):
            if v in seen or p[v] == v:
                continue
            c, u = [], v
            while u not in seen:
                seen.add(u)
                c.append(name(u))
                u = p[u]
            cycles.append("(" + " ".join(c) + ")")
        lines.append("".join(cycles) or "()")
    return "\n".join(lines) + "\n"


def action_from_text(text, n, labels=None):
    gens = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        if re.sub(r"\([^()]*\)", "", line).strip():
            raise FoldingError("line %d: expected cycles like (v0 v2)" % lineno)
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", line):
            cyc = []
            for tok in body.replace(",", " ").split():
                if labels and tok in labels:
                    cyc.append(labels.index(tok))
                    continue
                m = re.fullmatch(r"v?(\d+)", tok)
                if not m or int(m.group(1)) >= n:
                    raise FoldingError("line %d: unknown vertex %r" % (lineno, tok))
                cyc.append(int(m.group(1)))
            if cyc:
                cycles.append(cyc)
        gens.append(cycles)
    return GAction.from_cycles(n, gens)
