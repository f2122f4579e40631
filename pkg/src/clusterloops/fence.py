"""Plabic fences: faces, the face quiver, local moves and cyclic rotations.

A fence on ``rows`` horizontal lines is a left-to-right list of vertical edges
(row, color) with row in 1..rows-1 (edge between lines row and row+1) and color
'w' or 'b'.  Faces are the gaps between consecutive edges of the same row,
indexed row-major (rows bottom to top, left to right inside a row).

Arrow rule.  An edge's colour is that of its upper endpoint; the lower endpoint
has the other colour.  Two faces of one row sharing an edge e: the arrow goes
left -> right when the lower endpoint of e is white.  Faces in adjacent rows
whose horizontal extents overlap along the common line: an arrow exists when
the two boundary vertices of the overlap have different colours, pointing
lower -> upper when the right-hand boundary vertex is white.  With this rule a
square move and a braid (Reidemeister III) move are both mutations at the
face they destroy, which the test-suite checks on random fences.
"""

from dataclasses import dataclass
import re

import numpy as np

from .quiver import Quiver
from .seed import ClusterAutomorphism, compose, inverse


class FenceError(ValueError):
    pass


WHITE, BLACK = "w", "b"


@dataclass(frozen=True)
class PlabicFence:
    rows: int
    columns: tuple

    def __init__(self, rows, columns):
        cols = tuple((int(r), str(c)) for r, c in columns)
        for r, c in cols:
            if not 1 <= r <= rows - 1:
                raise FenceError("edge row %d outside 1..%d" % (r, rows - 1))
            if c not in (WHITE, BLACK):
                raise FenceError("edge colour must be 'w' or 'b', got %r" % c)
        object.__setattr__(self, "rows", int(rows))
        object.__setattr__(self, "columns", cols)

    def __len__(self):
        return len(self.columns)

    def faces(self):
        return faces(self.columns)

    def quiver(self):
        return fence_to_quiver(self)

    def all_white(self):
        return all(c == WHITE for _, c in self.columns)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple

    def __init__(self, strands, letters):
        letters = tuple(int(x) for x in letters)
        for x in letters:
            if not 1 <= x <= strands - 1:
                raise FenceError("generator s%d invalid on %d strands" % (x, strands))
        object.__setattr__(self, "strands", int(strands))
        object.__setattr__(self, "letters", letters)

    def __str__(self):
        return " ".join("s%d" % x for x in self.letters)


def faces(columns):
    by_row = {}
    for p, (r, _) in enumerate(columns):
        by_row.setdefault(r, []).append(p)
    out = []
    for r in sorted(by_row):
        ps = by_row[r]
        out.extend((r, a, b) for a, b in zip(ps, ps[1:]))
    return out


def _vertex_color(columns, p, line):
    r, c = columns[p]
    if line == r + 1:
        return c
    return BLACK if c == WHITE else WHITE


def quiver_matrix(columns):
    fs = faces(columns)
    n = len(fs)
    b = np.zeros((n, n), dtype=np.int64)
    for x, (r, a, e) in enumerate(fs):
        for y, (s, c, d) in enumerate(fs):
            if s == r and c == e:
                if _vertex_color(columns, e, r) == WHITE:
                    b[x, y] += 1
                    b[y, x] -= 1
                else:
                    b[y, x] += 1
                    b[x, y] -= 1
            elif s == r + 1:
                lo, hi = max(a, c), min(e, d)
                if lo >= hi:
                    continue
                line = r + 1
                if _vertex_color(columns, lo, line) == _vertex_color(columns, hi, line):
                    continue
                if _vertex_color(columns, hi, line) == WHITE:
                    b[x, y] += 1
                    b[y, x] -= 1
                else:
                    b[y, x] += 1
                    b[x, y] -= 1
    return b


def fence_to_quiver(f):
    return Quiver(quiver_matrix(f.columns))


def fence_from_braid(word, strands=None):
    """All-white fence of a positive braid word (list of generator indices)."""
    if isinstance(word, BraidWord):
        strands, word = word.strands, word.letters
    if strands is None:
        strands = max(word) + 1 if word else 2
    return PlabicFence(strands, [(x, WHITE) for x in word])


def fence_to_braid(f):
    """beta1 (white edges) times beta2 reversed with s_i -> s_{n-i}; the black
    edges contribute s_{n-i} to beta2, so the two flips cancel on the row index."""
    n = f.rows
    beta1 = [r for r, c in f.columns if c == WHITE]
    beta2 = [n - r for r, c in f.columns if c == BLACK]
    beta2o = [n - x for x in reversed(beta2)]
    return BraidWord(n, beta1 + beta2o)


def commutes(e1, e2):
    (r, c), (s, d) = e1, e2
    return abs(r - s) >= 2 or (abs(r - s) == 1 and c != d)


def face_names_left_to_right(f, start=1):
    """Names for faces ordered by left endpoint (ties: lower row first)."""
    fs = f.faces()
    order = sorted(range(len(fs)), key=lambda x: (fs[x][1], fs[x][0]))
    names = [0] * len(fs)
    for pos, x in enumerate(order):
        names[x] = pos + start
    return names


# ---------------------------------------------------------------------------
# move engine


class FenceWalk:
    """A fence under a sequence of moves, remembering which original face each
    current face came from and the mutations performed (as original faces)."""

    def __init__(self, fence):
        self.start = fence
        self.rows = fence.rows
        self.cols = list(fence.columns)
        self.label = {fc: i for i, fc in enumerate(faces(self.cols))}
        self.word = []

    def fence(self):
        return PlabicFence(self.rows, self.cols)

    def _remap(self, new, fmap):
        self.label = {fmap(fc): lab for fc, lab in self.label.items()}
        self.cols = new

    def swap(self, p):
        """Exchange columns p and p+1: a commutation, or a square move (same row,
        opposite colours) recorded as a mutation at the face between them."""
        (r, c), (s, d) = self.cols[p], self.cols[p + 1]
        new = list(self.cols)
        new[p], new[p + 1] = new[p + 1], new[p]
        if r == s:
            if c == d:
                raise FenceError("columns %d,%d are equal edges; nothing to move" % (p, p + 1))
            self.word.append(self.label[(r, p, p + 1)])
            self.cols = new
            return self.label[(r, p, p + 1)]
        if not commutes(self.cols[p], self.cols[p + 1]):
            raise FenceError("edges at %d,%d do not commute" % (p, p + 1))

        # row r loses endpoint p to p+1, row s loses p+1 to p
        def fmap(fc):
            row, a, b = fc
            old, new_ = (p, p + 1) if row == r else (p + 1, p) if row == s else (None, None)
            return (row, new_ if a == old else a, new_ if b == old else b)

        self._remap(new, fmap)
        return None

    def r3(self, p):
        """Braid move at columns p..p+2: (i j i) -> (j i j), all one colour."""
        (i, c1), (j, c2), (i2, c3) = self.cols[p: p + 3]
        if not (i == i2 and abs(i - j) == 1 and c1 == c2 == c3):
            raise FenceError("no braid-move pattern at column %d" % p)
        face = (i, p, p + 2)
        lab = self.label[face]
        self.word.append(lab)
        new = list(self.cols)
        new[p: p + 3] = [(j, c1), (i, c1), (j, c1)]

        def fmap(fc):
            row, a, b = fc
            if fc == face:
                return (j, p, p + 2)
            if row == i:
                return (row, p + 1 if a in (p, p + 2) else a, p + 1 if b in (p, p + 2) else b)
            if row == j:
                return (row, p + 2 if a == p + 1 else a, p if b == p + 1 else b)
            return fc

        self._remap(new, fmap)
        return lab

    def flip(self, p):
        r, c = self.cols[p]
        self.cols[p] = (r, BLACK if c == WHITE else WHITE)

    def push_right(self, p):
        """Push the (black) edge at p right: square moves past same-row white
        edges, commutations past everything else, until blocked or at the end."""
        while p < len(self.cols) - 1:
            r, c = self.cols[p]
            s, d = self.cols[p + 1]
            if s == r:
                if d == c:
                    break
                self.swap(p)
            elif commutes(self.cols[p], self.cols[p + 1]):
                self.swap(p)
            else:
                break
            p += 1
        return p

    def push_left(self, p):
        while p > 0:
            r, c = self.cols[p]
            s, d = self.cols[p - 1]
            if s == r:
                if d == c:
                    break
                self.swap(p - 1)
            elif commutes(self.cols[p - 1], self.cols[p]):
                self.swap(p - 1)
            else:
                break
            p -= 1
        return p

    def rotate(self, p=0):
        """Cyclic rotation of the edge at p (normally the leftmost) to the right end."""
        self.flip(p)
        q = self.push_right(p)
        self.flip(q)
        return q

    def normalize_to(self, columns):
        """Reach ``columns`` using commutations only; False if impossible."""
        target = list(columns)
        if sorted(self.cols) != sorted(target):
            return False
        for _ in range(len(target) ** 2 + 1):
            if self.cols == target:
                return True
            moved = False
            for p in range(len(self.cols) - 1):
                if self.cols[p] != target[p] and self.cols[p + 1] == target[p] and commutes(self.cols[p], self.cols[p + 1]):
                    self.swap(p)
                    moved = True
                    break
            if not moved:
                return False
        return self.cols == target

    def induced(self, target=None):
        """The map from the starting seed to the current fence's seed as a
        ClusterAutomorphism (perm: original face -> current face index)."""
        cur = faces(self.cols)
        if target is not None:
            if list(target.columns) != self.cols:
                raise FenceError("walk did not end on the requested fence")
        perm = [0] * len(self.label)
        for fc, lab in self.label.items():
            perm[lab] = cur.index(fc)
        return ClusterAutomorphism(self.word, perm)


@dataclass
class MoveResult:
    fence: PlabicFence
    vertex: int
    face_map: tuple

    def __iter__(self):
        return iter((self.fence, self.vertex))


def _move(f, site, kind):
    w = FenceWalk(f)
    if kind == "r3":
        v = w.r3(site)
    else:
        (r, c), (s, d) = f.columns[site], f.columns[site + 1]
        if r != s or c == d:
            raise FenceError("no square-move pattern at column %d" % site)
        v = w.swap(site)
    aut = w.induced()
    return MoveResult(w.fence(), v, aut.perm)


def r3_move(f, site):
    return _move(f, site, "r3")


def square_move(f, site):
    return _move(f, site, "square")


def cyclic_rotation(f):
    """One cyclic rotation: the leftmost (white) crossing moves to the right end."""
    if not f.columns:
        raise FenceError("empty fence")
    if f.columns[0][1] != WHITE:
        raise FenceError("leftmost edge must be white")
    w = FenceWalk(f)
    q = w.rotate(0)
    if q != len(f) - 1:
        raise FenceError("rotation got stuck at column %d" % q)
    return w.fence(), w.induced()


def rotation_power(f, m):
    """delta^m as a map from f's seed to the rotated fence's seed."""
    cur = f
    total = ClusterAutomorphism.identity(len(f.faces()))
    for _ in range(m):
        cur, step = cyclic_rotation(cur)
        total = compose(step, total)
    return cur, total


def full_rotation(f, direction=1):
    """delta^|beta|.  direction=-1 runs the loop the other way round (the
    rightmost edge travels to the left end), which induces the inverse map."""
    g, aut = rotation_power(f, len(f))
    if g != f:
        raise FenceError("full rotation did not return to the starting fence")
    if direction not in (1, -1):
        raise FenceError("direction must be 1 or -1")
    return aut if direction == 1 else inverse(aut)


def dt_sequence(f):
    """Donaldson-Thomas automorphism of an all-white fence.

    The rightmost white edge is flipped to black and pushed left by square
    moves past the white edges of its row; this repeats until every edge is
    black.  On more than three lines the black word may differ from the
    mirror image of the start by braid moves; those are made too (each braid
    move is a mutation).  Reflecting left-right and swapping colours then
    returns to the starting fence, and the reflection supplies the final
    relabelling.
    """
    if not f.all_white():
        raise FenceError("DT recipe needs an all-white fence")
    w = FenceWalk(f)
    m = len(f)
    while True:
        whites = [p for p, (_, c) in enumerate(w.cols) if c == WHITE]
        if not whites:
            break
        p = whites[-1]
        w.flip(p)
        q = w.push_left(p)
        r = w.cols[q][0]
        if any(w.cols[t] == (r, WHITE) for t in range(q)):
            raise FenceError("DT recipe blocked at column %d" % q)
    candidates = [
        lambda r: r,
        lambda r: f.rows - r,
    ]
    goal = None
    for rowmap in candidates:
        image = [rowmap(r) for r, _ in reversed(f.columns)]
        moves = braid_path([r for r, _ in w.cols], image)
        if moves is not None:
            goal = rowmap
            break
    if goal is None:
        raise FenceError("reflected fence does not match the start")
    # black edges: commutations and braid moves bring the word to the mirror image
    for kind, p in moves:
        if kind == "c":
            w.swap(p)
        else:
            w.r3(p)
    cur = faces(w.cols)
    target = faces(f.columns)
    perm = [0] * len(cur)
    for fc, lab in w.label.items():
        r, a, b = fc
        perm[lab] = target.index((goal(r), m - 1 - b, m - 1 - a))
    return ClusterAutomorphism(w.word, perm)


def _braid_neighbours(word):
    for p in range(len(word) - 1):
        a, b = word[p], word[p + 1]
        if abs(a - b) >= 2:
            yield word[:p] + (b, a) + word[p + 2:], ("c", p)
        elif p + 2 < len(word) and word[p + 2] == a and abs(a - b) == 1:
            yield word[:p] + (b, a, b) + word[p + 3:], ("r", p)


def _word_perm(word):
    """Image of a braid word in the symmetric group (a move invariant)."""
    perm = list(range(max(word, default=0) + 2))
    for x in word:
        perm[x - 1], perm[x] = perm[x], perm[x - 1]
    return tuple(perm)


def braid_path(start, target, limit=500000):
    """Shortest list of moves (('c', p) commutation, ('r', p) braid move at
    columns p..p+2) turning the positive word ``start`` into ``target``, or
    None.  Both moves are involutions, so the search runs from both ends."""
    start, target = tuple(start), tuple(target)
    if len(start) != len(target) or _word_perm(start) != _word_perm(target):
        return None
    if start == target:
        return []
    sides = ({start: None}, {target: None})
    fronts = ([start], [target])
    while fronts[0] and fronts[1]:
        t = 0 if len(fronts[0]) <= len(fronts[1]) else 1
        seen, other = sides[t], sides[1 - t]
        nxt_front = []
        for cur in fronts[t]:
            for nxt, move in _braid_neighbours(cur):
                if nxt in seen:
                    continue
                seen[nxt] = (cur, move)
                if nxt in other:
                    return _join(sides, nxt)
                nxt_front.append(nxt)
        if len(seen) + len(other) > limit:
            return None
        fronts = (nxt_front, fronts[1]) if t == 0 else (fronts[0], nxt_front)
    return None


def _join(sides, mid):
    head, cur = [], mid
    while sides[0][cur] is not None:
        cur, move = sides[0][cur]
        head.append(move)
    tail, cur = [], mid
    while sides[1][cur] is not None:
        cur, move = sides[1][cur]
        tail.append(move)
    return head[::-1] + tail


# ---------------------------------------------------------------------------
# text format


def to_text(f):
    return "fence %d\n%s\n" % (f.rows, " ".join("%s%d" % (c, r) for r, c in f.columns))


def from_text(text):
    toks = text.split()
    if len(toks) < 2 or toks[0] != "fence":
        raise FenceError("expected header 'fence <rows>'")
    try:
        rows = int(toks[1])
    except ValueError:
        raise FenceError("bad row count %r" % toks[1]) from None
    cols = []
    for t in toks[2:]:
        m = re.fullmatch(r"([wb])(\d+)", t)
        if not m:
            raise FenceError("bad edge token %r" % t)
        cols.append((int(m.group(2)), m.group(1)))
    return PlabicFence(rows, cols)


def parse_braid(text, strands=None):
    """Parse '1 1 3 2', 's1^2 s3', or '1,1,3'.  A trailing 'D2'/'Delta^2' (full
    twist) is accepted and dropped: the (-1)-closure of beta*D^2 is the rainbow
    closure of beta."""
    toks = re.split(r"[\s,]+", text.strip())
    letters = []
    for t in toks:
        if not t:
            continue
        if re.fullmatch(r"(?i)(D|Delta)(\^?2)?", t):
            continue
        m = re.fullmatch(r"s?(\d+)(?:\^(\d+))?", t)
        if not m:
            raise FenceError("bad braid token %r" % t)
        letters += [int(m.group(1))] * int(m.group(2) or 1)
    if strands is None:
        strands = max(letters) + 1 if letters else 2
    return BraidWord(strands, letters)
