"""Exact vector-configuration model of the top positroid cell Gr(k, N).

Configurations are k x N matrices of Fractions (columns v_1..v_N).  Provides
Plucker coordinates, the cyclic shift rho, the braid-type maps sigma_i, and
the cross and triple ratios of flags in dimensions 2 and 3.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import random


class GrassmannError(ValueError):
    pass


def det(rows):
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise GrassmannError("determinant of a non-square matrix")
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        out *= p
        for r in range(c + 1, n):
            f = m[r][c] / p
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return sign * out


def rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rk, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((r for r in range(rk, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for r in range(len(m)):
            if r != rk and m[r][c]:
                f = m[r][c] / m[rk][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rk])]
        rk += 1
    return rk


@dataclass(frozen=True)
class VectorConfig:
    k: int
    N: int
    cols: tuple  # N column vectors, each a tuple of k Fractions

    def __init__(self, cols, k=None):
        cols = tuple(tuple(Fraction(x) for x in v) for v in cols)
        if k is None:
            k = len(cols[0]) if cols else 0
        if any(len(v) != k for v in cols):
            raise GrassmannError("columns must all have length %d" % k)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "N", len(cols))
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        return cls(list(zip(*rows)), len(rows))

    def rows(self):
        return [[v[r] for v in self.cols] for r in range(self.k)]

    def col(self, i):
        """Column v_i, 1-based with cyclic indices."""
        return self.cols[(i - 1) % self.N]

    def is_full_rank(self):
        return rank(self.rows()) == self.k

    def is_transverse(self):
        """All cyclically consecutive k-minors are nonzero."""
        return all(plucker(self, [(i + t) % self.N + 1 for t in range(self.k)]) != 0 for i in range(self.N))

    def scaled(self, c):
        return VectorConfig([[c * x for x in v] for v in self.cols], self.k)


def plucker(cfg, cols):
    """The minor on 1-based columns ``cols`` in the given order."""
    cols = list(cols)
    if len(cols) != cfg.k:
        raise GrassmannError("need %d columns, got %d" % (cfg.k, len(cols)))
    for c in cols:
        if not 1 <= c <= cfg.N:
            raise GrassmannError("column %d out of range 1..%d" % (c, cfg.N))
    return det([[cfg.cols[c - 1][r] for c in cols] for r in range(cfg.k)])


def cyclic_shift(cfg):
    """(v_1, ..., v_N) -> (v_2, ..., v_N, (-1)^(k-1) v_1)."""
    s = -1 if cfg.k % 2 == 0 else 1
    return VectorConfig(list(cfg.cols[1:]) + [[s * x for x in cfg.cols[0]]], cfg.k)


def cyclic_shift_inv(cfg):
    s = -1 if cfg.k % 2 == 0 else 1
    return VectorConfig([[s * x for x in cfg.cols[-1]]] + list(cfg.cols[:-1]), cfg.k)


def _wedge_coefficient(cfg, a, b, span):
    """w = -v_a + t v_b in span{v_s : s in span}, so that v_a ^ v_b = v_b ^ w.

    With f the covector det(., span...), t = f(v_a) / f(v_b).
    """
    k = cfg.k
    others = [cfg.col(s) for s in span]
    if len(others) != k - 1:
        raise GrassmannError("span needs %d vectors" % (k - 1))

    def f(v):
        return det([[v[r]] + [o[r] for o in others] for r in range(k)])

    fa, fb = f(cfg.col(a)), f(cfg.col(b))
    if fb == 0:
        raise GrassmannError("degenerate configuration: w is not unique at column %d" % a)
    t = fa / fb
    va, vb = cfg.col(a), cfg.col(b)
    return tuple(-x + t * y for x, y in zip(va, vb))


def block_size(cfg):
    return gcd(cfg.k, cfg.N)


def sigma(cfg, i):
    """Braid map sigma_i, 1 <= i <= d-1 with d = gcd(k, N).

    In every block of d columns (offset jd) the pair (v_a, v_{a+1}) with
    a = i + jd becomes (v_{a+1}, w_j), w_j in span{v_a, v_{a+1}} and in
    span{v_{a+2}, ..., v_{a+k}} (indices mod N), normalised by
    v_a ^ v_{a+1} = v_{a+1} ^ w_j.  All w_j are computed from the input.
    """
    d = block_size(cfg)
    if d <= 1:
        raise GrassmannError("sigma needs gcd(k, N) > 1 (k=%d, N=%d)" % (cfg.k, cfg.N))
    if not 1 <= i <= d - 1:
        raise GrassmannError("sigma index %d outside 1..%d" % (i, d - 1))
    new = list(cfg.cols)
    for j in range(cfg.N // d):
        a = i + j * d
        w = _wedge_coefficient(cfg, a, a + 1, range(a + 2, a + cfg.k + 1))
        new[a - 1] = cfg.col(a + 1)
        new[a] = w
    return VectorConfig(new, cfg.k)


def apply_word(cfg, word):
    """Apply generators left to right.  Tokens: ('rho', e) or ('sigma', i) or
    strings 'r', 'R' (inverse), 's<i>'."""
    for g in word:
        if g in ("r", "rho"):
            cfg = cyclic_shift(cfg)
        elif g in ("R", "rho^-1"):
            cfg = cyclic_shift_inv(cfg)
        elif isinstance(g, str) and g.startswith("s"):
            cfg = sigma(cfg, int(g[1:]))
        else:
            raise GrassmannError("unknown generator %r" % (g,))
    return cfg


def random_config(k, N, rng=None, lo=-9, hi=9):
    """Seeded random rational configuration with all consecutive minors nonzero."""
    rng = rng or random.Random(0)
    while True:
        cols = [[Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(k)] for _ in range(N)]
        cfg = VectorConfig(cols, k)
        if cfg.is_transverse():
            return cfg


# ---------------------------------------------------------------------------
# flag ratios


def wedge2(a, b):
    return Fraction(a[0]) * Fraction(b[1]) - Fraction(a[1]) * Fraction(b[0])


def cross_ratio(a, b, c, d):
    """(a^b / b^c) (c^d / d^a) for four lines in 2-space."""
    ab, bc, cd, da = wedge2(a, b), wedge2(b, c), wedge2(c, d), wedge2(d, a)
    if 0 in (ab, bc, cd, da):
        raise GrassmannError("cross ratio needs pairwise distinct lines")
    return (ab / bc) * (cd / da)


def pair(cov, v):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(cov, v))


def triple_ratio(A, B, C, a, b, c):
    """B(a) C(b) A(c) / (B(c) C(a) A(b)) for planes A, B, C (covectors) and
    lines a, b, c in 3-space."""
    num = pair(B, a) * pair(C, b) * pair(A, c)
    den = pair(B, c) * pair(C, a) * pair(A, b)
    if num == 0 or den == 0:
        raise GrassmannError("triple ratio needs nonzero pairings")
    return num / den


# ---------------------------------------------------------------------------
# file format


def to_text(cfg):
    lines = ["grassmann %d %d" % (cfg.k, cfg.N)]
    for r in cfg.rows():
        lines.append(" ".join(str(x) for x in r))
    return "\n".join(lines) + "\n"


def from_text(text):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GrassmannError("line 1: empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "grassmann":
        raise GrassmannError("line 1: expected 'grassmann <k> <N>'")
    try:
        k, N = int(head[1]), int(head[2])
    except ValueError:
        raise GrassmannError("line 1: k and N must be integers") from None
    if len(lines) != k + 1:
        raise GrassmannError("expected %d matrix rows, found %d" % (k, len(lines) - 1))
    rows = []
    for r, ln in enumerate(lines[1:], 2):
        toks = ln.split()
        if len(toks) != N:
            raise GrassmannError("line %d: expected %d entries, found %d" % (r, N, len(toks)))
        try:
            rows.append([Fraction(t) for t in toks])
        except (ValueError, ZeroDivisionError):
            raise GrassmannError("line %d: bad rational entry" % r) from None
    return VectorConfig.from_rows(rows)
