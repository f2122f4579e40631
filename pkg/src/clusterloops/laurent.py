"""Exact multivariate Laurent polynomials with integer coefficients.

A polynomial is a mapping from exponent tuples (which may be negative) to
nonzero Python ints.  Values are immutable and hashable.
"""

from fractions import Fraction
import heapq
import re


class LaurentError(ValueError):
    pass


class NotDivisible(LaurentError):
    """Raised by :func:`div_exact`; ``remainder`` holds the leftover witness."""

    def __init__(self, msg, remainder):
        super().__init__(msg)
        self.remainder = remainder


class LaurentPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != self.nvars:
                    raise LaurentError("exponent %r has wrong length for %d variables" % (exp, self.nvars))
                if c:
                    clean[exp] = clean.get(exp, 0) + int(c)
            clean = {e: c for e, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # basic protocol ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return "LaurentPoly(%s)" % to_text(self)

    def __str__(self):
        return to_text(self)

    def __add__(self, other):
        return add(self, _coerce(self, other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(self, other)))

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        return mul(self, _coerce(self, other))

    __rmul__ = __mul__

    def __pow__(self, e):
        return power(self, e)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def min_exponents(self):
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def max_exponents(self):
        return tuple(max(e[i] for e in self.terms) for i in range(self.nvars))

    def coefficients(self):
        return list(self.terms.values())


def _coerce(p, q):
    if isinstance(q, int):
        return LaurentPoly.const(p.nvars, q)
    return q


def _check(p, q):
    if p.nvars != q.nvars:
        raise LaurentError("arity mismatch: %d vs %d variables" % (p.nvars, q.nvars))


def add(p, q):
    _check(p, q)
    out = dict(p.terms)
    for e, c in q.terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return LaurentPoly._raw(p.nvars, out)


def neg(p):
    return LaurentPoly._raw(p.nvars, {e: -c for e, c in p.terms.items()})


def mul(p, q):
    _check(p, q)
    if len(p.terms) > len(q.terms):
        p, q = q, p
    out = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly._raw(p.nvars, {e: c for e, c in out.items() if c})


def power(p, e):
    if e < 0:
        if not p.is_monomial():
            raise LaurentError("negative power of a non-monomial")
        (exp, c), = p.terms.items()
        if c not in (1, -1):
            raise LaurentError("negative power of a monomial with coefficient %d" % c)
        return LaurentPoly._raw(p.nvars, {tuple(x * e for x in exp): c ** (-e)})
    out = LaurentPoly.const(p.nvars, 1)
    base = p
    while e:
        if e & 1:
            out = mul(out, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return out


def div_exact(p, q):
    """Return r with r*q == p, or raise NotDivisible.

    Plain lex-leading-term division.  The quotient's exponents are boxed in
    by min/max exponents of p and q (lowest and highest parts multiply without
    cancellation in a domain), which bounds the loop and lets us stop early.
    """
    _check(p, q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    n = p.nvars
    if p.is_zero():
        return p
    if q.is_monomial():
        (qe, qc), = q.terms.items()
        out = {}
        for e, c in p.terms.items():
            if c % qc:
                raise NotDivisible("coefficient %d not divisible by %d" % (c, qc), p)
            out[tuple(a - b for a, b in zip(e, qe))] = c // qc
        return LaurentPoly._raw(n, out)
    lo = tuple(a - b for a, b in zip(p.min_exponents(), q.min_exponents()))
    hi = tuple(a - b for a, b in zip(p.max_exponents(), q.max_exponents()))
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisible("exponent ranges are incompatible", p)
    qlead = max(q.terms)
    qc = q.terms[qlead]
    qitems = list(q.terms.items())
    rem = dict(p.terms)
    quot = {}
    # max-heap of remainder exponents with lazy deletion
    heap = [tuple(-x for x in e) for e in rem]
    heapq.heapify(heap)
    while rem:
        lead = tuple(-x for x in heapq.heappop(heap))
        c = rem.get(lead)
        if c is None:
            continue
        if c % qc:
            raise NotDivisible("leading coefficient %d not divisible by %d" % (c, qc), LaurentPoly._raw(n, rem))
        t = tuple(a - b for a, b in zip(lead, qlead))
        if any(x < a or x > b for x, a, b in zip(t, lo, hi)):
            raise NotDivisible("quotient term leaves the admissible box", LaurentPoly._raw(n, rem))
        tc = c // qc
        quot[t] = tc
        for e, cq in qitems:
            key = tuple(a + b for a, b in zip(t, e))
            old = rem.get(key)
            s = (old or 0) - tc * cq
            if s:
                if old is None:
                    heapq.heappush(heap, tuple(-x for x in key))
                rem[key] = s
            else:
                del rem[key]
    return LaurentPoly._raw(n, quot)


def eval_positive(p, point):
    """Evaluate at a point with all entries > 0 (Fractions/ints stay exact)."""
    if len(point) != p.nvars:
        raise LaurentError("point has %d entries, expected %d" % (len(point), p.nvars))
    for x in point:
        if not x > 0:
            raise LaurentError("evaluation point must be strictly positive, got %r" % (x,))
    exact = all(isinstance(x, (int, Fraction)) for x in point)
    total = Fraction(0) if exact else 0.0
    for e, c in p.terms.items():
        term = Fraction(c) if exact else float(c)
        for x, k in zip(point, e):
            if k:
                term *= (Fraction(x) if exact else x) ** k
        total += term
    return total


# text format -----------------------------------------------------------------


def to_text(p, names=None):
    """Render as e.g. ``2*a1^-1*a2 + 1`` (terms in lexicographic exponent order)."""
    if p.is_zero():
        return "0"
    names = names or ["a%d" % (i + 1) for i in range(p.nvars)]
    parts = []
    for e, c in sorted(p.terms.items()):
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append("%s^%d" % (name, k))
        if not factors:
            body = str(abs(c))
        elif abs(c) == 1:
            body = "*".join(factors)
        else:
            body = "%d*%s" % (abs(c), "*".join(factors))
        parts.append((c < 0, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, body in parts[1:]:
        out += (" - " if negative else " + ") + body
    return out


_FACTOR = re.compile(r"^([A-Za-z_]\w*?)(\d+)(?:\^(-?\d+))?$")


def from_text(text, nvars, prefix="a"):
    """Parse the output of :func:`to_text` back into a polynomial."""
    s = text.replace(" ", "").replace("^-", "^~")
    if s == "0":
        return LaurentPoly(nvars)
    if s[0] not in "+-":
        s = "+" + s
    terms = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        body = body.replace("~", "-")
        coeff = 1
        exp = [0] * nvars
        for f in body.split("*"):
            if f.isdigit():
                coeff *= int(f)
                continue
            m = _FACTOR.match(f)
            if not m or m.group(1) != prefix:
                raise LaurentError("cannot parse factor %r" % f)
            i = int(m.group(2)) - 1
            if not 0 <= i < nvars:
                raise LaurentError("variable index out of range in %r" % f)
            exp[i] += int(m.group(3) or 1)
        c = coeff if sign == "+" else -coeff
        terms[tuple(exp)] = terms.get(tuple(exp), 0) + c
    return LaurentPoly(nvars, terms)
