"""Nielsen-Thurston type classification of cluster automorphisms.

Periodic maps are detected by an order search; otherwise variables fixed by a
power of the map are frozen away and the finite type of what remains decides
between finite and infinite order.  Maps fixing nothing in any tested power
are reported as pseudo-Anosov candidates, never as certified pseudo-Anosov.
"""

from dataclasses import dataclass, field

from . import quiver as qv
from .seed import (
    ClusterAutomorphism,
    ExceedsBound,
    Order,
    Seed,
    SeedError,
    action_equal,
    fixed_vertices,
    is_automorphism,
    order,
    power,
    reduce_word,
)

MAX_POWER = 12
ORDER_BOUND = 10_000


class NotReducible(SeedError):
    pass


def _as_seed(s):
    return Seed.initial(s) if isinstance(s, qv.Quiver) else s


def fixed_variables(s, phi):
    s = _as_seed(s)
    if not is_automorphism(s.quiver, phi):
        raise SeedError("not an automorphism of the seed's quiver")
    return fixed_vertices(s, phi)


@dataclass
class Reduction:
    power: int
    fixed: tuple
    kept: tuple
    quiver: qv.Quiver
    aut: ClusterAutomorphism  # induced map of the reduced quiver, or None


def restrict(q, phi, keep):
    """Restrict phi to the full subquiver on ``keep``.  The (cancelled) word must
    avoid the dropped vertices and the permutation must preserve ``keep``."""
    idx = {v: i for i, v in enumerate(keep)}
    phi = reduce_word(phi)
    if any(v not in idx for v in phi.word):
        return None
    if any(phi.perm[v] not in idx for v in keep):
        return None
    sub = q.subquiver(list(keep))
    return sub, ClusterAutomorphism([idx[v] for v in phi.word], [idx[phi.perm[v]] for v in keep])


def cluster_reduce(s, phi, max_power=MAX_POWER):
    """Freeze the variables fixed by the first power phi^m (m <= max_power)
    that fixes any, and restrict phi to the remaining quiver.

    The restriction is taken from phi itself when phi already fixes the set,
    otherwise from phi^m.  Raises NotReducible when no power fixes anything.
    """
    s = _as_seed(s)
    q = s.quiver
    if not is_automorphism(q, phi):
        raise SeedError("not an automorphism of the seed's quiver")
    for m in range(1, max_power + 1):
        pm = power(phi, m)
        fixed = tuple(fixed_vertices(s, pm))
        if not fixed:
            continue
        keep = tuple(v for v in range(q.n) if v not in fixed)
        for cand in (phi, pm):
            r = restrict(q, cand, keep)
            if r is not None:
                return Reduction(m, fixed, keep, r[0], r[1])
        return Reduction(m, fixed, keep, q.subquiver(list(keep)), None)
    raise NotReducible("no power up to %d fixes a cluster variable" % max_power)


@dataclass
class Periodic:
    order: int
    fixed: tuple = ()


@dataclass
class Reducible:
    fixed: tuple
    reduced: qv.Quiver
    verdict: str  # "Infinite" or "FiniteTypeReduced"
    power: int
    order: object = None  # Order / ExceedsBound from the raised-bound search
    certificate: object = None


@dataclass
class PseudoAnosovCandidate:
    bound: int
    max_power: int


def classify(s, phi, order_bound=ORDER_BOUND, max_power=MAX_POWER):
    s = _as_seed(s)
    if not is_automorphism(s.quiver, phi):
        raise SeedError("not an automorphism of the seed's quiver")
    o = order(s, phi, bound=order_bound)
    if isinstance(o, Order):
        return Periodic(o.value, tuple(fixed_vertices(s, phi)))
    try:
        red = cluster_reduce(s, phi, max_power)
    except NotReducible:
        return PseudoAnosovCandidate(order_bound, max_power)
    ft = qv.finite_type(red.quiver)
    if isinstance(ft, qv.Infinite):
        return Reducible(red.fixed, red.quiver, "Infinite", red.power, o, ft)
    o2 = order(s, phi, bound=order_bound * 10)
    return Reducible(red.fixed, red.quiver, "FiniteTypeReduced", red.power, o2, ft)


def kronecker_twist():
    """T_k = (mu_0; (0 1)) on a 2-vertex quiver with k arrows."""
    return ClusterAutomorphism.from_cycles([0], [[0, 1]], 2)


@dataclass
class DehnTwist:
    holds: bool
    k: int = 0
    m: int = 0
    n: int = 0
    reductions: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def is_cluster_dehn_twist(s, phi, max_reductions=3, max_exp=6, max_power=MAX_POWER):
    """Reduce repeatedly; succeed when a 2-vertex quiver with k >= 2 arrows is
    reached and phi~^n acts as T_k^m for some 1 <= n <= max_exp, 0 < |m| <= max_exp."""
    s = _as_seed(s)
    q, cur = s.quiver, phi
    chain = []
    if isinstance(order(s, phi, bound=200), Order):
        return DehnTwist(False)
    for _ in range(max_reductions):
        try:
            red = cluster_reduce(Seed.initial(q), cur, max_power)
        except (NotReducible, SeedError):
            return DehnTwist(False, reductions=chain)
        chain.append(red)
        if red.aut is None:
            return DehnTwist(False, reductions=chain)
        q, cur = red.quiver, red.aut
        if q.n == 2:
            k = abs(int(q.b[0, 1]))
            if k < 2:
                return DehnTwist(False, reductions=chain)
            seed2 = Seed.initial(q)
            t = kronecker_twist()
            for n in range(1, max_exp + 1):
                pn = power(cur, n)
                for m in sorted(range(-max_exp, max_exp + 1), key=abs):
                    if m and action_equal(seed2, pn, power(t, m), method="tropical"):
                        return DehnTwist(True, k, m, n, chain)
            return DehnTwist(False, reductions=chain)
    return DehnTwist(False, reductions=chain)


def report(result):
    """Line-oriented summary of a classification."""
    if isinstance(result, Periodic):
        return {"kind": "Periodic", "order": result.order, "fixed": list(result.fixed)}
    if isinstance(result, Reducible):
        out = {"kind": "Reducible", "verdict": result.verdict, "fixed": list(result.fixed),
               "power": result.power, "reduced_quiver": qv.to_text(result.reduced)}
        if isinstance(result.order, ExceedsBound):
            out["order"] = "exceeds %d" % result.order.bound
        elif isinstance(result.order, Order):
            out["order"] = result.order.value
        return out
    return {"kind": "PseudoAnosovCandidate", "bound": result.bound, "max_power": result.max_power}
