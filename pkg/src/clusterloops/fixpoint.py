"""Fixed points of automorphisms acting on the positive part of a chart.

A positive chart map F is either compiled from a ClusterAutomorphism (the
subtraction-free exchange relation along the word, then the relabelling) or
given explicitly.  Searches run in log coordinates so every iterate stays in
the positive orthant.  Refutation is a heuristic: it reports the smallest
residual found over many seeded starts, not a certificate.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from . import _kernels
from . import quiver as qv
from .seed import ClusterAutomorphism, power

TOL_FOUND = 1e-10
TOL_REFUTE = 1e-3


class FixpointError(ValueError):
    pass


class ChartMap:
    """F: R_{>0}^n -> R_{>0}^n.

    ``batch_log(U)`` maps log-points (S, n) to log-images, ``exact(x)`` evaluates
    with Python numbers (Fractions stay exact).
    """

    def __init__(self, n, batch_log, exact, name=""):
        self.n = n
        self.batch_log = batch_log
        self.exact = exact
        self.name = name

    @classmethod
    def from_automorphism(cls, q, phi):
        if phi.n != q.n:
            raise FixpointError("automorphism and quiver sizes differ")
        cols, b = [], q.b
        for k in phi.word:
            cols.append(b[:, k].copy())
            b = qv.mutate(qv.Quiver(b, q.n_mut), k).b
        cols = np.array(cols, dtype=np.int64).reshape(len(phi.word), q.n)
        ks = np.array(phi.word, dtype=np.int64)
        perm = np.array(phi.perm, dtype=np.int64)

        def batch_log(U):
            return _kernels.log_chart(U, cols, ks, perm)

        def exact(x):
            y = list(x)
            for t, k in enumerate(phi.word):
                pos, neg = 1, 1
                for i, c in enumerate(cols[t]):
                    if c > 0:
                        pos *= y[i] ** int(c)
                    elif c < 0:
                        neg *= y[i] ** int(-c)
                y[k] = (pos + neg) / y[k]
            out = [None] * len(y)
            for v in range(len(y)):
                out[phi.perm[v]] = y[v]
            return out

        return cls(q.n, batch_log, exact, str(phi))

    @classmethod
    def from_function(cls, n, f, name=""):
        """``f`` takes a list of n positive numbers (floats, Fractions or
        length-S numpy columns) and returns the list of n images."""

        def batch_log(U):
            X = np.exp(U)
            Y = f([X[:, i] for i in range(n)])
            return np.log(np.column_stack(Y))

        return cls(n, batch_log, lambda x: list(f(list(x))), name)

    def __call__(self, x):
        x = [Fraction(v) if isinstance(v, int) else v for v in x]
        for v in x:
            if not v > 0:
                raise FixpointError("chart maps need strictly positive input, got %r" % (v,))
        if all(isinstance(v, Fraction) for v in x):
            return self.exact(x)
        U = np.log(np.asarray(x, dtype=np.float64))[None, :]
        return list(np.exp(self.batch_log(U))[0])

    def residual(self, x):
        """sup-norm of F(x) - x (floats)."""
        fx = self(x)
        return max(abs(float(a) - float(b)) for a, b in zip(fx, x))

    def batch_residual(self, U):
        """sup-norm residuals for a batch of log-points."""
        V = self.batch_log(U)
        return np.max(np.abs(np.exp(V) - np.exp(U)), axis=1)


def t36_system(a):
    """The ten component maps of the T(3,6) loop, as printed."""
    a1, a2, a3, a4, a5, a6, a7, a8, a9, a10 = a
    p = a1 * a4 + (a2 + a3) * a5
    return [
        (a2 + a3 + a1 * a4) / a2,
        a4,
        (a2 + a3) / a1,
        (a3 * a6 + a4 * a7) / a5,
        (a1 * a3 * a6 + p * a7) / (a1 * a3 * a5),
        a6,
        (a1 * a3 * a5 * a6 * a8 + (a1 * a3 * a6 * a6 + (p * a6) * a7) * a9
         + (a1 * a3 * a6 * a7 + p * a7 * a7) * a10) / (a1 * a3 * a5 * a7 * a8),
        a10,
        (a1 * a3 * a5 * a8 + (a1 * a3 * a6 + p * a7) * a9) / (a1 * a3 * a5 * a7),
        a9,
    ]


def t36_map():
    return ChartMap.from_function(10, t36_system, "T(3,6) Sigma_1")


@dataclass
class Found:
    point: list
    residual: float
    exact_residual: float = None


@dataclass
class RefutedHeuristically:
    min_residual: float
    starts: int
    box: tuple
    argmin: list = None


@dataclass
class Inconclusive:
    best_residual: float
    best_point: list = None


@dataclass
class FixpointReport:
    outcome: object
    iterations: int
    seed: int
    notes: dict = field(default_factory=dict)


def _sobol_log_box(n, count, box, seed):
    lo, hi = math.log(box[0]), math.log(box[1])
    m = max(1, math.ceil(math.log2(max(count, 2))))
    pts = qmc.Sobol(d=n, scramble=True, seed=seed).random_base2(m)[:count]
    return lo + (hi - lo) * pts


def _log_residual_fn(m):
    def g(u):
        return m.batch_log(u[None, :])[0] - u
    return g


def _exact_residual(m, x):
    if not all(math.isfinite(float(v)) and float(v) > 0 for v in x):
        return None
    xs = [Fraction(float(v)) for v in x]
    try:
        fx = m.exact(xs)
    except (ZeroDivisionError, TypeError):
        return None
    return float(max(abs(a - b) for a, b in zip(fx, xs)))


def _accept(m, x, u, r, tol):
    """Both the plain and the log residual must be small, and the exact
    rational re-evaluation must agree; this rejects runaway points where the
    float residual is tiny only because coordinates under- or overflow."""
    if r > tol:
        return False
    lr = float(np.max(np.abs(_log_residual_fn(m)(u))))
    if not lr <= tol:
        return False
    ex = _exact_residual(m, x)
    return ex is not None and ex <= tol


def find_fixed_point(m, starts=64, iters=200, tol_found=TOL_FOUND, box=(1e-2, 1e2), seed=0,
                     period=None):
    """Multistart bounded least squares on log F(e^u) - u.

    Iterates may leave the start box by three decades on either side, which
    keeps the search off the boundary of the orthant where residuals can be
    tiny without a fixed point nearby.  With ``period`` the orbit barycenter of
    each start (in log coordinates) is used instead of the start itself; for
    periodic maps it already lies close to a fixed point.
    """
    U0 = _sobol_log_box(m.n, starts, box, seed)
    if period:
        orbit = [U0]
        for _ in range(period - 1):
            orbit.append(m.batch_log(orbit[-1]))
        U0 = np.mean(orbit, axis=0)
    lo, hi = math.log(box[0]) - 3 * math.log(10), math.log(box[1]) + 3 * math.log(10)
    U0 = np.clip(U0, lo + 1e-9, hi - 1e-9)
    g = _log_residual_fn(m)
    best = (math.inf, None)
    total = 0
    for u0 in U0:
        with np.errstate(over="ignore", invalid="ignore"):
            sol = optimize.least_squares(g, u0, bounds=(lo, hi), xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                         max_nfev=iters)
        total += int(sol.nfev)
        u = sol.x
        x = np.exp(u)
        try:
            r = m.residual(list(x))
        except FixpointError:
            continue
        if r < best[0]:
            best = (r, x)
        if _accept(m, x, u, r, tol_found):
            ex = _exact_residual(m, x)
            return FixpointReport(Found(list(map(float, x)), r, ex), total, seed)
    return FixpointReport(Inconclusive(best[0], None if best[1] is None else list(best[1])), total, seed)


def refute_fixed_point(m, box=(1e-3, 1e3), starts=10_000, tol_refute=TOL_REFUTE, seed=0,
                       refine=64, tol_found=TOL_FOUND):
    """Smallest sup-norm residual of F(x) - x over the box.

    Every Sobol start is evaluated; the ``refine`` best are polished by bounded
    least squares followed by an epigraph minimisation of the sup norm.
    """
    lo, hi = math.log(box[0]), math.log(box[1])
    U = _sobol_log_box(m.n, starts, box, seed)
    with np.errstate(over="ignore", invalid="ignore"):
        R = m.batch_residual(U)
    R = np.where(np.isfinite(R), R, np.inf)
    order = np.argsort(R, kind="stable")[:refine]

    def vec(u):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(m.batch_log(u[None, :])[0]) - np.exp(u)

    best_r, best_u = float(R[order[0]]), U[order[0]]
    total = len(U)
    for idx in order:
        u0 = U[idx]
        sol = optimize.least_squares(vec, u0, bounds=(lo, hi), max_nfev=400)
        total += int(sol.nfev)
        u1 = sol.x
        r1 = float(np.max(np.abs(vec(u1))))
        # epigraph form: minimise t subject to |r_i(u)| <= t
        z0 = np.append(u1, r1)
        cons = [{"type": "ineq", "fun": lambda z: z[-1] - vec(z[:-1])},
                {"type": "ineq", "fun": lambda z: z[-1] + vec(z[:-1])}]
        bnds = [(lo, hi)] * m.n + [(0, None)]
        ep = optimize.minimize(lambda z: z[-1], z0, method="SLSQP", constraints=cons, bounds=bnds,
                               options={"maxiter": 200, "ftol": 1e-14})
        total += int(ep.nfev)
        u2 = np.clip(ep.x[:-1], lo, hi)
        r2 = float(np.max(np.abs(vec(u2))))
        for r, u in ((r1, u1), (r2, u2)):
            if np.isfinite(r) and r < best_r:
                best_r, best_u = r, u
    x = list(map(float, np.exp(best_u)))
    if _accept(m, np.exp(best_u), best_u, best_r, tol_found):
        return FixpointReport(Found(x, best_r, _exact_residual(m, x)), total, seed)
    if best_r >= tol_refute:
        return FixpointReport(RefutedHeuristically(best_r, starts, tuple(box), x), total, seed,
                              {"heuristic": True})
    return FixpointReport(Inconclusive(best_r, x), total, seed, {"heuristic": True})


def a2_rotation():
    """The A2 map (mu_1; (1 2)) on the quiver x1 <- x2."""
    q = qv.from_arrows(2, [(1, 0)])
    return q, ClusterAutomorphism.from_cycles([0], [[0, 1]], 2)
