"""Command line entry point: ``clusterloops <group> <command> ...``.

Exit status 0 on success, 1 on domain or input errors, 2 on usage errors.
Output is line-oriented ``key: value`` text, or JSON with ``--json``.
Automorphism files are a quiver file followed by one ``mut: ... ; perm: ...``
line, so loop commands can be piped into ``aut`` commands.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import dynamics as dy
from . import fence as fn
from . import fixpoint as fp
from . import folding as fd
from . import grassmann as gr
from . import loops as lp
from . import quiver as qv
from . import seed as sd


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# io helpers


def _read(path):
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise CliError("cannot read %s: %s" % (path, e.strerror)) from None


def aut_to_text(q, phi):
    return qv.to_text(q) + sd.to_text(phi) + "\n"


def aut_from_text(text):
    lines = text.splitlines()
    at = [i for i, ln in enumerate(lines) if ln.strip().startswith("mut:")]
    if len(at) != 1:
        raise CliError("automorphism file needs exactly one 'mut: ... ; perm: ...' line")
    q = qv.from_text("\n".join(lines[: at[0]]))
    try:
        phi = sd.from_text(lines[at[0]], q.n)
    except sd.SeedError as e:
        raise CliError("line %d: %s" % (at[0] + 1, e)) from None
    return q, phi


def _ints(text):
    return [int(x) for x in text.replace(",", " ").split()]


class Out:
    """Collects ordered key/value pairs; prints text or JSON."""

    def __init__(self):
        self.items = {}
        self.raw = None

    def __setitem__(self, k, v):
        self.items[k] = v

    def emit(self, as_json, stream):
        if as_json:
            stream.write(json.dumps(self.items, default=str, sort_keys=False) + "\n")
        elif self.raw is not None:
            stream.write(self.raw)
        else:
            for k, v in self.items.items():
                if isinstance(v, str) and "\n" in v:
                    stream.write("%s:\n%s" % (k, v if v.endswith("\n") else v + "\n"))
                else:
                    stream.write("%s: %s\n" % (k, v))


# ---------------------------------------------------------------------------
# quiver


def cmd_quiver_mutate(a, out):
    q = qv.from_text(_read(a.file))
    q = qv.mutate_word(q, _ints(a.at))
    out.raw = qv.to_text(q)
    out["quiver"] = qv.to_json(q)


def cmd_quiver_class(a, out):
    q = qv.from_text(_read(a.file))
    mc = qv.mutation_class(q, a.max_size)
    out["size"] = len(mc)
    out["truncated"] = mc.truncated


def cmd_quiver_finite(a, out):
    q = qv.from_text(_read(a.file))
    r = qv.finite_type(q, a.max_size)
    if isinstance(r, qv.Finite):
        out["verdict"] = "Finite"
        out["type"] = r.label
    else:
        out["verdict"] = "Infinite"
        out["witness"] = qv.to_text(r.witness)
        out["path"] = " ".join(map(str, r.path))


# ---------------------------------------------------------------------------
# fence


def cmd_fence_braid(a, out):
    w = fn.parse_braid(a.word, a.strands)
    f = fn.fence_from_braid(w)
    out.raw = fn.to_text(f)
    out["rows"] = f.rows
    out["columns"] = ["%s%d" % (c, r) for r, c in f.columns]


def cmd_fence_quiver(a, out):
    f = fn.from_text(_read(a.file))
    q = f.quiver()
    out.raw = qv.to_text(q)
    out["quiver"] = qv.to_json(q)


def cmd_fence_dt(a, out):
    f = fn.from_text(_read(a.file))
    phi = fn.dt_sequence(f)
    q = f.quiver()
    out.raw = aut_to_text(q, phi)
    out["quiver"] = qv.to_json(q)
    out["aut"] = sd.to_text(phi)


def cmd_fence_rotate(a, out):
    f = fn.from_text(_read(a.file))
    g, phi = fn.rotation_power(f, a.times)
    out["fence"] = fn.to_text(g)
    out["aut"] = sd.to_text(phi)


# ---------------------------------------------------------------------------
# loops


def cmd_loop_theta(a, out):
    beta = fn.parse_braid(a.beta)
    run, phi = lp.theta_loop(beta, a.strand, a.k, a.reading)
    q = run.fence.quiver()
    names = fn.face_names_left_to_right(run.fence)
    if a.names:
        out.raw = qv.to_text(q) + sd.to_text(phi) + "\n" + "names: " + sd.to_text(phi, [str(x) for x in names]) + "\n"
    else:
        out.raw = aut_to_text(q, phi)
    out["quiver"] = qv.to_json(q)
    out["aut"] = sd.to_text(phi)
    out["aut_left_to_right"] = sd.to_text(phi, [str(x) for x in names])
    out["matches_simulation"] = sd.action_equal(sd.Seed.initial(q), phi, run.simulated, method="tropical")


def cmd_loop_tau(a, out):
    spec = lp.TnQuiverSpec(_ints(a.tails))
    q = lp.build_tn(spec)
    phi = lp.build_tau(spec, a.tail)
    out.raw = aut_to_text(q, phi)
    out["quiver"] = qv.to_json(q)
    out["aut"] = sd.to_text(phi, spec.labels())


def cmd_loop_rho(a, out):
    phi = lp.kalman_rho(a.k, a.n)
    q = lp.torus_fence(a.k, a.n).quiver()
    out.raw = aut_to_text(q, phi)
    out["quiver"] = qv.to_json(q)
    out["aut"] = sd.to_text(phi)


def cmd_loop_verify(a, out):
    spec = lp.TnQuiverSpec(_ints(a.tails))
    q = lp.build_tn(spec)
    gens = {"t%d" % i: lp.build_tau(spec, i) for i in range(1, len(spec.tails) + 1)}
    rels = a.relation or (
        ["t%d t%d = t%d t%d" % (i, j, j, i) for i in range(1, len(spec.tails) + 1) for j in range(i + 1, len(spec.tails) + 1)]
        + ["t1^%d = t%d^%d" % (spec.tails[0], j, spec.tails[j - 1]) for j in range(2, len(spec.tails) + 1)]
    )
    reps = lp.verify_relations(q, gens, rels)
    for r in reps:
        out[r.relation] = r.holds
    if not all(r.holds for r in reps):
        out["all"] = False
    else:
        out["all"] = True


# ---------------------------------------------------------------------------
# automorphisms


def cmd_aut_apply(a, out):
    q, phi = aut_from_text(_read(a.file))
    s = sd.apply_aut(sd.Seed.initial(q), phi)
    out.raw = sd.seed_to_text(s)
    out["cluster"] = s.cluster()


def cmd_aut_order(a, out):
    q, phi = aut_from_text(_read(a.file))
    o = sd.order(sd.Seed.initial(q), phi, bound=a.bound)
    out["order"] = o.value if isinstance(o, sd.Order) else "exceeds %d" % o.bound


def cmd_aut_classify(a, out):
    q, phi = aut_from_text(_read(a.file))
    r = dy.classify(q, phi, order_bound=a.order_bound, max_power=a.max_power)
    for k, v in dy.report(r).items():
        out[k] = v


def cmd_aut_dehn(a, out):
    q, phi = aut_from_text(_read(a.file))
    r = dy.is_cluster_dehn_twist(q, phi, a.max_reductions)
    out["dehn_twist"] = r.holds
    if r.holds:
        out["k"], out["m"], out["n"] = r.k, r.m, r.n
    out["reductions"] = len(r.reductions)


# ---------------------------------------------------------------------------
# folding


def _fold_inputs(a):
    q = qv.from_text(_read(a.file))
    g = fd.action_from_text(_read(a.action), q.n)
    return q, g


def cmd_fold_check(a, out):
    q, g = _fold_inputs(a)
    v = fd.is_admissible(q, g)
    out["admissible"] = isinstance(v, fd.Admissible)
    if isinstance(v, fd.Violation):
        out["condition"] = v.condition
        out["witness"] = list(v.witness)


def cmd_fold_apply(a, out):
    q, g = _fold_inputs(a)
    f = fd.fold(q, g)
    out["orbits"] = [list(o) for o in f.orbits]
    out["bG"] = f.bG.tolist()
    out["D"] = list(f.D)
    out["commutes"] = [fd.fold_commutes(q, g, o) for o in f.orbits[: f.n_mut]]


def cmd_fold_explore(a, out):
    q, g = _fold_inputs(a)
    r = fd.globally_foldable(q, g, a.bound)
    out["result"] = type(r).__name__
    if isinstance(r, fd.CounterexampleWord):
        out["word"] = [list(o) for o in r.word]
        out["condition"] = r.violation.condition
    else:
        out["explored"] = r.explored


# ---------------------------------------------------------------------------
# grassmann


def cmd_grass_plucker(a, out):
    cfg = gr.from_text(_read(a.file))
    out["value"] = str(gr.plucker(cfg, _ints(a.cols)))


def cmd_grass_rho(a, out):
    cfg = gr.from_text(_read(a.file))
    for _ in range(a.times):
        cfg = gr.cyclic_shift_inv(cfg) if a.inverse else gr.cyclic_shift(cfg)
    out.raw = gr.to_text(cfg)
    out["rows"] = [[str(x) for x in r] for r in cfg.rows()]


def cmd_grass_sigma(a, out):
    cfg = gr.from_text(_read(a.file))
    cfg = gr.sigma(cfg, a.i)
    out.raw = gr.to_text(cfg)
    out["rows"] = [[str(x) for x in r] for r in cfg.rows()]


def _vec(text):
    try:
        return [Fraction(x) for x in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError):
        raise CliError("bad vector %r" % text) from None


def cmd_grass_xratio(a, out):
    if a.planes:
        A, B, C = (_vec(x) for x in a.planes)
        x, y, z = (_vec(v) for v in a.lines)
        out["triple_ratio"] = str(gr.triple_ratio(A, B, C, x, y, z))
    else:
        if len(a.lines) != 4:
            raise CliError("cross ratio needs four --line vectors")
        out["cross_ratio"] = str(gr.cross_ratio(*(_vec(v) for v in a.lines)))


# ---------------------------------------------------------------------------
# fixpoint


def _chart(a):
    if a.t36:
        return fp.t36_map()
    if not a.file:
        raise CliError("give an automorphism file or --t36")
    q, phi = aut_from_text(_read(a.file))
    return fp.ChartMap.from_automorphism(q, phi)


def _box(text):
    lo, hi = (float(x) for x in text.split(","))
    if not 0 < lo < hi:
        raise CliError("box must satisfy 0 < lo < hi")
    return lo, hi


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


def _report(rep, out):
    o = rep.outcome
    out["outcome"] = type(o).__name__
    for k, v in vars(o).items():
        out[k] = _plain(v)
    out["evaluations"] = rep.iterations
    out["seed"] = rep.seed
    if rep.notes.get("heuristic"):
        out["heuristic"] = True


def cmd_fixpoint_find(a, out):
    m = _chart(a)
    rep = fp.find_fixed_point(m, starts=a.starts, tol_found=a.tol, box=_box(a.box), seed=a.seed)
    _report(rep, out)


def cmd_fixpoint_refute(a, out):
    m = _chart(a)
    rep = fp.refute_fixed_point(m, box=_box(a.box), starts=a.starts, tol_refute=a.tol, seed=a.seed)
    _report(rep, out)


# ---------------------------------------------------------------------------
# parser


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="clusterloops", description="Cluster automorphisms from Legendrian loops.")
    p.add_argument("--json", action="store_true", help="emit JSON instead of key: value text")
    groups = p.add_subparsers(dest="group", required=True)

    def group(name):
        sp = groups.add_parser(name)
        return sp.add_subparsers(dest="command", required=True)

    def cmd(sub, name, func, file=True):
        c = sub.add_parser(name)
        c.set_defaults(func=func)
        if file:
            c.add_argument("file", nargs="?", default="-", help="input file ('-' for stdin)")
        return c

    g = group("quiver")
    c = cmd(g, "mutate", cmd_quiver_mutate)
    c.add_argument("--at", required=True, help="vertices to mutate at, e.g. 0,2,1")
    c = cmd(g, "class", cmd_quiver_class)
    c.add_argument("--max-size", type=_positive_int, default=10000)
    c = cmd(g, "finite", cmd_quiver_finite)
    c.add_argument("--max-size", type=_positive_int, default=200000)

    g = group("fence")
    c = cmd(g, "braid", cmd_fence_braid, file=False)
    c.add_argument("--word", required=True, help="e.g. 's1^2 s3 s2' or '1 1 3 2'")
    c.add_argument("--strands", type=_positive_int)
    cmd(g, "quiver", cmd_fence_quiver)
    cmd(g, "dt", cmd_fence_dt)
    c = cmd(g, "rotate", cmd_fence_rotate)
    c.add_argument("--times", type=_positive_int, default=1)

    g = group("loop")
    c = cmd(g, "theta", cmd_loop_theta, file=False)
    c.add_argument("--beta", required=True)
    c.add_argument("--strand", type=_positive_int, required=True)
    c.add_argument("--k", type=_positive_int, required=True)
    c.add_argument("--reading", choices=["auto", "example", "lemma"], default="auto")
    c.add_argument("--names", action="store_true", help="also print left-to-right face names")
    c = cmd(g, "tau", cmd_loop_tau, file=False)
    c.add_argument("--tails", required=True)
    c.add_argument("--tail", type=_positive_int, required=True)
    c = cmd(g, "rho", cmd_loop_rho, file=False)
    c.add_argument("--k", type=_positive_int, required=True)
    c.add_argument("--n", type=_positive_int, required=True)
    c = cmd(g, "verify", cmd_loop_verify, file=False)
    c.add_argument("--tails", required=True)
    c.add_argument("--relation", action="append")

    g = group("aut")
    cmd(g, "apply", cmd_aut_apply)
    c = cmd(g, "order", cmd_aut_order)
    c.add_argument("--bound", type=_positive_int, default=10000)
    c = cmd(g, "classify", cmd_aut_classify)
    c.add_argument("--order-bound", type=_positive_int, default=dy.ORDER_BOUND)
    c.add_argument("--max-power", type=_positive_int, default=dy.MAX_POWER)
    c = cmd(g, "dehn", cmd_aut_dehn)
    c.add_argument("--max-reductions", type=_positive_int, default=3)

    g = group("fold")
    for name, func in (("check", cmd_fold_check), ("apply", cmd_fold_apply), ("explore", cmd_fold_explore)):
        c = cmd(g, name, func)
        c.add_argument("--action", required=True, help="file with one generator per line in cycle notation")
        if name == "explore":
            c.add_argument("--bound", type=_positive_int, default=10000)

    g = group("grass")
    c = cmd(g, "plucker", cmd_grass_plucker)
    c.add_argument("--cols", required=True, help="1-based columns, e.g. 1,2,3")
    c = cmd(g, "rho", cmd_grass_rho)
    c.add_argument("--inverse", action="store_true")
    c.add_argument("--times", type=_positive_int, default=1)
    c = cmd(g, "sigma", cmd_grass_sigma)
    c.add_argument("--i", type=_positive_int, required=True)
    c = cmd(g, "xratio", cmd_grass_xratio, file=False)
    c.add_argument("--line", dest="lines", action="append", required=True, help="vector, e.g. 1,0")
    c.add_argument("--plane", dest="planes", action="append", help="covector (three give a triple ratio)")

    g = group("fixpoint")
    for name, func, box, starts, tol in (("find", cmd_fixpoint_find, "0.01,100", 64, fp.TOL_FOUND),
                                         ("refute", cmd_fixpoint_refute, "0.001,1000", 10000, fp.TOL_REFUTE)):
        c = cmd(g, name, func)
        c.add_argument("--t36", action="store_true", help="use the built-in T(3,6) system")
        c.add_argument("--box", default=box)
        c.add_argument("--starts", type=_positive_int, default=starts)
        c.add_argument("--tol", type=_positive_float, default=tol)
        c.add_argument("--seed", type=int, default=0)
    return p


DOMAIN_ERRORS = (CliError, ValueError, ZeroDivisionError)


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.group == "fixpoint" and args.command in ("find", "refute") and args.file == "-" and args.t36:
        args.file = None
    out = Out()
    try:
        args.func(args, out)
    except DOMAIN_ERRORS as e:
        stderr.write("error: %s\n" % e)
        return 1
    out.emit(args.json, stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
