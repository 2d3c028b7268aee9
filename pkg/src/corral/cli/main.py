"""``corral`` command line entry point."""

import argparse
import os
import sys

from .. import __version__
from ..bcotangent import (
    CROSS_TOL,
    POINT_TOL,
    RANK_TOL,
    bcotangent_fibre,
    corner_sequence_check,
    pushout_sequence_check,
)
from ..errors import BoundExceeded, CorralError, ParseError
from ..faces import monoid_dimension, primes
from ..gcorners import build_local_model, corner_decomposition
from ..monoid import (
    AffineMonoid,
    classify,
    integralize,
    reflect,
    saturate,
    torsion_free_quotient,
)
from ..transverse import (
    b_transverse,
    c_transverse,
    corner_grading_check,
    fibre_product_germ,
    strict_corner_check,
)
from ..tri import Tri
from .documents import (
    build_cring,
    build_germ_pair,
    build_monoid,
    build_morphism,
    build_point,
    documents_to_json,
    dumps,
    load,
)
from .syntax import print_documents

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE, EXIT_UNKNOWN = 0, 1, 2, 3

COMMANDS = {
    "monoid": ("props", "reflect", "primes"),
    "model": ("corners",),
    "germ": ("check", "product"),
    "bcot": ("fibre", "pushout", "corner-seq"),
    "doc": ("print",),
}


def _color():
    return os.environ.get("CORRAL_COLOR", "0") == "1"


def yn(flag):
    word = str(flag) if isinstance(flag, Tri) else ("yes" if flag else "no")
    if not _color():
        return word
    code = {"yes": "32", "no": "31"}.get(word, "33")
    return f"\x1b[{code}m{word}\x1b[0m"


def _pick(docs, kinds, name=None, what="document"):
    for d in docs:
        if d.kind in kinds and (name is None or d.name == name):
            return d
    want = f" named {name!r}" if name else ""
    raise ParseError(f"no {what}{want} in input")


def _as_affine(doc):
    m = build_monoid(doc)
    return m if isinstance(m, AffineMonoid) else integralize(m)


MONOID_KINDS = ("monoid_presentation", "affine_monoid", "local_model")


def _vec(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


def cmd_monoid_props(docs, args):
    doc = _pick(docs, MONOID_KINDS, args.doc, "monoid")
    c = classify(build_monoid(doc), bound=args.bound)
    flags = c.as_dict()
    lines = [
        f"monoid {doc.name} (rank {c.rank})",
        f"integral: {yn(c.is_integral)}; sharp: {yn(c.is_sharp)}; "
        f"torsion-free: {yn(c.is_torsion_free)}; saturated: {yn(c.is_saturated)}",
        f"weakly toric: {yn(c.is_weakly_toric)}; toric: {yn(c.is_toric)}",
        f"simplicial: {yn(c.is_simplicial)}; free: {yn(c.is_free)}",
    ]
    unknown = any(v == "unknown" for v in flags.values())
    return {"monoid": doc.name, "properties": flags}, lines, unknown


def cmd_monoid_reflect(docs, args):
    doc = _pick(docs, MONOID_KINDS, args.doc, "monoid")
    m = build_monoid(doc)
    if isinstance(m, AffineMonoid):
        integral, tf = m, torsion_free_quotient(m)
        sat = saturate(tf)
    else:
        integral, tf, sat = reflect(m)
    labels = integral.labels()
    result = {
        "monoid": doc.name,
        "integral": {"group": integral.ambient.describe(),
                     "images": {n: list(v) for n, v in zip(labels, integral.gens)}},
        "torsion_free": {"group": tf.ambient.describe(),
                         "images": {n: list(v) for n, v in zip(labels, tf.gens)}},
        "saturated": {"hilbert_basis": [list(v) for v in sat.gens]},
    }
    lines = [f"monoid {doc.name}",
             f"integral: group {integral.ambient.describe()}; "
             + ", ".join(f"{n} -> {_vec(v)}" for n, v in zip(labels, integral.gens)),
             f"torsion-free: group {tf.ambient.describe()}; "
             + ", ".join(f"{n} -> {_vec(v)}" for n, v in zip(labels, tf.gens)),
             "saturated: generators " + (" ".join(_vec(v) for v in sat.gens) or "none")]
    return result, lines, False


def cmd_monoid_primes(docs, args):
    doc = _pick(docs, MONOID_KINDS, args.doc, "monoid")
    M = torsion_free_quotient(_as_affine(doc))
    out, lines = [], [f"monoid {doc.name}"]
    for p in primes(M, with_zero=False):
        gens = [M.label(i) for i in p.generator_support]
        out.append({"ideal_generators": gens, "face_rank": p.complement_face.rank})
        lines.append("prime <" + ", ".join(gens) + f"> face rank {p.complement_face.rank}")
    d0, d1 = monoid_dimension(M, with_zero=False), monoid_dimension(M, with_zero=True)
    lines.append(f"dimension: {d0}; with zero: {d1}")
    return {"monoid": doc.name, "primes": out, "dimension": d0,
            "dimension_with_zero": d1}, lines, False


def _monomial(v, names):
    terms = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, v) if k]
    return "*".join(terms) or "1"


def cmd_model_corners(docs, args):
    doc = _pick(docs, MONOID_KINDS, args.doc, "monoid")
    P = _as_affine(doc)
    model = build_local_model(P)
    names = [f"x{i + 1}" for i in range(model.m)]
    rels = [f"{_monomial(u, names)} = {_monomial(v, names)}" for u, v in model.binomial_relations]
    dec = corner_decomposition(model)
    strata = []
    lines = [f"local model of {doc.name}: {model.m} coordinates, dimension {model.dim}"]
    lines += ["  " + r for r in rels]
    for s in dec.strata:
        fib = [list(v) for v in s.fiber.gens]
        strata.append({"codim": s.codim, "face": list(s.key), "fibre_rank": s.fiber.rank,
                       "fibre_generators": fib})
        lines.append(f"C{s.codim} face {{{', '.join(s.key)}}} fibre rank {s.fiber.rank} "
                     f"generators {' '.join(_vec(v) for v in s.fiber.gens) or 'none'}")
    grading = " ".join(f"C{k}:{n}" for k, n in enumerate(dec.grading))
    lines.append(grading)
    return {"monoid": doc.name, "relations": rels, "strata": strata,
            "grading": list(dec.grading)}, lines, False


def cmd_germ_check(docs, args):
    doc = _pick(docs, ("germ_pair",), args.doc, "germ pair")
    g, h = build_germ_pair(doc)
    bt = b_transverse(g, h)
    ct = c_transverse(g, h)
    text = f"b-transverse: {yn(bt)}; c-transverse: {yn(ct.ok)}"
    if not ct.ok and ct.reason != "not b-transverse":
        text += f" ({ct.reason})"
    result = {"germ_pair": doc.name, "b_transverse": bt, "c_transverse": ct.ok,
              "reason": ct.reason, "at": [list(f) for f in ct.faces], "witness": [list(w) if isinstance(w, tuple) else w
                                               for w in ct.witness]}
    return result, [f"germ pair {doc.name}", text], False


def cmd_germ_product(docs, args):
    doc = _pick(docs, ("germ_pair",), args.doc, "germ pair")
    g, h = build_germ_pair(doc)
    fp = fibre_product_germ(g, h)
    result = {"germ_pair": doc.name, "K": [list(v) for v in fp.K_vectors],
              "W": [list(v) for v in fp.W_monoid.gens], "dim_W": fp.dim_W,
              "c_transverse": fp.c_transverse, "table": [list(r) for r in fp.table]}
    lines = [f"germ pair {doc.name}",
             "K generators: " + (" ".join(_vec(v) for v in fp.K_vectors) or "none"),
             "W generators: " + (" ".join(_vec(v) for v in fp.W_monoid.gens) or "none"),
             f"dim W: {fp.dim_W}; c-transverse: {yn(fp.c_transverse)}"]
    if fp.c_transverse:
        rep = corner_grading_check(g, h)
        sc = strict_corner_check(g, h)
        result["grading_law"] = rep.law_holds
        result["corner_counts"] = list(rep.counts)
        result["corner_formula"] = rep.formula_holds
        result["sc"] = sc.sc
        lines.append("(i, j, k, l): " + " ".join(_vec(r) for r in rep.rows))
        lines.append(f"i + l = j + k: {yn(rep.law_holds)}; counts "
                     + " ".join(f"C{i}:{n}" for i, n in enumerate(rep.counts))
                     + f"; formula: {yn(rep.formula_holds)}")
        lines.append(f"strict corners: {yn(sc.sc)}")
    return result, lines, False


def _ring_and_point(docs, args):
    ring = _pick(docs, ("cring_presentation",), args.doc, "ring")
    point = _pick(docs, ("point",), args.point, "point")
    return build_cring(ring), build_point(point), ring.name, point.name


def _rows(m):
    return [list(r) for r in m]


def cmd_bcot_fibre(docs, args):
    C, p, rname, pname = _ring_and_point(docs, args)
    f = bcotangent_fibre(C, p, rtol=args.tol)
    result = {"ring": rname, "point": pname, "labels": list(f.labels), "gamma": _rows(f.gamma),
              "fibre_dim": f.fibre_dim, "rank": f.rank.rank, "stable": f.rank.stable}
    lines = [f"ring {rname} at {pname}", "columns: " + " ".join(f.labels)]
    lines += ["  " + " ".join(repr(x) for x in r) for r in f.gamma]
    lines.append(f"fibre dim: {f.fibre_dim} (rank {f.rank.rank}, stable: {yn(f.rank.stable)})")
    return result, lines, not f.rank.stable


def cmd_bcot_pushout(docs, args):
    rings = {d.name: build_cring(d) for d in docs if d.kind == "cring_presentation"}
    morphisms = [d for d in docs if d.kind == "morphism"]
    if len(morphisms) < 2:
        raise ParseError("pushout needs two morphism documents")
    phi, psi = (build_morphism(d, rings) for d in morphisms[:2])
    point = _pick(docs, ("point",), args.point, "point")
    rep = pushout_sequence_check(phi, psi, build_point(point), tol=args.point_tol)
    c, d, e, f = rep.dims
    result = {"morphisms": [m.name for m in morphisms[:2]], "point": point.name,
              "dims": list(rep.dims), "first_rank": rep.first_rank,
              "composition_zero": rep.composition_zero, "exact_middle": rep.exact_middle,
              "surjective": rep.surjective, "exact": rep.exact}
    lines = [f"pushout of {morphisms[0].name}, {morphisms[1].name} at {point.name}",
             f"{c} -> {d} + {e} -> {f} -> 0 (first map rank {rep.first_rank})",
             f"exact: {yn(rep.exact)}"]
    return result, lines, False


def cmd_bcot_corner_seq(docs, args):
    C, p, rname, pname = _ring_and_point(docs, args)
    rep = corner_sequence_check(C, p)
    a, b, c = rep.dims
    result = {"ring": rname, "point": pname, "prime": list(rep.prime), "dims": list(rep.dims),
              "pi_rank": rep.pi_rank, "i_rank": rep.i_rank, "exact": rep.exact}
    lines = [f"ring {rname} at {pname}, prime <{', '.join(rep.prime)}>",
             f"0 -> {a} -> {b} -> {c} -> 0",
             f"exact: {yn(rep.exact)}"]
    return result, lines, False


HANDLERS = {
    ("monoid", "props"): cmd_monoid_props,
    ("monoid", "reflect"): cmd_monoid_reflect,
    ("monoid", "primes"): cmd_monoid_primes,
    ("model", "corners"): cmd_model_corners,
    ("germ", "check"): cmd_germ_check,
    ("germ", "product"): cmd_germ_product,
    ("bcot", "fibre"): cmd_bcot_fibre,
    ("bcot", "pushout"): cmd_bcot_pushout,
    ("bcot", "corner-seq"): cmd_bcot_corner_seq,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="corral", description="Monoids, corners and b-cotangent fibres.")
    ap.add_argument("--version", action="version", version=f"corral {__version__}")
    groups = ap.add_subparsers(dest="group", required=True)
    for group, cmds in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="command", required=True)
        for cmd in cmds:
            p = sub.add_parser(cmd)
            p.add_argument("files", nargs="+")
            p.add_argument("--json", action="store_true", help="machine-readable output")
            p.add_argument("--doc", help="name of the main document")
            p.add_argument("--point", help="name of the point document")
            p.add_argument("--tol", type=float, default=RANK_TOL, help="numerical rank tolerance")
            p.add_argument("--point-tol", type=float, default=POINT_TOL,
                           help="tolerance for relations at points")
            p.add_argument("--bound", type=int, default=None, help="search bound for membership")
    return ap


def settings(args):
    return {"tol": args.tol, "cross_tol": CROSS_TOL, "point_tol": args.point_tol,
            "bound": args.bound if args.bound is not None else "auto"}


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    command = f"{args.group} {args.command}"
    try:
        docs = []
        for path in args.files:
            with open(path, encoding="utf-8") as fh:
                docs += load(fh.read())
        if args.group == "doc":
            stdout.write(documents_to_json(docs) if args.json else print_documents(docs))
            return EXIT_OK
        handler = HANDLERS[(args.group, args.command)]
        result, lines, unknown = handler(docs, args)
        status = "unknown" if unknown else "ok"
        code = EXIT_UNKNOWN if unknown else EXIT_OK
    except ParseError as err:
        return _fail(args, command, "parse_error", str(err), EXIT_PARSE, stdout, stderr)
    except ValueError as err:
        return _fail(args, command, "parse_error", str(err), EXIT_PARSE, stdout, stderr)
    except OSError as err:
        return _fail(args, command, "parse_error", str(err), EXIT_PARSE, stdout, stderr)
    except BoundExceeded as err:
        return _fail(args, command, "unknown", str(err), EXIT_UNKNOWN, stdout, stderr)
    except CorralError as err:
        return _fail(args, command, type(err).__name__, str(err), EXIT_DOMAIN, stdout, stderr)
    if args.json:
        stdout.write(dumps({"command": command, "files": args.files, "settings": settings(args),
                            "status": status, "result": result, "warnings": []}))
    else:
        s = settings(args)
        stdout.write(f"# corral {__version__} {command} tol={s['tol']:g} "
                     f"point_tol={s['point_tol']:g} bound={s['bound']}\n")
        stdout.write("\n".join(lines) + "\n")
    return code


def _fail(args, command, status, message, code, stdout, stderr):
    if args.json:
        stdout.write(dumps({"command": command, "files": args.files, "settings": settings(args),
                            "status": status, "error": message}))
    else:
        stderr.write(f"corral: {message}\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
