"""torusskein command line: every computation as a subcommand emitting a JSON document."""
import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time

import numpy as np

from . import __version__, analysis, gauss, kernels, skein, tqft
from .numth import RootOfUnity

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
CACHE_ENV = "TORUSSKEIN_CACHE"


class UsageError(Exception):
    pass


def fmt_complex(z, digits=12):
    z = complex(z)
    re_, im_ = round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0
    if im_ == 0:
        return f"{re_:.{digits}g}"
    if re_ == 0:
        return f"{im_:.{digits}g}i"
    return f"{re_:.{digits}g}{im_:+.{digits}g}i"


def cnum(z):
    z = complex(z)
    return [z.real, z.imag]


def _pair(text, n=2):
    try:
        vals = [int(x) for x in text.replace(" ", "").split(",")]
    except ValueError:
        raise UsageError(f"expected {n} comma-separated integers, got {text!r}")
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


def _root(args):
    if args.order is None:
        raise UsageError("--order is required")
    return RootOfUnity(args.order, args.s)


def _doc(args, method, values, cross=None, verdict="ok"):
    inputs = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "format", "cache_dir", "no_cache", "threads") and v is not None}
    return {"command": " ".join(x for x in (args.cmd, getattr(args, "sub", None)) if x),
            "inputs": inputs, "method": method, "values": values,
            "cross_check": cross, "verdict": verdict}


# ------------------------------------------------------------------ gauss

def cmd_gauss_compute(args):
    xi = _root(args)
    g = gauss.gauss_brute(args.a, args.b, xi)
    vals = {"value": fmt_complex(g.embed()), "complex": cnum(g.embed()),
            "coefficients": g.coeffs.tolist(), "reduced": g.reduced().tolist(), "order": xi.order}
    cross = None
    if args.b % 2 == 0:
        cf = gauss.gauss_closed(args.a, args.b, xi)
        if cf.kind != gauss.UNCOVERED:
            ok = cf.group_ring().equals(g)
            cross = {"against": "closed form", "kind": cf.kind, "status": "pass" if ok else "fail"}
    return _doc(args, "brute force in Z[zeta_n]", vals, cross)


def cmd_gauss_verify(args):
    res = gauss.closed_form_sweep(args.max_a, args.max_two_b, args.max_order, args.max_s, exact=True)
    res["mismatches"] = [list(m) for m in res["mismatches"]]
    ok = not res["mismatches"] and res["false_zeros"] == 0
    return _doc(args, "closed form vs brute force sweep", res,
                {"against": "brute force", "status": "pass" if ok else "fail"}, "pass" if ok else "fail")


def cmd_gauss_relations(args):
    k, d = args.k, args.d
    grid = analysis.default_U_grid(args.max_order)
    rows = []
    for dd, cls in analysis.generator_classes(k).items():
        if d is not None and dd != d:
            continue
        for rep, members in cls.items():
            for lam in members[1:]:
                bad = [str(p) for p in grid.points if not gauss.square_class_relation(k, dd, lam, rep, p)]
                rows.append({"d": dd, "l": lam, "rep": rep, "m": gauss.square_class_m(k, dd, lam, rep),
                             "points": len(grid), "failures": len(bad), "first_failure": bad[0] if bad else None})
    ok = all(r["failures"] == 0 for r in rows)
    return _doc(args, "exact square-class relations on all U points up to max order", {"table": rows},
                {"against": "group ring equality", "status": "pass" if ok else "fail"}, "pass" if ok else "fail")


# ------------------------------------------------------------------ skein

def _vector(args):
    if args.vector:
        return skein.SkeinVector.parse(args.vector)
    if args.p is None or args.q is None:
        raise UsageError("give --vector or both --p and --q")
    return skein.SkeinVector.of(args.p, args.q)


def cmd_skein_reduce(args):
    v = _vector(args)
    if args.monodromy == "S":
        red = skein.reduce_horizontal_S(v, record=True)
        method = "rewriting in the S-monodromy basis"
    else:
        if args.k is None:
            raise UsageError("--k is required unless --monodromy S")
        red = skein.reduce_horizontal_k(v, args.k, record=True)
        method = "rewriting in the horizontal basis"
    ok = red.replay()
    vals = {"input": str(v), "reduced": str(red.result), "support": [list(l) for l in red.result.support()],
            "rules": len(red.rules), "rule_kinds": sorted({r.name for r, _ in red.rules})}
    return _doc(args, method, vals, {"against": "certificate replay", "status": "pass" if ok else "fail"},
                "pass" if ok else "fail")


def cmd_skein_product(args):
    a, b = _pair(args.left), _pair(args.right)
    out = skein.product_to_sum(tuple(a), tuple(b))
    return _doc(args, "product-to-sum", {"product": str(out), "support": [list(l) for l in out.support()]})


# ------------------------------------------------------------------ rt

def cmd_rt_eval(args):
    xi = _root(args)
    if args.k is None:
        raise UsageError("--k is required")
    if args.l is not None:
        lab = (args.l, 0)
        closed = (lambda: tqft.rt_closed_Tl(args.k, args.l, xi))
    elif args.p is not None and args.q is not None:
        lab = (args.p, args.q)
        closed = (lambda: tqft.ev_closed_pq(args.k, args.p, args.q, xi))
    else:
        raise UsageError("give --l, or --p and --q")
    vals, cross = {"label": list(lab)}, None
    if args.method in ("trace", "both"):
        vals["trace"] = fmt_complex(tqft.rt_invariant_trace(args.k, lab, xi))
    if args.method in ("closed", "both"):
        vals["closed"] = fmt_complex(closed())
    if args.method == "both":
        d = abs(tqft.rt_invariant_trace(args.k, lab, xi) - closed())
        cross = {"against": "closed form", "difference": d, "status": "pass" if d <= args.tolerance else "fail"}
    verdict = "ok" if cross is None else cross["status"]
    return _doc(args, args.method, vals, cross, verdict)


# ------------------------------------------------------------------ dim / report

def _rank_values(r):
    d = r.as_dict()
    d.pop("generators", None)
    return d


def cmd_dim_gk(args):
    r = analysis.dim_Gk(args.k, args.degree_bound, seed=args.seed)
    vals = {"estimated": r.estimated, "expected": r.expected, "verdict": r.verdict, **_rank_values(r)}
    return _doc(args, "exact square-class reduction plus degree-bounded null space", vals,
                {"against": "closed dimension formula", "status": "pass" if r.verdict == "match" else "fail"},
                r.verdict)


def cmd_dim_image(args):
    r = analysis.image_dimension(args.k, args.degree_bound, seed=args.seed)
    vals = {"estimated": r.estimated, "expected": r.expected, "kinnear": analysis.kinnear_dim(args.k),
            **_rank_values(r)}
    return _doc(args, "per-class rank of sampled evaluations", vals,
                {"against": "image bound", "status": "pass" if r.verdict == "match" else "fail"}, r.verdict)


def cmd_report(args):
    ks = [args.k] if args.k else list(range(2, 17)) + [18, 30]
    rows = []
    for k in ks:
        rep = analysis.injectivity_verdict(k, seed=args.seed)
        row = {"k": k, "image_dim": rep.image_dim, "kinnear": rep.kinnear, "bound": rep.bound,
               "computed": rep.verdict, "expected": rep.expected_verdict,
               "agree": rep.verdict == rep.expected_verdict, "notes": "; ".join(rep.notes)}
        if k % 4 == 0:
            row["colinearity_mod4"] = analysis.colinearity_mod4(k)
        rows.append(row)
    ok = all(r["agree"] for r in rows)
    verdict = rows[0]["computed"] if len(rows) == 1 else ("match" if ok else "mismatch")
    return _doc(args, "image dimension vs horizontal dimension", {"table": rows},
                {"against": "expected verdicts", "status": "pass" if ok else "fail"}, verdict)


# ------------------------------------------------------------------ monodromy

def cmd_rho(args):
    xi = _root(args)
    a, b, c, d = _pair(args.matrix, 4)
    op = tqft.rho_general(a, b, c, d, xi, basis=args.basis)
    M = op.matrix
    unitary = float(np.abs(M @ M.conj().T - np.eye(len(M))).max()) if len(M) else 0.0
    vals = {"dim": len(M), "matrix": [[cnum(z) for z in row] for row in M], "unitarity_defect": unitary}
    return _doc(args, f"projective action in the {args.basis} basis", vals,
                {"against": "unitarity", "status": "pass" if unitary <= args.tolerance else "fail"},
                "pass" if unitary <= args.tolerance else "fail")


def cmd_s_colinearity(args):
    need = analysis.required_points(2, args.degree_bound)
    grid = analysis.s_grid(max(args.samples or need, need), seed=args.seed)
    out = analysis.s_colinearity_report(grid, args.degree_bound, seed=args.seed)
    rep = out.pop("report")
    out["nullities"] = rep.nullities if rep else {}
    out["samples"] = len(grid)
    return _doc(args, "degree-bounded null space on two rows", out, None,
                "colinear" if out["colinear"] else "independent")


# ------------------------------------------------------------------ plumbing

def _cache_path(args):
    base = args.cache_dir or os.environ.get(CACHE_ENV)
    if not base or args.no_cache:
        return None
    key = {k: v for k, v in vars(args).items() if k not in ("func", "format", "cache_dir", "no_cache", "threads")}
    key["version"] = __version__
    h = hashlib.sha256(json.dumps(key, sort_keys=True, default=str).encode()).hexdigest()[:24]
    return os.path.join(base, f"{args.cmd}-{h}.json")


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, complex):
        return cnum(o)
    if isinstance(o, float) and not np.isfinite(o):
        return str(o)
    return o


def to_csv(doc):
    vals = doc["values"]
    buf = io.StringIO()
    if isinstance(vals.get("table"), list) and vals["table"]:
        w = csv.DictWriter(buf, fieldnames=list(vals["table"][0]))
        w.writeheader()
        w.writerows(vals["table"])
    else:
        w = csv.writer(buf)
        w.writerow(["key", "value"])
        for k, v in vals.items():
            if not isinstance(v, (dict, list)):
                w.writerow([k, v])
        if "verdict" not in vals:
            w.writerow(["verdict", doc["verdict"]])
    return buf.getvalue()


def to_pretty(doc):
    lines = [f"{doc['command']}: {doc['method']}"]
    vals = doc["values"]
    if isinstance(vals.get("table"), list):
        rows = vals["table"]
        if rows:
            keys = list(rows[0])
            widths = {k: max(len(k), *(len(str(r.get(k, ""))) for r in rows)) for k in keys}
            lines.append("  ".join(k.ljust(widths[k]) for k in keys))
            for r in rows:
                lines.append("  ".join(str(r.get(k, "")).ljust(widths[k]) for k in keys))
    else:
        for k, v in vals.items():
            if isinstance(v, list) and len(v) > 8:
                v = f"[{len(v)} entries]"
            lines.append(f"  {k}: {v}")
    if doc["cross_check"]:
        lines.append(f"cross-check: {doc['cross_check'].get('status')}")
    lines.append(f"verdict: {doc['verdict']}")
    return "\n".join(lines) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="torusskein", description=__doc__)
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
    p.add_argument("--cache-dir", default=None, help=f"result cache (default ${CACHE_ENV}, off if unset)")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-8)
    sub = p.add_subparsers(dest="cmd", required=True)

    def leaf(parent, name, func, **kw):
        sp = parent.add_parser(name, **kw)
        sp.set_defaults(func=func)
        return sp

    g = sub.add_parser("gauss").add_subparsers(dest="sub", required=True)
    sp = leaf(g, "compute", cmd_gauss_compute)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--b", type=int, default=0)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp = leaf(g, "verify", cmd_gauss_verify)
    sp.add_argument("--max-a", type=int, default=12)
    sp.add_argument("--max-two-b", type=int, default=24)
    sp.add_argument("--max-order", type=int, default=200)
    sp.add_argument("--max-s", type=int, default=5)
    sp = leaf(g, "relations", cmd_gauss_relations)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int)
    sp.add_argument("--max-order", type=int, default=60)

    s = sub.add_parser("skein").add_subparsers(dest="sub", required=True)
    sp = leaf(s, "reduce", cmd_skein_reduce)
    sp.add_argument("--k", type=int)
    sp.add_argument("--monodromy", choices=["k", "S"], default="k")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--vector", help="e.g. '(1*A^2) * (3,1) + (2,0)'")
    sp = leaf(s, "product", cmd_skein_product)
    sp.add_argument("--left", required=True, help="p,q")
    sp.add_argument("--right", required=True, help="r,s")

    r = sub.add_parser("rt").add_subparsers(dest="sub", required=True)
    sp = leaf(r, "eval", cmd_rt_eval)
    for f in ("--k", "--l", "--p", "--q"):
        sp.add_argument(f, type=int)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--method", choices=["trace", "closed", "both"], default="both")

    d = sub.add_parser("dim").add_subparsers(dest="sub", required=True)
    sp = leaf(d, "gk", cmd_dim_gk)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--degree-bound", type=int, default=4)
    sp = leaf(d, "image", cmd_dim_image)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--degree-bound", type=int, default=None)

    rp = sub.add_parser("report").add_subparsers(dest="sub", required=True)
    sp = leaf(rp, "main-theorem", cmd_report)
    sp.add_argument("--k", type=int)

    m = sub.add_parser("monodromy").add_subparsers(dest="sub", required=True)
    sp = leaf(m, "rho", cmd_rho)
    sp.add_argument("--matrix", required=True, help="a,b,c,d")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--basis", choices=["e", "f"], default="e")
    sp = leaf(m, "s-colinearity", cmd_s_colinearity)
    sp.add_argument("--degree-bound", type=int, default=4)
    sp.add_argument("--samples", type=int)
    return p


def run(argv=None):
    """Parse, compute and return (exit code, document or None, rendered text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_OK if e.code == 0 else EXIT_USAGE), None, ""
    analysis.set_threads(args.threads)
    path = _cache_path(args)
    doc = None
    if path and os.path.exists(path):
        with open(path) as fh:
            doc = json.load(fh)
    if doc is None:
        t0 = time.time()
        try:
            doc = _jsonable(args.func(args))
        except (UsageError, ValueError, ArithmeticError) as e:
            print(f"torusskein: error: {e}", file=sys.stderr)
            return EXIT_USAGE, None, ""
        doc["seconds"] = round(time.time() - t0, 3)
        doc["backend"] = kernels.BACKEND
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, "w") as fh:
                json.dump(doc, fh, indent=1)
    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    elif args.format == "csv":
        text = to_csv(doc)
    else:
        text = to_pretty(doc)
    cc = doc.get("cross_check") or {}
    code = EXIT_MISMATCH if cc.get("status") == "fail" else EXIT_OK
    return code, doc, text


def main(argv=None):
    code, _, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
