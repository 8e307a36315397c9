"""Command-line entry point.

Exit codes: 0 affirmative or verified, 1 negative or refuted (a witness is
printed or written), 2 usage error, 3 a resource cap was hit (a bracket is
printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import shlex
import sys
from pathlib import Path

from bilist import __version__

EXIT_OK, EXIT_NEG, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fixtures_dir() -> Path:
    env = os.environ.get("BILIST_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "fixtures"


def resolve_input(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    alt = fixtures_dir() / p.name
    if alt.exists():
        return alt
    raise UsageError(f"no such file: {path}")


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def emit_table(args, columns, rows, human_title=None):
    """Print rows (dicts) as csv, structured JSON, or aligned text."""
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in columns})
        sys.stdout.write(buf.getvalue())
    elif args.format == "structured":
        print(json.dumps([{k: r.get(k) for k in columns} for r in rows], indent=1, sort_keys=False, default=str))
    else:
        if human_title:
            print(human_title)
        for r in rows:
            print("  ".join(f"{k}={_cell(r.get(k))}" for k in columns))


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict, tuple)):
        return json.dumps(v, default=str)
    return str(v)


def parse_table(text):
    """Inverse of the csv mode of emit_table (values stay strings)."""
    return list(csv.DictReader(io.StringIO(text)))


def _write_cert(cert, args, default_name):
    from bilist.core import write_certificate

    text = write_certificate(cert)
    if getattr(args, "fixture", False):
        d = fixtures_dir()
        d.mkdir(parents=True, exist_ok=True)
        path = d / default_name
    elif getattr(args, "out", None):
        path = Path(args.out)
    else:
        return None, text
    path.write_text(text)
    return str(path), text


def _intlist(spec: str):
    """'4' -> [4]; '2,3,5' -> [2, 3, 5]; '2:6' -> [2..6]; '2:10:2' -> [2, 4, .., 10]."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        if ":" in part:
            bits = [int(x) for x in part.split(":")]
            lo, hi = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            out.extend(range(lo, hi + 1, step))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list {spec!r}")
    return out


def _need_seed(args):
    if args.format == "csv" and args.seed is None:
        raise UsageError("--format csv needs an explicit --seed for randomized commands")
    return 0 if args.seed is None else args.seed


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(args):
    from bilist.colorability import verify_certificate
    from bilist.core import load_certificate

    cert = load_certificate(resolve_input(args.file))
    v = verify_certificate(cert)
    row = {"file": args.file, "status": v.status, "a": cert.graph.a_size, "b": cert.graph.b_size,
           "k_a": cert.k_a, "k_b": cert.k_b, "provenance": cert.provenance,
           "colouring_a": list(v.colouring.colours_a) if v.colouring else None,
           "colouring_b": list(v.colouring.colours_b) if v.colouring else None}
    if args.format == "human":
        print(v.status)
        if v.colouring:
            print(f"A colours: {list(v.colouring.colours_a)}")
            print(f"B colours: {list(v.colouring.colours_b)}")
    else:
        emit_table(args, list(row), [row])
    return EXIT_OK if v.verified else EXIT_NEG


def cmd_decide(args):
    from bilist.colorability import find_proper_colouring
    from bilist.core import load_certificate

    cert = load_certificate(resolve_input(args.file))
    col = find_proper_colouring(cert.graph, cert.assignment)
    row = {"file": args.file, "colourable": col is not None,
           "colouring_a": list(col.colours_a) if col else None,
           "colouring_b": list(col.colours_b) if col else None}
    if args.format == "human":
        print("COLOURABLE" if col else "NOT COLOURABLE")
        if col:
            print(f"A colours: {list(col.colours_a)}")
            print(f"B colours: {list(col.colours_b)}")
    else:
        emit_table(args, list(row), [row])
    return EXIT_OK if col is not None else EXIT_NEG


def cmd_choosable(args):
    from bilist.choosability import is_choosable_complete
    from bilist.core import SearchTimeout

    a, b = args.complete
    try:
        d = is_choosable_complete(a, b, args.ka, args.kb, palette_cap=args.palette_cap,
                                  timeout=args.timeout, max_nodes=args.max_nodes, jobs=args.jobs)
    except SearchTimeout as e:
        row = {"a": a, "b": b, "k_a": args.ka, "k_b": args.kb, "answer": "UNKNOWN",
               "lower": e.lower, "upper": e.upper, "certificate": None}
        emit_table(args, list(row), [row], human_title="resource cap hit; bracket on the threshold:")
        return EXIT_CAP
    path = None
    if d.witness is not None:
        if not args.out and not args.fixture:
            args.out = f"K{a}-{b}-{args.ka}-{args.kb}.cert"
        path, _ = _write_cert(d.witness, args, f"K{a}-{b}-{args.ka}-{args.kb}.cert")
    row = {"a": a, "b": b, "k_a": args.ka, "k_b": args.kb, "answer": d.answer,
           "lower": None, "upper": None, "certificate": path}
    if args.format == "human":
        print(d.answer)
        if path:
            print(f"certificate: {path}")
    else:
        emit_table(args, list(row), [row])
    return EXIT_OK if d.choosable else EXIT_NEG


def cmd_threshold(args):
    from bilist.choosability import threshold_a
    from bilist.core import SearchTimeout

    try:
        r = threshold_a(args.b, args.ka, args.kb, palette_cap=args.palette_cap, timeout=args.timeout,
                        max_nodes=args.max_nodes, jobs=args.jobs)
    except SearchTimeout as e:
        row = {"b": args.b, "k_a": args.ka, "k_b": args.kb, "a_star": None,
               "lower": e.lower, "upper": e.upper, "exhaustive": False}
        emit_table(args, list(row), [row], human_title="resource cap hit; bracket:")
        return EXIT_CAP
    star = "UNBOUNDED" if r.unbounded else r.a_star
    row = {"b": args.b, "k_a": args.ka, "k_b": args.kb, "a_star": star,
           "lower": star, "upper": star, "exhaustive": r.proof_note.get("exhaustive", True)}
    if r.witness is not None and (args.out or args.fixture):
        _write_cert(r.witness, args, f"threshold-{args.b}-{args.ka}-{args.kb}.cert")
    if args.format == "human":
        print(star)
        if r.witness is not None:
            print("B-lists: " + " ".join("{" + ",".join(map(str, x)) + "}" for x in r.witness.assignment.lists_b))
    else:
        emit_table(args, list(row), [row])
    return EXIT_OK


def cmd_mbar(args):
    from bilist.steiner import mbar_bounds, mbar_exact

    r = mbar_exact(args.k1, args.k2, args.l, max_nodes=args.max_nodes, timeout=args.timeout)
    bnd = mbar_bounds(args.k1, args.k2, args.l)
    row = {"k1": args.k1, "k2": args.k2, "l": args.l, "value": r.value,
           "lower": r.lower, "upper": r.upper, "exact": r.exact,
           "bound_lower": str(bnd.lower), "bound_upper": f"{float(bnd.upper):.6f}",
           "family": r.family.as_sets() if r.family else None}
    if args.format == "human":
        if r.exact:
            print(r.value)
        else:
            print(f"bracket {r.lower}..{r.upper}")
        print(f"bounds: {bnd.lower} <= M <= {float(bnd.upper):.6f}")
        if r.family is not None:
            sys.stdout.write(r.family.to_text())
    else:
        emit_table(args, list(row), [row])
    return EXIT_OK if r.exact else EXIT_CAP


def cmd_bounds(args):
    from bilist import bounds
    from bilist.core import RegionTooLarge

    conds = [c.strip() for c in args.conditions.split(",") if c.strip()] if args.conditions else []
    if args.mode == "complete":
        if args.a is None or args.b is None:
            raise UsageError("complete mode needs --a and --b")
        region = {"mode": "COMPLETE", "a": args.a, "b": args.b, "k_a": args.ka, "k_b": args.kb}
    else:
        if args.delta_a is None or args.delta_b is None:
            raise UsageError("degree mode needs --delta-a and --delta-b")
        region = {"mode": "DEGREE", "delta_a": args.delta_a, "delta_b": args.delta_b,
                  "k_a": args.ka, "k_b": args.kb}
    try:
        rows = bounds.sweep(region, conds, max_rows=args.max_rows, epsilon=args.epsilon, t=args.t)
    except RegionTooLarge as e:
        print(f"bilist: {e}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.format == "csv":
        sys.stdout.write(bounds.sweep_to_csv(rows))
    elif args.format == "structured":
        print(json.dumps([e.row() for e in rows], indent=1, default=str))
    else:
        for e in rows:
            r = e.row()
            pt = " ".join(f"{k}={r[k]}" for k in ("delta_a", "delta_b", "a", "b", "k_a", "k_b") if r.get(k) is not None)
            verdict = "n/a" if r["holds"] is None else ("holds" if r["holds"] else "fails")
            print(f"{pt}  {r['id']}: {verdict}  margin={float(r['margin']):.6g}")
    return EXIT_OK


def cmd_construct(args):
    from bilist import constructions as C
    from bilist.core import ScaleError, SizeCap, write_certificate

    kind = args.kind
    report = None
    try:
        if kind == "classic":
            cert, name = C.construct_classic(args.k, args.delta), f"classic-{args.k}-{args.delta}.cert"
        elif kind == "fano28":
            cert, name = C.construct_fano_k28(), "fano-K28-7.cert"
        elif kind == "fano35":
            cert, name = C.construct_fano_k35(), "fano-K35-7.cert"
        elif kind == "boundary":
            cert, name = C.construct_boundary(args.b, args.delta), f"boundary-{args.b}-{args.delta}.cert"
        elif kind == "gadget":
            cert, name = C.construct_gadget(args.k, args.delta), f"gadget-{args.k}-{args.delta}.cert"
        else:  # witness
            cert, rep = C.construct_witness_cond3(args.k, args.Delta, m=args.m, segments=args.segments)
            report, name = rep.as_dict(), f"witness-{args.k}-m{rep.m}.cert"
    except ScaleError as e:
        print(json.dumps(e.report, default=str, indent=1))
        print(f"bilist: {e}", file=sys.stderr)
        return EXIT_CAP
    except SizeCap as e:
        print(f"bilist: {e}", file=sys.stderr)
        return EXIT_CAP
    path, text = _write_cert(cert, args, name)
    if path is None:
        sys.stdout.write(text)
    else:
        print(path)
    if report is not None:
        print(json.dumps(report, default=str), file=sys.stderr)
    return EXIT_OK


def cmd_sample(args):
    from bilist import probabilistic as P
    from bilist.core import ListAssignment, load_certificate

    seed0 = _need_seed(args)
    rows = []
    for s in range(seed0, seed0 + args.count):
        if args.cert:
            cert = load_certificate(resolve_input(args.cert))
            g, la = cert.graph, cert.assignment
        else:
            need = (args.a, args.b, args.ka, args.kb, args.palette)
            if None in need or (args.kind != "split" and (args.da is None or args.db is None)):
                raise UsageError("give --cert or the random-instance sizes --a --b --da --db --ka --kb --palette")
            if args.kind == "split":
                rng = P.make_rng(s + 10**9)
                la = ListAssignment.build(P.random_lists(args.a, args.ka, args.palette, rng),
                                          P.random_lists(args.b, args.kb, args.palette, rng), args.ka, args.kb)
                g = None
            else:
                g, la = P.random_instance(args.a, args.b, args.da, args.db, args.ka, args.kb, args.palette, s + 10**9)
        if args.kind == "transversal":
            out = P.transversal_colouring(g, la, seed=s, budget=args.budget)
        elif args.kind == "coupon":
            out = P.sample_coupon_colouring(g, la, seed=s, budget=args.budget)
        else:
            out = P.sample_palette_split(la, args.p, epsilon=args.epsilon, mode=args.mode, seed=s, budget=args.budget)
        res = out.result
        col = res.colouring if hasattr(res, "colouring") else res
        rows.append({"seed": s, "status": out.status, "resamples": out.resample_count, "budget": out.budget,
                     "rng": out.rng,
                     "colouring_a": list(col.colours_a) if col is not None else None,
                     "colouring_b": list(col.colours_b) if col is not None else None})
    emit_table(args, ["seed", "status", "resamples", "budget", "rng", "colouring_a", "colouring_b"], rows)
    return EXIT_OK if all(r["status"] == "OK" for r in rows) else EXIT_NEG


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timeout", type=float, default=None, help="seconds before a search reports a bracket")
    common.add_argument("--max-nodes", type=int, default=None, help="branch-and-bound node cap")
    common.add_argument("--max-rows", type=int, default=10000, help="row cap for sweeps")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for parallel searches")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    common.add_argument("--format", choices=("human", "csv", "structured"), default="human")

    p = _Parser(prog="bilist", description="List colouring of bipartite graphs with lists of two sizes.")
    p.add_argument("--version", action="version", version=f"bilist {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", parents=[common], help="check that a certificate admits no proper colouring")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("decide", parents=[common], help="decide colourability of the instance in a certificate file")
    s.add_argument("file")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("choosable", parents=[common], help="decide (k_A,k_B)-choosability of K_{a,b}")
    s.add_argument("--complete", nargs=2, type=int, metavar=("A", "B"), required=True)
    s.add_argument("--ka", type=int, required=True)
    s.add_argument("--kb", type=int, required=True)
    s.add_argument("--palette-cap", type=int, default=None)
    s.add_argument("--out", default=None, help="certificate path (default K<a>-<b>-<ka>-<kb>.cert)")
    s.add_argument("--fixture", action="store_true", help="write the certificate to the fixtures directory")
    s.set_defaults(func=cmd_choosable)

    s = sub.add_parser("threshold", parents=[common], help="least a with K_{a,b} not (k_A,k_B)-choosable")
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--ka", type=int, required=True)
    s.add_argument("--kb", type=int, required=True)
    s.add_argument("--palette-cap", type=int, default=None)
    s.add_argument("--out", default=None)
    s.add_argument("--fixture", action="store_true")
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("mbar", parents=[common], help="exact M-bar(k1,k2,l) with an extremal family")
    s.add_argument("--k1", type=int, required=True)
    s.add_argument("--k2", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.set_defaults(func=cmd_mbar)

    s = sub.add_parser("bounds", parents=[common], help="evaluate sufficient conditions over a parameter grid")
    s.add_argument("--mode", choices=("degree", "complete"), default="degree")
    s.add_argument("--delta-a", type=_intlist)
    s.add_argument("--delta-b", type=_intlist)
    s.add_argument("--a", type=_intlist)
    s.add_argument("--b", type=_intlist)
    s.add_argument("--ka", type=_intlist, required=True)
    s.add_argument("--kb", type=_intlist, required=True)
    s.add_argument("--conditions", default="transversal,coupon",
                   help="comma list of: transversal, coupon, cu1, cu2, c3c1, c3c2, c3c3, boundary, degrees")
    s.add_argument("--epsilon", type=float, default=None)
    s.add_argument("--t", type=float, default=None)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("construct", parents=[common], help="emit a non-choosability certificate")
    s.add_argument("kind", choices=("classic", "fano28", "fano35", "boundary", "gadget", "witness"))
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--delta", type=int, default=2)
    s.add_argument("--b", type=int, default=4)
    s.add_argument("--Delta", type=float, default=10**6)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--segments", type=int, default=None)
    s.add_argument("--out", default=None)
    s.add_argument("--fixture", action="store_true")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("sample", parents=[common], help="run a resampling colourer on random or given instances")
    s.add_argument("kind", choices=("transversal", "coupon", "split"))
    s.add_argument("--cert", default=None, help="take the instance from a certificate file")
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    s.add_argument("--da", type=int)
    s.add_argument("--db", type=int)
    s.add_argument("--ka", type=int)
    s.add_argument("--kb", type=int)
    s.add_argument("--palette", type=int)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--epsilon", type=float, default=0.5)
    s.add_argument("--mode", choices=("EQ1", "EQ2"), default="EQ1")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--budget", type=int, default=10**5)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None):
    from bilist.core import BilistError

    argv = list(sys.argv[1:] if argv is None else argv)
    print(f"bilist {__version__}: bilist {shlex.join(argv)}", file=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"bilist: error: {e} (try 'bilist --help')", file=sys.stderr)
        return EXIT_USAGE
    except BilistError as e:
        print(f"bilist: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        print(f"bilist: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
