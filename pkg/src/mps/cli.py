"""Command line front end: ``mps <verb> [germ] [options]``.

Exit codes: 0 success, 1 a verification was refuted, 2 usage or input
error, 3 internal failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import verify as V
from .algebra import get_mode, using_mode
from .germs import GermError, catalog_names, d2_general, divided_differences, load_germ

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _basis_text(basis):
    return "{" + ", ".join(str(b) for b in basis) + "}"


def cmd_analyze(f, args):
    la = f.local_algebra
    data = {
        "germ": f.name,
        "map": f.pretty(),
        "corank": f.corank,
        "adapted": f.adapted,
        "quasihomogeneous": f.quasihomogeneous,
        "weights": {"source": list(f.source.weights), "target": list(f.target.weights)},
        "q": la.q,
        "basis": [str(b) for b in la.basis] if la.basis is not None else None,
    }
    text = f"corank {f.corank}, {'adapted' if f.adapted else 'not adapted'}, q={la.q}, basis {_basis_text(la.basis)}"
    return data, text, EXIT_OK


def cmd_presentation(f, args):
    from .presentations import check_image_equation, pushforward_presentation, symmetric_presentation

    if f.corank <= 1:
        sp = symmetric_presentation(f)
        checks = dict(sp.checks)
        checks["image_equation"] = check_image_equation(sp)
        data = {"germ": f.name, "kind": "symmetric", **sp.to_json(), "checks": checks}
        lines = [f"Lambda for {f.name} (generators {', '.join(str(g) for g in sp.G)}):", sp.matrix.pretty()]
        lines += [f"  {k}: {'ok' if v else 'FAILED'}" for k, v in sorted(checks.items())]
        code = EXIT_OK if all(checks.values()) else EXIT_REFUTED
        return data, "\n".join(lines), code
    pf = pushforward_presentation(f)
    data = {
        "germ": f.name,
        "kind": "free_base",
        "matrix": pf.matrix.to_strings(),
        "generators": [str(g) for g in pf.generators],
        "dropped": pf.dropped,
        "full_rank": pf.full_rank,
    }
    lines = [f"presentation of f_*O for {f.name} over the target, free over all but {pf.dropped}"
             f" (rank {pf.full_rank}, pruned to {len(pf.generators)} generators"
             f" {', '.join(str(g) for g in pf.generators)}):", pf.matrix.pretty()]
    return data, "\n".join(lines), EXIT_OK


def cmd_dk(f, args):
    k = args.k
    if f.corank <= 1:
        S = divided_differences(f, k)
    elif k == 2:
        S = d2_general(f)
    else:
        raise UsageError(f"D^{k} is only defined here for corank 1 (or k = 2); {f.name} has corank {f.corank}")
    gens = [str(g) for g in S.ideal.gens]
    dim = S.dimension
    data = {"germ": f.name, "k": k, "ring": list(S.ring.names), "generators": gens, "dimension": dim,
            "expected_dimension": S.expected_dim, "empty": S.empty}
    shown = ", ".join(f'"{g}"' for g in gens) or "none"
    text = f"I_{k}({f.name}) generators {shown}; dim {dim if dim >= 0 else 'empty'}"
    return data, text, EXIT_OK


def cmd_fitting(f, args):
    from .presentations import pushforward_presentation, symmetric_presentation

    top = args.i if args.i is not None else f.q
    if f.corank <= 1:
        L = symmetric_presentation(f).matrix
    else:
        L = pushforward_presentation(f).matrix
    P = V.d2_over_source(f)
    tgt = {i: [str(g) for g in L.fitting_ideal(i).gens] for i in range(top + 1)}
    d2 = {i: [str(g) for g in P.fitting_ideal(i).gens] for i in range(top + 1)}
    data = {"germ": f.name, "target": {str(i): v for i, v in tgt.items()},
            "d2_over_source": {str(i): v for i, v in d2.items()}}
    lines = [f"Fitting ideals of f_*O ({f.name}) on the target:"]
    lines += [f"  Fitt_{i} = ({', '.join(v) or '0'})" for i, v in tgt.items()]
    lines.append("Fitting ideals of (pi^2_1)_* O_D2 over the source:")
    lines += [f"  Fitt_{i} = ({', '.join(v) or '0'})" for i, v in d2.items()]
    return data, "\n".join(lines), EXIT_OK


def _report_text(reports):
    lines = []
    for r in reports:
        lines.append(f"{r.summary()}  [{r.wall_ms} ms]")
        for e in r.evidence:
            if e.expected is None:
                tag = "equal" if e.equal else "unequal"
            else:
                tag = "ok" if e.holds else "FAILED"
            w = f" (witness {e.witness})" if e.witness is not None else ""
            lines.append(f"  {e.check}: {tag}{w}")
    return "\n".join(lines)


def cmd_verify(f_or_names, args):
    names = f_or_names
    reports = []
    for g in names:
        reports.extend(V.run_suite(g, args.suite, jobs=args.jobs))
    data = [r.to_json() for r in reports]
    code = EXIT_REFUTED if V.any_refuted(reports) else EXIT_OK
    return data, _report_text(reports), code


def cmd_catalog(args):
    rows = []
    for n in catalog_names():
        f = load_germ(n)
        rows.append({"name": n, "map": f.pretty(), "corank": f.corank, "tags": sorted(f.tags),
                     "unfolds": list(f.unfolds)})
    text = "\n".join(f"{r['name']:10s} corank {r['corank']}  {r['map']}" for r in rows)
    return rows, text, EXIT_OK


def cmd_report(args):
    reports = []
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read report {path}: {exc}") from exc
        items = data if isinstance(data, list) else [data]
        for d in items:
            if not isinstance(d, dict) or "claim" not in d:
                raise UsageError(f"{path}: not a verification report")
            reports.append(V.VerificationReport.from_json(d))
    counts = {s: 0 for s in V.STATUSES}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    data = {"reports": [r.to_json() for r in reports], "counts": counts}
    text = _report_text(reports) + "\n" + ", ".join(f"{k}: {v}" for k, v in counts.items())
    return data, text, EXIT_REFUTED if V.any_refuted(reports) else EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand's defaults from overwriting options given before the verb
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--mode", choices=("local", "global"), default=argparse.SUPPRESS,
                        help="ideal comparisons at the origin (local) or globally; default from MPS_MODE")
    common.add_argument("--global", dest="global_mode", action="store_true", default=argparse.SUPPRESS,
                        help="shorthand for --mode global")

    p = argparse.ArgumentParser(prog="mps", description="Multiple point spaces of map-germs", parents=[common])
    sub = p.add_subparsers(dest="verb", required=True)

    def germ_cmd(name, help_):
        s = sub.add_parser(name, help=help_, parents=[common])
        s.add_argument("germ", help="catalog name or germ file")
        return s

    germ_cmd("analyze", "corank, adaptedness, q(f) and a basis of Q(f)")
    germ_cmd("presentation", "presentation of f_*O over the target with invariant checks")
    s = germ_cmd("dk", "ideal and dimension of D^k")
    s.add_argument("--k", type=int, required=True)
    s = germ_cmd("fitting", "Fitting chains of f_*O and of O_D2")
    s.add_argument("--i", type=int, default=None)
    s = sub.add_parser("verify", help="run the verification suite", parents=[common])
    s.add_argument("germ", nargs="+", help="catalog names or germ files ('all' for the catalog)")
    s.add_argument("--suite", choices=("default", "long"), default="default")
    s.add_argument("--jobs", type=int, default=1)
    sub.add_parser("catalog", help="list the built-in germs", parents=[common])
    s = sub.add_parser("report", help="aggregate saved JSON reports", parents=[common])
    s.add_argument("files", nargs="+")
    return p


def _validate(args):
    if getattr(args, "k", None) is not None and args.k < 1:
        raise UsageError("--k must be at least 1")
    if getattr(args, "i", None) is not None and args.i < 0:
        raise UsageError("--i must be non-negative")
    if getattr(args, "jobs", 1) < 1:
        raise UsageError("--jobs must be at least 1")


def dispatch(args):
    if args.verb == "catalog":
        return cmd_catalog(args)
    if args.verb == "report":
        return cmd_report(args)
    if args.verb == "verify":
        names = []
        for g in args.germ:
            if g == "all":
                names.extend(catalog_names())
            else:
                load_germ(g)
                names.append(g)
        return cmd_verify(names, args)
    f = load_germ(args.germ)
    return {"analyze": cmd_analyze, "presentation": cmd_presentation, "dk": cmd_dk, "fitting": cmd_fitting}[
        args.verb
    ](f, args)


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _validate(args)
        mode = "global" if getattr(args, "global_mode", False) else getattr(args, "mode", get_mode())
        with using_mode(mode):
            data, text, code = dispatch(args)
    except (UsageError, GermError, FileNotFoundError) as exc:
        print(f"mps: {exc}", file=err)
        return EXIT_USAGE
    except V.OutOfRange as exc:
        print(f"mps: {exc}", file=err)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        print(f"mps: internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INTERNAL
    if getattr(args, "output", "text") == "json":
        print(V.dumps(data), file=out)
    else:
        print(text, file=out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
