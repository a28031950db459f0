"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 a search cap
was exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bicomplex as bx
from .dimension import PLAIN, cylinder_k0_oracle, decompose_ds, dimension_group
from .errors import CapExceeded, InputError, SignConventionFailure, VerificationFailure
from .homology import check_abutment, spectral_sequence
from .presentations import check_symbolic_presentation, cylinder_partition, factor_code_mu
from .serialize import (
    describe_group,
    dumps,
    graph_from_json,
    group_to_json,
    harness_options,
    load_document,
    pair_from_json,
)
from .sft import irreducible_decomposition

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class Report:
    """Collects text lines and a JSON mirror; one of them is printed."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines = []
        self.data = {}
        self.failed = False

    def line(self, text: str) -> None:
        self.lines.append(text)

    def check(self, name: str, ok: bool, detail=None) -> None:
        self.line(f"{'PASS' if ok else 'FAIL'} {name}" + (f"  {_compact(detail)}" if detail and not ok else ""))
        entry = {"name": name, "status": "PASS" if ok else "FAIL"}
        if detail:
            entry["detail"] = detail
        self.data.setdefault("checks", []).append(entry)
        self.failed |= not ok

    def emit(self, out) -> None:
        if self.fmt == "json":
            out.write(dumps(self.data) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def _compact(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str, separators=(",", ":"))


def _window(text: str) -> tuple:
    try:
        a, b = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like a:b")
    if a > b:
        raise argparse.ArgumentTypeError("window must have a <= b")
    return a, b


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _graph(doc: dict):
    return graph_from_json(doc.get("graph", doc) if isinstance(doc, dict) else doc)


# --------------------------------------------------------------------------
# commands


def cmd_dim_group(args, rep: Report) -> None:
    g = _graph(load_document(args.input))
    G = dimension_group(g)
    rep.line(describe_group(G))
    rep.data["group"] = group_to_json(G)
    rank, tors = G.limit_invariants()
    rep.line(f"limit: rank {rank}, torsion {list(tors)}")
    rep.data["limit"] = {"rank": rank, "torsion": list(tors)}
    if args.oracle:
        res = cylinder_k0_oracle(g, args.oracle)
        rep.check(f"cylinder oracle depth {args.oracle}", res.bijective,
                  None if res.bijective else {"witness": res.witness})


def cmd_oracle(args, rep: Report) -> None:
    g = _graph(load_document(args.input))
    res = cylinder_k0_oracle(g, args.depth)
    rep.line(f"generators {len(res.generators)}, relations {len(res.relations)}")
    rep.line(f"group: rank {res.rank}, torsion {list(res.torsion)}")
    rep.data.update(depth=res.depth, rank=res.rank, torsion=list(res.torsion),
                    convention=PLAIN)
    rep.check("well defined", res.well_defined)
    rep.check(f"injective on depth <= {args.depth - 1}", res.injective)
    rep.check(f"surjective on depth <= {args.depth - 1}", res.surjective,
              None if res.surjective else {"witness": res.witness})


def cmd_decompose(args, rep: Report) -> None:
    g = _graph(load_document(args.input))
    dec = irreducible_decomposition(g)
    pieces = decompose_ds(g)
    rep.data["components"] = [[str(v) for v in c] for c in dec.components]
    rep.data["alpha"] = dec.alpha
    rep.data["periods"] = dec.periods
    rep.data["summands"] = [group_to_json(G) for G in pieces]
    for i, (c, G) in enumerate(zip(dec.components, pieces)):
        rank, tors = G.limit_invariants()
        rep.line(f"piece {i}: vertices {[str(v) for v in c]}, period {dec.periods[i]}, "
                 f"-> {dec.alpha[i]}; {describe_group(G)}; limit rank {rank}")


def cmd_homology(args, rep: Report) -> None:
    doc = load_document(args.input)
    spec = pair_from_json(doc)
    res = bx.homology_smale(spec, args.window, args.trunc, args.depth_cap)
    b = res.bounds
    rep.line(f"bounds: N_Q={b.N_Q} N_A={b.N_A} ({'certified' if b.certified else 'empirical'})")
    rep.data["bounds"] = b.as_dict()
    rep.data["homology"] = {}
    for N, h in sorted(res.groups.items()):
        G = h.group
        rep.data["homology"][str(N)] = group_to_json(G)
        rep.line(f"H_{N}: " + ("0" if G.n == 0 else describe_group(G)))


def _verify(spec, T: int, depth_cap: int, seed, corrupt: bool, window, rep: Report) -> None:
    sign = bx.CORRUPT if corrupt else bx.STANDARD
    bcs = {}
    try:
        for v in bx.VARIANTS:
            bcs[v] = bx.build_bicomplex(spec, T, v, depth_cap, sign=sign)
    except SignConventionFailure as exc:
        rep.check("anticommutation", False, {"error": str(exc), "witness": exc.witness})
        c = bx.total_square_check(bx.build_bicomplex(spec, T, "C", depth_cap, sign=sign, check=False))
        rep.check(c.name, c.ok, c.detail)
        return
    rep.check("anticommutation", True)
    for v, bc in bcs.items():
        c = bx.total_square_check(bc)
        rep.check(c.name, c.ok, c.detail)
    bounds = bx.discover_bounds(spec, max(T, 2), depth_cap)
    rep.data["bounds"] = bounds.as_dict()
    if T < max(bounds.N_A, bounds.N_Q) + 2:
        rep.line(f"note: truncation {T} is below bounds + 2; fewer degrees are safe")
    report = bx.verify_quasi_isos(spec, T, window, depth_cap, bounds, seed)
    for c in report.checks:
        rep.check(c.name, c.ok, c.detail or None)
    for M in range(min(2, T)):
        d = bx.verify_dc_acyclic(spec, M, T, depth_cap)
        detail = None if d.ok else {"failing_degree": d.failing_degree,
                                    "levels": [(x.degree, x.level) for x in d.levels if not x.ok]}
        rep.check(f"degenerate row {M} acyclic", d.ok, detail)
    for v in ("QA", "A"):
        tot = bx.total_complex(bcs[v])
        for label, fc in (("vertical", tot.vertical_filtration()),
                          ("horizontal", tot.horizontal_filtration())):
            ss = spectral_sequence(fc)
            rep.check(f"{v} {label} pages coherent", all(ss.coherent.values()),
                      None if all(ss.coherent.values()) else {"failures": ss.failures[:5]})
            ab = check_abutment(ss)
            rep.check(f"{v} {label} abutment", ab.ok, None if ab.ok else {"mismatches": ab.mismatches[:5]})


def cmd_verify(args, rep: Report) -> None:
    doc = load_document(args.input)
    spec = pair_from_json(doc)
    corrupt = bool(harness_options(doc).get("corrupt_sign", False))
    _verify(spec, args.trunc, args.depth_cap, args.seed, corrupt, args.window, rep)


def cmd_pages(args, rep: Report) -> None:
    doc = load_document(args.input)
    spec = pair_from_json(doc)
    bc = bx.build_bicomplex(spec, args.trunc, args.variant, args.depth_cap)
    tot = bx.total_complex(bc)
    fc = tot.vertical_filtration() if args.filtration == "vertical" else tot.horizontal_filtration()
    ss = spectral_sequence(fc)
    rep.data.update(variant=args.variant, filtration=args.filtration, r_star=ss.r_star,
                    coherent=all(ss.coherent.values()), pages={})
    rep.line(f"variant {args.variant}, {args.filtration} filtration, stabilises at r={ss.r_star}")
    for r, page in sorted(ss.pages.items()):
        dump = {}
        for (p, q), e in sorted(page.items()):
            G = e.group
            if G.n:
                dump[f"{p},{q}"] = {"rank": G.rank, "torsion": list(G.torsion)}
                rep.line(f"E^{r}_({p},{q}): rank {G.rank}" + (f", torsion {list(G.torsion)}" if G.torsion else ""))
        rep.data["pages"][str(r)] = dump
    rep.check("pages coherent", all(ss.coherent.values()))


def cmd_presentations(args, rep: Report) -> None:
    g = _graph(load_document(args.input))
    P = cylinder_partition(g, args.depth)
    Q = cylinder_partition(g, args.depth + 1)
    verdict = check_symbolic_presentation(P, args.check_depth)
    rep.data["partition"] = P.as_dict()
    rep.data["verdict"] = verdict.as_dict()
    rep.line(f"{len(P.cells)} cells on window {list(P.window)}")
    rep.check(f"symbolic presentation to depth {args.check_depth}", verdict.certified,
              None if verdict.certified else verdict.as_dict())
    mu = factor_code_mu(P, Q, args.check_len)
    rep.data["mu"] = mu.as_dict()
    rep.check(f"factor code depth {args.depth + 1} -> {args.depth}, words <= {args.check_len}", True)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smalehom", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="JSON document")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--depth-cap", type=_positive, default=8)
    common.add_argument("--seed", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim-group", parents=[common], help="stable dimension group of a graph")
    p.add_argument("--oracle", type=_positive, default=None, metavar="K",
                   help="also cross-check against the cylinder oracle at depth K")
    p.set_defaults(func=cmd_dim_group)

    p = sub.add_parser("oracle", parents=[common], help="cylinder oracle comparison")
    p.add_argument("--depth", type=_positive, default=5)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("decompose", parents=[common], help="spectral decomposition")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("homology", parents=[common], help="homology of a pair spec")
    p.add_argument("--trunc", type=int, default=5, help="scan cap for the vanishing bounds")
    p.add_argument("--window", type=_window, default=(-3, 3))
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("verify", parents=[common], help="run the structural checks")
    p.add_argument("--trunc", type=_positive, default=4)
    p.add_argument("--window", type=_window, default=(-3, 3))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pages", parents=[common], help="spectral sequence pages")
    p.add_argument("--trunc", type=_positive, default=3)
    p.add_argument("--variant", choices=bx.VARIANTS, default="QA")
    p.add_argument("--filtration", choices=("vertical", "horizontal"), default="vertical")
    p.set_defaults(func=cmd_pages)

    p = sub.add_parser("presentations", parents=[common], help="cylinder partitions and factor codes")
    p.add_argument("--depth", type=_positive, default=1)
    p.add_argument("--check-depth", type=_positive, default=5)
    p.add_argument("--check-len", type=_positive, default=8)
    p.set_defaults(func=cmd_presentations)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    rep = Report(args.format)
    try:
        args.func(args, rep)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except CapExceeded as exc:
        sys.stderr.write(f"cap exhausted: {exc}\n")
        return EXIT_CAP
    except VerificationFailure as exc:
        rep.check(type(exc).__name__, False, {"error": str(exc), "witness": exc.witness})
    rep.emit(out)
    return EXIT_FAIL if rep.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
