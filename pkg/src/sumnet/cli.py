"""Command-line surface.

Four commands:

* ``structure`` -- build, validate and print incidence structures.
* ``bound``     -- capacity upper bounds for a structure and orientation.
* ``code``      -- generate, verify and export a linear network code.
* ``table``     -- capacity tables over scenario sets.

Output is deterministic byte for byte for a fixed invocation.  Errors go
to stderr with exit status 1; "no construction applies" exits with
status 3.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds as bounds_mod
from . import incidence
from . import report as report_mod
from .codes import NoApplicableCode, export_code, lift_code
from .gf import PrimeField
from .incidence import IncidenceStructure
from .instances import ALIASES, INSTANCES, get_instance
from .network import build_sum_network, export_graph
from .report import RowSpec, orient_matrix
from .verify import verify_exact, verify_random

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_CODE = 3


class CliError(Exception):
    pass


def _parse_chars(text: str) -> list[int]:
    """Parse a characteristic list; prime powers reduce to their prime."""
    chars = []
    for part in text.split(","):
        q = int(part)
        field = PrimeField.from_order(q)
        if field.p != q:
            print(f"note: field order {q} reduced to characteristic {field.p}")
        chars.append(field.p)
    return chars


def _parse_design_spec(text: str) -> tuple[IncidenceStructure, str]:
    """Resolve a 't-v-k-lam' design spec to a built-in construction."""
    try:
        t, v, k, lam = (int(x) for x in text.split("-"))
    except ValueError as exc:
        raise CliError(f"bad design spec {text!r}; expected t-v-k-lam") from exc
    if t == 2 and k == 3 and lam == 1:
        return incidence.steiner_triple(v), f"2-({v},3,1)"
    struct = incidence.all_subsets_design(v, k)
    params = incidence.validate_design(struct, t)
    if params is None or params.lam != lam:
        raise CliError(
            f"no built-in construction for a {t}-({v},{k},{lam}) design; "
            "supply a structure file instead"
        )
    return struct, f"{t}-({v},{k},{lam})"


def _resolve_source(spec: str) -> tuple[IncidenceStructure, str, str]:
    """Resolve a structure source string to (structure, family, label).

    Accepts instance names (k2, triangle, fig3, fig4a, star-composite,
    fig6, fano), ``sts:V``, ``complete:N``, ``higher:t-v-k-lam``, and
    ``file:PATH`` / ``blocks:PATH``.
    """
    if spec in INSTANCES or spec in ALIASES:
        inst = get_instance(spec)
        return inst.build(), inst.family, inst.name
    head, _, arg = spec.partition(":")
    if head == "sts":
        v = int(arg)
        return incidence.steiner_triple(v), "bibd", f"sts-{v}"
    if head == "complete":
        n = int(arg)
        return incidence.complete_graph(n), "graph", f"k{n}"
    if head == "higher":
        base, label = _parse_design_spec(arg)
        return incidence.higher_incidence(base), "higher", f"higher({label})"
    if head == "design":
        struct, label = _parse_design_spec(arg)
        return struct, "tdesign", label
    if head in ("file", "blocks"):
        text = Path(arg).read_text()
        parse = incidence.parse_matrix_text if head == "file" else incidence.parse_blocks_text
        struct = parse(text)
        family = _detect_family(struct)
        return struct, family, Path(arg).name
    raise CliError(f"cannot resolve structure source {spec!r}")


def _detect_family(struct: IncidenceStructure) -> str:
    if all(len(b) == 2 for b in struct.blocks):
        return "graph"
    params = incidence.validate_design(struct, 2)
    if params is not None:
        return "bibd" if params.lam == 1 else "tdesign"
    return ""


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--k2", action="store_true", help="single-edge graph")
    group.add_argument("--triangle", action="store_true", help="triangle graph")
    group.add_argument("--fano", action="store_true", help="Fano plane")
    group.add_argument("--graph", metavar="NAME",
                       help="named graph: k2, triangle, fig3, fig4a, star-composite, fig6")
    group.add_argument("--sts", type=int, metavar="V", help="Steiner triple system on V points")
    group.add_argument("--complete", type=int, metavar="N", help="complete graph on N vertices")
    group.add_argument("--higher", metavar="T-V-K-L",
                       help="subset-vs-block structure of a t-(v,k,lam) design")
    group.add_argument("--design", metavar="T-V-K-L", help="a t-(v,k,lam) design itself")
    group.add_argument("--file", metavar="PATH", help="incidence matrix file")
    group.add_argument("--blocks", metavar="PATH", help="block-list file")
    orient = parser.add_mutually_exclusive_group()
    orient.add_argument("--normal", action="store_true", help="row orientation (default)")
    orient.add_argument("--transpose", action="store_true", help="column orientation")


def _instance_from_flags(args) -> tuple[IncidenceStructure, str, str]:
    if args.k2:
        return _resolve_source("k2")
    if args.triangle:
        return _resolve_source("triangle")
    if args.fano:
        return _resolve_source("fano")
    if args.graph:
        struct, family, label = _resolve_source(args.graph)
        if family != "graph":
            raise CliError(f"{args.graph!r} is not a graph instance")
        return struct, family, label
    if args.sts:
        return _resolve_source(f"sts:{args.sts}")
    if args.complete:
        return _resolve_source(f"complete:{args.complete}")
    if args.higher:
        return _resolve_source(f"higher:{args.higher}")
    if args.design:
        return _resolve_source(f"design:{args.design}")
    if args.file:
        return _resolve_source(f"file:{args.file}")
    return _resolve_source(f"blocks:{args.blocks}")


def _orientation(args) -> str:
    return "transpose" if args.transpose else "normal"


# ---------------------------------------------------------------------------
# structure


def cmd_structure(args) -> int:
    if args.what == "graph":
        if args.arg and args.edges:
            raise CliError("give either a named graph or --edges, not both")
        if args.arg:
            struct, family, label = _resolve_source(args.arg)
            if family != "graph":
                raise CliError(f"{args.arg!r} is not a graph")
        else:
            if not (args.vertices and args.edges):
                raise CliError("graph needs a name or --vertices N --edges u-v,...")
            edges = []
            for part in args.edges.split(","):
                u, _, v = part.partition("-")
                edges.append((int(u), int(v)))
            struct = incidence.from_graph(args.vertices, edges)
    elif args.what == "fano":
        struct = incidence.fano()
    elif args.what == "sts":
        if not args.arg:
            raise CliError("sts needs the number of points")
        struct = incidence.steiner_triple(int(args.arg))
    elif args.what == "complete":
        if not args.arg:
            raise CliError("complete needs the number of vertices")
        struct = incidence.complete_graph(int(args.arg))
    elif args.what == "star-composite":
        struct = incidence.star_composite()
    elif args.what == "higher":
        if not args.arg:
            raise CliError("higher needs a design spec or source")
        base, _, _ = _resolve_source(
            args.arg if ":" in args.arg or args.arg in INSTANCES or args.arg in ALIASES
            else f"design:{args.arg}"
        )
        struct = incidence.higher_incidence(base)
    elif args.what == "transpose":
        if not args.arg:
            raise CliError("transpose needs a source structure")
        base, _, _ = _resolve_source(args.arg)
        struct = base.transpose()
    elif args.what == "from-file":
        if not args.arg:
            raise CliError("from-file needs a path")
        struct, _, _ = _resolve_source(f"file:{args.arg}")
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown structure subcommand {args.what!r}")

    if args.validate is not None:
        if args.validate == 0:
            params = incidence.detect_design(struct)
        else:
            params = incidence.validate_design(struct, args.validate)
        if params is None:
            print(f"not a design ({struct.num_points} points, {struct.num_blocks} blocks)")
            return EXIT_ERROR
        print(params)
        return EXIT_OK
    if args.network:
        a = struct.matrix.transpose() if args.transpose else struct.matrix
        net = build_sum_network(a, args.alpha)
        sys.stdout.write(export_graph(net))
        return EXIT_OK
    if args.as_blocks:
        sys.stdout.write(incidence.render_blocks_text(struct))
    else:
        sys.stdout.write(incidence.render_matrix_text(struct))
    return EXIT_OK


# ---------------------------------------------------------------------------
# bound


def _format_bound(result: bounds_mod.BoundResult) -> str:
    if result.via == "rank":
        return f"rank {result.bound} (t={result.rank_defect})"
    if result.via.startswith("subset"):
        s = ",".join(map(str, result.subset))
        out = f"subset {result.bound} (S={{{s}}}"
        if result.closure:
            out += f", S''={{{','.join(map(str, result.closure))}}}"
        out += f", x_S={result.x_s})"
        if result.note:
            out += f" [{result.note}]"
        return out
    kind = result.via.split(":", 1)[1]
    if not result.applicable:
        return f"family {kind}: {result.note}"
    out = f"family {kind} {result.bound}"
    if result.note:
        out += f" ({result.note})"
    return out


def cmd_bound(args) -> int:
    struct, family, label = _instance_from_flags(args)
    orientation = _orientation(args)
    a = orient_matrix(struct, orientation)
    for p in _parse_chars(args.char):
        field = PrimeField(p)
        print(f"{label} {orientation} char {p}:")
        lines = []
        if args.max_subset_size:
            lines.append(bounds_mod.subset_bound_limited(a, field, args.max_subset_size))
        else:
            try:
                lines.append(bounds_mod.subset_bound(a, field, args.subset_limit))
            except bounds_mod.SubsetSearchRefused as exc:
                print(f"  subset: {exc}")
        lines.append(bounds_mod.rank_bound(a, field))
        kind = report_mod.family_kind(family, orientation)
        if kind is not None:
            try:
                lines.append(bounds_mod.family_bound(struct, kind, field))
            except ValueError as exc:
                print(f"  family {kind}: not applicable ({exc})")
        for result in lines:
            print(f"  {_format_bound(result)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# code


def cmd_code(args) -> int:
    struct, family, label = _instance_from_flags(args)
    orientation = _orientation(args)
    (p,) = _parse_chars(args.char)
    field = PrimeField(p)
    try:
        code, via = report_mod.generate_code(struct, family, orientation, field)
    except NoApplicableCode as exc:
        print(f"no construction applies for {label} {orientation} at char {p}: {exc}",
              file=sys.stderr)
        return EXIT_NO_CODE
    if args.alpha > 1:
        code = lift_code(code, args.alpha)
    net = build_sum_network(orient_matrix(struct, orientation), args.alpha)
    result = verify_exact(net, code)
    verdict = "verified" if result.ok else "FAILED"
    print(f"{label} {orientation} char {p}: construction {via}, "
          f"rate {code.rate_label()}, {verdict}")
    if args.random_trials:
        rnd = verify_random(net, code, args.random_trials, args.seed)
        print(f"  randomized cross-check: {'ok' if rnd.ok else 'FAILED'} "
              f"({rnd.trials_or_dim} trials, seed {rnd.seed})")
        if not rnd.ok:
            return EXIT_ERROR
    if args.out:
        Path(args.out).write_text(export_code(code))
        print(f"  exported to {args.out}")
    return EXIT_OK if result.ok else EXIT_ERROR


# ---------------------------------------------------------------------------
# table


def _paper_all_specs() -> list[RowSpec]:
    k2 = get_instance("k2").build()
    triangle = get_instance("triangle").build()
    fig3 = get_instance("fig3").build()
    fig4a = get_instance("fig4a").build()
    star = get_instance("star-composite").build()
    fano_s = incidence.fano()
    sts7 = incidence.steiner_triple(7)
    sts9 = incidence.steiner_triple(9)
    base432 = incidence.all_subsets_design(4, 3)
    higher432 = incidence.higher_incidence(base432)
    specs = []
    specs += [RowSpec("k2", k2, "graph", "normal", p) for p in (2, 3, 5)]
    specs += [RowSpec("k2", k2, "graph", "transpose", p) for p in (2, 3)]
    specs += [RowSpec("triangle", triangle, "graph", "normal", p) for p in (2, 3)]
    specs += [RowSpec("fano", fano_s, "bibd", "normal", p) for p in (2, 3)]
    specs += [RowSpec("fano", fano_s, "bibd", "transpose", p) for p in (2, 3)]
    specs.append(RowSpec("fig3", fig3, "graph", "transpose", 3))
    specs += [RowSpec("fig4a", fig4a, "graph", "normal", p) for p in (2, 3, 5)]
    specs += [RowSpec("fig4a", fig4a, "graph", "transpose", p) for p in (2, 3)]
    specs += [RowSpec("star-composite", star, "graph", "transpose", p) for p in (2, 3, 5)]
    specs += [RowSpec("sts-7", sts7, "bibd", "normal", p) for p in (2, 3, 5)]
    specs += [RowSpec("sts-9", sts9, "bibd", "normal", p) for p in (2, 3, 5)]
    specs += [RowSpec("higher(2-(4,3,2))", higher432, "higher", "normal", p) for p in (2, 3)]
    specs += [RowSpec("higher(2-(4,3,2))", higher432, "higher", "transpose", p) for p in (2, 3)]
    specs.append(RowSpec("2-(4,3,2)", base432, "tdesign", "normal", 2))
    specs.append(RowSpec("2-(4,3,2)", base432, "tdesign", "transpose", 2))
    specs.append(RowSpec("2-(4,3,2)", base432, "tdesign", "transpose", 5))
    return specs


def cmd_table(args) -> int:
    if args.scenario == "paper-all":
        specs = _paper_all_specs()
    elif args.scenario == "sts":
        if not (args.v and args.char):
            raise CliError("table sts needs --v and --char")
        specs = []
        for v in (int(x) for x in args.v.split(",")):
            struct = incidence.steiner_triple(v)
            for p in _parse_chars(args.char):
                specs.append(RowSpec(f"sts-{v}", struct, "bibd", "normal", p))
    elif args.scenario == "higher":
        if not (args.design and args.char):
            raise CliError("table higher needs --design and --char")
        base, label = _parse_design_spec(args.design)
        struct = incidence.higher_incidence(base)
        specs = []
        for p in _parse_chars(args.char):
            specs.append(RowSpec(f"higher({label})", struct, "higher", "normal", p))
            specs.append(RowSpec(f"higher({label})", struct, "higher", "transpose", p))
    elif args.scenario == "higher-family":
        ts = [int(x) for x in (args.t or "2,3").split(",")]
        print("capacity of subset-vs-block networks on t-(v,t+1,(t+1)!^(2t+1)) designs")
        print("(characteristic not dividing t; value independent of v; nothing is built)")
        for t in ts:
            lam, cap = report_mod.higher_family_capacity(t)
            print(f"  t={t}: lam={lam}, capacity {cap}")
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown scenario {args.scenario!r}")
    rows = report_mod.capacity_table(specs)
    if args.structured:
        sys.stdout.write(report_mod.render_table_jsonl(rows))
    else:
        sys.stdout.write(report_mod.render_table_text(rows))
    bad = [r for r in rows if r.note.startswith("error")]
    return EXIT_ERROR if bad else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumnet",
        description="sum-networks from incidence structures: construction, "
        "capacity bounds, codes, verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("structure", help="build and print incidence structures")
    ps.add_argument("what", choices=["graph", "fano", "sts", "complete",
                                     "star-composite", "higher", "transpose", "from-file"])
    ps.add_argument("arg", nargs="?", help="subcommand argument (size, name, spec, or path)")
    ps.add_argument("--vertices", type=int, help="vertex count for --edges")
    ps.add_argument("--edges", help="edge list u-v,u-v,... for graph")
    ps.add_argument("--validate", type=int, nargs="?", const=0, default=None,
                    metavar="T", help="validate as a t-design (omit T to autodetect)")
    ps.add_argument("--blocks", dest="as_blocks", action="store_true",
                    help="print in block-list format")
    ps.add_argument("--network", action="store_true",
                    help="print the constructed sum-network instead")
    ps.add_argument("--transpose", action="store_true",
                    help="with --network: build from the transposed matrix")
    ps.add_argument("--alpha", type=int, default=1, help="edge multiplicity (default 1)")
    ps.set_defaults(func=cmd_structure)

    pb = sub.add_parser("bound", help="capacity upper bounds")
    _add_instance_flags(pb)
    pb.add_argument("--char", required=True, help="characteristics, comma separated")
    pb.add_argument("--subset-limit", type=int, default=20,
                    help="max r for exact subset enumeration (default 20)")
    pb.add_argument("--max-subset-size", type=int, default=0, metavar="K",
                    help="bounded search over |S| <= K instead of the exact minimum")
    pb.set_defaults(func=cmd_bound)

    pc = sub.add_parser("code", help="generate, verify and export a network code")
    _add_instance_flags(pc)
    pc.add_argument("--char", required=True, help="single characteristic")
    pc.add_argument("--alpha", type=int, default=1, help="lift to alpha parallel edges")
    pc.add_argument("--out", help="write the code file here")
    pc.add_argument("--random-trials", type=int, default=0,
                    help="extra randomized cross-check trials")
    pc.add_argument("--seed", type=int, default=1, help="seed for the cross-check")
    pc.set_defaults(func=cmd_code)

    pt = sub.add_parser("table", help="capacity tables")
    pt.add_argument("scenario", choices=["paper-all", "sts", "higher", "higher-family"])
    pt.add_argument("--v", help="sts: point counts, comma separated")
    pt.add_argument("--char", help="characteristics, comma separated")
    pt.add_argument("--design", help="higher: base design spec t-v-k-lam")
    pt.add_argument("--t", help="higher-family: t values, comma separated")
    pt.add_argument("--structured", action="store_true", help="one JSON record per row")
    pt.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
