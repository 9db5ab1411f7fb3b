"""``mectest`` command line.

Exit codes: 0 success (or member), 3 non-member, 2 invalid input, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as gio
from .adversary import NoUndirectedEdge, QUERY_GUARD, hard_instance, sandwich_report
from .bench import benchmark, default_configs, rows_to_csv, rows_to_json
from .dsep import Oracle
from .generators import FAMILIES, GenConfig, generate
from .graphs import GraphError
from .mec import EssentialGraph, essential_graph, validate_cpdag
from .polytope import associahedron_dot, build_associahedron, compare_edgewalk_with_class_ii
from .tester import run_membership_test

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_NON_MEMBER = 3


class InputError(Exception):
    pass


def load_mec(path, kind: str = "auto") -> EssentialGraph:
    """Read a class given either by a representative DAG or by its CPDAG.

    In ``auto`` mode a file with only arcs is read as a DAG (a fully directed
    CPDAG is its own DAG's essential graph, so nothing is lost).
    """
    try:
        p = gio.read_pdag(path)
        if kind == "dag" or (kind == "auto" and not p.undirected):
            return essential_graph(gio.read_dag(path))
        return validate_cpdag(p)
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_dag(path):
    try:
        return gio.read_dag(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(args, text: str = "", data=None):
    if args.quiet:
        return
    if args.format == "json" and data is not None:
        print(json.dumps(data, indent=2))
    elif text:
        print(text, end="" if text.endswith("\n") else "\n")


def cmd_essential(args) -> int:
    e = load_mec(args.dag, "dag")
    if args.output:
        Path(args.output).write_text(gio.to_text(e.pdag))
    if args.dot:
        Path(args.dot).write_text(gio.to_dot(e.pdag, "essential"))
    data = {"cpdag": gio.to_text(e.pdag), "stats": e.stats().to_json()}
    _emit(args, gio.to_text(e.pdag), data)
    return EXIT_OK


def cmd_test(args) -> int:
    e = load_mec(args.mec, args.mec_kind)
    hidden = load_dag(args.hidden)
    if hidden.n != e.n:
        raise InputError(f"node-count mismatch: class has {e.n} nodes, hidden graph {hidden.n}")
    log = open(args.log_queries, "w") if args.log_queries else None
    try:
        report = run_membership_test(e, Oracle(hidden, log=log), exhaustive=args.exhaustive)
    finally:
        if log:
            log.close()
    if args.json:
        args.format = "json"
    if report.verdict:
        text = f"member ({report.queries_issued} queries)"
    else:
        f = report.failing_query
        exp = "independent" if f.expected_independent else "dependent"
        text = f"non-member: {f.tag} test {f.query} expected {exp} ({report.queries_issued} queries)"
    _emit(args, text, report.to_json())
    return EXIT_OK if report.verdict else EXIT_NON_MEMBER


def cmd_adversary(args) -> int:
    e = load_mec(args.mec, args.mec_kind)
    try:
        inst = hard_instance(e)
    except NoUndirectedEdge as exc:
        raise InputError(str(exc)) from None
    if args.emit_hidden:
        Path(args.emit_hidden).write_text(gio.to_text(inst.h))
    data = inst.to_json()
    data["representative"] = gio.to_text(inst.g)
    data["hidden"] = gio.to_text(inst.h)
    if args.verify:
        if e.n <= QUERY_GUARD:
            rep = sandwich_report(inst.h, inst.g, (inst.i, inst.j))
            data["verify"] = {
                "sandwich_holds": rep.holds,
                "distinguishing_queries": rep.queries,
                "upper_bound_attained": rep.upper_equality,
            }
        else:
            data["verify"] = {"skipped": f"n > {QUERY_GUARD}"}
    S = ",".join(str(v + 1) for v in inst.S)
    K = ",".join(str(v + 1) for v in sorted(inst.K))
    text = (
        f"remove {inst.i + 1} -> {inst.j + 1} from the representative; S = {{{S}}}, K = {{{K}}}, "
        f"worst case {inst.worst_case_count} tests"
    )
    if "verify" in data:
        text += f"\nverify: {data['verify']}"
    _emit(args, text, data)
    return EXIT_OK


def cmd_polytope(args) -> int:
    h = load_dag(args.hidden)
    try:
        A = build_associahedron(h)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.dot:
        Path(args.dot).write_text(associahedron_dot(A))
    if args.json:
        args.format = "json"
    data = A.to_json()
    if args.edgewalk:
        data["edgewalk"] = compare_edgewalk_with_class_ii(load_dag(args.edgewalk), h)
    lines = [f"{len(A.vertices)} vertices, {len(A.adjacency)} edges, {len(A.contracted)} contracted"]
    for k in A.sparsest:
        es = ", ".join(f"{a + 1}->{b + 1}" for a, b in sorted(A.vertices[k].imap.edges))
        lines.append(f"sparsest vertex {k}: [{es}]")
    if "edgewalk" in data:
        lines.append(f"edgewalk: {data['edgewalk']}")
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else 0
    try:
        g = generate(GenConfig(n=args.n, p=args.p, seed=seed, family=args.family))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = gio.to_text(g)
    if args.output:
        Path(args.output).write_text(text)
    _emit(args, text, {"n": g.n, "edges": sorted([a + 1, b + 1] for a, b in g.edges)})
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else 0
    sizes = tuple(int(x) for x in args.sizes.split(","))
    rows = benchmark(default_configs(seed, sizes, args.per_size, args.p), jobs=args.jobs)
    if args.format == "json":
        out = json.dumps(rows_to_json(rows), indent=2) + "\n"
    else:
        out = rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(out)
    elif not args.quiet:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_validate(args) -> int:
    e = load_mec(args.cpdag, "cpdag")
    _emit(args, "valid essential graph; " + json.dumps(e.stats().to_json()), e.stats().to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def common(suppress):
        # subcommands repeat the global flags; SUPPRESS keeps them from clobbering values given earlier
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else None)
        c.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS if suppress else "text")
        c.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False)
        return c

    parser = argparse.ArgumentParser(
        prog="mectest",
        description="Test membership of a hidden DAG in a Markov equivalence class.",
        parents=[common(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub_common = common(True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help, parents=[sub_common])
        p.set_defaults(func=func)
        return p

    p = add("essential", cmd_essential, "DAG file -> CPDAG")
    p.add_argument("dag")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--dot", default=None)

    p = add("test", cmd_test, "run the membership test")
    p.add_argument("--mec", required=True)
    p.add_argument("--hidden", required=True)
    p.add_argument("--mec-kind", choices=("auto", "dag", "cpdag"), default="auto")
    p.add_argument("--exhaustive", action="store_true", default=False)
    p.add_argument("--json", action="store_true", default=False)
    p.add_argument("--log-queries", default=None, help="write every oracle query as a JSON line")

    p = add("adversary", cmd_adversary, "build the one-edge-short hard instance")
    p.add_argument("--mec", required=True)
    p.add_argument("--mec-kind", choices=("auto", "dag", "cpdag"), default="auto")
    p.add_argument("--emit-hidden", default=None)
    p.add_argument("--verify", action="store_true", default=False)

    p = add("polytope", cmd_polytope, "DAG associahedron of a small hidden DAG")
    p.add_argument("--hidden", required=True)
    p.add_argument("--dot", default=None)
    p.add_argument("--json", action="store_true", default=False)
    p.add_argument("--edgewalk", default=None, metavar="START_DAG", help="compare edgewalk sparsification from START_DAG with the class-II plan")

    p = add("gen", cmd_gen, "write a generated DAG")
    p.add_argument("--family", choices=FAMILIES, default="erdos-ordered")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("-o", "--output", default=None)

    p = add("bench", cmd_bench, "tester vs learner query counts")
    p.add_argument("--sizes", default="6,8,10")
    p.add_argument("--per-size", type=int, default=3)
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", default=None)

    p = add("validate", cmd_validate, "validate a CPDAG file")
    p.add_argument("cpdag")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"mectest: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GraphError as exc:
        print(f"mectest: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"mectest: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
