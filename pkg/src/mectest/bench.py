"""Benchmark harness: tester versus PC-style learner query counts, as CSV rows."""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from .adversary import hard_instance
from .dsep import Oracle
from .generators import GenConfig, generate, perturb
from .graphs import max_in_degree
from .mec import essential_graph, markov_equivalent
from .pc import pc_baseline, pc_formula_reference
from .tester import run_membership_test

SCHEMA_VERSION = 1
CASES = ("member", "hard", "perturbed")


@dataclass
class BenchRow:
    instance_id: str
    case: str
    family: str
    n: int
    s: int
    d: int
    tester_queries: int
    tester_verdict: bool
    tester_correct: bool
    learner_queries: int
    learner_correct: bool
    pc_formula_reference: int


COLUMNS = [f.name for f in fields(BenchRow)]


def _rows_for(cfg: GenConfig) -> list[BenchRow]:
    hidden = generate(cfg)
    e = essential_graph(hidden)
    learned, learner_q = pc_baseline(Oracle(hidden), hidden.n)
    learner_ok = learned == e.pdag
    d = max_in_degree(hidden)
    base = f"{cfg.family}-n{cfg.n}-p{cfg.p:g}-s{cfg.seed}"
    rows = []
    cases = [("member", hidden)]
    if e.s >= 2:
        cases.append(("hard", hard_instance(e).h))
    rng = random.Random(cfg.seed)
    if hidden.n >= 2:
        cases.append(("perturbed", perturb(hidden, rng)))
    for case, h in cases:
        rep = run_membership_test(e, Oracle(h))
        rows.append(
            BenchRow(
                instance_id=f"{base}-{case}",
                case=case,
                family=cfg.family,
                n=cfg.n,
                s=e.s,
                d=d,
                tester_queries=rep.queries_issued,
                tester_verdict=rep.verdict,
                tester_correct=rep.verdict == markov_equivalent(hidden, h),
                learner_queries=learner_q,
                learner_correct=learner_ok,
                pc_formula_reference=pc_formula_reference(cfg.n, d),
            )
        )
    return rows


def benchmark(configs, jobs: int = 1) -> list[BenchRow]:
    """One row per (instance, case); sorted by instance id, so independent of ``jobs``.

    For each configuration the hidden DAG is generated, the tester is run
    against it (``member``), against the one-edge-short adversarial graph
    (``hard``, when the class has an undirected edge) and against a perturbed
    graph (``perturbed``), and the PC baseline learns the hidden DAG once.
    Every run gets a fresh oracle.
    """
    configs = list(configs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_rows_for, configs))
    else:
        chunks = [_rows_for(c) for c in configs]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: r.instance_id)
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# mectest-bench schema v{SCHEMA_VERSION}\n")
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (int(v) if isinstance(v, bool) else v) for k, v in asdict(r).items()})
    return buf.getvalue()


def rows_to_json(rows: list[BenchRow]) -> list[dict]:
    return [asdict(r) for r in rows]


def default_configs(seed: int = 0, sizes=(6, 8, 10), per_size: int = 3, p: float = 0.4) -> list[GenConfig]:
    rng = random.Random(seed)
    out = []
    for n in sizes:
        for _ in range(per_size):
            out.append(GenConfig(n=n, p=p, seed=rng.randrange(2 ** 63), family="erdos-ordered"))
        if n % 2 == 0 and n >= 4:
            out.append(GenConfig(n=n, family="matching"))
            out.append(GenConfig(n=n, family="ladder"))
    out.append(GenConfig(n=5, family="clique"))
    return out
