"""Command-line entry point.

Exit codes: ``solve`` and ``oracle`` return 10 (SAT), 20 (UNSAT), 30 (timeout)
or 1 (error); ``verify`` returns 0 (OK) or 2 (FAIL); everything else 0 or 1.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import formats
from .graph import GraphError, MulticoloredGraph, fill_violation
from .oracles import (
    OracleRefusal,
    brute_force_tcg_elimination,
    brute_force_tcmis,
    exhaustive_triangulation_count,
    four_gamete_pp,
    phylogeny_violation,
)
from .reductions.multicolor import reduce_tmg_to_tcg
from .reductions.phylogeny import reduce_pp_to_tcg
from .reductions.tcmis import (
    ReductionConfig,
    TcmisProvenance,
    build_tmg_decomposition_from_tcmis_solution,
    extract_tcmis_solution,
    reduce_tcmis_to_tmg,
)
from .solver import SolverTimeout, solve_pp, solve_tcg, solve_tmg
from .treedecomp import (
    DecompositionError,
    bag_color_clash,
    first_violation,
    treedecomp_to_triangulation,
)
from .zipper import build_zipper_gadget, canonical_gadget_triangulation

SEED_ENV = "PHYLOTRI_SEED"
EXIT = {"SAT": 10, "UNSAT": 20, "TIMEOUT": 30, "ERROR": 1}


@dataclass
class RunReport:
    verdict: str
    witness: Optional[str] = None
    wall_ms: float = 0.0
    n: int = 0
    m: int = 0
    k: int = 0
    seed: int = 0
    notes: list[str] = field(default_factory=list)


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _emit(report: RunReport, args) -> None:
    if getattr(args, "json", False):
        print(json.dumps(asdict(report), sort_keys=True))
    elif not getattr(args, "quiet", False):
        for note in report.notes:
            print(note)
        stats = f"n={report.n} m={report.m} k={report.k}"
        where = f" witness={report.witness}" if report.witness else ""
        print(f"{report.verdict} {stats} time={report.wall_ms:.1f}ms{where}")


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- solve --------------------------------------------------------------------


def _check_td(g: MulticoloredGraph, td) -> Optional[str]:
    bad = first_violation(g, td)
    if bad:
        return bad
    for i, bag in enumerate(td.bags):
        c = bag_color_clash(g, bag)
        if c is not None:
            return f"bag {i} holds color {c} twice"
    return None


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    report = RunReport("ERROR", seed=args.seed)
    text = _read(args.input)
    timeout = args.timeout_ms
    try:
        if args.kind == "pp":
            inst = formats.parse_pp(text)
            g, _ = reduce_pp_to_tcg(inst)
            report.n, report.m, report.k = g.n, len(g.edges), g.k
            tree = solve_pp(inst, memo=not args.no_memo, timeout_ms=timeout)
            if tree is None:
                report.verdict = "UNSAT"
            else:
                bad = phylogeny_violation(inst, tree)
                if bad:
                    raise DecompositionError(f"self-check failed: {bad}")
                report.witness = args.out or args.input + ".phylo"
                _write(report.witness, formats.format_phylogeny(tree))
                report.verdict = "SAT"
        else:
            g, _ = formats.parse_graph(text)
            if g.mode != args.kind:
                raise formats.FormatError(1, f"file holds a {g.mode} graph, not {args.kind}")
            report.n, report.m, report.k = g.n, len(g.edges), g.k
            solve = solve_tcg if args.kind == "tcg" else solve_tmg
            td = solve(g, memo=not args.no_memo, timeout_ms=timeout)
            if td is None:
                report.verdict = "UNSAT"
            else:
                bad = _check_td(g, td)
                if bad:
                    raise DecompositionError(f"self-check failed: {bad}")
                if args.witness == "fill":
                    fill = treedecomp_to_triangulation(g, td)
                    if fill_violation(g, fill):
                        raise DecompositionError("self-check failed on the fill")
                    body = formats.format_fill(fill)
                    suffix = ".fill"
                else:
                    body = formats.format_td(td)
                    suffix = ".td"
                report.witness = args.out or args.input + suffix
                _write(report.witness, body)
                report.verdict = "SAT"
    except SolverTimeout:
        report.verdict = "TIMEOUT"
    except (formats.FormatError, GraphError, DecompositionError) as exc:
        report.notes.append(f"error: {exc}")
        report.verdict = "ERROR"
    report.wall_ms = (time.perf_counter() - t0) * 1000
    _emit(report, args)
    return EXIT[report.verdict]


# --- reduce ---------------------------------------------------------------


def gadget_annotation(ident: str, gd) -> str:
    return (f"gadget {ident} n={gd.n} s={gd.s} head={gd.head} tail={gd.tail} "
            f"p={','.join(map(str, gd.p))} q={','.join(map(str, gd.q))}")


def tcmis_annotations(prov: TcmisProvenance) -> list[str]:
    inst = prov.original
    v_node, w_node = inst.num_nodes, inst.num_nodes + 1
    out = [
        f"source tcmis nodes {inst.num_nodes} k {inst.k}",
        f"layout {prov.layout} r {prov.r} m {prov.m} size {prov.size} middle {prov.middle}",
        f"colors allocated {prov.colors_allocated} occupied {prov.colors_occupied} d {prov.d_color}",
        f"root {prov.root} new {v_node} {w_node}",
    ]
    out += [f"hub {x} {v}" for x, v in sorted(prov.hub.items())]
    for key, gd in sorted(prov.gadgets.items()):
        out.append(gadget_annotation(f"{key[0]}.{key[1]}", gd) + f" slot={prov.slots[key]}")
    for mg in prov.merges:
        out.append(f"merge {mg.edge} {mg.first[0]} {mg.first[1]} {mg.second[0]} {mg.second[1]} "
                   f"vertex {mg.vertex} d {mg.d_vertices[0]} {mg.d_vertices[1]}")
    return out


def cmd_reduce(args) -> int:
    text = _read(args.input)
    try:
        if args.kind == "pp-to-tcg":
            inst = formats.parse_pp(text)
            g, prov = reduce_pp_to_tcg(inst)
            annots = [f"source pp species {len(inst.species)} genes {inst.num_genes}"]
            annots += [f"vertex {v} gene {gene} variant {x}" for v, (gene, x) in enumerate(prov.label)]
            lines = [f"colors: {g.num_colors} (genes: {inst.num_genes})"]
        elif args.kind == "tmg-to-tcg":
            src, _ = formats.parse_graph(text)
            g, prov = reduce_tmg_to_tcg(src)
            annots = [f"source tmg n {src.n} k {src.k}"]
            annots += [f"clique {v} " + " ".join(map(str, ms)) for v, ms in enumerate(prov.members)]
            lines = [f"vertices: {g.n} (bound n*k = {src.n * src.k})"]
        else:
            inst = formats.parse_tcmis(text)
            g, prov = reduce_tcmis_to_tmg(inst, ReductionConfig(args.layout))
            annots = tcmis_annotations(prov)
            lines = [
                f"colors allocated: {prov.colors_allocated} (49k+1 with k={inst.k})",
                f"colors occupied: {prov.colors_occupied}",
                f"gadgets: {len(prov.gadgets)} of size {prov.size}, skew {prov.r}; edges after padding: {prov.m}",
            ]
    except (formats.FormatError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(args.output, formats.format_graph(g, annots))
    if not args.quiet:
        for line in lines + [f"vertices: {g.n} edges: {len(g.edges)}"]:
            print(line, file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


# --- gadget -------------------------------------------------------------------


def cmd_gadget(args) -> int:
    try:
        gd = build_zipper_gadget(args.n, args.s)
        fill = frozenset()
        if args.offset is not None:
            fill = canonical_gadget_triangulation(gd, args.offset)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    g = gd.graph
    labels = {gd.head: "h", gd.tail: "t"}
    pos = {gd.head: (0.0, 1.0), gd.tail: (4.0 * args.n, 1.0)}
    for i, v in enumerate(gd.p, start=1):
        labels[v] = f"p{i}"
        pos[v] = (float(i), 2.0)
    for j, v in enumerate(gd.q, start=1):
        labels[v] = f"q{j}"
        pos[v] = (float(j) * (4 * args.n) / (len(gd.q) + 1), 0.0)
    annots = [gadget_annotation("0", gd)] + [f"label {v} {labels[v]}" for v in g.vertices]
    _write(args.out, formats.format_graph(g, annots))
    if args.offset is not None:
        bad = fill_violation(g, fill)
        if args.fill_out:
            _write(args.fill_out, formats.format_fill(fill))
        note = f"offset {args.offset}: {len(fill)} fill edges, verifier {'OK' if bad is None else 'FAIL'}"
        print(note, file=sys.stderr if args.out in (None, "-") else sys.stdout)
        if bad:
            return 1
    if args.dot:
        _write(args.dot, formats.gadget_dot(g, labels, fill, pos))
    return 0


# --- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        inst_text, wit_text = _read(args.instance), _read(args.witness)
        if args.kind in ("td", "fill"):
            g, _ = formats.parse_graph(inst_text)
            if args.kind == "td":
                bad = _check_td(g, formats.parse_td(wit_text))
            else:
                bad = fill_violation(g, formats.parse_fill(wit_text))
        elif args.kind == "pp":
            bad = phylogeny_violation(formats.parse_pp(inst_text), formats.parse_phylogeny(wit_text))
        else:
            inst = formats.parse_tcmis(inst_text)
            sol = formats.parse_solution(wit_text)
            bad = _tcmis_violation(inst, sol)
    except (formats.FormatError, GraphError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({"verdict": "FAIL" if bad else "OK", "reason": bad}))
    elif not args.quiet:
        print(f"FAIL: {bad}" if bad else "OK")
    return 2 if bad else 0


def _tcmis_violation(inst, sol) -> Optional[str]:
    for key, size in sorted(inst.class_sizes.items()):
        if key not in sol:
            return f"class {key} has no chosen vertex"
        if not 0 <= sol[key] < size:
            return f"class {key} chooses index {sol[key]} outside [0, {size})"
    extra = set(sol) - set(inst.class_sizes)
    if extra:
        return f"choice for unknown class {min(extra)}"
    for a, b in inst.edges:
        if sol[a[:2]] == a[2] and sol[b[:2]] == b[2]:
            return f"edge {a}-{b} has both endpoints chosen"
    return None


# --- TCMIS witnesses ---------------------------------------------------------


def cmd_tcmis_witness(args) -> int:
    try:
        inst = formats.parse_tcmis(_read(args.instance))
        sol = formats.parse_solution(_read(args.solution))
        g, prov = reduce_tcmis_to_tmg(inst, ReductionConfig(args.layout))
        td = build_tmg_decomposition_from_tcmis_solution(inst, sol, g, prov)
    except (formats.FormatError, GraphError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.graph_out:
        _write(args.graph_out, formats.format_graph(g, tcmis_annotations(prov)))
    _write(args.out, formats.format_td(td))
    return 0


def cmd_tcmis_extract(args) -> int:
    try:
        inst = formats.parse_tcmis(_read(args.instance))
        g, prov = reduce_tcmis_to_tmg(inst, ReductionConfig(args.layout))
        text = _read(args.witness)
        wit = formats.parse_td(text) if formats.sniff(text) == "td" else formats.parse_fill(text)
        sol = extract_tcmis_solution(inst, g, prov, wit)
    except (formats.FormatError, GraphError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(args.out, formats.format_solution(sol))
    return 0


# --- oracle -------------------------------------------------------------------


def cmd_oracle(args) -> int:
    t0 = time.perf_counter()
    report = RunReport("ERROR", seed=args.seed)
    text = _read(args.input)
    try:
        if args.kind == "tcg":
            g, _ = formats.parse_graph(text)
            report.n, report.m, report.k = g.n, len(g.edges), g.k
            fill = brute_force_tcg_elimination(g)
            report.verdict = "UNSAT" if fill is None else "SAT"
            if fill is not None:
                report.notes.append(f"fill: {sorted(fill)}")
        elif args.kind == "count":
            g, _ = formats.parse_graph(text)
            report.n, report.m, report.k = g.n, len(g.edges), g.k
            count = exhaustive_triangulation_count(g)
            report.notes.append(f"minimal properly colored triangulations: {count}")
            report.verdict = "SAT" if count else "UNSAT"
        elif args.kind == "tcmis":
            inst = formats.parse_tcmis(text)
            report.n, report.m, report.k = inst.num_nodes, len(inst.edges), inst.k
            sol = brute_force_tcmis(inst)
            report.verdict = "UNSAT" if sol is None else "SAT"
            if sol is not None:
                report.witness = args.out
                if args.out:
                    _write(args.out, formats.format_solution(sol))
        else:
            inst = formats.parse_pp(text)
            report.n, report.k = len(inst.species), inst.num_genes
            report.verdict = "SAT" if four_gamete_pp(inst) else "UNSAT"
    except (formats.FormatError, GraphError, OracleRefusal) as exc:
        report.notes.append(f"error: {exc}")
    report.wall_ms = (time.perf_counter() - t0) * 1000
    _emit(report, args)
    return EXIT[report.verdict]


# --- bench ------------------------------------------------------------------


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def bench_cell(seed: int, genes: int, species: int, reps: int, states: int) -> dict:
    from .generate import random_pp

    rng = random.Random(f"{seed}:{genes}:{species}:{states}")
    times, sat, sizes = [], 0, []
    for _ in range(reps):
        inst = random_pp(rng, species, genes, states)
        sizes.append(len(inst.species))
        t0 = time.perf_counter()
        tree = solve_pp(inst)
        times.append((time.perf_counter() - t0) * 1000)
        sat += tree is not None
    return {"genes": genes, "species": species, "states": states, "reps": reps,
            "median_ms": statistics.median(times), "max_ms": max(times), "sat": sat,
            "distinct_species_median": statistics.median(sizes), "status": "done"}


def run_bench(genes: list[int], species: list[int], seed: int, reps: int = 5, states: int = 2,
              jobs: int = 1, budget_s: float = 300.0) -> list[dict]:
    cells = [(k, n) for k in genes for n in species]
    rows: dict[tuple[int, int], dict] = {}
    start = time.monotonic()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {cell: pool.submit(bench_cell, seed, cell[0], cell[1], reps, states)
                    for cell in cells}
            for cell, fut in futs.items():
                left = budget_s - (time.monotonic() - start)
                try:
                    rows[cell] = fut.result(timeout=max(left, 0.0))
                except Exception:
                    fut.cancel()
    else:
        for cell in cells:
            if time.monotonic() - start > budget_s:
                break
            rows[cell] = bench_cell(seed, cell[0], cell[1], reps, states)
    out = []
    for k, n in cells:
        out.append(rows.get((k, n), {"genes": k, "species": n, "states": states, "reps": reps,
                                     "status": "skipped: budget exceeded"}))
    return out


def bench_markdown(rows: list[dict]) -> str:
    lines = ["| genes | species | median ms | max ms | SAT | status |",
             "|---|---|---|---|---|---|"]
    for r in rows:
        if r["status"] == "done":
            lines.append(f"| {r['genes']} | {r['species']} | {r['median_ms']:.2f} | "
                         f"{r['max_ms']:.2f} | {r['sat']}/{r['reps']} | done |")
        else:
            lines.append(f"| {r['genes']} | {r['species']} | - | - | - | {r['status']} |")
    if any(r["status"] != "done" for r in rows):
        lines.append("")
        lines.append("partial table: time budget exceeded")
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    rows = run_bench(_ints(args.genes), _ints(args.species), args.seed, args.reps,
                     args.states, args.jobs, args.budget_s)
    if args.rows:
        Path(args.rows).write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
    if args.json:
        print(json.dumps({"seed": args.seed, "rows": rows}, sort_keys=True))
    else:
        print(f"seed {args.seed}")
        print(bench_markdown(rows), end="")
    return 0 if all(r["status"] == "done" for r in rows) else 1


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phylotri", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed: bool = True) -> None:
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.add_argument("--quiet", action="store_true")
        if seed:
            sp.add_argument("--seed", type=int, default=default_seed(),
                            help=f"defaults to ${SEED_ENV} or 0")

    s = sub.add_parser("solve", help="decide pp/tcg/tmg and write a witness")
    s.add_argument("kind", choices=["pp", "tcg", "tmg"])
    s.add_argument("input")
    s.add_argument("--out", help="witness path (default: input + .td/.fill/.phylo)")
    s.add_argument("--witness", choices=["td", "fill"], default="td")
    s.add_argument("--timeout-ms", type=float, default=None)
    s.add_argument("--no-memo", action="store_true", help="disable the (bag, component) memo")
    common(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("reduce", help="run one reduction")
    s.add_argument("kind", choices=["pp-to-tcg", "tmg-to-tcg", "tcmis-to-tmg"])
    s.add_argument("input")
    s.add_argument("output", nargs="?", default="-")
    s.add_argument("--layout", choices=["spaced", "paper"], default="spaced")
    common(s, seed=False)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("gadget", help="emit a zipper gadget")
    s.add_argument("n", type=int)
    s.add_argument("s", type=int)
    s.add_argument("--offset", type=int)
    s.add_argument("--out", default="-")
    s.add_argument("--fill-out")
    s.add_argument("--dot", nargs="?", const="gadget.dot", help="DOT output path")
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("verify", help="check a witness")
    s.add_argument("kind", choices=["td", "fill", "pp", "tcmis"])
    s.add_argument("instance")
    s.add_argument("witness")
    common(s, seed=False)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("tcmis-witness", help="decomposition of the reduced graph from a solution")
    s.add_argument("instance")
    s.add_argument("solution")
    s.add_argument("--out", default="-")
    s.add_argument("--graph-out")
    s.add_argument("--layout", choices=["spaced", "paper"], default="spaced")
    s.set_defaults(func=cmd_tcmis_witness)

    s = sub.add_parser("tcmis-extract", help="read a TCMIS solution off a reduced-graph witness")
    s.add_argument("instance")
    s.add_argument("witness")
    s.add_argument("--out", default="-")
    s.add_argument("--layout", choices=["spaced", "paper"], default="spaced")
    s.set_defaults(func=cmd_tcmis_extract)

    s = sub.add_parser("oracle", help="brute-force reference answers")
    s.add_argument("kind", choices=["tcg", "count", "tcmis", "pp"])
    s.add_argument("input")
    s.add_argument("--out")
    common(s)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="median solve_pp times over random instances")
    s.add_argument("--genes", default="2,3")
    s.add_argument("--species", default="10,20")
    s.add_argument("--reps", type=int, default=5)
    s.add_argument("--states", type=int, default=2)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--budget-s", type=float, default=300.0)
    s.add_argument("--rows", help="write JSON lines here")
    common(s)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
