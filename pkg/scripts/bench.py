"""Scaling table for solve_pp: median wall time per (genes, species) cell.

    python scripts/bench.py --genes 2,3,4,5 --species 10,20,50 --reps 7 --jobs 4
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from phylotri.cli import bench_markdown, run_bench


@dataclass
class BenchConfig:
    genes: list[int] = field(default_factory=lambda: [2, 3, 4, 5])
    species: list[int] = field(default_factory=lambda: [10, 20, 50])
    states: int = 3
    reps: int = 7
    seed: int = 0
    jobs: int = 1
    budget_s: float = 600.0
    out: Path = Path("results/bench.jsonl")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--genes", default="2,3,4,5")
    ap.add_argument("--species", default="10,20,50")
    ap.add_argument("--states", type=int, default=BenchConfig.states)
    ap.add_argument("--reps", type=int, default=BenchConfig.reps)
    ap.add_argument("--seed", type=int, default=BenchConfig.seed)
    ap.add_argument("--jobs", type=int, default=BenchConfig.jobs)
    ap.add_argument("--budget-s", type=float, default=BenchConfig.budget_s)
    ap.add_argument("--out", type=Path, default=BenchConfig.out)
    a = ap.parse_args()
    cfg = BenchConfig([int(x) for x in a.genes.split(",")], [int(x) for x in a.species.split(",")],
                      a.states, a.reps, a.seed, a.jobs, a.budget_s, a.out)
    rows = run_bench(cfg.genes, cfg.species, cfg.seed, cfg.reps, cfg.states, cfg.jobs, cfg.budget_s)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with cfg.out.open("w") as fh:
        meta = {k: (str(v) if isinstance(v, Path) else v) for k, v in asdict(cfg).items()}
        fh.write(json.dumps({"config": meta}) + "\n")
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    print(bench_markdown(rows), end="")


if __name__ == "__main__":
    main()
