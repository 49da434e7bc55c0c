"""Round-trip every valid TCMIS solution through the reduced graph.

Counts, per layout, how many (instance, solution) pairs give a valid
decomposition whose read-back equals the solution.

    python scripts/layout_round_trip.py --instances 60 --seed 1
"""

import argparse
import itertools
import random
from dataclasses import dataclass

from phylotri.generate import TcmisShape, random_tcmis
from phylotri.oracles import verify_tcmis_solution
from phylotri.reductions import (
    ReductionConfig,
    build_tmg_decomposition_from_tcmis_solution,
    extract_tcmis_solution,
    reduce_tcmis_to_tmg,
)
from phylotri.treedecomp import DecompositionError, color_multiplicity_ok, verify_tree_decomposition


@dataclass
class RoundTripConfig:
    instances: int = 60
    seed: int = 1
    shape: TcmisShape = TcmisShape()


def all_solutions(inst):
    keys = sorted(inst.class_sizes)
    for combo in itertools.product(*(range(inst.class_sizes[k]) for k in keys)):
        sol = dict(zip(keys, combo))
        if verify_tcmis_solution(inst, sol):
            yield sol


def round_trip(inst, sol, layout: str) -> bool:
    g, prov = reduce_tcmis_to_tmg(inst, ReductionConfig(layout))
    try:
        td = build_tmg_decomposition_from_tcmis_solution(inst, sol, g, prov)
    except DecompositionError:
        return False
    if not (verify_tree_decomposition(g, td) and color_multiplicity_ok(g, td)):
        return False
    try:
        return extract_tcmis_solution(inst, g, prov, td) == sol
    except DecompositionError:
        return False


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=RoundTripConfig.instances)
    ap.add_argument("--seed", type=int, default=RoundTripConfig.seed)
    args = ap.parse_args()
    cfg = RoundTripConfig(args.instances, args.seed)
    rng = random.Random(cfg.seed)
    pairs = [(inst, sol) for inst in (random_tcmis(rng, cfg.shape) for _ in range(cfg.instances))
             for sol in all_solutions(inst)]
    for layout in ("spaced", "paper"):
        ok = sum(round_trip(inst, sol, layout) for inst, sol in pairs)
        print(f"{layout}: {ok}/{len(pairs)} solutions round-trip")


if __name__ == "__main__":
    main()
