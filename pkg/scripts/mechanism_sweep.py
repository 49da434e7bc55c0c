"""Offset-pair validity for a single merged gadget pair, both layouts.

    python scripts/mechanism_sweep.py --max-r 2
"""

import argparse
from dataclasses import dataclass

from phylotri.reductions.tcmis import ReductionConfig, mechanism_check


@dataclass
class SweepConfig:
    max_r: int = 2
    layouts: tuple[str, ...] = ("spaced", "paper")


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for layout in cfg.layouts:
        for r in range(1, cfg.max_r + 1):
            for same in (True, False):
                res = mechanism_check(r, same, ReductionConfig(layout))
                wrong = sorted(k for k, ok in res.items() if ok != (k[2:] != k[:2]))
                rows.append({"layout": layout, "r": r, "same_node": same,
                             "pairs": len(res), "mismatches": wrong})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-r", type=int, default=SweepConfig.max_r)
    args = ap.parse_args()
    print("| layout | r | merge | combos | mismatches (i1, i2, d1, d2) |")
    print("|---|---|---|---|---|")
    for row in run(SweepConfig(max_r=args.max_r)):
        kind = "same node" if row["same_node"] else "parent"
        shown = ", ".join(map(str, row["mismatches"][:4])) or "none"
        if len(row["mismatches"]) > 4:
            shown += f", ... ({len(row['mismatches'])})"
        print(f"| {row['layout']} | {row['r']} | {kind} | {row['pairs']} | {shown} |")


if __name__ == "__main__":
    main()
