"""Write DOT renderings of zipper gadgets and their offset triangulations.

    python scripts/gadget_figures.py --out figures
    neato -n2 -Tpng figures/gadget_2_1_offset0.dot -o fig.png
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from phylotri.formats import gadget_dot
from phylotri.graph import verify_triangulation
from phylotri.zipper import build_zipper_gadget, canonical_gadget_triangulation


@dataclass
class FigureConfig:
    out: Path = Path("figures")
    shapes: tuple[tuple[int, int], ...] = ((2, 1), (1, 0), (3, 2))


def layout(gd):
    labels = {gd.head: "h", gd.tail: "t"}
    pos = {gd.head: (0.0, 1.0), gd.tail: (4.0 * gd.n, 1.0)}
    for i, v in enumerate(gd.p, 1):
        labels[v], pos[v] = f"p{i}", (float(i), 2.0)
    for j, v in enumerate(gd.q, 1):
        labels[v], pos[v] = f"q{j}", (j * 4.0 * gd.n / (len(gd.q) + 1), 0.0)
    return labels, pos


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=FigureConfig.out)
    cfg = FigureConfig(out=ap.parse_args().out)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for n, s in cfg.shapes:
        gd = build_zipper_gadget(n, s)
        labels, pos = layout(gd)
        (cfg.out / f"gadget_{n}_{s}.dot").write_text(gadget_dot(gd.graph, labels, (), pos))
        for delta in range(s + 1):
            fill = canonical_gadget_triangulation(gd, delta)
            assert verify_triangulation(gd.graph, fill)
            path = cfg.out / f"gadget_{n}_{s}_offset{delta}.dot"
            path.write_text(gadget_dot(gd.graph, labels, fill, pos))
            print(f"{path}: {len(fill)} fill edges")


if __name__ == "__main__":
    main()
