"""Render the tiling diagrams of the bundled sets (ASCII and SVG).

    python3 scripts/render_figures.py [OUTDIR]

With no OUTDIR the files go to tests/golden/, which the tiling tests
compare against byte for byte.
"""

import sys
from pathlib import Path

from opbkit import corpus
from opbkit.core import StateSet
from opbkit.measurement import Projector
from opbkit.tiling import render_tiling


def coords(d, *ks):
    return [tuple(int(i == k) for i in range(d)) for k in ks]


def figures() -> dict[str, str]:
    s1, s2, tiles = corpus.load("s1"), corpus.load("s2"), corpus.load("tiles")
    alice0 = Projector(0, coords(3, 0))
    kb1 = Projector(1, coords(6, 0, 1, 2))
    return {
        "s1.txt": render_tiling(s1),
        "s1_alice0.txt": render_tiling(s1, highlight=alice0),
        "s1_alice0.svg": render_tiling(s1, "svg", alice0),
        "s2.txt": render_tiling(s2),
        "s2_kb1.txt": render_tiling(s2, highlight=kb1),
        "s2_kb1.svg": render_tiling(s2, "svg", kb1),
        "tiles.txt": render_tiling(tiles),
        "tiles.svg": render_tiling(tiles, "svg"),
        "empty.txt": render_tiling(StateSet((2, 3), ())),
    }


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parents[1] / "tests" / "golden"
    out.mkdir(parents=True, exist_ok=True)
    for name, text in figures().items():
        (out / name).write_text(text, encoding="utf-8")
        print(f"wrote {out / name}")


if __name__ == "__main__":
    main(sys.argv)
