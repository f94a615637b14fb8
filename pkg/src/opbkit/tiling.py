"""Tiling diagrams of bipartite product sets.

Each state covers the rectangle (support of its first factor) x (support of
its second factor) in the standard basis.  States with identical supports
share a tile.  The party with the larger dimension runs horizontally (ties:
party 1), which is how the reference figures are drawn.
"""

from __future__ import annotations

from dataclasses import dataclass
from html import escape

from .core import StateSet
from .measurement import Projector

PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
)  # fmt: skip
HIGHLIGHT = "#e41a1c"
CELL = 48


@dataclass(frozen=True)
class Tile:
    index: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def area(self) -> int:
        return len(self.rows) * len(self.cols)


@dataclass(frozen=True)
class TilingDiagram:
    n_rows: int
    n_cols: int
    row_party: int
    col_party: int
    tiles: tuple[Tile, ...]
    highlight_rows: frozenset[int]
    highlight_cols: frozenset[int]
    highlight_party: int | None

    def covering(self, r: int, c: int) -> list[Tile]:
        return [t for t in self.tiles if r in t.rows and c in t.cols]

    def shown(self, r: int, c: int) -> Tile | None:
        cov = self.covering(r, c)
        if not cov:
            return None
        return min(cov, key=lambda t: (t.area, t.index))

    def highlighted(self, r: int, c: int) -> bool:
        if self.highlight_party is None:
            return False
        if self.highlight_party == self.row_party:
            return r in self.highlight_rows
        return c in self.highlight_cols

    def overlaps(self) -> list[tuple[int, int]]:
        pairs = set()
        for r in range(self.n_rows):
            for c in range(self.n_cols):
                cov = self.covering(r, c)
                for i in range(len(cov)):
                    for j in range(i + 1, len(cov)):
                        pairs.add((cov[i].index, cov[j].index))
        return sorted(pairs)

    def orientation(self) -> str:
        names = "AB"
        return (
            f"columns: party {self.col_party + 1} ({names[self.col_party]}), "
            f"rows: party {self.row_party + 1} ({names[self.row_party]})"
        )


def build_tiling(s: StateSet, highlight: Projector | None = None) -> TilingDiagram:
    if s.n_parties != 2:
        raise ValueError(f"tiling diagrams need a bipartite set, got {s.n_parties} parties")
    col_party = 1 if s.dims[1] > s.dims[0] else 0
    row_party = 1 - col_party
    groups: dict[tuple, list[str]] = {}
    for st in s.states:
        key = (st.factors[row_party].support(), st.factors[col_party].support())
        groups.setdefault(key, []).append(st.label)
    tiles = tuple(Tile(i + 1, rows, cols, tuple(labels)) for i, ((rows, cols), labels) in enumerate(groups.items()))
    hp = None
    hidx: frozenset[int] = frozenset()
    if highlight is not None:
        if highlight.party not in (0, 1) or highlight.dim != s.dims[highlight.party]:
            raise ValueError("highlight projector does not act on a party of this set")
        hp = highlight.party
        hidx = frozenset(i for v in highlight.support for i, x in enumerate(v) if x)
    return TilingDiagram(
        s.dims[row_party],
        s.dims[col_party],
        row_party,
        col_party,
        tiles,
        hidx if hp == row_party else frozenset(),
        hidx if hp == col_party else frozenset(),
        hp,
    )


def _fmt_set(xs) -> str:
    return "{" + ",".join(str(x) for x in xs) + "}"


def render_ascii(d: TilingDiagram) -> str:
    width = max(4, max((len(f"T{t.index}") for t in d.tiles), default=2) + 2)
    lines = [f"tiling {d.n_rows}x{d.n_cols}; {d.orientation()}"]
    if d.highlight_party is not None:
        idx = d.highlight_rows if d.highlight_party == d.row_party else d.highlight_cols
        lines.append(f"highlight (*): party {d.highlight_party + 1} support {_fmt_set(sorted(idx))}")
    header = " " * 4 + "".join(str(c).rjust(width) for c in range(d.n_cols))
    lines.append(header)
    for r in range(d.n_rows):
        cells = []
        for c in range(d.n_cols):
            t = d.shown(r, c)
            txt = f"T{t.index}" if t else "."
            if d.highlighted(r, c):
                txt += "*"
            cells.append(txt.rjust(width))
        lines.append(str(r).rjust(3) + " " + "".join(cells))
    lines.append("tiles:" if d.tiles else "tiles: (none)")
    names = "AB"
    for t in d.tiles:
        lines.append(
            f"  T{t.index}: {names[d.row_party]}{_fmt_set(t.rows)} x {names[d.col_party]}{_fmt_set(t.cols)}"
            f"  [{', '.join(t.labels)}]"
        )
    ov = d.overlaps()
    if ov:
        lines.append("warning: overlapping tiles " + ", ".join(f"T{a}/T{b}" for a, b in ov))
    return "\n".join(lines) + "\n"


def render_svg(d: TilingDiagram) -> str:
    margin = 24
    w = margin + d.n_cols * CELL + 8
    h = margin + d.n_rows * CELL + 8
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<title>{escape(d.orientation())}</title>",
    ]
    for c in range(d.n_cols):
        out.append(f'<text x="{margin + c * CELL + CELL // 2}" y="16" font-size="12" text-anchor="middle">{c}</text>')
    for r in range(d.n_rows):
        out.append(f'<text x="12" y="{margin + r * CELL + CELL // 2 + 4}" font-size="12" text-anchor="middle">{r}</text>')
    for r in range(d.n_rows):
        for c in range(d.n_cols):
            t = d.shown(r, c)
            x, y = margin + c * CELL, margin + r * CELL
            fill = PALETTE[(t.index - 1) % len(PALETTE)] if t else "#ffffff"
            out.append(f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#444444" stroke-width="1"/>')
            if t:
                out.append(
                    f'<text x="{x + CELL // 2}" y="{y + CELL // 2 + 4}" font-size="12" text-anchor="middle">T{t.index}</text>'
                )
            if d.highlighted(r, c):
                out.append(
                    f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{HIGHLIGHT}" fill-opacity="0.35" stroke="none"/>'
                )
    # tiles hidden under smaller ones (e.g. a stopper covering everything) get a dashed outline
    for t in d.tiles:
        visible = any(d.shown(r, c) is t for r in t.rows for c in t.cols)
        if not visible:
            x0 = margin + min(t.cols) * CELL + 3
            y0 = margin + min(t.rows) * CELL + 3
            x1 = margin + (max(t.cols) + 1) * CELL - 3
            y1 = margin + (max(t.rows) + 1) * CELL - 3
            color = PALETTE[(t.index - 1) % len(PALETTE)]
            out.append(
                f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" fill="none" '
                f'stroke="{color}" stroke-width="3" stroke-dasharray="6 4"><title>T{t.index}</title></rect>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_tiling(s: StateSet, format: str = "ascii", highlight: Projector | None = None) -> str:
    d = build_tiling(s, highlight)
    if format == "ascii":
        return render_ascii(d)
    if format == "svg":
        return render_svg(d)
    raise ValueError(f"unknown format {format!r}")
