"""Bundled example sets.

``s1``        nine-state complete product basis of C^3 (x) C^3
``s2``        five-state incomplete product set of C^3 (x) C^6 (Bob = qubit x qutrit)
``tiles``     five-state Tiles UPB of C^3 (x) C^3 (block 012 outcome of s2, reduced)
``tiles_kb2`` the block 345 outcome of s2, reduced to C^3 (x) C^3
"""

from __future__ import annotations

from importlib import resources

from ..core import ProductState, StateSet
from ..fileformat import parse_state_set

NAMES = ("s1", "s2", "tiles", "tiles_kb2")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.json")


def text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown corpus set {name!r}; choose from {NAMES}")
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> StateSet:
    return parse_state_set(text(name))


def _ket(d: int, *terms: tuple[int, int]) -> tuple[int, ...]:
    v = [0] * d
    for idx, c in terms:
        v[idx] += c
    return tuple(v)


def _k(d: int, spec: str) -> tuple[int, ...]:
    """'0-1+4' -> |0> - |1> + |4> in dimension d."""
    terms = []
    sign = 1
    num = ""
    for ch in spec + "+":
        if ch in "+-":
            if num:
                terms.append((int(num), sign))
            sign = 1 if ch == "+" else -1
            num = ""
        else:
            num += ch
    return _ket(d, *terms)


def build_s1() -> StateSet:
    a = lambda s: _k(3, s)  # noqa: E731
    rows = [
        ("0,01+", "0", "0+1"),
        ("0,01-", "0", "0-1"),
        ("0,2", "0", "2"),
        ("12+,0", "1+2", "0"),
        ("12-,0", "1-2", "0"),
        ("1,12+", "1", "1+2"),
        ("1,12-", "1", "1-2"),
        ("2,1", "2", "1"),
        ("2,2", "2", "2"),
    ]
    states = tuple(ProductState.of(lab, a(x), a(y)) for lab, x, y in rows)
    return StateSet(
        (3, 3),
        states,
        meta={"note": "normalization factors omitted; every predicate is scale-invariant"},
    )


def build_s2() -> StateSet:
    rows = [
        ("phi1", "0", "0-1+4-5"),
        ("phi2", "2", "1-2+5-3"),
        ("phi3", "1-2", "0-4"),
        ("phi4", "0-1", "2-3"),
        ("phi5", "0+1+2", "0+1+2+3+4+5"),
    ]
    states = tuple(ProductState.of(lab, _k(3, x), _k(6, y)) for lab, x, y in rows)
    return StateSet(
        (3, 6),
        states,
        splits={1: (2, 3)},
        meta={
            "note": "five states; an index range 1..10 attached to this set in its original "
            "display is a typo, the five listed states are authoritative",
            "bob_split": "|3a+b> = |a>|b> with a in {0,1} (qubit), b in {0,1,2} (qutrit)",
        },
    )


def build_tiles(block: int = 1) -> StateSet:
    from ..core import restrict_to_support
    from ..measurement import Projector, apply_projector

    s2 = build_s2()
    support = [_ket(6, (k, 1)) for k in ((0, 1, 2) if block == 1 else (3, 4, 5))]
    out = apply_projector(s2, Projector(1, support))
    reduced = restrict_to_support(out.survivors)
    return StateSet(reduced.dims, reduced.states)


def write_all(directory) -> None:
    from pathlib import Path

    from ..fileformat import serialize_state_set

    d = Path(directory)
    for name, s in (
        ("s1", build_s1()),
        ("s2", build_s2()),
        ("tiles", build_tiles(1)),
        ("tiles_kb2", build_tiles(2)),
    ):
        (d / f"{name}.json").write_text(serialize_state_set(s), encoding="utf-8")
