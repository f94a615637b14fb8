"""Product-state sets and their structural classification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import prod
from typing import Iterable, Mapping, Sequence

from . import linalg
from .linalg import Scalar


class StateSetError(ValueError):
    """Malformed or inconsistent state-set data."""


class NotOrthogonalError(ValueError):
    """An operation that requires a pairwise orthogonal set got one that is not."""

    def __init__(self, pair):
        super().__init__(f"states {pair[0]!r} and {pair[1]!r} are not orthogonal")
        self.pair = pair


@dataclass(frozen=True)
class LocalVector:
    party: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", linalg.vec(self.coords))

    def __len__(self):
        return len(self.coords)

    def is_zero(self) -> bool:
        return linalg.is_zero_vector(self.coords)

    def support(self) -> tuple[int, ...]:
        """Standard-basis indices with a nonzero coordinate."""
        return tuple(i for i, x in enumerate(self.coords) if x)


@dataclass(frozen=True)
class ProductState:
    label: str
    factors: tuple[LocalVector, ...]

    def __post_init__(self):
        facs = []
        for p, f in enumerate(self.factors):
            if not isinstance(f, LocalVector):
                f = LocalVector(p, f)
            facs.append(f)
        object.__setattr__(self, "factors", tuple(facs))

    @classmethod
    def of(cls, label: str, *factors: Sequence) -> "ProductState":
        return cls(label, tuple(LocalVector(p, f) for p, f in enumerate(factors)))

    def coords(self, party: int) -> tuple:
        return self.factors[party].coords

    def replace(self, party: int, coords: Sequence) -> "ProductState":
        facs = list(self.factors)
        facs[party] = LocalVector(party, coords)
        return ProductState(self.label, tuple(facs))


@dataclass(frozen=True)
class StateSet:
    """Labeled product states on H_1 (x) ... (x) H_n.

    ``splits`` optionally declares how a party's space factors into
    subsystems (keyed by 0-based party index); only local-redundancy checks
    use it.
    """

    dims: tuple[int, ...]
    states: tuple[ProductState, ...]
    splits: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "splits", {int(k): tuple(v) for k, v in dict(self.splits).items()})
        object.__setattr__(self, "meta", dict(self.meta))
        if not self.dims or any(d < 1 for d in self.dims):
            raise StateSetError(f"dims must be positive integers, got {self.dims}")
        seen = set()
        for st in self.states:
            if st.label in seen:
                raise StateSetError(f"duplicate label {st.label!r}")
            seen.add(st.label)
            if len(st.factors) != len(self.dims):
                raise StateSetError(
                    f"state {st.label!r} has {len(st.factors)} factors for {len(self.dims)} parties"
                )
            for p, (f, d) in enumerate(zip(st.factors, self.dims)):
                if f.party != p:
                    raise StateSetError(f"state {st.label!r}: factor {p} is tagged with party {f.party}")
                if len(f) != d:
                    raise StateSetError(
                        f"state {st.label!r}: factor for party {p + 1} has length {len(f)}, expected {d}"
                    )
                if f.is_zero():
                    raise StateSetError(f"state {st.label!r}: zero factor on party {p + 1}")
        for p, split in self.splits.items():
            if not 0 <= p < len(self.dims):
                raise StateSetError(f"split declared for unknown party {p + 1}")
            if prod(split) != self.dims[p] or any(s < 1 for s in split):
                raise StateSetError(f"split {list(split)} does not multiply to dimension {self.dims[p]}")

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.states)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def factor_vectors(self, party: int) -> list[tuple]:
        return [s.coords(party) for s in self.states]

    def with_states(self, states: Iterable[ProductState]) -> "StateSet":
        return StateSet(self.dims, tuple(states), self.splits, {})

    def subset(self, labels: Iterable[str]) -> "StateSet":
        keep = set(labels)
        return self.with_states(s for s in self.states if s.label in keep)

    def state(self, label: str) -> ProductState:
        for s in self.states:
            if s.label == label:
                return s
        raise KeyError(label)


@dataclass(frozen=True)
class Bipartition:
    group_a: frozenset[int]
    group_b: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "group_a", frozenset(self.group_a))
        object.__setattr__(self, "group_b", frozenset(self.group_b))

    def validate(self, n_parties: int) -> None:
        a, b = self.group_a, self.group_b
        if not a or not b:
            raise StateSetError("bipartition groups must be nonempty")
        if a & b:
            raise StateSetError("bipartition groups overlap")
        if a | b != set(range(n_parties)):
            raise StateSetError(f"bipartition does not cover parties 1..{n_parties}")

    def __str__(self):
        return "".join(str(p + 1) for p in sorted(self.group_a)) + "|" + "".join(
            str(p + 1) for p in sorted(self.group_b)
        )

    @classmethod
    def parse(cls, text: str) -> "Bipartition":
        """Parse ``"1|23"`` (1-based party digits, or comma-separated numbers)."""
        try:
            left, right = text.split("|")
        except ValueError:
            raise StateSetError(f"bipartition {text!r} must contain exactly one '|'") from None

        def parties(side: str) -> frozenset[int]:
            side = side.strip()
            items = side.split(",") if "," in side else list(side)
            try:
                return frozenset(int(x) - 1 for x in items if x.strip())
            except ValueError:
                raise StateSetError(f"bad party list {side!r} in bipartition") from None

        return cls(parties(left), parties(right))


def all_bipartitions(n_parties: int) -> list[Bipartition]:
    """Every unordered bipartition, the group holding party 1 listed first."""
    out = []
    others = list(range(1, n_parties))
    for r in range(0, len(others)):
        for extra in itertools.combinations(others, r):
            a = frozenset((0,) + extra)
            b = frozenset(range(n_parties)) - a
            if b:
                out.append(Bipartition(a, b))
    return out


class Completeness(str, Enum):
    COMPLETE = "COMPLETE"
    SUBSPACE_COMPLETE = "SUBSPACE_COMPLETE"
    INCOMPLETE_NON_SUBSPACE = "INCOMPLETE_NON_SUBSPACE"


@dataclass(frozen=True)
class CompletenessClass:
    tag: Completeness
    local_span_dims: tuple[int, ...]


# -- predicates ----------------------------------------------------------


def inner_product(u: LocalVector, v: LocalVector) -> Scalar:
    if u.party != v.party:
        raise ValueError(f"vectors live on different parties ({u.party + 1}, {v.party + 1})")
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return linalg.inner(u.coords, v.coords)


def state_overlap(x: ProductState, y: ProductState, skip: int | None = None) -> Scalar:
    """<x|y> as the product of per-party overlaps, optionally leaving one party out."""
    out = linalg.ONE
    for p, (f, g) in enumerate(zip(x.factors, y.factors)):
        if p == skip:
            continue
        out = out * linalg.inner(f.coords, g.coords)
        if not out:
            return out
    return out


def first_nonorthogonal_pair(s: StateSet):
    states = s.states
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            if state_overlap(states[i], states[j]):
                return states[i].label, states[j].label
    return None


def is_orthogonal_set(s: StateSet) -> tuple[bool, tuple[str, str] | None]:
    """(True, None) or (False, first offending label pair)."""
    pair = first_nonorthogonal_pair(s)
    return pair is None, pair


def require_orthogonal(s: StateSet) -> None:
    pair = first_nonorthogonal_pair(s)
    if pair is not None:
        raise NotOrthogonalError(pair)


def local_span_dims(s: StateSet) -> tuple[int, ...]:
    return tuple(linalg.rank(s.factor_vectors(p)) for p in range(s.n_parties))


def classify_completeness(s: StateSet) -> CompletenessClass:
    require_orthogonal(s)
    spans = local_span_dims(s)
    n = len(s)
    if n == prod(s.dims):
        tag = Completeness.COMPLETE
    elif n == prod(spans):
        tag = Completeness.SUBSPACE_COMPLETE
    else:
        tag = Completeness.INCOMPLETE_NON_SUBSPACE
    return CompletenessClass(tag, spans)


def product_vector(state: ProductState) -> tuple:
    """Full tensor-product coordinates (party 1 most significant)."""
    v = state.factors[0].coords
    for f in state.factors[1:]:
        v = linalg.kron(v, f.coords)
    return v


# -- local redundancy ----------------------------------------------------


def _partial_trace_out(v: Sequence[Scalar], split: Sequence[int], discard: int):
    """Reduced density matrix of |v><v| after tracing out subsystem ``discard``."""
    keep_dims = [d for k, d in enumerate(split) if k != discard]
    keep_n = prod(keep_dims)
    rho = [[linalg.ZERO] * keep_n for _ in range(keep_n)]
    # group amplitudes by the discarded index
    groups: dict[int, list[tuple[int, Scalar]]] = {}
    for flat, amp in enumerate(v):
        if not amp:
            continue
        idx = []
        rem = flat
        for d in reversed(split):
            idx.append(rem % d)
            rem //= d
        idx.reverse()
        kept = 0
        for k, (i, d) in enumerate(zip(idx, split)):
            if k != discard:
                kept = kept * d + i
        groups.setdefault(idx[discard], []).append((kept, amp))
    for entries in groups.values():
        for r, a in entries:
            for c, b in entries:
                rho[r][c] = rho[r][c] + a * b.conjugate()
    return rho


def _hs_overlap(rho, sigma) -> Scalar:
    """Tr(rho sigma) for Hermitian rho, sigma."""
    t = linalg.ZERO
    for i, row in enumerate(rho):
        for j, x in enumerate(row):
            if x:
                t = t + x * sigma[j][i]
    return t


def has_local_redundancy(s: StateSet, party: int, split: Sequence[int] | None = None) -> bool:
    """True when some subsystem of ``party`` can be discarded with every pair
    of reduced (generally mixed) states still orthogonal.

    The party's space is taken as a tensor product of ``split`` subsystems,
    coordinates in lexicographic order; ``split`` defaults to the set's
    declared split for that party.
    """
    if not 0 <= party < s.n_parties:
        raise StateSetError(f"no party {party + 1}")
    if split is None:
        split = s.splits.get(party)
    if split is None:
        raise StateSetError(f"no split declared for party {party + 1}")
    split = tuple(int(x) for x in split)
    if prod(split) != s.dims[party] or len(split) < 2 or any(x < 2 for x in split):
        raise StateSetError(
            f"split {list(split)} is not a nontrivial factorization of dimension {s.dims[party]}"
        )
    states = s.states
    for discard in range(len(split)):
        reduced = [_partial_trace_out(st.coords(party), split, discard) for st in states]
        ok = True
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                # Tr(rho_i rho_j) with pure factors elsewhere: |<x_i|x_j>|^2 per party
                w = Fraction(1)
                for q in range(s.n_parties):
                    if q == party:
                        continue
                    w *= linalg.inner(states[i].coords(q), states[j].coords(q)).abs2()
                    if not w:
                        break
                if w and _hs_overlap(reduced[i], reduced[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# -- bipartitions --------------------------------------------------------


def flatten(s: StateSet, b: Bipartition) -> StateSet:
    """Regroup an n-party set as a two-party set over ``b``.

    Each side's factor is the Kronecker product of its parties' factors in
    increasing party order.
    """
    b.validate(s.n_parties)
    ga, gb = sorted(b.group_a), sorted(b.group_b)
    dims = (prod(s.dims[p] for p in ga), prod(s.dims[p] for p in gb))
    states = []
    for st in s.states:
        fa = st.coords(ga[0])
        for p in ga[1:]:
            fa = linalg.kron(fa, st.coords(p))
        fb = st.coords(gb[0])
        for p in gb[1:]:
            fb = linalg.kron(fb, st.coords(p))
        states.append(ProductState.of(st.label, fa, fb))
    splits = {}
    if len(ga) == 1 and ga[0] in s.splits:
        splits[0] = s.splits[ga[0]]
    if len(gb) == 1 and gb[0] in s.splits:
        splits[1] = s.splits[gb[0]]
    return StateSet(dims, tuple(states), splits)


# -- local supports ------------------------------------------------------


def local_support(s: StateSet, party: int) -> list[tuple]:
    """RREF basis of the span of the party's factors."""
    return linalg.row_space_basis(s.factor_vectors(party))


def coordinate_hull(s: StateSet, party: int) -> tuple[int, ...]:
    """Standard-basis indices on which some factor of ``party`` is nonzero."""
    idx = set()
    for v in s.factor_vectors(party):
        idx.update(i for i, x in enumerate(v) if x)
    return tuple(sorted(idx))


def restrict_to_support(s: StateSet) -> StateSet:
    """Drop unused coordinates on every party whose factors span a coordinate
    subspace, e.g. the five surviving states of a block projector become a
    set on the block alone.  Other parties are left as they are.
    """
    dims = list(s.dims)
    keep: dict[int, tuple[int, ...]] = {}
    for p in range(s.n_parties):
        hull = coordinate_hull(s, p)
        if len(hull) < s.dims[p] and linalg.rank(s.factor_vectors(p)) == len(hull):
            keep[p] = hull
            dims[p] = len(hull)
    if not keep:
        return s
    states = []
    for st in s.states:
        facs = []
        for p, f in enumerate(st.factors):
            c = f.coords
            if p in keep:
                c = tuple(c[i] for i in keep[p])
            facs.append(c)
        states.append(ProductState.of(st.label, *facs))
    splits = {p: v for p, v in s.splits.items() if p not in keep}
    return StateSet(tuple(dims), tuple(states), splits)


# -- canonical keys ------------------------------------------------------


def canonical_key(s: StateSet) -> tuple:
    """Hashable identity of a candidate set: labels plus exact directions.

    Scale-invariant; independent of state order.
    """
    items = []
    for st in s.states:
        items.append(
            (
                st.label,
                tuple(
                    tuple((x.re, x.im) for x in linalg.canonical_direction(f.coords)) for f in st.factors
                ),
            )
        )
    items.sort(key=lambda t: t[0])
    return (s.dims, tuple(items))


def same_directions(x: ProductState, y: ProductState) -> bool:
    """Global proportionality of two product states (factor by factor)."""
    return all(linalg.proportional(f.coords, g.coords) for f, g in zip(x.factors, y.factors))
