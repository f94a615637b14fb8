"""Local projective measurements on product-state sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence

from . import linalg
from .constraints import center, derive_constraint_space
from .core import StateSet, coordinate_hull, require_orthogonal, same_directions, state_overlap
from .linalg import ZERO, Scalar

# Coarse-graining enumeration cap (number of spectral blocks on a party).
MAX_COARSE_BLOCKS = 6
# Coordinate projectors are proposed only when the coordinate hull is this small.
MAX_HULL_FOR_COORDINATE_POOL = 8


class Closure(str, Enum):
    SUBSET = "SUBSET"
    NEW_DIRECTIONS = "NEW_DIRECTIONS"


class Projector:
    """Orthogonal projector onto span(support) on one party."""

    __slots__ = ("party", "dim", "support", "__dict__")

    def __init__(self, party: int, support: Sequence[Sequence], dim: int | None = None):
        vecs = [linalg.vec(v) for v in support]
        if dim is None:
            if not vecs:
                raise ValueError("dimension needed for an empty support")
            dim = len(vecs[0])
        if any(len(v) != dim for v in vecs):
            raise ValueError("support vectors have inconsistent length")
        self.party = party
        self.dim = dim
        # RREF basis: canonical for the subspace, so equal projectors compare equal
        self.support = tuple(linalg.row_space_basis(vecs))

    @classmethod
    def from_matrix(cls, party: int, m) -> "Projector":
        return cls(party, linalg.column_space(m), len(m))

    @cached_property
    def orthogonal_basis(self) -> list[tuple]:
        return linalg.gram_schmidt(self.support)

    @cached_property
    def matrix(self):
        return linalg.projector_onto(self.support, self.dim)

    @property
    def rank(self) -> int:
        return len(self.support)

    def project(self, v: Sequence[Scalar]) -> tuple:
        out = linalg.zeros(self.dim)
        for u in self.orthogonal_basis:
            c = linalg.inner(u, v)
            if c:
                f = c / linalg.inner(u, u)
                out = tuple(a + f * b for a, b in zip(out, u))
        return out

    def key(self) -> tuple:
        return (self.party, self.dim, tuple(tuple((x.re, x.im) for x in v) for v in self.support))

    def __eq__(self, other):
        return isinstance(other, Projector) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Projector(party={self.party + 1}, rank={self.rank})"


class PVMError(ValueError):
    pass


@dataclass(frozen=True)
class PVM:
    party: int
    elements: tuple[Projector, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise PVMError("a PVM needs at least one element")
        d = self.elements[0].dim
        for e in self.elements:
            if e.party != self.party or e.dim != d:
                raise PVMError("PVM elements must act on the same party")
            if e.rank == 0:
                raise PVMError("PVM elements must be nonzero")
        for a, b in itertools.combinations(self.elements, 2):
            if any(linalg.inner(u, w) for u in a.support for w in b.support):
                raise PVMError("PVM element supports are not mutually orthogonal")
        if sum(e.rank for e in self.elements) != d:
            raise PVMError(f"PVM ranks sum to {sum(e.rank for e in self.elements)}, expected {d}")

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def nontrivial(self) -> bool:
        return any(0 < e.rank < self.dim for e in self.elements)

    def key(self) -> tuple:
        return (self.party, tuple(sorted(e.key() for e in self.elements)))

    @classmethod
    def completed(cls, party: int, elements: Sequence[Projector], dim: int) -> "PVM":
        """Append the projector onto the orthogonal complement when needed."""
        elements = list(elements)
        taken = [v for e in elements for v in e.support]
        rest = linalg.orthogonal_complement(taken, dim)
        if rest:
            elements.append(Projector(party, rest, dim))
        return cls(party, tuple(elements))


@dataclass(frozen=True)
class OutcomeResult:
    element_index: int | None
    survivors: StateSet
    eliminated_labels: tuple[str, ...]
    closure: Closure


def apply_projector(s: StateSet, p: Projector, element_index: int | None = None) -> OutcomeResult:
    """Project the measured factor of every state; drop the ones sent to zero."""
    if not 0 <= p.party < s.n_parties or p.dim != s.dims[p.party]:
        raise ValueError("projector does not act on a party of this set")
    survivors = []
    eliminated = []
    moved = []  # survivors whose measured factor changed direction
    for st in s.states:
        u = st.coords(p.party)
        v = p.project(u)
        if linalg.is_zero_vector(v):
            eliminated.append(st.label)
            continue
        post = st.replace(p.party, v)
        survivors.append(post)
        if not linalg.proportional(u, v):
            moved.append(post)
    closure = Closure.SUBSET
    for st in moved:
        if not any(same_directions(st, orig) for orig in s.states):
            closure = Closure.NEW_DIRECTIONS
            break
    return OutcomeResult(element_index, s.with_states(survivors), tuple(eliminated), closure)


def apply_pvm(s: StateSet, m: PVM) -> list[OutcomeResult]:
    return [apply_projector(s, e, k) for k, e in enumerate(m.elements)]


def _pairwise_orthogonal(s: StateSet) -> bool:
    from .core import first_nonorthogonal_pair

    return first_nonorthogonal_pair(s) is None


def is_orthogonality_preserving(s: StateSet, m: PVM) -> bool:
    return all(_pairwise_orthogonal(o.survivors) for o in apply_pvm(s, m))


def is_op_projector(s: StateSet, p: Projector) -> bool:
    """Single-element check: P keeps every relevant pair orthogonal."""
    from .constraints import satisfies_constraints

    return satisfies_constraints(s, p.party, p.matrix)


def splits_candidates(s: StateSet, m: PVM) -> bool:
    """At least two outcomes keep some state (otherwise nothing is learned)."""
    nonempty = 0
    for e in m.elements:
        if any(not linalg.is_zero_vector(e.project(st.coords(m.party))) for st in s.states):
            nonempty += 1
            if nonempty >= 2:
                return True
    return False


# -- enumeration -----------------------------------------------------------


@dataclass
class PVMEnumeration:
    """Orthogonality-preserving PVMs found on one party.

    ``complete`` is True when the list provably contains every nontrivial
    orthogonality-preserving PVM up to coarse-graining of the ones listed
    (commutative constraint space, rational spectrum, within the cap).
    """

    party: int
    pvms: list[PVM]
    complete: bool
    notes: list[str] = field(default_factory=list)
    dim_space: int = 0


def _restricted(m, basis: list[tuple]):
    """Matrix of ``m`` restricted to the invariant subspace spanned by ``basis``."""
    # solve basis-coordinates of m @ b for every b in basis
    cols = [tuple(col) for col in zip(*basis)]  # d x r
    images = [linalg.matvec(m, b) for b in basis]
    r = len(basis)
    out = [[None] * r for _ in range(r)]
    for j, img in enumerate(images):
        x = linalg.solve(cols, img)
        if x is None:
            raise ValueError("subspace is not invariant")
        for i in range(r):
            out[i][j] = x[i]
    return tuple(tuple(row) for row in out)


def spectral_decomposition(ops: Sequence, support: Sequence[tuple]) -> tuple[list[list[tuple]], bool]:
    """Common refinement of the rational spectral blocks of commuting ``ops``
    on ``support``.

    A generic combination (coefficients = successive primes) goes first,
    then each operator refines what is left so accidental degeneracies in
    the generic element cannot merge blocks.  Returns ``(blocks, rational)``
    where ``rational`` is False if some block came from an irreducible factor
    of degree > 1 (several irrational eigenvalues merged into one rational
    block).
    """
    if not support:
        return [], True
    d = len(support[0])
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]
    generic = linalg.zero_matrix(d)
    for k, op in enumerate(ops):
        c = primes[k] if k < len(primes) else 2 * k + 1
        generic = linalg.mat_add(generic, linalg.mat_scale(Scalar(c), op))
    blocks = [list(support)]
    rational = True
    for op in [generic, *ops]:
        refined = []
        for block in blocks:
            if len(block) == 1:
                refined.append(block)
                continue
            sub = _restricted(op, block)
            parts = linalg.spectral_blocks(sub)
            for coeffs, kern in parts:
                vecs = []
                for coord in kern:
                    v = linalg.zeros(d)
                    for c, b in zip(coord, block):
                        if c:
                            v = linalg.add(v, linalg.scale(c, b))
                    vecs.append(v)
                refined.append(linalg.row_space_basis(vecs))
                if len(coeffs) > 2 and len(kern) > 0:
                    rational = False
        blocks = refined
    return blocks, rational


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def _pvm_from_blocks(party: int, groups: list[list[list[tuple]]], complement: list[tuple], dim: int) -> PVM:
    elements = [Projector(party, [v for blk in g for v in blk], dim) for g in groups]
    if complement:
        elements.append(Projector(party, complement, dim))
    return PVM(party, tuple(elements))


def _pool_projectors(s: StateSet, party: int, blocks: list[list[tuple]]) -> list[Projector]:
    """Heuristic candidate projectors for noncommutative constraint spaces."""
    d = s.dims[party]
    pool: dict[tuple, Projector] = {}

    def offer(vecs):
        if not vecs:
            return
        p = Projector(party, vecs, d)
        if 0 < p.rank < d and p.key() not in pool and is_op_projector(s, p):
            pool[p.key()] = p

    hull = coordinate_hull(s, party)
    if len(hull) <= MAX_HULL_FOR_COORDINATE_POOL:
        for r in range(1, len(hull) + 1):
            for subset in itertools.combinations(hull, r):
                offer([linalg.basis_vector(d, k) for k in subset])
    seen = []
    for v in s.factor_vectors(party):
        if not any(linalg.proportional(v, w) for w in seen):
            seen.append(v)
            offer([v])
            offer(linalg.orthogonal_complement([v], d))
    for blk in blocks:
        offer(blk)
    return list(pool.values())


class _BlockTable:
    """Per-block sandwiches <a_i|B|a_j> for mutually orthogonal blocks B.

    A union of blocks projects with the sum of their projectors, so a
    coarse-graining can be screened by adding table entries instead of
    re-projecting every state.
    """

    def __init__(self, s: StateSet, party: int, blocks: list[list[tuple]]):
        n = len(s)
        vecs = s.factor_vectors(party)
        self.pairs = [
            (i, j) for i in range(n) for j in range(i + 1, n) if state_overlap(s.states[i], s.states[j], skip=party)
        ]
        self.n = n
        self.g = []
        for blk in blocks:
            ortho = linalg.gram_schmidt(blk)
            coeff = [[linalg.inner(u, a) for u in ortho] for a in vecs]
            norms = [linalg.inner(u, u) for u in ortho]
            entry = {}
            for i, j in [(i, i) for i in range(n)] + self.pairs:
                val = ZERO
                for ci, cj, nu in zip(coeff[i], coeff[j], norms):
                    if ci and cj:
                        val = val + ci.conjugate() * cj / nu
                entry[(i, j)] = val
            self.g.append(entry)

    def admissible(self, part: list[list[int]]) -> bool:
        nonempty = 0
        for group in part:
            if any(any(self.g[b][(i, i)] for b in group) for i in range(self.n)):
                nonempty += 1
            for pair in self.pairs:
                total = ZERO
                for b in group:
                    total = total + self.g[b][pair]
                if total:
                    return False
        return nonempty >= 2


def _leading_key(p: Projector) -> tuple:
    """Order elements by the leading coordinates of their RREF supports."""
    pivots = tuple(next(i for i, x in enumerate(v) if x) for v in p.support)
    return (pivots, p.key())


def _orthogonal_projectors(a: Projector, b: Projector) -> bool:
    return not any(linalg.inner(u, w) for u in a.support for w in b.support)


def enumerate_op_pvms_report(s: StateSet, party: int) -> PVMEnumeration:
    """Nontrivial orthogonality-preserving PVMs on ``party``, finest first.

    Built from the spectral blocks of the (local-support) constraint space
    and all their coarse-grainings that preserve orthogonality.  The part of
    the party's space no state touches is kept as a separate element.  When
    the constraint space is noncommutative only its center is diagonalized
    and heuristic candidates are added; the result is then flagged
    incomplete.
    """
    require_orthogonal(s)
    d = s.dims[party]
    space, _ = derive_constraint_space(s, party, local=True)
    notes: list[str] = []
    complete = True
    if space.dim_space <= 1:
        return PVMEnumeration(party, [], True, [], space.dim_space)
    support = list(space.support)
    complement = linalg.orthogonal_complement(support, d)
    mats = [b.entries for b in space.basis]
    central = center(space)
    if len(central) < len(mats):
        complete = False
        notes.append("INCOMPLETE_ENUMERATION: noncommutative constraint space; center only plus heuristic candidates")
    blocks, rational = spectral_decomposition(central, support)
    if not rational:
        complete = False
        notes.append("INCOMPLETE_ENUMERATION: irrational spectrum; conjugate eigenspaces merged")
    found: dict[tuple, PVM] = {}

    def consider(m: PVM, screened: bool = False):
        m = PVM(m.party, tuple(sorted(m.elements, key=_leading_key)))
        k = m.key()
        if k in found:
            return
        if screened or (splits_candidates(s, m) and is_orthogonality_preserving(s, m)):
            found[k] = m

    if len(blocks) >= 2:
        if len(blocks) <= MAX_COARSE_BLOCKS:
            table = _BlockTable(s, party, blocks)
            for part in _set_partitions(list(range(len(blocks)))):
                if len(part) >= 2 and table.admissible(part):
                    consider(_pvm_from_blocks(party, [[blocks[b] for b in g] for g in part], complement, d), True)
        else:
            complete = False
            notes.append(f"INCOMPLETE_ENUMERATION: {len(blocks)} blocks exceed the coarse-graining cap")
            consider(_pvm_from_blocks(party, [[b] for b in blocks], complement, d))
    if not complete and len(central) < len(mats):
        pool = _pool_projectors(s, party, blocks)
        pool.sort(key=lambda p: (p.rank, p.key()))
        for p in pool:
            consider(PVM.completed(party, [p], d))
        for start in range(len(pool)):
            family = [pool[start]]
            for q in pool:
                if all(_orthogonal_projectors(q, f) for f in family):
                    family.append(q)
            if len(family) >= 2:
                consider(PVM.completed(party, family, d))
    pvms = sorted(found.values(), key=lambda m: (-len(m.elements), m.key()))
    return PVMEnumeration(party, pvms, complete, notes, space.dim_space)


def enumerate_op_pvms(s: StateSet, party: int) -> list[PVM]:
    return enumerate_op_pvms_report(s, party).pvms

