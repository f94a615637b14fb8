"""Operators M^dagger M compatible with orthogonality preservation.

For a measurement on one party, a POVM element M keeps the post-measurement
states pairwise orthogonal iff H = M^dagger M satisfies

    <a_i|H|a_j> * prod_{q != party} <x_i^q|x_j^q> = 0      for all i != j.

Pairs whose bystander product is zero impose nothing.  The admissible H form
a real-linear space of Hermitian matrices, solved for exactly here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .core import StateSet, require_orthogonal, state_overlap
from .linalg import ZERO, Scalar


@dataclass(frozen=True)
class HermitianOperator:
    dim: int
    entries: tuple  # d x d tuple of Scalar rows

    def __post_init__(self):
        if not linalg.is_hermitian(self.entries):
            raise ValueError("operator is not Hermitian")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_diagonal(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.dim) for j in range(self.dim) if i != j)


@dataclass(frozen=True)
class ConstraintRecord:
    pair: tuple[int, int]
    labels: tuple[str, str]
    bystander_overlap: Scalar

    @property
    def active(self) -> bool:
        return bool(self.bystander_overlap)


@dataclass(frozen=True)
class HermitianSpace:
    """Basis of admissible M^dagger M on one party.

    With ``local=True`` operators are confined to the span of the party's
    factors (they annihilate its orthogonal complement) and the trivial
    element is the projector onto that span rather than the identity.
    """

    party: int
    dim: int
    basis: tuple[HermitianOperator, ...]
    local: bool
    support: tuple  # RREF basis of the region the operators act on

    @property
    def dim_space(self) -> int:
        return len(self.basis)

    def unit(self) -> tuple:
        """The trivial element: identity, or projector onto the support."""
        if not self.local:
            return linalg.identity(self.dim)
        return linalg.projector_onto(self.support, self.dim)

    def contains(self, h: Sequence) -> bool:
        """Exact membership test for a Hermitian matrix."""
        target = _hermitian_params(h, self.dim)
        rows = [_hermitian_params(b.entries, self.dim) for b in self.basis]
        if not rows:
            return not any(target)
        cols = [tuple(r[k] for r in rows) for k in range(len(target))]
        return linalg.solve(cols, target) is not None


# -- parameterization ----------------------------------------------------
#
# A d x d Hermitian H has d^2 real parameters: the d diagonal entries, then
# for each k < l the real and imaginary part of H[k][l].


def _param_index(d: int):
    idx = {}
    n = d
    for k in range(d):
        for l in range(k + 1, d):
            idx[(k, l)] = n
            n += 2
    return idx


def _hermitian_params(h, d: int) -> tuple:
    out = [h[k][k].re for k in range(d)]
    for k in range(d):
        for l in range(k + 1, d):
            out.append(h[k][l].re)
            out.append(h[k][l].im)
    return tuple(out)


def _hermitian_from_params(x: Sequence[Fraction], d: int) -> tuple:
    m = [[ZERO] * d for _ in range(d)]
    for k in range(d):
        m[k][k] = Scalar(x[k])
    n = d
    for k in range(d):
        for l in range(k + 1, d):
            re, im = x[n], x[n + 1]
            n += 2
            m[k][l] = Scalar(re, im)
            m[l][k] = Scalar(re, -im)
    return tuple(tuple(r) for r in m)


def _sandwich_rows(u: Sequence[Scalar], v: Sequence[Scalar], d: int) -> tuple[tuple, tuple]:
    """Real and imaginary coefficient rows of <u|H|v> in the H parameters."""
    idx = _param_index(d)
    coef: list[Scalar] = [ZERO] * (d * d)
    uc = [x.conjugate() for x in u]
    for k in range(d):
        if uc[k] and v[k]:
            coef[k] = coef[k] + uc[k] * v[k]
    i_unit = Scalar(0, 1)
    for (k, l), n in idx.items():
        a = uc[k] * v[l]  # multiplies H[k][l]
        b = uc[l] * v[k]  # multiplies H[l][k] = conj(H[k][l])
        if not a and not b:
            continue
        # H[k][l] = re + i im ; H[l][k] = re - i im
        coef[n] = coef[n] + a + b
        coef[n + 1] = coef[n + 1] + i_unit * (a - b)
    return tuple(c.re for c in coef), tuple(c.im for c in coef)


def _annihilation_rows(w: Sequence[Scalar], d: int) -> list[tuple]:
    """Rows of (H w)_k = 0 for every k (real and imaginary parts)."""
    rows = []
    for k in range(d):
        e = linalg.basis_vector(d, k)
        re, im = _sandwich_rows(e, w, d)
        rows.append(re)
        rows.append(im)
    return rows


def constraint_records(s: StateSet, party: int) -> list[ConstraintRecord]:
    out = []
    states = s.states
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            ov = state_overlap(states[i], states[j], skip=party)
            out.append(ConstraintRecord((i, j), (states[i].label, states[j].label), ov))
    return out


def constraint_rows(s: StateSet, party: int, records=None, local: bool = False) -> list[tuple]:
    """The real linear system whose nullspace is the admissible space."""
    d = s.dims[party]
    if records is None:
        records = constraint_records(s, party)
    rows = []
    for rec in records:
        if not rec.active:
            continue
        i, j = rec.pair
        ai, aj = s.states[i].coords(party), s.states[j].coords(party)
        if linalg.proportional(ai, aj):
            # the full states would overlap; an orthogonal set cannot contain this pair
            raise ValueError(f"states {rec.labels} share a direction on party {party + 1} with nonzero bystander overlap")
        re, im = _sandwich_rows(ai, aj, d)
        rows.append(re)
        rows.append(im)
    if local:
        for w in linalg.orthogonal_complement(s.factor_vectors(party), d):
            rows.extend(_annihilation_rows(w, d))
    return rows


def derive_constraint_space(
    s: StateSet, party: int, local: bool = False
) -> tuple[HermitianSpace, list[ConstraintRecord]]:
    """Basis of admissible M^dagger M on ``party`` plus the per-pair records."""
    require_orthogonal(s)
    if not 0 <= party < s.n_parties:
        raise ValueError(f"no party {party + 1}")
    d = s.dims[party]
    records = constraint_records(s, party)
    rows = constraint_rows(s, party, records, local)
    params = linalg.nullspace(rows, d * d, Fraction(1), Fraction(0))
    # present the basis in reduced echelon form: canonical for the space
    if params:
        params = linalg.rref(params, d * d)[0]
    basis = tuple(HermitianOperator(d, _hermitian_from_params(x, d)) for x in params)
    support = tuple(linalg.row_space_basis(s.factor_vectors(party))) if local else tuple(
        linalg.basis_vector(d, k) for k in range(d)
    )
    return HermitianSpace(party, d, basis, local, support), records


def only_trivial(space: HermitianSpace) -> bool:
    """Only multiples of the trivial element are admissible."""
    return space.dim_space <= 1


@dataclass(frozen=True)
class IrreducibilityReport:
    irreducible: bool
    per_party: tuple[bool, ...]  # only_trivial per party
    dim_spaces: tuple[int, ...]


def is_locally_irreducible(s: StateSet) -> IrreducibilityReport:
    """No party admits a nontrivial orthogonality-preserving measurement.

    Operators are taken on each party's local support, so coordinates no
    state uses do not count as measurable structure.  Sets with fewer than
    two states are reported reducible by convention.
    """
    require_orthogonal(s)
    spaces = [derive_constraint_space(s, p, local=True)[0] for p in range(s.n_parties)]
    flags = tuple(only_trivial(sp) for sp in spaces)
    dims = tuple(sp.dim_space for sp in spaces)
    return IrreducibilityReport(len(s) >= 2 and all(flags), flags, dims)


def satisfies_constraints(s: StateSet, party: int, h) -> bool:
    """Direct check of every active pair for a single operator."""
    for rec in constraint_records(s, party):
        if not rec.active:
            continue
        i, j = rec.pair
        if linalg.sandwich(s.states[i].coords(party), h, s.states[j].coords(party)):
            return False
    return True


def commute(a, b) -> bool:
    return linalg.matmul(a, b) == linalg.matmul(b, a)


def center(space: HermitianSpace) -> list[tuple]:
    """Members of the space commuting with every member (as matrices).

    Equals the whole space when the space is commutative.
    """
    d = space.dim
    mats = [b.entries for b in space.basis]
    if all(commute(a, b) for i, a in enumerate(mats) for b in mats[i + 1 :]):
        return mats
    # unknown coefficients c_k (real): sum_k c_k [B_k, B_l] = 0 for all l
    n = len(mats)
    rows = []
    comms = [[linalg.mat_sub(linalg.matmul(a, b), linalg.matmul(b, a)) for b in mats] for a in mats]
    for l in range(n):
        for r in range(d):
            for c in range(d):
                rows.append(tuple(comms[k][l][r][c].re for k in range(n)))
                rows.append(tuple(comms[k][l][r][c].im for k in range(n)))
    coeffs = linalg.nullspace(rows, n, Fraction(1), Fraction(0))
    out = []
    for cvec in coeffs:
        m = linalg.zero_matrix(d)
        for ck, b in zip(cvec, mats):
            if ck:
                m = linalg.mat_add(m, linalg.mat_scale(Scalar(ck), b))
        out.append(m)
    return out


def space_report(space: HermitianSpace, records: list[ConstraintRecord]) -> dict:
    from .fileformat import scalar_obj

    return {
        "party": space.party + 1,
        "dim": space.dim,
        "local_support": space.local,
        "dim_space": space.dim_space,
        "only_trivial": only_trivial(space),
        "active_constraints": sum(1 for r in records if r.active),
        "basis": [[[scalar_obj(x) for x in row] for row in b.entries] for b in space.basis],
    }

