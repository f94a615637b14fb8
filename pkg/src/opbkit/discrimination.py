"""Projective-LPCC protocol search and unextendibility."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from . import linalg
from .core import ProductState, StateSet, canonical_key, require_orthogonal
from .measurement import PVM, PVMEnumeration, apply_pvm, enumerate_op_pvms_report

DEFAULT_MAX_DEPTH = 8


class Verdict(str, Enum):
    DISTINGUISHABLE = "DISTINGUISHABLE"
    INDISTINGUISHABLE_PROJECTIVE = "INDISTINGUISHABLE_PROJECTIVE"
    UNKNOWN_DEPTH_EXCEEDED = "UNKNOWN_DEPTH_EXCEEDED"


@dataclass(frozen=True)
class ProtocolNode:
    """A node of a discrimination protocol.

    Terminal nodes carry ``identified`` (the one remaining label) or are
    failures.  Measuring nodes carry the PVM and one child per element with
    surviving candidates, keyed by element index.
    """

    candidates: StateSet
    identified: str | None = None
    pvm: PVM | None = None
    children: tuple[tuple[int, "ProtocolNode"], ...] = ()

    @property
    def terminal(self) -> bool:
        return self.pvm is None

    @property
    def failed(self) -> bool:
        return self.pvm is None and self.identified is None

    def height(self) -> int:
        if self.terminal:
            return 0
        return 1 + max(c.height() for _, c in self.children)

    def walk(self):
        yield self
        for _, c in self.children:
            yield from c.walk()

    def leaves(self):
        return [n for n in self.walk() if n.terminal]


@dataclass(frozen=True)
class DistinguishabilityVerdict:
    verdict: Verdict
    tree: ProtocolNode
    depth_used: int
    blocking: StateSet | None = None  # locally irreducible candidate set, when one certifies failure
    notes: tuple[str, ...] = ()


@dataclass
class _Outcome:
    verdict: Verdict
    node: ProtocolNode
    need: int  # DISTINGUISHABLE: tree height; UNKNOWN: depth budget that was tried
    blocking: StateSet | None = None


@dataclass
class ProtocolSearch:
    """Depth-first AND/OR search over orthogonality-preserving PVMs.

    A node succeeds when some PVM on some party splits the candidates and
    every nonempty outcome succeeds.  Results are memoized on the exact
    candidate geometry.  Single-threaded; the memo and enumeration caches may
    be shared between searches on related sets.
    """

    max_depth: int = DEFAULT_MAX_DEPTH
    memo: dict = field(default_factory=dict)
    enum_cache: dict = field(default_factory=dict)
    notes: set = field(default_factory=set)

    def enumerate(self, s: StateSet, party: int) -> PVMEnumeration:
        key = (canonical_key(s), party)
        hit = self.enum_cache.get(key)
        if hit is None:
            hit = enumerate_op_pvms_report(s, party)
            self.enum_cache[key] = hit
        return hit

    def run(self, s: StateSet) -> DistinguishabilityVerdict:
        require_orthogonal(s)
        out = self._solve(s, self.max_depth)
        if out.verdict is Verdict.DISTINGUISHABLE:
            return DistinguishabilityVerdict(out.verdict, out.node, out.node.height(), None, tuple(sorted(self.notes)))
        return DistinguishabilityVerdict(out.verdict, ProtocolNode(s), 0, out.blocking, tuple(sorted(self.notes)))

    def _solve(self, s: StateSet, depth: int) -> _Outcome:
        if len(s) <= 1:
            label = s.states[0].label if len(s) else None
            return _Outcome(Verdict.DISTINGUISHABLE, ProtocolNode(s, identified=label), 0)
        key = canonical_key(s)
        hit = self.memo.get(key)
        if hit is not None:
            if hit.verdict is Verdict.DISTINGUISHABLE and hit.need <= depth:
                return _Outcome(hit.verdict, _rebind(hit.node, s), hit.need)
            if hit.verdict is Verdict.INDISTINGUISHABLE_PROJECTIVE:
                return hit
            if hit.verdict is Verdict.UNKNOWN_DEPTH_EXCEEDED and hit.need >= depth:
                return hit
        out = self._expand(s, depth)
        self.memo[key] = out
        return out

    def _expand(self, s: StateSet, depth: int) -> _Outcome:
        if depth <= 0:
            return _Outcome(Verdict.UNKNOWN_DEPTH_EXCEEDED, ProtocolNode(s), depth)
        certain = True
        any_move = False
        blocking = None
        for party in range(s.n_parties):
            enum = self.enumerate(s, party)
            if not enum.complete:
                certain = False
                self.notes.update(enum.notes)
            for pvm in enum.pvms:
                any_move = True
                children = []
                ok = True
                for res in apply_pvm(s, pvm):
                    if not len(res.survivors):
                        continue
                    sub = self._solve(res.survivors, depth - 1)
                    if sub.verdict is not Verdict.DISTINGUISHABLE:
                        ok = False
                        if sub.verdict is Verdict.UNKNOWN_DEPTH_EXCEEDED:
                            certain = False
                        elif blocking is None:
                            blocking = sub.blocking
                        break
                    children.append((res.element_index, sub.node))
                if ok:
                    node = ProtocolNode(s, pvm=pvm, children=tuple(children))
                    return _Outcome(Verdict.DISTINGUISHABLE, node, node.height())
        if not any_move:
            if certain:
                return _Outcome(Verdict.INDISTINGUISHABLE_PROJECTIVE, ProtocolNode(s), 0, s)
            return _Outcome(Verdict.UNKNOWN_DEPTH_EXCEEDED, ProtocolNode(s), 10**9)
        if certain:
            return _Outcome(Verdict.INDISTINGUISHABLE_PROJECTIVE, ProtocolNode(s), 0, blocking)
        return _Outcome(Verdict.UNKNOWN_DEPTH_EXCEEDED, ProtocolNode(s), depth)


def _rebind(node: ProtocolNode, s: StateSet) -> ProtocolNode:
    """Replay a memoized subtree on an equal-geometry candidate set.

    Equal keys only fix directions, so the recorded child sets are recomputed
    from ``s`` to keep the tree exactly replayable.
    """
    if node.candidates is s:
        return node
    if node.terminal:
        return ProtocolNode(s, identified=node.identified)
    outcomes = apply_pvm(s, node.pvm)
    children = tuple((k, _rebind(child, outcomes[k].survivors)) for k, child in node.children)
    return ProtocolNode(s, pvm=node.pvm, children=children)


def search_protocol(s: StateSet, max_depth: int = DEFAULT_MAX_DEPTH) -> DistinguishabilityVerdict:
    return ProtocolSearch(max_depth).run(s)


# -- replay ----------------------------------------------------------------


def replay_protocol(tree: ProtocolNode) -> bool:
    """Re-apply every PVM and compare with the recorded candidate sets.

    True when every recorded child set is reproduced exactly (canonical
    serialization) and every leaf identifies a single state.
    """
    from .fileformat import serialize_state_set

    for node in tree.walk():
        if node.terminal:
            if node.identified is None or len(node.candidates) != 1:
                return False
            if node.candidates.states[0].label != node.identified:
                return False
            continue
        outcomes = apply_pvm(node.candidates, node.pvm)
        expected = {k: o.survivors for k, o in enumerate(outcomes) if len(o.survivors)}
        if sorted(expected) != sorted(k for k, _ in node.children):
            return False
        for k, child in node.children:
            if serialize_state_set(expected[k]) != serialize_state_set(child.candidates):
                return False
    return True


# -- unextendibility ---------------------------------------------------------


@dataclass(frozen=True)
class UPBResult:
    unextendible: bool
    witness: ProductState | None = None
    assignment: tuple[int, ...] | None = None  # party index chosen for each state


def is_upb(s: StateSet) -> UPBResult:
    """Decide whether some product state is orthogonal to every member.

    A product state x_1 (x) ... (x) x_n is orthogonal to member i exactly when
    some party p has <a_i^p|x_p> = 0.  Enumerate every assignment of members
    to parties; the set is extendible iff for some assignment every party's
    assigned factors leave a nonzero orthogonal complement, whose first basis
    vector then serves as that party's witness factor.
    """
    require_orthogonal(s)
    n = s.n_parties
    factors = [s.factor_vectors(p) for p in range(n)]
    rank_cache: dict[tuple[int, frozenset], bool] = {}

    def spans_full(p: int, members: frozenset) -> bool:
        k = (p, members)
        if k not in rank_cache:
            vecs = [factors[p][i] for i in members]
            rank_cache[k] = len(vecs) >= s.dims[p] and linalg.rank(vecs) == s.dims[p]
        return rank_cache[k]

    m = len(s)
    for assignment in itertools.product(range(n), repeat=m):
        groups = [frozenset(i for i, q in enumerate(assignment) if q == p) for p in range(n)]
        if any(spans_full(p, groups[p]) for p in range(n)):
            continue
        witness = []
        for p in range(n):
            comp = linalg.orthogonal_complement([factors[p][i] for i in groups[p]], s.dims[p])
            witness.append(comp[0])
        return UPBResult(False, ProductState.of("witness", *witness), tuple(assignment))
    return UPBResult(True)
