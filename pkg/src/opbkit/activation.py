"""Local activability and strong locality."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .constraints import is_locally_irreducible
from .core import (
    Bipartition,
    Completeness,
    StateSet,
    all_bipartitions,
    canonical_key,
    classify_completeness,
    first_nonorthogonal_pair,
    flatten,
)
from .discrimination import DEFAULT_MAX_DEPTH, ProtocolSearch, Verdict
from .measurement import PVM, apply_pvm, apply_projector, is_orthogonality_preserving

MAX_REACHABLE_SETS = 10_000


class Status(str, Enum):
    NOT_ACTIVABLE = "NOT_ACTIVABLE"
    ACTIVABLE = "ACTIVABLE"
    UNKNOWN = "UNKNOWN"
    NOT_APPLICABLE = "NOT_APPLICABLE"


class TerminalProperty(str, Enum):
    LOCALLY_IRREDUCIBLE = "LOCALLY_IRREDUCIBLE"
    INDISTINGUISHABLE_PROJECTIVE = "INDISTINGUISHABLE_PROJECTIVE"


@dataclass(frozen=True)
class Step:
    party: int
    pvm: PVM
    outcome: int


@dataclass(frozen=True)
class ActivationWitness:
    steps: tuple[Step, ...]
    terminal: StateSet
    terminal_property: TerminalProperty
    # every nonempty outcome of the last step also lands on an activated set
    deterministic: bool = False


@dataclass(frozen=True)
class ActivationResult:
    status: Status
    reason: str = ""
    witness: ActivationWitness | None = None
    explored: int = 0
    notes: tuple[str, ...] = ()


def _terminal_property(t: StateSet, search: ProtocolSearch) -> TerminalProperty | None:
    if len(t) < 2:
        return None
    if is_locally_irreducible(t).irreducible:
        return TerminalProperty.LOCALLY_IRREDUCIBLE
    v = search.run(t)
    if v.verdict is Verdict.INDISTINGUISHABLE_PROJECTIVE:
        return TerminalProperty.INDISTINGUISHABLE_PROJECTIVE
    return None


@dataclass
class _Explorer:
    """Breadth-first walk over sets reachable by orthogonality-preserving PVMs."""

    max_depth: int
    search: ProtocolSearch
    cap: int = MAX_REACHABLE_SETS
    certain: bool = True
    notes: set = field(default_factory=set)

    def children(self, s: StateSet):
        for party in range(s.n_parties):
            enum = self.search.enumerate(s, party)
            if not enum.complete:
                self.certain = False
                self.notes.update(enum.notes)
            for pvm in enum.pvms:
                outcomes = apply_pvm(s, pvm)
                yield party, pvm, outcomes


def is_activable(s: StateSet, max_depth: int = DEFAULT_MAX_DEPTH, search: ProtocolSearch | None = None) -> ActivationResult:
    """Decide whether ``s`` can be steered into an indistinguishable set.

    Complete sets and sets complete on a product subspace are closed under
    orthogonality-preserving projective measurements, so they are settled
    without search.  Otherwise reachable sets are explored breadth-first
    (one branch per witness) until an irreducible or projectively
    indistinguishable set of at least two states turns up.
    """
    pair = first_nonorthogonal_pair(s)
    if pair is not None:
        return ActivationResult(Status.NOT_APPLICABLE, f"states {pair[0]} and {pair[1]} are not orthogonal")
    if search is None:
        search = ProtocolSearch(max_depth)
    start = search.run(s)
    if start.verdict is not Verdict.DISTINGUISHABLE:
        return ActivationResult(Status.NOT_APPLICABLE, f"input is {start.verdict.value}", notes=start.notes)
    cls = classify_completeness(s)
    if cls.tag in (Completeness.COMPLETE, Completeness.SUBSPACE_COMPLETE):
        return ActivationResult(Status.NOT_ACTIVABLE, "CLOSURE", notes=(cls.tag.value,))

    explorer = _Explorer(max_depth, search)
    seen = {canonical_key(s)}
    frontier: list[tuple[StateSet, tuple[Step, ...]]] = [(s, ())]
    explored = 0
    for _level in range(max_depth):
        nxt = []
        for node, path in frontier:
            for party, pvm, outcomes in explorer.children(node):
                for res in outcomes:
                    child = res.survivors
                    if len(child) < 2:
                        continue
                    key = canonical_key(child)
                    if key in seen:
                        continue
                    seen.add(key)
                    explored += 1
                    steps = path + (Step(party, pvm, res.element_index),)
                    prop = _terminal_property(child, search)
                    if prop is not None:
                        det = all(
                            len(o.survivors) >= 2 and _terminal_property(o.survivors, search) is not None
                            for o in outcomes
                            if len(o.survivors)
                        )
                        w = ActivationWitness(steps, child, prop, det)
                        return ActivationResult(Status.ACTIVABLE, prop.value, w, explored, tuple(sorted(explorer.notes)))
                    if search.run(child).verdict is not Verdict.DISTINGUISHABLE:
                        explorer.certain = False
                    if len(seen) >= explorer.cap:
                        return ActivationResult(
                            Status.UNKNOWN, "REACHABLE_SET_CAP", None, explored, tuple(sorted(explorer.notes))
                        )
                    nxt.append((child, steps))
        frontier = nxt
        if not frontier:
            status = Status.NOT_ACTIVABLE if explorer.certain else Status.UNKNOWN
            reason = "EXHAUSTED" if explorer.certain else "EXHAUSTED_WITH_INCOMPLETE_ENUMERATION"
            return ActivationResult(status, reason, None, explored, tuple(sorted(explorer.notes)))
    return ActivationResult(Status.UNKNOWN, "DEPTH_EXCEEDED", None, explored, tuple(sorted(explorer.notes)))


def reachable_sets(s: StateSet, max_depth: int = DEFAULT_MAX_DEPTH, cap: int = MAX_REACHABLE_SETS) -> list[StateSet]:
    """Every distinct set reachable by sequences of enumerated OP PVMs."""
    search = ProtocolSearch(max_depth)
    explorer = _Explorer(max_depth, search, cap)
    seen = {canonical_key(s)}
    out = []
    frontier = [s]
    for _ in range(max_depth):
        nxt = []
        for node in frontier:
            for _party, _pvm, outcomes in explorer.children(node):
                for res in outcomes:
                    child = res.survivors
                    if not len(child):
                        continue
                    key = canonical_key(child)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(child)
                    if len(seen) >= cap:
                        return out
                    nxt.append(child)
        frontier = nxt
        if not frontier:
            break
    return out


def replay_witness(s: StateSet, w: ActivationWitness) -> bool:
    """Re-derive the terminal set from ``s`` and re-verify its property."""
    from .fileformat import serialize_state_set

    cur = s
    for step in w.steps:
        if step.pvm.party != step.party or not is_orthogonality_preserving(cur, step.pvm):
            return False
        cur = apply_projector(cur, step.pvm.elements[step.outcome], step.outcome).survivors
    if serialize_state_set(cur) != serialize_state_set(w.terminal):
        return False
    if len(cur) < 2:
        return False
    if w.terminal_property is TerminalProperty.LOCALLY_IRREDUCIBLE:
        return is_locally_irreducible(cur).irreducible
    return ProtocolSearch().run(cur).verdict is Verdict.INDISTINGUISHABLE_PROJECTIVE


@dataclass(frozen=True)
class StrongLocalityReport:
    bipartition_verdicts: dict[Bipartition, ActivationResult]
    overall: str  # STRONGLY_LOCAL / NOT_STRONGLY_LOCAL / UNKNOWN
    annotations: tuple[str, ...] = ()

    @property
    def strongly_local(self) -> bool:
        return self.overall == "STRONGLY_LOCAL"


def is_strongly_local(s: StateSet, max_depth: int = DEFAULT_MAX_DEPTH) -> StrongLocalityReport:
    if s.n_parties < 2:
        raise ValueError("strong locality needs at least two parties")
    verdicts = {}
    for b in all_bipartitions(s.n_parties):
        flat = flatten(s, b) if s.n_parties > 2 else s
        verdicts[b] = is_activable(flat, max_depth)
    statuses = [r.status for r in verdicts.values()]
    if all(st is Status.NOT_ACTIVABLE for st in statuses):
        overall = "STRONGLY_LOCAL"
    elif any(st is Status.ACTIVABLE for st in statuses):
        overall = "NOT_STRONGLY_LOCAL"
    else:
        overall = "UNKNOWN"
    notes = []
    if s.n_parties < 3 or any(d < 3 for d in s.dims):
        notes.append("outside the n >= 3, all d_i >= 3 regime where strong locality is usually posed")
    return StrongLocalityReport(verdicts, overall, tuple(notes))


def find_activation_witness(s: StateSet, max_depth: int = DEFAULT_MAX_DEPTH) -> ActivationWitness | None:
    return is_activable(s, max_depth).witness
