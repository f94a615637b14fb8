"""JSON views of analysis results, and the PVM literal format.

A PVM literal names a party (1-based) and its elements, each a list of
spanning vectors in the state-set scalar format.  The string ``"rest"`` may
stand for the projector onto whatever the other elements leave uncovered::

    {"party": 2, "elements": [[[["1","0"],["0","0"]]], "rest"]}
"""

from __future__ import annotations

import json
from typing import Any

from . import linalg
from .activation import ActivationResult, ActivationWitness, StrongLocalityReport
from .core import StateSet, StateSetError
from .discrimination import DistinguishabilityVerdict, ProtocolNode, UPBResult
from .fileformat import SCHEMA, parse_vector, state_obj, state_set_obj, vector_obj
from .measurement import PVM, OutcomeResult, Projector, PVMError


def _fmt(obj: Any, indent: int) -> str:
    pad = " " * indent
    if isinstance(obj, dict) and obj:
        items = [f"{pad} {json.dumps(k)}: {_fmt(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(x, dict) for x in obj):
        items = [f"{pad} {_fmt(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    # scalars, vectors and label lists stay on one line
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def dumps(obj: Any) -> str:
    """Deterministic JSON text: insertion-ordered keys, objects indented,
    lists without objects kept on one line."""
    return _fmt(obj, 0) + "\n"


def with_schema(command: str, body: dict) -> dict:
    return {"schema": SCHEMA, "command": command, **body}


# -- PVMs --------------------------------------------------------------------


def projector_obj(p: Projector) -> list:
    return [vector_obj(v) for v in p.support]


def pvm_obj(m: PVM) -> dict:
    return {"party": m.party + 1, "elements": [projector_obj(e) for e in m.elements]}


def pvm_from_obj(obj: Any, dims: tuple[int, ...] | None = None) -> PVM:
    if not isinstance(obj, dict):
        raise StateSetError("pvm: top level must be an object")
    unknown = set(obj) - {"party", "elements", "schema"}
    if unknown:
        raise StateSetError(f"pvm: unknown field(s) {sorted(unknown)}")
    party = obj.get("party")
    if not isinstance(party, int) or isinstance(party, bool) or party < 1:
        raise StateSetError("pvm.party: expected a positive integer")
    if dims is not None and party > len(dims):
        raise StateSetError(f"pvm.party: no party {party} in a {len(dims)}-party set")
    elements = obj.get("elements")
    if not isinstance(elements, list) or not elements:
        raise StateSetError("pvm.elements: expected a nonempty list")
    d = dims[party - 1] if dims is not None else None
    projectors: list[Projector | None] = []
    rest_at = None
    for k, el in enumerate(elements):
        where = f"pvm.elements[{k}]"
        if el == "rest":
            if rest_at is not None:
                raise StateSetError(f"{where}: only one 'rest' element allowed")
            rest_at = k
            projectors.append(None)
            continue
        if not isinstance(el, list) or not el:
            raise StateSetError(f"{where}: expected a nonempty list of vectors or 'rest'")
        vecs = [parse_vector(v, f"{where}[{j}]") for j, v in enumerate(el)]
        if d is None:
            d = len(vecs[0])
        if any(len(v) != d for v in vecs):
            raise StateSetError(f"{where}: vectors must have length {d}")
        if linalg.rank(vecs) == 0:
            raise StateSetError(f"{where}: spans the zero space")
        projectors.append(Projector(party - 1, vecs, d))
    if d is None:
        raise StateSetError("pvm.elements: cannot infer the dimension from 'rest' alone")
    if rest_at is not None:
        taken = [v for p in projectors if p is not None for v in p.support]
        comp = linalg.orthogonal_complement(taken, d)
        if not comp:
            raise StateSetError("pvm.elements: 'rest' would be the zero projector")
        projectors[rest_at] = Projector(party - 1, comp, d)
    try:
        return PVM(party - 1, tuple(projectors))
    except PVMError as exc:
        raise StateSetError(f"pvm.elements: {exc}") from None


def parse_pvm(text: str, dims: tuple[int, ...] | None = None) -> PVM:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSetError(f"pvm: not valid JSON: {exc}") from None
    return pvm_from_obj(obj, dims)


# -- results -----------------------------------------------------------------


def outcome_obj(o: OutcomeResult) -> dict:
    return {
        "element": o.element_index,
        "closure": o.closure.value,
        "survivors": [st.label for st in o.survivors.states],
        "eliminated": list(o.eliminated_labels),
        "post_states": [state_obj(st) for st in o.survivors.states],
    }


def tree_obj(node: ProtocolNode) -> dict:
    labels = list(node.candidates.labels)
    if node.terminal:
        return {
            "type": "LEAF" if node.identified is not None else "FAIL",
            "candidates": labels,
            "identified": node.identified,
        }
    return {
        "type": "MEASURE",
        "candidates": labels,
        "party": node.pvm.party + 1,
        "pvm": [projector_obj(e) for e in node.pvm.elements],
        "children": [{"outcome": k, "node": tree_obj(c)} for k, c in node.children],
    }


def verdict_obj(v: DistinguishabilityVerdict) -> dict:
    out: dict[str, Any] = {"verdict": v.verdict.value, "depth_used": v.depth_used}
    if v.tree.pvm is not None:
        out["tree"] = tree_obj(v.tree)
    if v.blocking is not None:
        out["blocking"] = list(v.blocking.labels)
    out["notes"] = list(v.notes)
    return out


def upb_obj(r: UPBResult) -> dict:
    out: dict[str, Any] = {"upb": r.unextendible}
    if r.witness is not None:
        out["witness"] = [vector_obj(f.coords) for f in r.witness.factors]
        out["assignment"] = [p + 1 for p in r.assignment]
    return out


def witness_obj(w: ActivationWitness) -> dict:
    return {
        "steps": [{"party": st.party + 1, "pvm": pvm_obj(st.pvm)["elements"], "outcome": st.outcome} for st in w.steps],
        "terminal_property": w.terminal_property.value,
        "deterministic": w.deterministic,
        "terminal": state_set_obj(w.terminal),
    }


def activation_obj(r: ActivationResult) -> dict:
    out: dict[str, Any] = {"verdict": r.status.value, "reason": r.reason}
    if r.witness is not None:
        out.update(witness_obj(r.witness))
    out["explored"] = r.explored
    out["notes"] = list(r.notes)
    return out


def strong_locality_obj(r: StrongLocalityReport) -> dict:
    return {
        "verdict": r.overall,
        "bipartitions": [{"bipartition": str(b), **activation_obj(v)} for b, v in r.bipartition_verdicts.items()],
        "annotations": list(r.annotations),
    }
