"""State-set text format.

A state-set file is a JSON object::

    {"dims":[3,6],
     "splits":{"2":[2,3]},
     "states":[
      {"label":"phi1","factors":[[["1","0"],["0","0"],["0","0"]],[...]]},
      ...
     ]}

Each scalar is a ``[re, im]`` pair of rational strings (``"p/q"`` or
``"p"``).  Party numbers in ``splits`` are 1-based.  An optional ``"meta"``
object of string notes may follow ``"states"``.  ``serialize_state_set``
emits the canonical form: keys in that order, one state per line, rationals
reduced with positive denominators.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core import LocalVector, ProductState, StateSet, StateSetError
from .linalg import Scalar

SCHEMA = "opbkit/1"


def parse_rational(text: Any, where: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise StateSetError(f"{where}: expected a rational string, got {text!r}")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise StateSetError(f"{where}: malformed rational {text!r}") from None


def parse_scalar(obj: Any, where: str) -> Scalar:
    if not isinstance(obj, list) or len(obj) != 2:
        raise StateSetError(f"{where}: a scalar must be a [re, im] pair, got {obj!r}")
    return Scalar(parse_rational(obj[0], where + ".re"), parse_rational(obj[1], where + ".im"))


def parse_vector(obj: Any, where: str) -> tuple:
    if not isinstance(obj, list):
        raise StateSetError(f"{where}: a vector must be a list of scalars")
    return tuple(parse_scalar(x, f"{where}[{k}]") for k, x in enumerate(obj))


def state_set_from_obj(obj: Any) -> StateSet:
    if not isinstance(obj, dict):
        raise StateSetError("top level must be an object")
    unknown = set(obj) - {"dims", "splits", "states", "meta", "schema"}
    if unknown:
        raise StateSetError(f"unknown top-level field(s): {sorted(unknown)}")
    dims = obj.get("dims")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise StateSetError("dims: expected a nonempty list of integers")
    splits_obj = obj.get("splits", {})
    if not isinstance(splits_obj, dict):
        raise StateSetError("splits: expected an object")
    splits = {}
    for key, val in splits_obj.items():
        try:
            party = int(key) - 1
        except ValueError:
            raise StateSetError(f"splits: bad party key {key!r}") from None
        if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
            raise StateSetError(f"splits.{key}: expected a list of integers")
        splits[party] = tuple(val)
    states_obj = obj.get("states")
    if not isinstance(states_obj, list):
        raise StateSetError("states: expected a list")
    states = []
    for i, st in enumerate(states_obj):
        where = f"states[{i}]"
        if not isinstance(st, dict) or set(st) != {"label", "factors"}:
            raise StateSetError(f"{where}: expected an object with 'label' and 'factors'")
        label = st["label"]
        if not isinstance(label, str) or not label:
            raise StateSetError(f"{where}.label: expected a nonempty string")
        facs = st["factors"]
        if not isinstance(facs, list) or len(facs) != len(dims):
            raise StateSetError(f"{where}.factors: expected {len(dims)} factors")
        vecs = []
        for p, f in enumerate(facs):
            v = parse_vector(f, f"{where}.factors[{p}]")
            if len(v) != dims[p]:
                raise StateSetError(
                    f"{where}.factors[{p}]: length {len(v)} does not match dimension {dims[p]}"
                )
            vecs.append(LocalVector(p, v))
        states.append(ProductState(label, tuple(vecs)))
    meta = obj.get("meta", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise StateSetError("meta: expected an object of strings")
    return StateSet(tuple(dims), tuple(states), splits, meta)


def parse_state_set(text: str) -> StateSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSetError(f"not valid JSON: {exc}") from None
    return state_set_from_obj(obj)


def rational_str(x: Fraction) -> str:
    return str(x)


def scalar_obj(x: Scalar) -> list[str]:
    return [rational_str(x.re), rational_str(x.im)]


def vector_obj(v) -> list:
    return [scalar_obj(x) for x in v]


def state_obj(st: ProductState) -> dict:
    return {"label": st.label, "factors": [vector_obj(f.coords) for f in st.factors]}


def state_set_obj(s: StateSet) -> dict:
    out: dict[str, Any] = {
        "dims": list(s.dims),
        "splits": {str(p + 1): list(v) for p, v in sorted(s.splits.items())},
        "states": [state_obj(st) for st in s.states],
    }
    if s.meta:
        out["meta"] = dict(s.meta)
    return out


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def serialize_state_set(s: StateSet) -> str:
    obj = state_set_obj(s)
    lines = ['{"dims":' + _dump(obj["dims"]) + ",", ' "splits":' + _dump(obj["splits"]) + ","]
    states = obj["states"]
    if states:
        lines.append(' "states":[')
        for k, st in enumerate(states):
            lines.append("  " + _dump(st) + ("," if k + 1 < len(states) else ""))
        lines.append(" ]" + ("," if "meta" in obj else "}"))
    else:
        lines.append(' "states":[]' + ("," if "meta" in obj else "}"))
    if "meta" in obj:
        lines.append(' "meta":' + _dump(obj["meta"]) + "}")
    return "\n".join(lines) + "\n"


def load_state_set(path) -> StateSet:
    with open(path, encoding="utf-8") as fh:
        return parse_state_set(fh.read())
