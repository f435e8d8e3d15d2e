"""Canonical UTF-8 JSON text serialization.

Complex numbers are two-element ``[re, im]`` arrays and matrices are
row-major nested arrays.  Writing is hand-rolled so every float carries 17
significant digits and output bytes are deterministic; reading goes through
the stdlib ``json`` parser and re-checks the domain invariants.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InfoBalanceError, ParseError
from .objects import Instrument, OutcomeMap, Povm, validate
from .tensors import LabeledState, Subsystem


def _fmt_float(x: float) -> str:
    if not np.isfinite(x):
        raise ParseError(f"cannot serialize non-finite float {x}")
    return format(float(x), ".17g")


def dumps_json(obj) -> str:
    """Serialize dicts/lists/str/numbers with full-precision floats."""
    return _emit(obj) + "\n"


def _emit(obj) -> str:
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    raise ParseError(f"cannot serialize object of type {type(obj).__name__}")


def _matrix_out(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _loads(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _expect(node, typ, where: str):
    if not isinstance(node, typ):
        raise ParseError(
            f"field {where!r}: expected {typ.__name__}, got {type(node).__name__}"
        )
    return node


def _matrix_in(node, where: str) -> np.ndarray:
    rows = _expect(node, list, where)
    if not rows:
        raise ParseError(f"field {where!r}: empty matrix")
    width = None
    out = []
    for i, row in enumerate(rows):
        row = _expect(row, list, f"{where}[{i}]")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"field {where!r}: row {i} has ragged length")
        entries = []
        for j, z in enumerate(row):
            z = _expect(z, list, f"{where}[{i}][{j}]")
            if len(z) != 2 or not all(isinstance(t, (int, float)) for t in z):
                raise ParseError(
                    f"field {where!r}[{i}][{j}]: complex entries are [re, im]"
                )
            entries.append(complex(z[0], z[1]))
        out.append(entries)
    return np.array(out, dtype=complex)


# -- instruments -------------------------------------------------------------

def dumps_instrument(instr: Instrument) -> str:
    doc = {
        "d_in": instr.d_in,
        "d_out": instr.d_out,
        "outcomes": [
            {"label": o.label, "kraus": [_matrix_out(k) for k in o.kraus]}
            for o in instr.outcomes
        ],
    }
    return dumps_json(doc)


def loads_instrument(text: str, validate_invariants: bool = True) -> Instrument:
    doc = _expect(_loads(text), dict, "<root>")
    for key in ("d_in", "d_out", "outcomes"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    d_in = _expect(doc["d_in"], int, "d_in")
    d_out = _expect(doc["d_out"], int, "d_out")
    outcomes = []
    for i, onode in enumerate(_expect(doc["outcomes"], list, "outcomes")):
        onode = _expect(onode, dict, f"outcomes[{i}]")
        label = _expect(onode.get("label"), str, f"outcomes[{i}].label")
        knode = _expect(onode.get("kraus"), list, f"outcomes[{i}].kraus")
        if not knode:
            raise ParseError(f"outcomes[{i}].kraus: empty Kraus list")
        kraus = tuple(
            _matrix_in(k, f"outcomes[{i}].kraus[{j}]") for j, k in enumerate(knode)
        )
        try:
            outcomes.append(OutcomeMap(label, kraus))
        except InfoBalanceError as exc:
            raise ParseError(f"outcomes[{i}]: {exc}") from exc
    try:
        instr = Instrument(d_in, d_out, tuple(outcomes))
    except InfoBalanceError as exc:
        raise ParseError(str(exc)) from exc
    if validate_invariants:
        report = validate(instr)
        if not report.passed:
            raise ParseError(
                "instrument invariant violated: " + "; ".join(report.issues)
            )
    return instr


# -- states -------------------------------------------------------------------

def dumps_state(state: LabeledState) -> str:
    doc = {
        "labels": [{"name": lab.name, "dim": lab.dim} for lab in state.labels],
        "matrix": _matrix_out(state.matrix),
    }
    return dumps_json(doc)


def loads_state(text: str, validate_invariants: bool = True) -> LabeledState:
    doc = _expect(_loads(text), dict, "<root>")
    for key in ("labels", "matrix"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    labels = []
    for i, lnode in enumerate(_expect(doc["labels"], list, "labels")):
        lnode = _expect(lnode, dict, f"labels[{i}]")
        name = _expect(lnode.get("name"), str, f"labels[{i}].name")
        dim = _expect(lnode.get("dim"), int, f"labels[{i}].dim")
        try:
            labels.append(Subsystem(name, dim))
        except InfoBalanceError as exc:
            raise ParseError(f"labels[{i}]: {exc}") from exc
    matrix = _matrix_in(doc["matrix"], "matrix")
    try:
        return LabeledState(tuple(labels), matrix, validate=validate_invariants)
    except InfoBalanceError as exc:
        raise ParseError(f"state invariant violated: {exc}") from exc


# -- recovery families ---------------------------------------------------------

def dumps_recovery_family(family) -> str:
    """Each recovery channel is a single-outcome instrument document."""
    docs = []
    for label, kraus, flag in zip(
        family.outcome_labels, family.channels, family.completion_flags
    ):
        rows, cols = kraus[0].shape
        docs.append(
            {
                "d_in": int(cols),
                "d_out": int(rows),
                "outcomes": [
                    {"label": label, "kraus": [_matrix_out(k) for k in kraus]}
                ],
                "completion": bool(flag),
            }
        )
    return dumps_json({"channels": docs})


def loads_recovery_family(text: str, validate_invariants: bool = True):
    from .recovery import RecoveryFamily

    doc = _expect(_loads(text), dict, "<root>")
    if "channels" not in doc:
        raise ParseError("missing field 'channels'")
    labels, channels, flags = [], [], []
    for i, cnode in enumerate(_expect(doc["channels"], list, "channels")):
        cnode = _expect(cnode, dict, f"channels[{i}]")
        channel = loads_instrument(
            dumps_json(cnode), validate_invariants=validate_invariants
        )
        if channel.n_outcomes != 1:
            raise ParseError(f"channels[{i}]: expected a single-outcome document")
        labels.append(channel.outcomes[0].label)
        channels.append(channel.outcomes[0].kraus)
        flags.append(bool(cnode.get("completion", False)))
    return RecoveryFamily(tuple(labels), tuple(channels), tuple(flags))


# -- POVMs --------------------------------------------------------------------

def dumps_povm(povm: Povm) -> str:
    doc = {
        "d": povm.d,
        "elements": [
            {"label": label, "matrix": _matrix_out(m)} for label, m in povm.elements
        ],
    }
    return dumps_json(doc)


def loads_povm(text: str) -> Povm:
    doc = _expect(_loads(text), dict, "<root>")
    for key in ("d", "elements"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    d = _expect(doc["d"], int, "d")
    elements = []
    for i, enode in enumerate(_expect(doc["elements"], list, "elements")):
        enode = _expect(enode, dict, f"elements[{i}]")
        label = _expect(enode.get("label"), str, f"elements[{i}].label")
        matrix = _matrix_in(enode.get("matrix"), f"elements[{i}].matrix")
        elements.append((label, matrix))
    try:
        return Povm(d, tuple(elements))
    except InfoBalanceError as exc:
        raise ParseError(str(exc)) from exc
