"""Abstract circuit descriptions and workload bookkeeping.

Circuits are described only by what the scheduler needs: a qubit count, a
depth, and an operation list over virtual qubit indices.  The two-qubit
operations induce an interaction graph that layouts must embed into the
device's coupling map.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DocumentError

OP_KINDS = ("1q", "2q", "measure")


@dataclass(frozen=True)
class CircuitOp:
    """One abstract operation: kind is '1q', '2q', or 'measure'."""

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in OP_KINDS:
            raise ValueError(f"unknown op kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        expected = 2 if self.kind == "2q" else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind!r} op must act on {expected} qubit(s), got {self.qubits}")
        if self.kind == "2q" and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"2q op must act on two distinct qubits, got {self.qubits}")


class CircuitSpec:
    """A circuit abstracted to qubit count, depth, and operation list."""

    def __init__(self, circuit_id: str, num_qubits: int, depth: int, ops: Iterable[CircuitOp]):
        if not isinstance(circuit_id, str) or not circuit_id:
            raise ValueError(f"circuit id must be a non-empty string, got {circuit_id!r}")
        if not isinstance(num_qubits, int) or isinstance(num_qubits, bool) or num_qubits <= 0:
            raise ValueError(f"num_qubits must be a positive integer, got {num_qubits!r}")
        if not isinstance(depth, int) or isinstance(depth, bool) or depth <= 0:
            raise ValueError(f"depth must be a positive integer, got {depth!r}")
        self.id = circuit_id
        self.num_qubits = num_qubits
        self.depth = depth
        self.ops = tuple(ops)
        for op in self.ops:
            if not isinstance(op, CircuitOp):
                raise ValueError(f"ops must be CircuitOp instances, got {op!r}")
            for q in op.qubits:
                if not 0 <= q < num_qubits:
                    raise ValueError(
                        f"circuit {circuit_id!r}: op qubit {q} out of range for "
                        f"{num_qubits} qubits"
                    )
        pairs = set()
        for op in self.ops:
            if op.kind == "2q":
                a, b = op.qubits
                pairs.add((a, b) if a < b else (b, a))
        self.interaction_graph: frozenset[tuple[int, int]] = frozenset(pairs)

    @property
    def area(self) -> int:
        """Qubit-time footprint num_qubits * depth, before normalization."""
        return self.num_qubits * self.depth

    def __repr__(self) -> str:
        return (
            f"CircuitSpec(id={self.id!r}, num_qubits={self.num_qubits}, "
            f"depth={self.depth}, ops={len(self.ops)})"
        )


def normalized_areas(circuits: Sequence[CircuitSpec]) -> dict[str, float]:
    """Map circuit id to area divided by the largest area in the group.

    The largest circuit gets exactly 1.0; normalization is relative to the
    given group, so the same circuit can carry different weights in
    different scheduling rounds.
    """
    if not circuits:
        return {}
    largest = max(c.area for c in circuits)
    return {c.id: c.area / largest for c in circuits}


class CircuitSet:
    """An ordered workload of circuits with unique ids."""

    def __init__(self, circuits: Iterable[CircuitSpec]):
        self.circuits = tuple(circuits)
        self.by_id: dict[str, CircuitSpec] = {}
        for circuit in self.circuits:
            if circuit.id in self.by_id:
                raise ValueError(f"duplicate circuit id {circuit.id!r}")
            self.by_id[circuit.id] = circuit

    def get(self, circuit_id: str) -> CircuitSpec:
        try:
            return self.by_id[circuit_id]
        except KeyError:
            raise KeyError(f"unknown circuit id {circuit_id!r}") from None

    def areas(self) -> dict[str, float]:
        return normalized_areas(self.circuits)

    def __iter__(self):
        return iter(self.circuits)

    def __len__(self) -> int:
        return len(self.circuits)

    def __repr__(self) -> str:
        return f"CircuitSet({[c.id for c in self.circuits]!r})"


def _parse_circuit(entry: Mapping) -> CircuitSpec:
    for key in ("id", "num_qubits", "depth", "ops"):
        if key not in entry:
            raise DocumentError(f"circuit entry missing {key!r}")
    raw_ops = entry["ops"]
    if not isinstance(raw_ops, list):
        raise DocumentError(f"circuit {entry['id']!r}: 'ops' must be a list")
    ops = []
    for raw in raw_ops:
        if not isinstance(raw, Mapping) or "kind" not in raw or "qubits" not in raw:
            raise DocumentError(f"bad op entry {raw!r}, expected {{'kind', 'qubits'}}")
        try:
            ops.append(CircuitOp(raw["kind"], tuple(raw["qubits"])))
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"circuit {entry['id']!r}: {exc}") from exc
    try:
        return CircuitSpec(entry["id"], entry["num_qubits"], entry["depth"], ops)
    except (TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc


def load_circuit_set(document) -> CircuitSet:
    """Parse a circuit-set document (mapping or JSON text) into a CircuitSet."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping) or "circuits" not in document:
        raise DocumentError("circuit-set document must be an object with a 'circuits' list")
    entries = document["circuits"]
    if not isinstance(entries, list):
        raise DocumentError("'circuits' must be a list")
    try:
        return CircuitSet(_parse_circuit(e) for e in entries)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def as_circuit_set(source) -> CircuitSet:
    """Accept a CircuitSet, an iterable of CircuitSpec, a document mapping,
    or JSON text."""
    if isinstance(source, CircuitSet):
        return source
    if isinstance(source, (str, bytes, Mapping)):
        return load_circuit_set(source)
    circuits = list(source)
    if all(isinstance(c, CircuitSpec) for c in circuits):
        return CircuitSet(circuits)
    raise TypeError(f"cannot interpret {type(source).__name__} as a circuit set")


def circuit_set_document(circuit_set: CircuitSet) -> dict:
    """Serialize a CircuitSet back to its document form."""
    return {
        "circuits": [
            {
                "id": c.id,
                "num_qubits": c.num_qubits,
                "depth": c.depth,
                "ops": [{"kind": op.kind, "qubits": list(op.qubits)} for op in c.ops],
            }
            for c in circuit_set
        ]
    }
