"""Device model: coupling graph, hop distances, and calibration data.

A :class:`CouplingMap` is an undirected graph over physical qubit indices
``0..num_qubits-1``.  All pairwise hop distances are precomputed with a
breadth-first search from every qubit.  Qubit pairs in different connected
components get the sentinel value ``map.unreachable``, which is strictly
greater than any realizable hop count on the device.

:class:`CalibrationData` carries per-qubit readout and single-qubit error
rates plus per-edge two-qubit error rates, all probabilities in ``[0, 1]``.
"""
from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Mapping

from .errors import DocumentError


def _normalize_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class CouplingMap:
    """Undirected hardware connectivity graph with cached hop distances."""

    def __init__(self, num_qubits: int, edges: Iterable[tuple[int, int]]):
        if not isinstance(num_qubits, int) or isinstance(num_qubits, bool) or num_qubits <= 0:
            raise ValueError(f"num_qubits must be a positive integer, got {num_qubits!r}")
        normalized: set[tuple[int, int]] = set()
        for edge in edges:
            pair = tuple(edge)
            if len(pair) != 2:
                raise ValueError(f"edge must have exactly two endpoints, got {edge!r}")
            a, b = pair
            if not all(isinstance(q, int) and not isinstance(q, bool) for q in (a, b)):
                raise ValueError(f"edge endpoints must be integers, got {edge!r}")
            if a == b:
                raise ValueError(f"self-loop on qubit {a} is not allowed")
            if not (0 <= a < num_qubits and 0 <= b < num_qubits):
                raise ValueError(f"edge {edge!r} out of range for {num_qubits} qubits")
            key = _normalize_edge(a, b)
            if key in normalized:
                raise ValueError(f"duplicate edge {key!r}")
            normalized.add(key)
        self.num_qubits = num_qubits
        self.edges = frozenset(normalized)
        adjacency: list[set[int]] = [set() for _ in range(num_qubits)]
        for a, b in normalized:
            adjacency[a].add(b)
            adjacency[b].add(a)
        self._neighbors = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        self._dist = self._all_pairs_distances()

    @property
    def unreachable(self) -> int:
        """Distance sentinel for disconnected pairs; exceeds any real hop count."""
        return self.num_qubits + 1

    def neighbors(self, qubit: int) -> tuple[int, ...]:
        self._check_index(qubit)
        return self._neighbors[qubit]

    def degree(self, qubit: int) -> int:
        self._check_index(qubit)
        return len(self._neighbors[qubit])

    def distance(self, a: int, b: int) -> int:
        """Hop count between two physical qubits, ``unreachable`` if disconnected."""
        self._check_index(a)
        self._check_index(b)
        return self._dist[a][b]

    def _check_index(self, qubit: int) -> None:
        if not isinstance(qubit, int) or isinstance(qubit, bool):
            raise ValueError(f"qubit index must be an integer, got {qubit!r}")
        if not 0 <= qubit < self.num_qubits:
            raise ValueError(f"qubit index {qubit} out of range for {self.num_qubits} qubits")

    def _all_pairs_distances(self) -> list[list[int]]:
        # One BFS per source; the table is symmetric but small enough to store whole.
        table = []
        for src in range(self.num_qubits):
            row = [self.unreachable] * self.num_qubits
            row[src] = 0
            queue = deque([src])
            while queue:
                cur = queue.popleft()
                for nb in self._neighbors[cur]:
                    if row[nb] > row[cur] + 1:
                        row[nb] = row[cur] + 1
                        queue.append(nb)
            table.append(row)
        return table

    def __repr__(self) -> str:
        return f"CouplingMap(num_qubits={self.num_qubits}, edges={len(self.edges)})"


class CalibrationData:
    """Per-qubit and per-edge error rates for one device.

    ``two_qubit_error`` is keyed by normalized edge tuples (smaller index
    first).  All rates are probabilities in ``[0, 1]``.
    """

    def __init__(
        self,
        readout_error: Iterable[float],
        single_qubit_error: Iterable[float],
        two_qubit_error: Mapping[tuple[int, int], float],
    ):
        self.readout_error = tuple(float(x) for x in readout_error)
        self.single_qubit_error = tuple(float(x) for x in single_qubit_error)
        normalized = {}
        for (a, b), rate in two_qubit_error.items():
            key = _normalize_edge(int(a), int(b))
            if key in normalized:
                raise ValueError(f"duplicate two-qubit entry for edge {key!r}")
            normalized[key] = float(rate)
        self.two_qubit_error = normalized
        for name, rates in (
            ("readout_error", self.readout_error),
            ("single_qubit_error", self.single_qubit_error),
            ("two_qubit_error", tuple(self.two_qubit_error.values())),
        ):
            for rate in rates:
                if not 0.0 <= rate <= 1.0:
                    raise ValueError(f"{name} rate {rate!r} outside [0, 1]")

    def two_qubit(self, a: int, b: int) -> float:
        key = _normalize_edge(a, b)
        try:
            return self.two_qubit_error[key]
        except KeyError:
            raise ValueError(f"no two-qubit calibration entry for edge {key!r}") from None

    def validate_for(self, coupling_map: CouplingMap) -> None:
        """Check exactly one entry per qubit and per coupling-map edge."""
        n = coupling_map.num_qubits
        if len(self.readout_error) != n:
            raise DocumentError(
                f"readout_error has {len(self.readout_error)} entries, expected {n}"
            )
        if len(self.single_qubit_error) != n:
            raise DocumentError(
                f"single_qubit_error has {len(self.single_qubit_error)} entries, expected {n}"
            )
        missing = coupling_map.edges - set(self.two_qubit_error)
        if missing:
            raise DocumentError(f"missing two-qubit calibration for edges {sorted(missing)}")
        extra = set(self.two_qubit_error) - coupling_map.edges
        if extra:
            raise DocumentError(f"two-qubit calibration for non-edges {sorted(extra)}")

    def __repr__(self) -> str:
        return (
            f"CalibrationData(qubits={len(self.readout_error)}, "
            f"edges={len(self.two_qubit_error)})"
        )


def _as_mapping(document) -> Mapping:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise DocumentError(f"expected a JSON object, got {type(document).__name__}")
    return document


def load_coupling_map(document) -> CouplingMap:
    """Parse a coupling-map document (mapping or JSON text) into a CouplingMap."""
    doc = _as_mapping(document)
    for key in ("num_qubits", "edges"):
        if key not in doc:
            raise DocumentError(f"coupling-map document missing {key!r}")
    num_qubits = doc["num_qubits"]
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise DocumentError("coupling-map 'edges' must be a list of pairs")
    try:
        return CouplingMap(num_qubits, [tuple(e) for e in edges])
    except (TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc


def coupling_map_document(coupling_map: CouplingMap) -> dict:
    """Serialize a CouplingMap back to its document form."""
    return {
        "num_qubits": coupling_map.num_qubits,
        "edges": [list(e) for e in sorted(coupling_map.edges)],
    }


def as_coupling_map(source) -> CouplingMap:
    """Accept a CouplingMap, a document mapping, or JSON text."""
    if isinstance(source, CouplingMap):
        return source
    return load_coupling_map(source)


def as_calibration(source, coupling_map: CouplingMap) -> CalibrationData:
    """Accept CalibrationData, a document mapping, or JSON text; validate it."""
    if isinstance(source, CalibrationData):
        source.validate_for(coupling_map)
        return source
    return load_calibration(source, coupling_map)


def load_calibration(document, coupling_map: CouplingMap) -> CalibrationData:
    """Parse a calibration document and validate it against a coupling map.

    Two-qubit entries are keyed ``"a-b"`` with the smaller index first.
    """
    doc = _as_mapping(document)
    for key in ("readout_error", "single_qubit_error", "two_qubit_error"):
        if key not in doc:
            raise DocumentError(f"calibration document missing {key!r}")
    two_qubit = {}
    raw = doc["two_qubit_error"]
    if not isinstance(raw, Mapping):
        raise DocumentError("'two_qubit_error' must be an object keyed by 'a-b'")
    for key, rate in raw.items():
        parts = key.split("-")
        if len(parts) != 2:
            raise DocumentError(f"bad two-qubit edge key {key!r}, expected 'a-b'")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise DocumentError(f"bad two-qubit edge key {key!r}, expected 'a-b'") from None
        if a >= b:
            raise DocumentError(f"two-qubit edge key {key!r} must put the smaller index first")
        two_qubit[(a, b)] = rate
    try:
        calibration = CalibrationData(doc["readout_error"], doc["single_qubit_error"], two_qubit)
    except (TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc
    calibration.validate_for(coupling_map)
    return calibration


def calibration_document(calibration: CalibrationData) -> dict:
    """Serialize CalibrationData back to its document form."""
    return {
        "readout_error": list(calibration.readout_error),
        "single_qubit_error": list(calibration.single_qubit_error),
        "two_qubit_error": {
            f"{a}-{b}": rate for (a, b), rate in sorted(calibration.two_qubit_error.items())
        },
    }
