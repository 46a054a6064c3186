"""Bundled reference devices and synthetic workloads.

Two heavy-hexagon devices are provided: a 27-qubit map written out edge
by edge and a 127-qubit map generated from the row/bridge pattern (seven
qubit rows joined by four bridge qubits per gap).  Calibration fixtures
are synthetic: error rates ramp up with qubit index plus a deterministic
ripple, so layout scores are heterogeneous but reproducible.
"""
from __future__ import annotations

import json
from pathlib import Path

from .circuits import CircuitOp, CircuitSet, CircuitSpec, circuit_set_document
from .hardware import (
    CalibrationData,
    CouplingMap,
    calibration_document,
    coupling_map_document,
)

HEAVY_HEX_27_EDGES = (
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10),
    (8, 9), (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14),
    (14, 16), (15, 18), (16, 19), (17, 18), (18, 21), (19, 20), (19, 22),
    (21, 23), (22, 25), (23, 24), (24, 25), (25, 26),
)

# Row lengths and bridge column offsets of the 127-qubit pattern.  Odd gaps
# shift their bridges two columns right; the final (truncated) row sits one
# column left of the others, hence the -1 on its bridge columns.
_ROW_LENGTHS_127 = (14, 15, 15, 15, 15, 15, 14)
_EVEN_GAP_COLUMNS = (0, 4, 8, 12)
_ODD_GAP_COLUMNS = (2, 6, 10, 14)


def coupling_map_27q() -> CouplingMap:
    """The bundled 27-qubit heavy-hexagon device."""
    return CouplingMap(27, HEAVY_HEX_27_EDGES)


def coupling_map_127q() -> CouplingMap:
    """The bundled 127-qubit heavy-hexagon device, generated row by row."""
    row_starts = []
    bridge_starts = []
    next_id = 0
    for r, length in enumerate(_ROW_LENGTHS_127):
        row_starts.append(next_id)
        next_id += length
        if r < len(_ROW_LENGTHS_127) - 1:
            bridge_starts.append(next_id)
            next_id += 4
    num_qubits = next_id

    edges = []
    for r, length in enumerate(_ROW_LENGTHS_127):
        start = row_starts[r]
        edges.extend((start + c, start + c + 1) for c in range(length - 1))
    last_row = len(_ROW_LENGTHS_127) - 1
    for gap in range(len(_ROW_LENGTHS_127) - 1):
        columns = _EVEN_GAP_COLUMNS if gap % 2 == 0 else _ODD_GAP_COLUMNS
        for k, col in enumerate(columns):
            bridge = bridge_starts[gap] + k
            upper_col = col
            lower_col = col - 1 if gap + 1 == last_row else col
            edges.append((row_starts[gap] + upper_col, bridge))
            edges.append((bridge, row_starts[gap + 1] + lower_col))
    return CouplingMap(num_qubits, edges)


def _hash_frac(i: int) -> float:
    # Knuth multiplicative hash mapped to [0, 1); platform independent.
    return ((i * 2654435761) % 4294967296) / 4294967296


def synthetic_calibration(
    coupling_map: CouplingMap,
    *,
    readout_base: float = 0.02,
    single_base: float = 0.001,
    two_base: float = 0.01,
    gradient: float = 1.0,
    ripple: float = 0.2,
) -> CalibrationData:
    """Deterministic synthetic calibration for a device.

    Rates grow linearly with qubit position across the device (by a factor
    of ``1 + gradient`` end to end) with a small index-hashed ripple, so
    low-index placements score better without being exactly degenerate.
    """
    n = coupling_map.num_qubits
    span = max(n - 1, 1)

    def rate(base: float, position: float, salt: int) -> float:
        wiggle = ripple * (_hash_frac(salt) - 0.5)
        return base * (1.0 + gradient * (position / span) + wiggle)

    readout = [rate(readout_base, q, 3 * q) for q in range(n)]
    single = [rate(single_base, q, 3 * q + 1) for q in range(n)]
    two = {
        (a, b): rate(two_base, (a + b) / 2.0, 3 * (a + b) + 2)
        for a, b in sorted(coupling_map.edges)
    }
    return CalibrationData(readout, single, two)


def calibration_27q() -> CalibrationData:
    """Bundled calibration for the 27-qubit device: flat profile plus ripple."""
    return synthetic_calibration(coupling_map_27q(), gradient=0.0, ripple=0.2)


def calibration_127q() -> CalibrationData:
    """Bundled calibration for the 127-qubit device: mild ramp plus ripple."""
    return synthetic_calibration(coupling_map_127q(), gradient=0.2, ripple=0.2)


def chain_circuit(circuit_id: str, num_qubits: int, depth: int | None = None) -> CircuitSpec:
    """A circuit whose qubits interact along a line, ending in full measurement."""
    if depth is None:
        depth = num_qubits
    ops = [CircuitOp("2q", (i, i + 1)) for i in range(num_qubits - 1)]
    ops.extend(CircuitOp("measure", (q,)) for q in range(num_qubits))
    return CircuitSpec(circuit_id, num_qubits, depth, ops)


def chain_workload(count: int, num_qubits: int = 10, id_prefix: str = "chain") -> CircuitSet:
    """``count`` identical chain circuits named ``chain0``, ``chain1``, ..."""
    return CircuitSet(chain_circuit(f"{id_prefix}{i}", num_qubits) for i in range(count))


def fixture_documents() -> dict[str, dict]:
    """All bundled fixture documents keyed by file name."""
    return {
        "coupling_27q.json": coupling_map_document(coupling_map_27q()),
        "calibration_27q.json": calibration_document(calibration_27q()),
        "coupling_127q.json": coupling_map_document(coupling_map_127q()),
        "calibration_127q.json": calibration_document(calibration_127q()),
        "circuits_chain7.json": circuit_set_document(chain_workload(7, 10)),
    }


def write_fixtures(directory) -> list[Path]:
    """Write every bundled fixture document into a directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in fixture_documents().items():
        path = directory / name
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written
