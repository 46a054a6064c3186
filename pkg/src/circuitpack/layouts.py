"""Layout enumeration, noise scoring, filtering, and spatial overlap tests.

A layout assigns each virtual qubit of a circuit to a distinct physical
qubit such that every interacting virtual pair lands on a coupling-map
edge (subgraph monomorphism; unused physical qubits may sit anywhere,
including between mapped ones).

Overlap between two layouts is decided through their boundary qubits: a
mapped qubit is on the boundary if at least one of its coupling-map
neighbors is outside the layout.  Two layouts on disjoint qubit sets
conflict exactly when some boundary qubit of one is within ``buffer``
hops of a boundary qubit of the other, which agrees with checking all
cross pairs because interior qubits are always farther from the other
layout than the boundary that screens them.
"""
from __future__ import annotations

import json
import math
from typing import Iterable, Mapping, Optional, Sequence

from .circuits import CircuitSpec
from .errors import DocumentError
from .hardware import CouplingMap, CalibrationData

DEFAULT_LAYOUT_CAP = 1000

EPSILON_MODES = ("absolute", "top-fraction")


class Layout:
    """One placement of a circuit's virtual qubits onto physical qubits.

    ``mapping[v]`` is the physical qubit holding virtual qubit ``v``.  The
    score, when set, is the layout's estimated failure probability in
    ``[0, 1]`` (lower is better).
    """

    __slots__ = ("circuit_id", "mapping", "score", "_qubits", "_boundary")

    def __init__(self, circuit_id: str, mapping: Sequence[int], score: Optional[float] = None):
        mapping = tuple(int(q) for q in mapping)
        if not mapping:
            raise ValueError("layout mapping must be non-empty")
        if len(set(mapping)) != len(mapping):
            raise ValueError(f"layout mapping {mapping!r} repeats a physical qubit")
        if any(q < 0 for q in mapping):
            raise ValueError(f"layout mapping {mapping!r} has a negative qubit index")
        if score is not None:
            score = float(score)
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"layout score {score!r} outside [0, 1]")
        self.circuit_id = circuit_id
        self.mapping = mapping
        self.score = score
        self._qubits = frozenset(mapping)
        self._boundary: dict[CouplingMap, frozenset[int]] = {}

    @property
    def qubits(self) -> frozenset[int]:
        """The set of physical qubits the layout occupies."""
        return self._qubits

    @property
    def num_qubits(self) -> int:
        return len(self.mapping)

    def __repr__(self) -> str:
        return f"Layout({self.circuit_id!r}, {list(self.mapping)}, score={self.score})"


def validate_layout(layout: Layout, coupling_map: CouplingMap, circuit: CircuitSpec | None = None):
    """Check a layout against a coupling map and, optionally, its circuit."""
    for q in layout.mapping:
        if q >= coupling_map.num_qubits:
            raise ValueError(
                f"layout qubit {q} out of range for a {coupling_map.num_qubits}-qubit map"
            )
    if circuit is not None:
        if layout.circuit_id != circuit.id:
            raise ValueError(f"layout is for {layout.circuit_id!r}, not {circuit.id!r}")
        if len(layout.mapping) != circuit.num_qubits:
            raise ValueError(
                f"layout maps {len(layout.mapping)} qubits, circuit has {circuit.num_qubits}"
            )
        for a, b in circuit.interaction_graph:
            pa, pb = layout.mapping[a], layout.mapping[b]
            if pb not in coupling_map.neighbors(pa):
                raise ValueError(
                    f"interacting qubits ({a}, {b}) mapped to non-adjacent ({pa}, {pb})"
                )


def _variable_order(adjacency: list[set[int]]) -> list[int]:
    # Each new variable is connected to an already placed one when possible,
    # so candidate sets stay small; isolated virtuals naturally come last.
    n = len(adjacency)
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < n:
        frontier = [v for v in range(n) if v not in placed and adjacency[v] & placed]
        if frontier:
            v = min(frontier)
        else:
            v = max(
                (u for u in range(n) if u not in placed),
                key=lambda u: (len(adjacency[u]), -u),
            )
        order.append(v)
        placed.add(v)
    return order


def enumerate_layouts(
    circuit: CircuitSpec,
    coupling_map: CouplingMap,
    cap: int = DEFAULT_LAYOUT_CAP,
) -> list[Layout]:
    """Enumerate embeddings of the circuit's interaction graph into the device.

    Backtracking search over virtual qubits; physical candidates are tried
    in ascending index order, so results come out in a fixed deterministic
    order and truncating at ``cap`` keeps the first ones found.  Returns an
    empty list when the circuit does not embed at all.
    """
    if not isinstance(cap, int) or isinstance(cap, bool) or cap <= 0:
        raise ValueError(f"cap must be a positive integer, got {cap!r}")
    n = circuit.num_qubits
    m = coupling_map.num_qubits
    if n > m:
        return []
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for a, b in circuit.interaction_graph:
        adjacency[a].add(b)
        adjacency[b].add(a)
    order = _variable_order(adjacency)
    assignment = [-1] * n
    used: set[int] = set()
    results: list[Layout] = []

    def extend(k: int) -> None:
        if len(results) >= cap:
            return
        if k == n:
            results.append(Layout(circuit.id, assignment))
            return
        v = order[k]
        placed_images = [assignment[u] for u in adjacency[v] if assignment[u] >= 0]
        if placed_images:
            candidates = set(coupling_map.neighbors(placed_images[0]))
            for image in placed_images[1:]:
                candidates &= set(coupling_map.neighbors(image))
            candidates = sorted(candidates)
        else:
            candidates = range(m)
        needed = len(adjacency[v])
        for phys in candidates:
            if phys in used:
                continue
            if coupling_map.degree(phys) < needed:
                continue
            assignment[v] = phys
            used.add(phys)
            extend(k + 1)
            used.discard(phys)
            assignment[v] = -1
            if len(results) >= cap:
                return

    extend(0)
    return results


def score_layout(layout: Layout, circuit: CircuitSpec, calibration: CalibrationData) -> float:
    """Estimated failure probability of the circuit on this layout.

    One minus the product of per-operation success probabilities: two-qubit
    ops use the mapped edge's error rate, single-qubit ops the mapped
    qubit's gate error, and measure ops its readout error.
    """
    if len(layout.mapping) != circuit.num_qubits:
        raise ValueError(
            f"layout maps {len(layout.mapping)} qubits, circuit has {circuit.num_qubits}"
        )
    success = 1.0
    for op in circuit.ops:
        if op.kind == "2q":
            a, b = op.qubits
            rate = calibration.two_qubit(layout.mapping[a], layout.mapping[b])
        elif op.kind == "1q":
            rate = calibration.single_qubit_error[layout.mapping[op.qubits[0]]]
        else:
            rate = calibration.readout_error[layout.mapping[op.qubits[0]]]
        success *= 1.0 - rate
    return 1.0 - success


def scored_layouts(
    circuit: CircuitSpec,
    layouts: Iterable[Layout],
    calibration: CalibrationData,
) -> list[Layout]:
    """Score each layout in place and return them sorted, best first."""
    layouts = list(layouts)
    for layout in layouts:
        layout.score = score_layout(layout, circuit, calibration)
    layouts.sort(key=lambda l: (l.score, l.mapping))
    return layouts


class LayoutList:
    """The retained candidate layouts of one circuit, sorted best first."""

    def __init__(
        self,
        circuit_id: str,
        layouts: Sequence[Layout],
        epsilon: Optional[float] = None,
        mode: Optional[str] = None,
    ):
        layouts = tuple(layouts)
        if not layouts:
            raise ValueError("a LayoutList must hold at least one layout")
        for layout in layouts:
            if layout.circuit_id != circuit_id:
                raise ValueError(
                    f"layout for {layout.circuit_id!r} in list for {circuit_id!r}"
                )
            if layout.score is None:
                raise ValueError("all layouts in a LayoutList must be scored")
        scores = [l.score for l in layouts]
        if scores != sorted(scores):
            raise ValueError("LayoutList layouts must be sorted ascending by score")
        self.circuit_id = circuit_id
        self.layouts = layouts
        self.epsilon = epsilon
        self.mode = mode

    @property
    def best(self) -> Layout:
        return self.layouts[0]

    def __iter__(self):
        return iter(self.layouts)

    def __len__(self) -> int:
        return len(self.layouts)

    def __repr__(self) -> str:
        return f"LayoutList({self.circuit_id!r}, {len(self.layouts)} layouts)"


def filter_layouts(layouts: Sequence[Layout], epsilon: float, mode: str = "absolute") -> LayoutList:
    """Keep the near-best layouts under the given tolerance rule.

    ``absolute`` keeps layouts whose score is within ``epsilon`` of the best
    score; ``top-fraction`` keeps the best ``ceil(epsilon * len)`` layouts,
    ``0 < epsilon <= 1``.  Both always keep at least the best layout.
    """
    layouts = list(layouts)
    if not layouts:
        raise ValueError("cannot filter an empty layout list")
    if any(l.score is None for l in layouts):
        raise ValueError("layouts must be scored before filtering")
    circuit_id = layouts[0].circuit_id
    ordered = sorted(layouts, key=lambda l: (l.score, l.mapping))
    if mode == "absolute":
        if epsilon < 0:
            raise ValueError(f"absolute epsilon must be non-negative, got {epsilon!r}")
        best = ordered[0].score
        kept = [l for l in ordered if l.score - best <= epsilon]
    elif mode == "top-fraction":
        if not 0.0 < epsilon <= 1.0:
            raise ValueError(f"top-fraction epsilon must be in (0, 1], got {epsilon!r}")
        kept = ordered[: math.ceil(epsilon * len(ordered))]
    else:
        raise ValueError(f"unknown filter mode {mode!r}, expected one of {EPSILON_MODES}")
    return LayoutList(circuit_id, kept, epsilon=epsilon, mode=mode)


def find_boundary(layout: Layout, coupling_map: CouplingMap) -> frozenset[int]:
    """Mapped qubits with at least one coupling-map neighbor outside the layout.

    Computed once per (layout, map) pair and cached on the layout.
    """
    cached = layout._boundary.get(coupling_map)
    if cached is not None:
        return cached
    validate_layout(layout, coupling_map)
    qubits = layout.qubits
    boundary = frozenset(
        q for q in qubits if any(nb not in qubits for nb in coupling_map.neighbors(q))
    )
    layout._boundary[coupling_map] = boundary
    return boundary


class DistanceCounter:
    """Counts distance-table lookups made by overlap checks."""

    def __init__(self):
        self.count = 0

    def bump(self) -> None:
        self.count += 1

    def __repr__(self) -> str:
        return f"DistanceCounter({self.count})"


def has_overlap(
    a: Layout,
    b: Layout,
    coupling_map: CouplingMap,
    buffer: int,
    counter: Optional[DistanceCounter] = None,
) -> bool:
    """True when two layouts share a qubit or their boundaries come too close.

    ``buffer`` is the minimum hop distance that must separate the layouts;
    a measured distance d conflicts when d <= buffer, so buffer=1 demands a
    gap of at least one unmapped qubit between them.  Only boundary qubits
    are compared, which is what makes the check cheap; ``counter``, when
    given, is bumped once per distance lookup.
    """
    if not isinstance(buffer, int) or isinstance(buffer, bool) or buffer < 0:
        raise ValueError(f"buffer must be a non-negative integer, got {buffer!r}")
    validate_layout(a, coupling_map)
    validate_layout(b, coupling_map)
    if a.qubits & b.qubits:
        return True
    for qa in sorted(find_boundary(a, coupling_map)):
        for qb in sorted(find_boundary(b, coupling_map)):
            if counter is not None:
                counter.bump()
            if coupling_map.distance(qa, qb) <= buffer:
                return True
    return False


def load_layout_list(
    document,
    coupling_map: CouplingMap | None = None,
    circuit: CircuitSpec | None = None,
) -> LayoutList:
    """Parse a pre-supplied layout document, bypassing enumeration.

    Layouts are re-sorted best first.  When a coupling map or circuit is
    given, every layout is validated against it.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise DocumentError(f"expected a JSON object, got {type(document).__name__}")
    for key in ("circuit_id", "layouts"):
        if key not in document:
            raise DocumentError(f"layout document missing {key!r}")
    circuit_id = document["circuit_id"]
    entries = document["layouts"]
    if not isinstance(entries, list) or not entries:
        raise DocumentError("'layouts' must be a non-empty list")
    layouts = []
    for entry in entries:
        if not isinstance(entry, Mapping) or "mapping" not in entry or "score" not in entry:
            raise DocumentError(f"bad layout entry {entry!r}, expected {{'mapping', 'score'}}")
        try:
            layout = Layout(circuit_id, entry["mapping"], score=entry["score"])
        except (TypeError, ValueError) as exc:
            raise DocumentError(str(exc)) from exc
        try:
            if coupling_map is not None:
                validate_layout(layout, coupling_map, circuit)
            elif circuit is not None:
                validate_layout_against_circuit(layout, circuit)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        layouts.append(layout)
    layouts.sort(key=lambda l: (l.score, l.mapping))
    try:
        return LayoutList(circuit_id, layouts)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def validate_layout_against_circuit(layout: Layout, circuit: CircuitSpec) -> None:
    if layout.circuit_id != circuit.id:
        raise ValueError(f"layout is for {layout.circuit_id!r}, not {circuit.id!r}")
    if len(layout.mapping) != circuit.num_qubits:
        raise ValueError(
            f"layout maps {len(layout.mapping)} qubits, circuit has {circuit.num_qubits}"
        )


def layout_list_document(layout_list: LayoutList) -> dict:
    """Serialize a LayoutList to its document form."""
    return {
        "circuit_id": layout_list.circuit_id,
        "layouts": [
            {"mapping": list(l.mapping), "score": l.score} for l in layout_list.layouts
        ],
    }
