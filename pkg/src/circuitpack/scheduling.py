"""Batch selection and the outer scheduling loops.

A batch assigns at most one layout to each circuit such that all chosen
layouts are pairwise compatible and fit on the device.  The batch
objective sums area-scaled layout scores minus the number of circuits
placed, so packing more circuits (and quieter layouts) drives it down.

Two solvers produce batches: a greedy maximal-clique heuristic on the
compatibility graph, and an exact branch-and-bound search guarded
against oversized instances.  The outer loops call one of them
repeatedly until every circuit is scheduled or found unschedulable.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .circuits import CircuitSet, CircuitSpec, normalized_areas
from .compat import CompatEdge, CompatVertex, CompatibilityGraph, build_compatibility_graph
from .errors import DocumentError, ExactSolverLimitError
from .hardware import CalibrationData, CouplingMap
from .layouts import (
    DEFAULT_LAYOUT_CAP,
    Layout,
    LayoutList,
    enumerate_layouts,
    filter_layouts,
    has_overlap,
    scored_layouts,
)

DEFAULT_BUFFER = 1
DEFAULT_EPSILON = 0.5
DEFAULT_EPSILON_MODE = "top-fraction"
DEFAULT_SOLVER = "greedy"
SOLVERS = ("greedy", "exact")

# Upper bound on the exact solver's assignment-space size, counting the
# "leave this circuit out" option for every circuit.
EXACT_SEARCH_LIMIT = 10_000_000


@dataclass
class Batch:
    """Circuits co-executed in one run: circuit id -> chosen layout."""

    assignments: dict[str, Layout]
    objective: float
    total_qubits: int

    def __len__(self) -> int:
        return len(self.assignments)


@dataclass
class Schedule:
    """Ordered batches plus the circuits that could not be placed at all."""

    batches: list[Batch]
    unschedulable: list[str]
    num_hardware_qubits: int

    @property
    def num_batches(self) -> int:
        return len(self.batches)


def batch_objective(scored_areas: Sequence[tuple[float, float]]) -> float:
    """Sum of score * area over placements, minus the number of placements."""
    return math.fsum(score * area for score, area in scored_areas) - len(scored_areas)


def _make_batch(
    pairs: Sequence[tuple[str, Layout]],
    areas: Mapping[str, float],
) -> Batch:
    ordered = sorted(pairs, key=lambda item: item[0])
    assignments = {cid: layout for cid, layout in ordered}
    objective = batch_objective([(layout.score, areas[cid]) for cid, layout in ordered])
    total = sum(layout.num_qubits for _, layout in ordered)
    return Batch(assignments, objective, total)


def _connected_components(graph: CompatibilityGraph) -> list[list[int]]:
    seen: set[int] = set()
    components = []
    for start in range(graph.num_vertices):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nb in sorted(graph.adjacency[cur]):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        components.append(sorted(comp))
    return components


def greedy_maximal_clique(
    graph: CompatibilityGraph,
    max_qubits: int,
) -> tuple[list[CompatVertex], float]:
    """Grow a clique per connected component, keep the heaviest one found.

    Edges are scanned in descending final-weight order (ties broken by the
    endpoints' (circuit_id, layout_index) keys), starting from the heaviest
    edge of the component.  An edge extends the clique only if its new
    vertices bring no duplicate circuit, are adjacent to every vertex
    already selected, and keep the batch within the device's qubit count.
    Returns the selected vertices plus the total weight of the accepted
    edges; an edgeless graph yields an empty clique.
    """
    if max_qubits <= 0:
        raise ValueError(f"max_qubits must be positive, got {max_qubits!r}")

    keys = [(v.circuit_id, v.layout_index) for v in graph.vertices]

    def edge_key(edge: CompatEdge):
        ku, kv = keys[edge.u], keys[edge.v]
        if kv < ku:
            ku, kv = kv, ku
        return (-edge.weight, ku, kv)

    components = _connected_components(graph)
    component_of = [0] * graph.num_vertices
    for comp_id, comp in enumerate(components):
        for idx in comp:
            component_of[idx] = comp_id
    edges_by_component: list[list[CompatEdge]] = [[] for _ in components]
    for edge in graph.edges:
        edges_by_component[component_of[edge.u]].append(edge)

    best_vertices: list[int] = []
    best_weight = 0.0
    have_best = False
    for comp_id in range(len(components)):
        comp_edges = edges_by_component[comp_id]
        if not comp_edges:
            continue
        comp_edges.sort(key=edge_key)
        selected: list[int] = []
        selected_set: set[int] = set()
        used_circuits: set[str] = set()
        total_qubits = 0
        accepted_weights: list[float] = []
        for edge in comp_edges:
            new = [w for w in (edge.u, edge.v) if w not in selected_set]
            if not new:
                continue
            new_circuits = {graph.vertices[w].circuit_id for w in new}
            if len(new_circuits) < len(new):
                continue
            if used_circuits & new_circuits:
                continue
            if any(s not in graph.adjacency[w] for w in new for s in selected_set):
                continue
            added_qubits = sum(graph.layouts[w].num_qubits for w in new)
            if total_qubits + added_qubits > max_qubits:
                continue
            for w in new:
                selected.append(w)
                selected_set.add(w)
                used_circuits.add(graph.vertices[w].circuit_id)
            total_qubits += added_qubits
            accepted_weights.append(edge.weight)
        weight = math.fsum(accepted_weights)
        if selected and (not have_best or weight > best_weight):
            best_vertices = selected
            best_weight = weight
            have_best = True
    return [graph.vertices[i] for i in best_vertices], best_weight


class IlpInstance:
    """Exact batch problem: per-circuit layout options, conflicts, capacity.

    The assignment space counts one "left out" option per circuit on top
    of its layouts; instances whose space exceeds ``search_limit`` are
    refused up front.
    """

    def __init__(
        self,
        layout_lists: Sequence[LayoutList],
        areas: Mapping[str, float],
        coupling_map: CouplingMap,
        buffer: int,
        search_limit: int = EXACT_SEARCH_LIMIT,
    ):
        space = 1
        for layout_list in layout_lists:
            space *= len(layout_list) + 1
        if space > search_limit:
            raise ExactSolverLimitError(
                f"exact solver refused: assignment space {space} exceeds {search_limit}"
            )
        self.search_space = space
        self.areas = dict(areas)
        self.max_qubits = coupling_map.num_qubits
        self.graph = build_compatibility_graph(layout_lists, areas, coupling_map, buffer)
        self.circuit_ids = [ll.circuit_id for ll in layout_lists]
        self.ranges: list[tuple[int, int]] = []
        start = 0
        for layout_list in layout_lists:
            self.ranges.append((start, start + len(layout_list)))
            start += len(layout_list)


def solve_exact(instance: IlpInstance) -> Batch:
    """Branch and bound over circuits in order; returns an optimal batch.

    Each level either assigns one of the circuit's layouts or leaves the
    circuit out.  A node is cut when even placing every remaining circuit
    at the best case (objective change -1 each) cannot beat the incumbent.
    The empty batch (objective 0) is the starting incumbent, so an
    infeasible instance comes back empty.
    """
    graph = instance.graph
    areas = instance.areas
    n = len(instance.circuit_ids)
    best_obj = 0.0
    best_choice: list[int] = []
    choice: list[int] = []

    def leaf_objective(vertices: Sequence[int]) -> float:
        return batch_objective(
            [
                (graph.layouts[v].score, areas[graph.vertices[v].circuit_id])
                for v in vertices
            ]
        )

    def branch(i: int, running: float, total_qubits: int) -> None:
        nonlocal best_obj, best_choice
        # Bound uses the running float sum with slack; leaves are re-scored
        # exactly, so a hair of slack never changes the final answer.
        if running - (n - i) >= best_obj + 1e-9:
            return
        if i == n:
            exact = leaf_objective(choice)
            if exact < best_obj:
                best_obj = exact
                best_choice = list(choice)
            return
        start, end = instance.ranges[i]
        cid = instance.circuit_ids[i]
        for vidx in range(start, end):
            if any(vidx not in graph.adjacency[c] for c in choice):
                continue
            added = graph.layouts[vidx].num_qubits
            if total_qubits + added > instance.max_qubits:
                continue
            choice.append(vidx)
            branch(
                i + 1,
                running + graph.layouts[vidx].score * areas[cid] - 1.0,
                total_qubits + added,
            )
            choice.pop()
        branch(i + 1, running, total_qubits)

    branch(0, 0.0, 0)
    pairs = [
        (graph.vertices[v].circuit_id, graph.layouts[v]) for v in best_choice
    ]
    return _make_batch(pairs, areas)


def validate_batch(batch: Batch, coupling_map: CouplingMap, buffer: int) -> None:
    """Raise if a batch violates capacity, consistency, or pairwise spacing."""
    total = 0
    items = sorted(batch.assignments.items())
    for cid, layout in items:
        if layout.circuit_id != cid:
            raise ValueError(f"assignment key {cid!r} holds a layout for {layout.circuit_id!r}")
        total += layout.num_qubits
    if total != batch.total_qubits:
        raise ValueError(
            f"batch total_qubits={batch.total_qubits} but layouts cover {total} qubits"
        )
    if total > coupling_map.num_qubits:
        raise ValueError(
            f"batch needs {total} qubits, device has {coupling_map.num_qubits}"
        )
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if has_overlap(items[i][1], items[j][1], coupling_map, buffer):
                raise ValueError(
                    f"layouts for {items[i][0]!r} and {items[j][0]!r} overlap "
                    f"under buffer {buffer}"
                )


def layout_list_for(
    circuit: CircuitSpec,
    coupling_map: CouplingMap,
    calibration: CalibrationData,
    epsilon: float,
    epsilon_mode: str,
    layout_cap: int,
) -> Optional[LayoutList]:
    if circuit.num_qubits > coupling_map.num_qubits:
        return None
    candidates = enumerate_layouts(circuit, coupling_map, layout_cap)
    if not candidates:
        return None
    ranked = scored_layouts(circuit, candidates, calibration)
    return filter_layouts(ranked, epsilon, epsilon_mode)


def _select_batch(
    circuits: Sequence[CircuitSpec],
    lists_by_id: Mapping[str, LayoutList],
    coupling_map: CouplingMap,
    buffer: int,
    solver: str,
) -> Batch:
    areas = normalized_areas(circuits)
    layout_lists = [lists_by_id[c.id] for c in circuits]
    if solver == "exact":
        instance = IlpInstance(layout_lists, areas, coupling_map, buffer)
        batch = solve_exact(instance)
    else:
        graph = build_compatibility_graph(layout_lists, areas, coupling_map, buffer)
        clique, _ = greedy_maximal_clique(graph, coupling_map.num_qubits)
        pairs = [(v.circuit_id, graph.layout_for(v)) for v in clique]
        batch = _make_batch(pairs, areas)
    if not batch.assignments:
        # No multi-circuit batch exists; run the best-scoring circuit alone
        # so the loop always makes progress.  Ties keep input order.
        chosen = min(circuits, key=lambda c: lists_by_id[c.id].best.score)
        layout = lists_by_id[chosen.id].best
        batch = _make_batch([(chosen.id, layout)], areas)
    return batch


def _check_options(buffer: int, epsilon_mode: str, solver: str) -> None:
    if not isinstance(buffer, int) or isinstance(buffer, bool) or buffer < 0:
        raise ValueError(f"buffer must be a non-negative integer, got {buffer!r}")
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}, expected one of {SOLVERS}")
    if epsilon_mode not in ("absolute", "top-fraction"):
        raise ValueError(f"unknown epsilon mode {epsilon_mode!r}")


def schedule_all(
    circuits: CircuitSet,
    coupling_map: CouplingMap,
    calibration: CalibrationData,
    *,
    buffer: int = DEFAULT_BUFFER,
    epsilon: float = DEFAULT_EPSILON,
    epsilon_mode: str = DEFAULT_EPSILON_MODE,
    solver: str = DEFAULT_SOLVER,
    layout_cap: int = DEFAULT_LAYOUT_CAP,
) -> Schedule:
    """Partition a whole workload into batches.

    Each round scores and filters layouts for the circuits still waiting,
    renormalizes their areas, selects one batch with the chosen solver,
    and removes the placed circuits.  Circuits with no valid layout are
    reported as unschedulable instead of aborting the run.
    """
    _check_options(buffer, epsilon_mode, solver)
    lists_by_id: dict[str, LayoutList] = {}
    unschedulable: list[str] = []
    for circuit in circuits:
        layout_list = layout_list_for(
            circuit, coupling_map, calibration, epsilon, epsilon_mode, layout_cap
        )
        if layout_list is None:
            unschedulable.append(circuit.id)
        else:
            lists_by_id[circuit.id] = layout_list
    remaining = [c for c in circuits if c.id in lists_by_id]
    batches: list[Batch] = []
    while remaining:
        batch = _select_batch(remaining, lists_by_id, coupling_map, buffer, solver)
        batches.append(batch)
        remaining = [c for c in remaining if c.id not in batch.assignments]
    return Schedule(batches, unschedulable, coupling_map.num_qubits)


def schedule_dynamic(
    arrivals: Sequence[tuple[float, CircuitSpec]],
    coupling_map: CouplingMap,
    calibration: CalibrationData,
    *,
    buffer: int = DEFAULT_BUFFER,
    epsilon: float = DEFAULT_EPSILON,
    epsilon_mode: str = DEFAULT_EPSILON_MODE,
    solver: str = DEFAULT_SOLVER,
    layout_cap: int = DEFAULT_LAYOUT_CAP,
) -> Schedule:
    """Schedule a time-ordered arrival stream.

    At each distinct timestamp the pending pool (leftovers plus the new
    arrivals) yields one batch; the last timestamp drains the pool
    completely.  With a single timestamp this reduces to scheduling the
    whole set at once.
    """
    _check_options(buffer, epsilon_mode, solver)
    groups: list[tuple[float, list[CircuitSpec]]] = []
    seen_ids: set[str] = set()
    last_time = None
    for time, circuit in arrivals:
        time = float(time)
        if last_time is not None and time < last_time:
            raise ValueError(f"arrivals out of order: {time} after {last_time}")
        if circuit.id in seen_ids:
            raise ValueError(f"duplicate circuit id {circuit.id!r} in arrivals")
        seen_ids.add(circuit.id)
        if last_time is None or time > last_time:
            groups.append((time, []))
        groups[-1][1].append(circuit)
        last_time = time

    lists_by_id: dict[str, LayoutList] = {}
    unschedulable: list[str] = []
    pool: list[CircuitSpec] = []
    batches: list[Batch] = []
    for idx, (_, group) in enumerate(groups):
        for circuit in group:
            layout_list = layout_list_for(
                circuit, coupling_map, calibration, epsilon, epsilon_mode, layout_cap
            )
            if layout_list is None:
                unschedulable.append(circuit.id)
            else:
                lists_by_id[circuit.id] = layout_list
                pool.append(circuit)
        if idx < len(groups) - 1:
            if pool:
                batch = _select_batch(pool, lists_by_id, coupling_map, buffer, solver)
                batches.append(batch)
                pool = [c for c in pool if c.id not in batch.assignments]
        else:
            while pool:
                batch = _select_batch(pool, lists_by_id, coupling_map, buffer, solver)
                batches.append(batch)
                pool = [c for c in pool if c.id not in batch.assignments]
    return Schedule(batches, unschedulable, coupling_map.num_qubits)


def schedule_metrics(schedule: Schedule) -> dict:
    """Batch count, effective speedup, and mean device utilization."""
    k = len(schedule.batches)
    scheduled = sum(len(b) for b in schedule.batches)
    gain = scheduled / k if k else 0.0
    if k:
        utilization = (
            math.fsum(b.total_qubits / schedule.num_hardware_qubits for b in schedule.batches)
            / k
        )
    else:
        utilization = 0.0
    return {
        "num_batches": k,
        "gain": gain,
        "mean_qubit_utilization": utilization,
    }


def schedule_document(schedule: Schedule) -> dict:
    """Serialize a schedule, assignments keyed by circuit id."""
    return {
        "batches": [
            {
                "assignments": {
                    cid: {"mapping": list(layout.mapping), "score": layout.score}
                    for cid, layout in sorted(batch.assignments.items())
                },
                "objective": batch.objective,
                "total_qubits": batch.total_qubits,
            }
            for batch in schedule.batches
        ],
        "unschedulable": list(schedule.unschedulable),
        "metrics": schedule_metrics(schedule),
    }


def load_schedule_document(document, num_hardware_qubits: int) -> Schedule:
    """Re-read a schedule document into Schedule/Batch objects."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise DocumentError(f"expected a JSON object, got {type(document).__name__}")
    for key in ("batches", "unschedulable", "metrics"):
        if key not in document:
            raise DocumentError(f"schedule document missing {key!r}")
    batches = []
    for entry in document["batches"]:
        if not isinstance(entry, Mapping) or "assignments" not in entry:
            raise DocumentError(f"bad batch entry {entry!r}")
        try:
            assignments = {
                cid: Layout(cid, spec["mapping"], score=spec["score"])
                for cid, spec in entry["assignments"].items()
            }
            batches.append(
                Batch(assignments, float(entry["objective"]), int(entry["total_qubits"]))
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad batch entry: {exc}") from exc
    return Schedule(batches, list(document["unschedulable"]), num_hardware_qubits)
