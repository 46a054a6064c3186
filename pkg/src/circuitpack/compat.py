"""Compatibility graph over (circuit, layout) pairs.

Vertices are candidate layouts; an edge joins two layouts of different
circuits that can run simultaneously, i.e. that do not overlap under the
crosstalk buffer.  Raw edge weights add the area-scaled scores of both
endpoints, and final weights invert them against the heaviest raw weight
so that the best pairings carry weight close to the maximum raw value and
at least one edge carries exactly zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .hardware import CouplingMap
from .layouts import Layout, LayoutList, validate_layout


@dataclass(frozen=True, order=True)
class CompatVertex:
    """One candidate placement: a circuit id plus its layout-list index."""

    circuit_id: str
    layout_index: int


class CompatEdge(NamedTuple):
    """Undirected edge between vertex indices u < v."""

    u: int
    v: int
    raw_weight: float
    weight: float


class CompatibilityGraph:
    """Vertices, edges, and adjacency for one batch-selection round."""

    def __init__(
        self,
        vertices: Sequence[CompatVertex],
        layouts: Sequence[Layout],
        edges: Sequence[CompatEdge],
        max_raw_weight: float,
    ):
        self.vertices = tuple(vertices)
        self.layouts = tuple(layouts)
        self.edges = list(edges)
        self.max_raw_weight = max_raw_weight
        adjacency: list[set[int]] = [set() for _ in self.vertices]
        for edge in self.edges:
            adjacency[edge.u].add(edge.v)
            adjacency[edge.v].add(edge.u)
        self.adjacency = tuple(frozenset(s) for s in adjacency)
        self._index = {vertex: i for i, vertex in enumerate(self.vertices)}

    def index_of(self, vertex: CompatVertex) -> int:
        return self._index[vertex]

    def layout_for(self, vertex: CompatVertex) -> Layout:
        return self.layouts[self._index[vertex]]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return (
            f"CompatibilityGraph(vertices={len(self.vertices)}, edges={len(self.edges)})"
        )


def _qubit_mask(qubits: frozenset[int]) -> int:
    mask = 0
    for q in qubits:
        mask |= 1 << q
    return mask


def _ball_mask(coupling_map: CouplingMap, qubits: frozenset[int], radius: int) -> int:
    # All qubits within `radius` hops of the set, the set itself included.
    seen = set(qubits)
    frontier = set(qubits)
    for _ in range(radius):
        frontier = {
            nb for q in frontier for nb in coupling_map.neighbors(q) if nb not in seen
        }
        if not frontier:
            break
        seen |= frontier
    return _qubit_mask(frozenset(seen))


def build_compatibility_graph(
    layout_lists: Sequence[LayoutList],
    areas: Mapping[str, float],
    coupling_map: CouplingMap,
    buffer: int,
) -> CompatibilityGraph:
    """Build the graph for the given circuits' retained layouts.

    ``layout_lists`` fixes the vertex order (list by list, then by layout
    index); ``areas`` maps each circuit id to its normalized area.  Two
    vertices are joined when their circuits differ and their layouts keep
    at least ``buffer`` hops between them.  Overlap is evaluated on whole
    qubit sets via buffer-dilated bitmasks, which agrees with the boundary
    check pair for pair; identical qubit sets share one mask, so workloads
    with repeated circuits test each set pair only once.
    """
    if not isinstance(buffer, int) or isinstance(buffer, bool) or buffer < 0:
        raise ValueError(f"buffer must be a non-negative integer, got {buffer!r}")
    seen_ids = set()
    for layout_list in layout_lists:
        if layout_list.circuit_id in seen_ids:
            raise ValueError(f"duplicate layout list for circuit {layout_list.circuit_id!r}")
        seen_ids.add(layout_list.circuit_id)
        if layout_list.circuit_id not in areas:
            raise ValueError(f"no normalized area for circuit {layout_list.circuit_id!r}")

    vertices: list[CompatVertex] = []
    layouts: list[Layout] = []
    for layout_list in layout_lists:
        for j, layout in enumerate(layout_list.layouts):
            validate_layout(layout, coupling_map)
            vertices.append(CompatVertex(layout_list.circuit_id, j))
            layouts.append(layout)

    set_ids: dict[frozenset[int], int] = {}
    groups: list[list[int]] = []
    masks: list[int] = []
    balls: list[int] = []
    for idx, layout in enumerate(layouts):
        qubits = layout.qubits
        sid = set_ids.get(qubits)
        if sid is None:
            sid = len(groups)
            set_ids[qubits] = sid
            groups.append([])
            masks.append(_qubit_mask(qubits))
            balls.append(_ball_mask(coupling_map, qubits, buffer))
        groups[sid].append(idx)

    contrib = [
        layout.score * areas[vertex.circuit_id]
        for layout, vertex in zip(layouts, vertices)
    ]
    circuit_of = [vertex.circuit_id for vertex in vertices]

    # Identical qubit sets always overlap each other, so only distinct set
    # pairs need a mask test; compatible pairs then fan out to vertex pairs.
    raw_edges: list[tuple[int, int, float]] = []
    max_raw = 0.0
    num_sets = len(groups)
    for sa in range(num_sets):
        ball_a = balls[sa]
        group_a = groups[sa]
        for sb in range(sa + 1, num_sets):
            if ball_a & masks[sb]:
                continue
            for u in group_a:
                cid_u = circuit_of[u]
                contrib_u = contrib[u]
                for v in groups[sb]:
                    if circuit_of[v] == cid_u:
                        continue
                    raw = contrib_u + contrib[v]
                    if raw > max_raw:
                        max_raw = raw
                    if u < v:
                        raw_edges.append((u, v, raw))
                    else:
                        raw_edges.append((v, u, raw))
    raw_edges.sort(key=lambda e: (e[0], e[1]))

    edges = [
        CompatEdge(u, v, raw_weight=raw, weight=max_raw - raw) for u, v, raw in raw_edges
    ]
    return CompatibilityGraph(vertices, layouts, edges, max_raw)


def graph_document(graph: CompatibilityGraph) -> dict:
    """Serialize a compatibility graph for inspection."""
    return {
        "vertices": [
            {"circuit_id": v.circuit_id, "layout_index": v.layout_index}
            for v in graph.vertices
        ],
        "edges": [
            {"u": e.u, "v": e.v, "raw_weight": e.raw_weight, "weight": e.weight}
            for e in graph.edges
        ],
        "max_raw_weight": graph.max_raw_weight,
    }
