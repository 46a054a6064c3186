"""Post-processing of joint measurement outcomes.

Circuits executed together produce one joint bitstring per shot.  Each
circuit owns a span of bit positions (string indices, left to right);
marginalizing sums the joint counts over everything outside the span.
"""
from __future__ import annotations

import json
import math
from typing import Mapping

from .errors import DocumentError
from .scheduling import Batch

FIDELITY_NORMALIZATION_TOL = 1e-6


class JointCounts:
    """Joint counts over a batch plus each circuit's bit positions."""

    def __init__(self, spans: Mapping[str, tuple[int, ...]], counts: Mapping[str, int]):
        if not counts:
            raise ValueError("joint counts must hold at least one outcome")
        widths = {len(k) for k in counts}
        if len(widths) != 1:
            raise ValueError(f"joint bitstrings have mixed widths {sorted(widths)}")
        self.width = widths.pop()
        for bits, count in counts.items():
            if set(bits) - {"0", "1"}:
                raise ValueError(f"bad bitstring {bits!r}")
            if not isinstance(count, int) or isinstance(count, bool) or count < 0:
                raise ValueError(f"count for {bits!r} must be a non-negative integer")
        claimed: set[int] = set()
        normalized_spans = {}
        for cid, span in spans.items():
            span = tuple(int(p) for p in span)
            if not span:
                raise ValueError(f"span for {cid!r} is empty")
            if len(set(span)) != len(span):
                raise ValueError(f"span for {cid!r} repeats a position")
            for pos in span:
                if not 0 <= pos < self.width:
                    raise ValueError(
                        f"span position {pos} for {cid!r} out of range for width {self.width}"
                    )
                if pos in claimed:
                    raise ValueError(f"bit position {pos} claimed by more than one circuit")
                claimed.add(pos)
            normalized_spans[cid] = span
        self.spans = normalized_spans
        self.counts = dict(counts)

    @property
    def total_shots(self) -> int:
        return sum(self.counts.values())

    def __repr__(self) -> str:
        return f"JointCounts(width={self.width}, circuits={sorted(self.spans)})"


def marginalize(joint: JointCounts, circuit_id: str) -> dict[str, int]:
    """Per-circuit counts summed over all bits outside the circuit's span."""
    try:
        span = joint.spans[circuit_id]
    except KeyError:
        raise KeyError(f"no span for circuit id {circuit_id!r}") from None
    out: dict[str, int] = {}
    for bits, count in joint.counts.items():
        key = "".join(bits[p] for p in span)
        out[key] = out.get(key, 0) + count
    return {k: out[k] for k in sorted(out)}


def classical_fidelity(counts: Mapping[str, int], ideal: Mapping[str, float]) -> float:
    """Squared Bhattacharyya overlap between normalized counts and an ideal
    distribution; 1.0 means identical distributions."""
    if not counts:
        raise ValueError("empty counts")
    if not ideal:
        raise ValueError("empty ideal distribution")
    widths = {len(k) for k in counts} | {len(k) for k in ideal}
    if len(widths) != 1:
        raise ValueError(f"bitstring widths differ across distributions: {sorted(widths)}")
    total = sum(counts.values())
    if total <= 0:
        raise ValueError("counts sum to zero")
    for key, p in ideal.items():
        if p < 0:
            raise ValueError(f"ideal probability for {key!r} is negative")
    norm = math.fsum(ideal.values())
    if abs(norm - 1.0) > FIDELITY_NORMALIZATION_TOL:
        raise ValueError(f"ideal distribution sums to {norm!r}, not 1")
    overlap = math.fsum(
        math.sqrt((count / total) * ideal[key])
        for key, count in counts.items()
        if key in ideal and count > 0
    )
    return min(overlap * overlap, 1.0)


def spans_for_batch(batch: Batch) -> dict[str, tuple[int, ...]]:
    """Assign each batch circuit a consecutive bit span, in circuit-id order."""
    spans = {}
    start = 0
    for cid in sorted(batch.assignments):
        width = batch.assignments[cid].num_qubits
        spans[cid] = tuple(range(start, start + width))
        start += width
    return spans


def load_joint_counts(document) -> JointCounts:
    """Parse a joint-counts document (mapping or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise DocumentError(f"expected a JSON object, got {type(document).__name__}")
    for key in ("spans", "counts"):
        if key not in document:
            raise DocumentError(f"joint-counts document missing {key!r}")
    spans = document["spans"]
    counts = document["counts"]
    if not isinstance(spans, Mapping) or not isinstance(counts, Mapping):
        raise DocumentError("'spans' and 'counts' must be objects")
    try:
        return JointCounts(
            {cid: tuple(span) for cid, span in spans.items()},
            dict(counts),
        )
    except (TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc


def joint_counts_document(joint: JointCounts) -> dict:
    """Serialize JointCounts back to its document form."""
    return {
        "spans": {cid: list(span) for cid, span in sorted(joint.spans.items())},
        "counts": {bits: joint.counts[bits] for bits in sorted(joint.counts)},
    }


def marginal_counts_document(circuit_id: str, counts: Mapping[str, int]) -> dict:
    """Serialize one circuit's marginal counts."""
    return {
        "circuit_id": circuit_id,
        "counts": {bits: counts[bits] for bits in sorted(counts)},
    }
