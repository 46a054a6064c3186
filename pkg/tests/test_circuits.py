"""Circuit description and workload tests."""

import pytest

from circuitpack import (
    CircuitOp,
    CircuitSet,
    CircuitSpec,
    DocumentError,
    as_circuit_set,
    circuit_set_document,
    load_circuit_set,
    normalized_areas,
)


def chain(cid, n, depth=None):
    ops = [CircuitOp("2q", (i, i + 1)) for i in range(n - 1)]
    ops += [CircuitOp("measure", (i,)) for i in range(n)]
    return CircuitSpec(cid, n, depth if depth is not None else n, ops)


class TestCircuitOp:
    def test_valid_kinds(self):
        assert CircuitOp("1q", (0,)).qubits == (0,)
        assert CircuitOp("2q", (0, 1)).qubits == (0, 1)
        assert CircuitOp("measure", (2,)).qubits == (2,)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown op kind"):
            CircuitOp("3q", (0, 1, 2))

    @pytest.mark.parametrize("kind,qubits", [("1q", (0, 1)), ("2q", (0,)), ("measure", ())])
    def test_arity_mismatch(self, kind, qubits):
        with pytest.raises(ValueError):
            CircuitOp(kind, qubits)

    def test_two_qubit_op_needs_distinct_qubits(self):
        with pytest.raises(ValueError, match="distinct"):
            CircuitOp("2q", (1, 1))


class TestCircuitSpec:
    def test_area(self):
        c = CircuitSpec("a", 3, 5, [])
        assert c.area == 15

    def test_interaction_graph_normalizes_and_dedupes(self):
        ops = [CircuitOp("2q", (1, 0)), CircuitOp("2q", (0, 1)), CircuitOp("2q", (1, 2))]
        c = CircuitSpec("a", 3, 3, ops)
        assert c.interaction_graph == {(0, 1), (1, 2)}

    def test_non_interacting_ops_do_not_appear(self):
        c = CircuitSpec("a", 2, 1, [CircuitOp("1q", (0,)), CircuitOp("measure", (1,))])
        assert c.interaction_graph == frozenset()

    def test_op_qubits_must_be_in_range(self):
        with pytest.raises(ValueError, match="out of range"):
            CircuitSpec("a", 2, 1, [CircuitOp("2q", (0, 2))])

    @pytest.mark.parametrize("bad", [0, -1, 1.5])
    def test_rejects_bad_counts(self, bad):
        with pytest.raises(ValueError):
            CircuitSpec("a", bad, 1, [])
        with pytest.raises(ValueError):
            CircuitSpec("a", 1, bad, [])

    def test_rejects_empty_id(self):
        with pytest.raises(ValueError, match="circuit id"):
            CircuitSpec("", 1, 1, [])


class TestNormalizedAreas:
    def test_largest_gets_one(self):
        circuits = [CircuitSpec("a", 2, 4, []), CircuitSpec("b", 4, 4, [])]
        areas = normalized_areas(circuits)
        assert areas == {"a": 0.5, "b": 1.0}

    def test_single_circuit(self):
        assert normalized_areas([CircuitSpec("a", 7, 3, [])]) == {"a": 1.0}

    def test_empty(self):
        assert normalized_areas([]) == {}

    def test_renormalizes_per_group(self):
        a, b, c = (
            CircuitSpec("a", 1, 1, []),
            CircuitSpec("b", 2, 1, []),
            CircuitSpec("c", 4, 1, []),
        )
        assert normalized_areas([a, b, c])["a"] == 0.25
        # after the largest circuit leaves, the rest scale up
        assert normalized_areas([a, b])["a"] == 0.5


class TestCircuitSet:
    def test_preserves_order_and_lookup(self):
        cs = CircuitSet([chain("x", 2), chain("y", 3)])
        assert [c.id for c in cs] == ["x", "y"]
        assert len(cs) == 2
        assert cs.get("y").num_qubits == 3

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError, match="duplicate circuit id"):
            CircuitSet([chain("x", 2), chain("x", 3)])

    def test_unknown_id(self):
        cs = CircuitSet([chain("x", 2)])
        with pytest.raises(KeyError, match="unknown circuit id"):
            cs.get("nope")

    def test_areas_delegates(self):
        cs = CircuitSet([chain("x", 2, depth=2), chain("y", 4, depth=4)])
        assert cs.areas() == {"x": 0.25, "y": 1.0}


def test_document_round_trip():
    cs = CircuitSet([chain("a", 3), chain("b", 2, depth=9)])
    doc = circuit_set_document(cs)
    again = load_circuit_set(doc)
    assert [c.id for c in again] == ["a", "b"]
    assert again.get("b").depth == 9
    assert again.get("a").ops == cs.get("a").ops
    assert circuit_set_document(again) == doc


@pytest.mark.parametrize(
    "doc",
    [
        "not json at all {",
        {"nope": []},
        {"circuits": "x"},
        {"circuits": [{"id": "a"}]},
        {"circuits": [{"id": "a", "num_qubits": 2, "depth": 1, "ops": "x"}]},
        {"circuits": [{"id": "a", "num_qubits": 2, "depth": 1, "ops": [{"kind": "2q"}]}]},
        {"circuits": [{"id": "a", "num_qubits": 2, "depth": 1,
                       "ops": [{"kind": "2q", "qubits": [0, 2]}]}]},
    ],
)
def test_load_rejects_malformed(doc):
    with pytest.raises(DocumentError):
        load_circuit_set(doc)


def test_load_rejects_duplicate_ids_as_document_error():
    doc = {"circuits": [
        {"id": "a", "num_qubits": 1, "depth": 1, "ops": []},
        {"id": "a", "num_qubits": 1, "depth": 1, "ops": []},
    ]}
    with pytest.raises(DocumentError, match="duplicate"):
        load_circuit_set(doc)


def test_as_circuit_set_coercions():
    cs = CircuitSet([chain("a", 2)])
    assert as_circuit_set(cs) is cs
    assert [c.id for c in as_circuit_set([chain("a", 2)])] == ["a"]
    assert [c.id for c in as_circuit_set(circuit_set_document(cs))] == ["a"]
    with pytest.raises(TypeError):
        as_circuit_set(42)
