"""Estimator facade tests."""

import numpy as np
import pytest
from sklearn.base import clone

from circuitpack import (
    BatchScheduler,
    CircuitOp,
    CircuitSpec,
    CouplingMap,
    circuit_set_document,
    coupling_map_document,
    calibration_document,
)
from circuitpack.devices import chain_workload
from circuitpack.estimator import UNSCHEDULED


def two_qubit_circuit(cid):
    return CircuitSpec(cid, 2, 2, [CircuitOp("2q", (0, 1))])


def path_setup(n=8, two=0.05):
    from circuitpack import CalibrationData

    cmap = CouplingMap(n, [(i, i + 1) for i in range(n - 1)])
    cal = CalibrationData([0.0] * n, [0.0] * n, {e: two for e in cmap.edges})
    return cmap, cal


class TestFit:
    def test_labels_follow_batches(self):
        cmap, cal = path_setup()
        est = BatchScheduler(coupling_map=cmap, calibration=cal)
        est.fit([two_qubit_circuit("a"), two_qubit_circuit("b")])
        assert list(est.labels_) == [0, 0]
        assert est.n_batches_ == 1
        assert est.gain_ == 2.0
        assert est.metrics_["num_batches"] == 1
        assert est.schedule_.num_batches == 1

    def test_unschedulable_gets_sentinel_label(self):
        cmap, cal = path_setup(n=4)
        wide = CircuitSpec("wide", 9, 1, [])
        est = BatchScheduler(coupling_map=cmap, calibration=cal)
        labels = est.fit_predict([two_qubit_circuit("a"), wide])
        assert list(labels) == [0, UNSCHEDULED]
        assert est.schedule_.unschedulable == ["wide"]

    def test_labels_align_with_input_order(self):
        cmap, cal = path_setup(n=3)
        # conflicting circuits land in different batches
        est = BatchScheduler(coupling_map=cmap, calibration=cal)
        labels = est.fit_predict([two_qubit_circuit("a"), two_qubit_circuit("b")])
        assert sorted(labels) == [0, 1]
        assert est.labels_.dtype == np.dtype(int)

    def test_accepts_documents_everywhere(self):
        cmap, cal = path_setup()
        workload = chain_workload(2, num_qubits=3)
        est = BatchScheduler(
            coupling_map=coupling_map_document(cmap),
            calibration=calibration_document(cal),
        )
        labels = est.fit_predict(circuit_set_document(workload))
        assert len(labels) == 2

    def test_requires_device_parameters(self):
        est = BatchScheduler()
        with pytest.raises(ValueError, match="coupling_map"):
            est.fit([two_qubit_circuit("a")])
        cmap, _ = path_setup()
        with pytest.raises(ValueError, match="calibration"):
            BatchScheduler(coupling_map=cmap).fit([two_qubit_circuit("a")])

    def test_solver_parameter_forwarded(self):
        cmap, cal = path_setup()
        greedy = BatchScheduler(coupling_map=cmap, calibration=cal, solver="greedy")
        exact = BatchScheduler(coupling_map=cmap, calibration=cal, solver="exact")
        circuits = [two_qubit_circuit("a"), two_qubit_circuit("b")]
        assert list(greedy.fit_predict(circuits)) == list(exact.fit_predict(circuits))
        with pytest.raises(ValueError, match="solver"):
            BatchScheduler(coupling_map=cmap, calibration=cal, solver="magic").fit(circuits)


class TestSklearnProtocol:
    def test_get_params_round_trip(self):
        cmap, cal = path_setup()
        est = BatchScheduler(coupling_map=cmap, calibration=cal, buffer=2, epsilon=0.25)
        params = est.get_params()
        assert params["buffer"] == 2
        assert params["epsilon"] == 0.25
        assert params["coupling_map"] is cmap
        est.set_params(buffer=0)
        assert est.buffer == 0

    def test_clone_preserves_params(self):
        cmap, cal = path_setup()
        est = BatchScheduler(
            coupling_map=cmap, calibration=cal, solver="exact", layout_cap=50
        )
        copy = clone(est)
        assert copy.solver == "exact"
        assert copy.layout_cap == 50
        assert not hasattr(copy, "labels_")
        copy.fit([two_qubit_circuit("a")])
        assert list(copy.labels_) == [0]

    def test_repr_mentions_changed_params(self):
        est = BatchScheduler(buffer=3)
        assert "buffer=3" in repr(est)
