"""Scikit-learn style front end for the scheduler.

The scheduler behaves like a clusterer: it partitions a workload of
circuits into co-execution batches, so the estimator exposes the usual
``fit`` / ``fit_predict`` surface with per-circuit batch labels.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .circuits import as_circuit_set
from .hardware import as_calibration, as_coupling_map
from .layouts import DEFAULT_LAYOUT_CAP
from .scheduling import (
    DEFAULT_BUFFER,
    DEFAULT_EPSILON,
    DEFAULT_EPSILON_MODE,
    DEFAULT_SOLVER,
    schedule_all,
    schedule_metrics,
)

UNSCHEDULED = -1


class BatchScheduler(BaseEstimator):
    """Partition circuits into batches that run together on one device.

    Parameters
    ----------
    coupling_map : CouplingMap, mapping, or JSON text
        The device connectivity.
    calibration : CalibrationData, mapping, or JSON text
        Error rates matching the coupling map.
    buffer : int, default 1
        Minimum hop distance that must separate co-executed layouts.
    epsilon : float, default 0.5
        Layout filter tolerance; meaning depends on ``epsilon_mode``.
    epsilon_mode : {'absolute', 'top-fraction'}, default 'top-fraction'
        Score-margin filtering or best-fraction filtering.
    solver : {'greedy', 'exact'}, default 'greedy'
        Batch selection strategy per round.
    layout_cap : int, default 1000
        Maximum number of layouts enumerated per circuit.

    Attributes
    ----------
    schedule_ : Schedule
        The full scheduling result.
    labels_ : ndarray of shape (n_circuits,)
        Batch index per input circuit, -1 for unschedulable circuits.
    n_batches_ : int
    gain_ : float
        Circuits scheduled divided by batches used.
    metrics_ : dict
        Batch count, gain, and mean qubit utilization.
    """

    def __init__(
        self,
        coupling_map=None,
        calibration=None,
        buffer=DEFAULT_BUFFER,
        epsilon=DEFAULT_EPSILON,
        epsilon_mode=DEFAULT_EPSILON_MODE,
        solver=DEFAULT_SOLVER,
        layout_cap=DEFAULT_LAYOUT_CAP,
    ):
        self.coupling_map = coupling_map
        self.calibration = calibration
        self.buffer = buffer
        self.epsilon = epsilon
        self.epsilon_mode = epsilon_mode
        self.solver = solver
        self.layout_cap = layout_cap

    def fit(self, X, y=None):
        """Schedule the workload ``X`` (a CircuitSet, circuit list, document
        mapping, or JSON text) and derive batch labels."""
        if self.coupling_map is None:
            raise ValueError("coupling_map must be set before calling fit")
        if self.calibration is None:
            raise ValueError("calibration must be set before calling fit")
        coupling_map = as_coupling_map(self.coupling_map)
        calibration = as_calibration(self.calibration, coupling_map)
        circuits = as_circuit_set(X)
        self.schedule_ = schedule_all(
            circuits,
            coupling_map,
            calibration,
            buffer=self.buffer,
            epsilon=self.epsilon,
            epsilon_mode=self.epsilon_mode,
            solver=self.solver,
            layout_cap=self.layout_cap,
        )
        batch_of = {}
        for index, batch in enumerate(self.schedule_.batches):
            for cid in batch.assignments:
                batch_of[cid] = index
        self.labels_ = np.array(
            [batch_of.get(c.id, UNSCHEDULED) for c in circuits], dtype=int
        )
        self.metrics_ = schedule_metrics(self.schedule_)
        self.n_batches_ = self.metrics_["num_batches"]
        self.gain_ = self.metrics_["gain"]
        return self

    def fit_predict(self, X, y=None):
        """Fit and return the per-circuit batch labels."""
        return self.fit(X).labels_
