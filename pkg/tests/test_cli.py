"""Command line interface tests."""

import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from circuitpack.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def inputs(tmp_path):
    """Small device + workload files: an 8-qubit path and two 2-qubit circuits."""
    n = 8
    coupling = {"num_qubits": n, "edges": [[i, i + 1] for i in range(n - 1)]}
    calibration = {
        "readout_error": [0.01] * n,
        "single_qubit_error": [0.001] * n,
        "two_qubit_error": {f"{i}-{i + 1}": 0.05 for i in range(n - 1)},
    }
    circuits = {
        "circuits": [
            {
                "id": cid,
                "num_qubits": 2,
                "depth": 2,
                "ops": [
                    {"kind": "2q", "qubits": [0, 1]},
                    {"kind": "measure", "qubits": [0]},
                    {"kind": "measure", "qubits": [1]},
                ],
            }
            for cid in ("alpha", "beta")
        ]
    }
    paths = {}
    for name, doc in (
        ("coupling", coupling), ("calibration", calibration), ("circuits", circuits)
    ):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def base_args(inputs):
    return [
        "--coupling", inputs["coupling"],
        "--calibration", inputs["calibration"],
        "--circuits", inputs["circuits"],
    ]


class TestSchedule:
    def test_document_on_stdout_summary_on_stderr(self, runner, inputs):
        result = runner.invoke(main, ["schedule", *base_args(inputs)])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.stdout)
        assert set(doc) == {"batches", "unschedulable", "metrics"}
        assert len(doc["batches"]) == 1
        assert sorted(doc["batches"][0]["assignments"]) == ["alpha", "beta"]
        assert "batch 1: 2 circuit(s)" in result.stderr
        assert "gain: 2.0000" in result.stderr

    def test_out_file_and_stdout_summary(self, runner, inputs):
        out = inputs["dir"] / "schedule.json"
        result = runner.invoke(main, ["schedule", *base_args(inputs), "--out", str(out)])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert doc["metrics"]["num_batches"] == 1
        assert "batch 1:" in result.stdout
        assert out.read_text().endswith("\n")

    def test_exact_solver_flag(self, runner, inputs):
        greedy = runner.invoke(main, ["schedule", *base_args(inputs)])
        exact = runner.invoke(main, ["schedule", *base_args(inputs), "--solver", "exact"])
        assert exact.exit_code == 0, exact.output
        assert json.loads(exact.stdout) == json.loads(greedy.stdout)

    def test_option_validation_is_exit_one(self, runner, inputs):
        result = runner.invoke(main, ["schedule", *base_args(inputs), "--buffer", "-2"])
        assert result.exit_code == 1
        assert "error:" in result.stderr

    def test_missing_file_is_exit_one(self, runner, inputs):
        args = base_args(inputs)
        args[1] = str(inputs["dir"] / "absent.json")
        result = runner.invoke(main, ["schedule", *args])
        assert result.exit_code == 1
        assert "cannot read" in result.stderr

    def test_malformed_document_is_exit_one(self, runner, inputs, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"circuits\": 7}")
        args = base_args(inputs)
        args[5] = str(bad)
        result = runner.invoke(main, ["schedule", *args])
        assert result.exit_code == 1
        assert "error:" in result.stderr

    def test_exact_solver_refusal_is_exit_two(self, runner, tmp_path):
        # six one-qubit circuits on a 30-qubit path keep 15 layouts each
        # after filtering; the leave-out option makes 16^6 assignments
        n = 30
        (tmp_path / "c.json").write_text(json.dumps(
            {"num_qubits": n, "edges": [[i, i + 1] for i in range(n - 1)]}
        ))
        (tmp_path / "cal.json").write_text(json.dumps({
            "readout_error": [0.01] * n,
            "single_qubit_error": [0.001] * n,
            "two_qubit_error": {f"{i}-{i + 1}": 0.05 for i in range(n - 1)},
        }))
        (tmp_path / "w.json").write_text(json.dumps({
            "circuits": [
                {"id": f"s{i}", "num_qubits": 1, "depth": 1,
                 "ops": [{"kind": "measure", "qubits": [0]}]}
                for i in range(6)
            ]
        }))
        result = CliRunner().invoke(main, [
            "schedule",
            "--coupling", str(tmp_path / "c.json"),
            "--calibration", str(tmp_path / "cal.json"),
            "--circuits", str(tmp_path / "w.json"),
            "--solver", "exact",
        ])
        assert result.exit_code == 2
        assert "exact solver refused" in result.stderr

    def test_arrival_stream(self, runner, inputs, tmp_path):
        arrivals = tmp_path / "arrivals.json"
        arrivals.write_text(json.dumps({
            "arrivals": [
                {"time": 0.0, "circuit_id": "alpha"},
                {"time": 1.0, "circuit_id": "beta"},
            ]
        }))
        result = runner.invoke(
            main, ["schedule", *base_args(inputs), "--arrivals", str(arrivals)]
        )
        assert result.exit_code == 0, result.output
        doc = json.loads(result.stdout)
        assert [sorted(b["assignments"]) for b in doc["batches"]] == [["alpha"], ["beta"]]

    def test_arrivals_unknown_circuit_is_exit_one(self, runner, inputs, tmp_path):
        arrivals = tmp_path / "arrivals.json"
        arrivals.write_text(json.dumps({
            "arrivals": [{"time": 0.0, "circuit_id": "ghost"}]
        }))
        result = runner.invoke(
            main, ["schedule", *base_args(inputs), "--arrivals", str(arrivals)]
        )
        assert result.exit_code == 1
        assert "unknown circuit id" in result.stderr

    def test_arrivals_bad_shape_is_exit_one(self, runner, inputs, tmp_path):
        arrivals = tmp_path / "arrivals.json"
        arrivals.write_text(json.dumps({"times": []}))
        result = runner.invoke(
            main, ["schedule", *base_args(inputs), "--arrivals", str(arrivals)]
        )
        assert result.exit_code == 1
        assert "'arrivals'" in result.stderr


class TestLayouts:
    def test_writes_one_document_per_circuit(self, runner, inputs, tmp_path):
        out = tmp_path / "layouts"
        result = runner.invoke(main, ["layouts", *base_args(inputs), "--out", str(out)])
        assert result.exit_code == 0, result.output
        for cid in ("alpha", "beta"):
            doc = json.loads((out / f"{cid}.json").read_text())
            assert doc["circuit_id"] == cid
            scores = [entry["score"] for entry in doc["layouts"]]
            assert scores == sorted(scores)
            assert f"{cid}: kept {len(doc['layouts'])} layouts" in result.stdout

    def test_reports_unembeddable_circuit(self, runner, inputs, tmp_path):
        circuits = {
            "circuits": [{
                "id": "tri", "num_qubits": 3, "depth": 1,
                "ops": [
                    {"kind": "2q", "qubits": [0, 1]},
                    {"kind": "2q", "qubits": [1, 2]},
                    {"kind": "2q", "qubits": [0, 2]},
                ],
            }]
        }
        path = tmp_path / "tri.json"
        path.write_text(json.dumps(circuits))
        args = base_args(inputs)
        args[5] = str(path)
        out = tmp_path / "layouts"
        result = runner.invoke(main, ["layouts", *args, "--out", str(out)])
        assert result.exit_code == 0
        assert "tri: no valid layouts" in result.stdout
        assert not (out / "tri.json").exists()


class TestGraphDump:
    def test_document_on_stdout(self, runner, inputs):
        result = runner.invoke(main, ["graph-dump", *base_args(inputs)])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.stdout)
        assert set(doc) == {"vertices", "edges", "max_raw_weight"}
        ids = {v["circuit_id"] for v in doc["vertices"]}
        assert ids == {"alpha", "beta"}
        assert doc["edges"], "compatible circuits should produce edges"

    def test_out_file_with_summary(self, runner, inputs, tmp_path):
        out = tmp_path / "graph.json"
        result = runner.invoke(main, ["graph-dump", *base_args(inputs), "--out", str(out)])
        assert result.exit_code == 0
        assert "graph:" in result.stdout
        json.loads(out.read_text())

    def test_skips_unembeddable_with_note(self, runner, inputs, tmp_path):
        circuits = json.loads((inputs["dir"] / "circuits.json").read_text())
        circuits["circuits"].append({
            "id": "wide", "num_qubits": 20, "depth": 1, "ops": [],
        })
        path = tmp_path / "mixed.json"
        path.write_text(json.dumps(circuits))
        args = base_args(inputs)
        args[5] = str(path)
        result = runner.invoke(main, ["graph-dump", *args])
        assert result.exit_code == 0
        assert "skipping wide" in result.stderr
        doc = json.loads(result.stdout)
        assert {v["circuit_id"] for v in doc["vertices"]} == {"alpha", "beta"}


class TestMarginalize:
    def write_joint(self, tmp_path):
        doc = {
            "spans": {"alpha": [0, 1], "beta": [2]},
            "counts": {"000": 10, "010": 5, "011": 2},
        }
        path = tmp_path / "joint.json"
        path.write_text(json.dumps(doc))
        return path

    def test_stdout_document(self, runner, tmp_path):
        joint = self.write_joint(tmp_path)
        result = runner.invoke(
            main, ["marginalize", "--joint", str(joint), "--circuit", "alpha"]
        )
        assert result.exit_code == 0, result.output
        doc = json.loads(result.stdout)
        assert doc == {"circuit_id": "alpha", "counts": {"00": 10, "01": 7}}

    def test_out_file_with_summary(self, runner, tmp_path):
        joint = self.write_joint(tmp_path)
        out = tmp_path / "marg.json"
        result = runner.invoke(
            main,
            ["marginalize", "--joint", str(joint), "--circuit", "beta", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert json.loads(out.read_text())["counts"] == {"0": 15, "1": 2}
        assert "beta: 2 outcomes, 17 shots" in result.stdout

    def test_unknown_circuit_is_exit_one(self, runner, tmp_path):
        joint = self.write_joint(tmp_path)
        result = runner.invoke(
            main, ["marginalize", "--joint", str(joint), "--circuit", "nope"]
        )
        assert result.exit_code == 1
        assert "no span" in result.stderr


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "circuitpack", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    for word in ("schedule", "layouts", "graph-dump", "marginalize"):
        assert word in proc.stdout


def test_console_script():
    proc = subprocess.run(["circuitpack", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Schedule independent circuits" in proc.stdout
