"""Command line interface.

Subcommands cover the full pipeline (``schedule``), its intermediates
(``layouts``, ``graph-dump``), and result post-processing
(``marginalize``).  Exit codes: 0 on success, 1 on malformed or
inconsistent inputs, 2 when the exact solver refuses an oversized
instance.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .circuits import load_circuit_set, normalized_areas
from .compat import build_compatibility_graph, graph_document
from .errors import DocumentError, ExactSolverLimitError
from .hardware import load_calibration, load_coupling_map
from .layouts import DEFAULT_LAYOUT_CAP, layout_list_document
from .results import load_joint_counts, marginal_counts_document, marginalize
from .scheduling import (
    DEFAULT_BUFFER,
    DEFAULT_EPSILON,
    DEFAULT_EPSILON_MODE,
    DEFAULT_SOLVER,
    layout_list_for,
    schedule_all,
    schedule_dynamic,
    schedule_document,
    schedule_metrics,
)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc


def _guarded(body) -> None:
    try:
        body()
    except ExactSolverLimitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (DocumentError, ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if exc.args else exc
        click.echo(f"error: {message}", err=True)
        sys.exit(1)


def _pipeline_options(fn):
    options = [
        click.option("--coupling", "coupling_path", required=True,
                     help="Coupling-map JSON file."),
        click.option("--calibration", "calibration_path", required=True,
                     help="Calibration JSON file."),
        click.option("--circuits", "circuits_path", required=True,
                     help="Circuit-set JSON file."),
        click.option("--buffer", type=int, default=DEFAULT_BUFFER, show_default=True,
                     help="Minimum hop gap between co-executed layouts."),
        click.option("--epsilon-mode", type=click.Choice(["absolute", "top-fraction"]),
                     default=DEFAULT_EPSILON_MODE, show_default=True,
                     help="Layout filter rule."),
        click.option("--epsilon", type=float, default=DEFAULT_EPSILON, show_default=True,
                     help="Filter tolerance: score margin or kept fraction."),
        click.option("--solver", type=click.Choice(["greedy", "exact"]),
                     default=DEFAULT_SOLVER, show_default=True,
                     help="Batch selection strategy."),
        click.option("--layout-cap", type=int, default=DEFAULT_LAYOUT_CAP,
                     show_default=True, help="Max layouts enumerated per circuit."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _load_pipeline_inputs(coupling_path, calibration_path, circuits_path):
    coupling_map = load_coupling_map(_read_text(coupling_path))
    calibration = load_calibration(_read_text(calibration_path), coupling_map)
    circuits = load_circuit_set(_read_text(circuits_path))
    return coupling_map, calibration, circuits


@click.group()
def main():
    """Schedule independent circuits for parallel execution on one device."""


@main.command()
@_pipeline_options
@click.option("--arrivals", "arrivals_path", default=None,
              help="Arrival-stream JSON file; schedules timestamp by timestamp.")
@click.option("--out", "out_path", default=None,
              help="Write the schedule document here instead of stdout.")
def schedule(coupling_path, calibration_path, circuits_path, buffer, epsilon_mode,
             epsilon, solver, layout_cap, arrivals_path, out_path):
    """Derive a full schedule for a workload."""

    def body():
        coupling_map, calibration, circuits = _load_pipeline_inputs(
            coupling_path, calibration_path, circuits_path
        )
        options = dict(
            buffer=buffer,
            epsilon=epsilon,
            epsilon_mode=epsilon_mode,
            solver=solver,
            layout_cap=layout_cap,
        )
        if arrivals_path is not None:
            raw = json.loads(_read_text(arrivals_path))
            if not isinstance(raw, dict) or "arrivals" not in raw:
                raise DocumentError("arrivals document must hold an 'arrivals' list")
            stream = [
                (entry["time"], circuits.get(entry["circuit_id"]))
                for entry in raw["arrivals"]
            ]
            result = schedule_dynamic(stream, coupling_map, calibration, **options)
        else:
            result = schedule_all(circuits, coupling_map, calibration, **options)
        text = _dump_json(schedule_document(result))
        summary_to_stderr = out_path is None
        if out_path is None:
            click.echo(text, nl=False)
        else:
            Path(out_path).write_text(text)
        metrics = schedule_metrics(result)
        echo = lambda msg: click.echo(msg, err=summary_to_stderr)
        for i, batch in enumerate(result.batches, start=1):
            echo(
                f"batch {i}: {len(batch)} circuit(s), {batch.total_qubits} qubits, "
                f"objective {batch.objective:.6f}"
            )
        if result.unschedulable:
            echo(f"unschedulable: {', '.join(result.unschedulable)}")
        echo(
            f"batches: {metrics['num_batches']}  gain: {metrics['gain']:.4f}  "
            f"mean utilization: {metrics['mean_qubit_utilization']:.4f}"
        )

    _guarded(body)


@main.command()
@_pipeline_options
@click.option("--out", "out_dir", required=True,
              help="Directory receiving one layout document per circuit.")
def layouts(coupling_path, calibration_path, circuits_path, buffer, epsilon_mode,
            epsilon, solver, layout_cap, out_dir):
    """Enumerate, score, and filter layouts for every circuit."""

    def body():
        coupling_map, calibration, circuits = _load_pipeline_inputs(
            coupling_path, calibration_path, circuits_path
        )
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for circuit in circuits:
            layout_list = layout_list_for(
                circuit, coupling_map, calibration, epsilon, epsilon_mode, layout_cap
            )
            if layout_list is None:
                click.echo(f"{circuit.id}: no valid layouts")
                continue
            path = directory / f"{circuit.id}.json"
            path.write_text(_dump_json(layout_list_document(layout_list)))
            click.echo(
                f"{circuit.id}: kept {len(layout_list)} layouts, "
                f"best score {layout_list.best.score:.6f}"
            )

    _guarded(body)


@main.command("graph-dump")
@_pipeline_options
@click.option("--out", "out_path", default=None,
              help="Write the graph document here instead of stdout.")
def graph_dump(coupling_path, calibration_path, circuits_path, buffer, epsilon_mode,
               epsilon, solver, layout_cap, out_path):
    """Dump the first-round compatibility graph for a workload."""

    def body():
        coupling_map, calibration, circuits = _load_pipeline_inputs(
            coupling_path, calibration_path, circuits_path
        )
        layout_lists = []
        eligible = []
        for circuit in circuits:
            layout_list = layout_list_for(
                circuit, coupling_map, calibration, epsilon, epsilon_mode, layout_cap
            )
            if layout_list is None:
                click.echo(f"skipping {circuit.id}: no valid layouts", err=True)
            else:
                layout_lists.append(layout_list)
                eligible.append(circuit)
        areas = normalized_areas(eligible)
        graph = build_compatibility_graph(layout_lists, areas, coupling_map, buffer)
        text = _dump_json(graph_document(graph))
        if out_path is None:
            click.echo(text, nl=False)
        else:
            Path(out_path).write_text(text)
            click.echo(
                f"graph: {graph.num_vertices} vertices, {len(graph.edges)} edges"
            )

    _guarded(body)


@main.command("marginalize")
@click.option("--joint", "joint_path", required=True,
              help="Joint-counts JSON file with spans and counts.")
@click.option("--circuit", "circuit_id", required=True,
              help="Circuit id to marginalize onto.")
@click.option("--out", "out_path", default=None,
              help="Write the marginal counts here instead of stdout.")
def marginalize_command(joint_path, circuit_id, out_path):
    """Project joint counts onto one circuit's bit span."""

    def body():
        joint = load_joint_counts(_read_text(joint_path))
        counts = marginalize(joint, circuit_id)
        text = _dump_json(marginal_counts_document(circuit_id, counts))
        if out_path is None:
            click.echo(text, nl=False)
        else:
            Path(out_path).write_text(text)
            click.echo(
                f"{circuit_id}: {len(counts)} outcomes, {sum(counts.values())} shots"
            )

    _guarded(body)
