"""Declarative experiment runner: config parsing, sweep execution, plot data.

A config is an INI-style document with a [model] section (kind, lattice
geometry, couplings, particle sector) and a [run] section (layers and slices
lists, tolerance, output directory).  Every (layers, slices) pair is one
sweep cell: slices = 0 runs the plain full-circuit baseline, slices >= 1
runs the sliced warm-start arm with that many blocks per layer.

Outputs per run: one JSON summary per cell, a combined CSV (one row per
optimization step plus a final row per cell), and plot-ready data files.
All numeric columns are bit-stable across reruns; wall time is the only
excluded column.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .ansatz import build_heisenberg_ansatz, build_hva, neel_state, noninteracting_ground_state, slice_circuit
from .errors import ConfigError
from .models import (
    JW_CONVENTIONS,
    HeisenbergParams,
    HubbardParams,
    LatticeSpec,
    build_heisenberg,
    group_hubbard_terms,
    hubbard_with_sector_penalty,
)
from .optimizer import DEFAULT_GTOL, Schedule, StepRecord, count_report, run_quasi_dynamic, run_standard_vqe
from .oracle import ground_space
from .states import STATEVECTOR_QUBIT_CAP

CSV_COLUMNS = (
    "model",
    "lattice",
    "layers",
    "slices",
    "arm",
    "step",
    "energy",
    "fidelity",
    "cost_evals",
    "grad_evals",
    "wall_time_s",
)

_MODEL_KEYS = {"kind", "geometry", "rows", "cols", "J", "t", "U", "n_up", "n_down"}
_RUN_KEYS = {"initial_state", "ansatz", "layers", "slices", "gtol", "output_dir"}

_PAIRINGS = {
    "heisenberg": {"initial_state": "neel", "ansatz": "heisenberg"},
    "hubbard": {"initial_state": "noninteracting", "ansatz": "hva"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description (defaults filled in)."""

    model: str
    lattice: LatticeSpec
    J: float
    t: float
    U: float
    n_up: int
    n_down: int
    initial_state: str
    ansatz: str
    layer_range: tuple[int, ...]
    slices_per_layer: tuple[int, ...]
    gtol: float
    output_dir: str

    def n_qubits(self) -> int:
        if self.model == "hubbard":
            return 2 * self.lattice.n_sites
        return self.lattice.n_sites

    def to_text(self) -> str:
        """Serialize back to the config format; parse(to_text()) round-trips."""
        lines = ["[model]", f"kind = {self.model}", f"geometry = {self.lattice.geometry}"]
        lines += [f"rows = {self.lattice.rows}", f"cols = {self.lattice.cols}"]
        if self.model == "heisenberg":
            lines += [f"J = {self.J!r}"]
        else:
            lines += [f"t = {self.t!r}", f"U = {self.U!r}"]
            lines += [f"n_up = {self.n_up}", f"n_down = {self.n_down}"]
        lines += [
            "",
            "[run]",
            f"initial_state = {self.initial_state}",
            f"ansatz = {self.ansatz}",
            f"layers = {','.join(str(x) for x in self.layer_range)}",
            f"slices = {','.join(str(x) for x in self.slices_per_layer)}",
            f"gtol = {self.gtol!r}",
            f"output_dir = {self.output_dir}",
        ]
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:12]

    def model_key(self) -> tuple:
        """Identity of the physical problem (oracle cache key)."""
        return (
            self.model,
            self.lattice.geometry,
            self.lattice.rows,
            self.lattice.cols,
            self.J,
            self.t,
            self.U,
            self.n_up,
            self.n_down,
        )


def _parse_int_list(raw: str, where: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part.strip()) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"{where}: expected a comma-separated integer list, got {raw!r}") from None
    if not values:
        raise ConfigError(f"{where}: list must not be empty")
    return values


def _get_float(section, key: str, default: float, where: str) -> float:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}.{key}: not a number: {raw!r}") from None


def _get_int(section, key: str, default: int | None, where: str) -> int | None:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{where}.{key}: not an integer: {raw!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config document; unknown keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    known_sections = {"model", "run"}
    for section in parser.sections():
        if section not in known_sections:
            raise ConfigError(f"unknown section [{section}]")
    if not parser.has_section("model"):
        raise ConfigError("missing [model] section")
    model_sec = parser["model"]
    run_sec = parser["run"] if parser.has_section("run") else {}

    for key in model_sec:
        if key not in {k.lower() for k in _MODEL_KEYS}:
            raise ConfigError(f"model.{key}: unknown key")
    for key in run_sec:
        if key not in _RUN_KEYS:
            raise ConfigError(f"run.{key}: unknown key")

    kind = model_sec.get("kind")
    if kind not in _PAIRINGS:
        raise ConfigError(f"model.kind: expected heisenberg or hubbard, got {kind!r}")
    geometry = model_sec.get("geometry")
    if geometry is None:
        raise ConfigError("model.geometry: required")
    rows = _get_int(model_sec, "rows", 1, "model")
    cols = _get_int(model_sec, "cols", None, "model")
    if cols is None:
        raise ConfigError("model.cols: required")
    try:
        lattice = LatticeSpec(geometry, rows, cols)
    except ValueError as exc:
        raise ConfigError(f"model lattice: {exc}") from exc

    if kind == "hubbard" and geometry == "kagome":
        raise ConfigError("model: the hubbard model is not defined on kagome patches")
    if kind == "heisenberg" and geometry == "rectangle":
        raise ConfigError("model: the heisenberg model runs on chains and kagome patches")

    j_coupling = _get_float(model_sec, "J", 1.0, "model")
    t_hop = _get_float(model_sec, "t", 1.0, "model")
    u_int = _get_float(model_sec, "U", 4.0, "model")
    half = lattice.n_sites // 2
    n_up = _get_int(model_sec, "n_up", half if kind == "hubbard" else 0, "model")
    n_down = _get_int(model_sec, "n_down", half if kind == "hubbard" else 0, "model")
    if kind == "hubbard" and (n_up > lattice.n_sites or n_down > lattice.n_sites):
        raise ConfigError("model.n_up/n_down: filling exceeds site count")

    pairing = _PAIRINGS[kind]
    initial_state = run_sec.get("initial_state", pairing["initial_state"])
    ansatz = run_sec.get("ansatz", pairing["ansatz"])
    if initial_state != pairing["initial_state"] or ansatz != pairing["ansatz"]:
        raise ConfigError(
            f"run: the {kind} model pairs with initial_state={pairing['initial_state']} "
            f"and ansatz={pairing['ansatz']}"
        )

    layers_raw = run_sec.get("layers")
    if layers_raw is None:
        raise ConfigError("run.layers: required")
    layer_range = _parse_int_list(layers_raw, "run.layers")
    if any(layer < 1 for layer in layer_range):
        raise ConfigError("run.layers: layer counts must be >= 1")
    slices = _parse_int_list(run_sec.get("slices", "0"), "run.slices")
    if any(s < 0 for s in slices):
        raise ConfigError("run.slices: slice counts must be >= 0")
    gtol = _get_float(run_sec, "gtol", DEFAULT_GTOL, "run")
    if gtol <= 0:
        raise ConfigError("run.gtol: must be positive")
    output_dir = run_sec.get("output_dir", f"out/{kind}_{lattice.label()}")

    cfg = ExperimentConfig(
        model=kind,
        lattice=lattice,
        J=j_coupling,
        t=t_hop,
        U=u_int,
        n_up=n_up,
        n_down=n_down,
        initial_state=initial_state,
        ansatz=ansatz,
        layer_range=layer_range,
        slices_per_layer=slices,
        gtol=gtol,
        output_dir=output_dir,
    )
    if cfg.n_qubits() > STATEVECTOR_QUBIT_CAP:
        raise ConfigError(
            f"model: {cfg.n_qubits()} qubits exceeds the {STATEVECTOR_QUBIT_CAP}-qubit cap"
        )
    return cfg


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


@dataclass(frozen=True)
class RunRecord:
    """One sweep cell's outcome; serializes losslessly to JSON."""

    config_hash: str
    model: str
    lattice: str
    layers: int
    slices: int
    arm: str
    steps: tuple[StepRecord, ...]
    final: StepRecord
    energy: float
    fidelity: float
    cost_evals: int
    grad_evals: int
    wall_time_s: float
    resolved_config: str

    @property
    def cell_id(self) -> str:
        return f"L{self.layers}S{self.slices}"

    def to_json_dict(self) -> dict:
        data = {
            "config_hash": self.config_hash,
            "model": self.model,
            "lattice": self.lattice,
            "layers": self.layers,
            "slices": self.slices,
            "arm": self.arm,
            "steps": [asdict(s) for s in self.steps],
            "final": asdict(self.final),
            "energy": self.energy,
            "fidelity": self.fidelity,
            "cost_evals": self.cost_evals,
            "grad_evals": self.grad_evals,
            "wall_time_s": self.wall_time_s,
            "resolved_config": self.resolved_config,
        }
        if self.model == "hubbard":
            data["conventions"] = dict(JW_CONVENTIONS)
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "RunRecord":
        return cls(
            config_hash=data["config_hash"],
            model=data["model"],
            lattice=data["lattice"],
            layers=data["layers"],
            slices=data["slices"],
            arm=data["arm"],
            steps=tuple(StepRecord(**s) for s in data["steps"]),
            final=StepRecord(**data["final"]),
            energy=data["energy"],
            fidelity=data["fidelity"],
            cost_evals=data["cost_evals"],
            grad_evals=data["grad_evals"],
            wall_time_s=data["wall_time_s"],
            resolved_config=data["resolved_config"],
        )


_ORACLE_CACHE: dict[tuple, object] = {}
_PROBLEM_CACHE: dict[tuple, object] = {}


@dataclass(frozen=True)
class _Problem:
    hamiltonian: object
    oracle: object
    init_state_factory: object
    circuit_factory: object


def _build_problem(cfg: ExperimentConfig) -> _Problem:
    key = cfg.model_key()
    cached = _PROBLEM_CACHE.get(key)
    if cached is not None:
        return cached
    if cfg.model == "hubbard":
        params = HubbardParams(t=cfg.t, U=cfg.U, n_up=cfg.n_up, n_down=cfg.n_down)
        h, h_pen = hubbard_with_sector_penalty(cfg.lattice, params)
        groups = group_hubbard_terms(h, cfg.lattice)
        oracle = _ORACLE_CACHE.get(key)
        if oracle is None:
            oracle = ground_space(h_pen)
            _ORACLE_CACHE[key] = oracle
        init = noninteracting_ground_state(cfg.lattice, params)

        def init_factory():
            return init.copy()

        def circuit_factory(layers: int):
            return build_hva(groups, layers)

    else:
        h = build_heisenberg(cfg.lattice, HeisenbergParams(J=cfg.J))
        oracle = _ORACLE_CACHE.get(key)
        if oracle is None:
            oracle = ground_space(h)
            _ORACLE_CACHE[key] = oracle
        n_sites = cfg.lattice.n_sites

        def init_factory():
            return neel_state(n_sites)

        def circuit_factory(layers: int):
            return build_heisenberg_ansatz(n_sites, layers)

    problem = _Problem(
        hamiltonian=h,
        oracle=oracle,
        init_state_factory=init_factory,
        circuit_factory=circuit_factory,
    )
    _PROBLEM_CACHE[key] = problem
    return problem


def run_cell(cfg: ExperimentConfig, layers: int, slices: int) -> RunRecord:
    """Execute one (layers, slices) cell: baseline for slices=0, sliced arm otherwise."""
    problem = _build_problem(cfg)
    circuit = problem.circuit_factory(layers)
    init = problem.init_state_factory()
    start = time.perf_counter()
    if slices == 0:
        result = run_standard_vqe(
            problem.hamiltonian, circuit, init, gtol=cfg.gtol, oracle=problem.oracle
        )
        arm = "baseline"
    else:
        if slices > circuit.gates_per_layer:
            raise ConfigError(
                f"slices={slices} exceeds the {circuit.gates_per_layer} gates per layer"
            )
        blocks = tuple(slice_circuit(circuit, slices))
        schedule = Schedule(blocks=blocks, gtol=cfg.gtol)
        result = run_quasi_dynamic(
            problem.hamiltonian, circuit, schedule, init, problem.oracle
        )
        arm = "quasi-dynamic"
    wall = time.perf_counter() - start
    totals = count_report(result.trace)
    return RunRecord(
        config_hash=cfg.config_hash(),
        model=cfg.model,
        lattice=cfg.lattice.label(),
        layers=layers,
        slices=slices,
        arm=arm,
        steps=result.trace.steps,
        final=result.trace.final,
        energy=result.energy,
        fidelity=min(max(result.fidelity, 0.0), 1.0),
        cost_evals=totals.cost_evals,
        grad_evals=totals.grad_evals,
        wall_time_s=wall,
        resolved_config=cfg.to_text(),
    )


def _cell_list(cfg: ExperimentConfig, cells: str | None) -> list[tuple[int, int]]:
    wanted = None
    if cells:
        wanted = {token.strip() for token in cells.split(",") if token.strip()}
    pairs = []
    for layers in cfg.layer_range:
        for slices in cfg.slices_per_layer:
            cell_id = f"L{layers}S{slices}"
            if wanted is None or cell_id in wanted:
                pairs.append((layers, slices))
    if wanted is not None and len(pairs) != len(wanted):
        found = {f"L{a}S{b}" for a, b in pairs}
        raise ConfigError(f"unknown cells requested: {sorted(wanted - found)}")
    return pairs


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(data)
    os.replace(tmp, path)


def _csv_rows(record: RunRecord) -> list[str]:
    rows = []
    entries = [(str(s.step), s) for s in record.steps] + [("final", record.final)]
    for step_name, rec in entries:
        fid = min(max(rec.fidelity, 0.0), 1.0)
        rows.append(
            ",".join(
                [
                    record.model,
                    record.lattice,
                    str(record.layers),
                    str(record.slices),
                    record.arm,
                    step_name,
                    repr(rec.final_energy),
                    repr(fid),
                    str(rec.cost_evals),
                    str(rec.grad_evals),
                    f"{record.wall_time_s:.3f}",
                ]
            )
        )
    return rows


def write_outputs(records: list[RunRecord], failures: dict[str, str], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for record in records:
        _atomic_write(
            out_dir / f"cell_{record.cell_id}.json",
            json.dumps(record.to_json_dict(), indent=2, sort_keys=True) + "\n",
        )
    header = ",".join(CSV_COLUMNS)
    lines = [header]
    for record in sorted(records, key=lambda r: (r.layers, r.slices)):
        lines.extend(_csv_rows(record))
    _atomic_write(out_dir / "experiment.csv", "\n".join(lines) + "\n")
    if failures:
        _atomic_write(
            out_dir / "failures.json", json.dumps(failures, indent=2, sort_keys=True) + "\n"
        )


def _run_cell_task(args: tuple) -> RunRecord:
    cfg_text, layers, slices = args
    cfg = parse_config(cfg_text)
    return run_cell(cfg, layers, slices)


def run_experiment(
    cfg: ExperimentConfig,
    workers: int = 1,
    cells: str | None = None,
    output_dir: str | None = None,
) -> tuple[list[RunRecord], dict[str, str]]:
    """Run every sweep cell, write outputs, and return (records, failures).

    Cell failures are captured per cell (and written to failures.json); the
    remaining cells still run.
    """
    out_dir = Path(output_dir or cfg.output_dir)
    pairs = _cell_list(cfg, cells)
    records: list[RunRecord] = []
    failures: dict[str, str] = {}
    if workers > 1 and len(pairs) > 1:
        tasks = [(cfg.to_text(), layers, slices) for layers, slices in pairs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_run_cell_task, task): (task[1], task[2]) for task in tasks
            }
            for future, (layers, slices) in futures.items():
                try:
                    records.append(future.result())
                except Exception as exc:  # noqa: BLE001 - cell isolation
                    failures[f"L{layers}S{slices}"] = f"{type(exc).__name__}: {exc}"
    else:
        for layers, slices in pairs:
            try:
                records.append(run_cell(cfg, layers, slices))
            except Exception as exc:  # noqa: BLE001 - cell isolation
                failures[f"L{layers}S{slices}"] = f"{type(exc).__name__}: {exc}"
    records.sort(key=lambda r: (r.layers, r.slices))
    write_outputs(records, failures, out_dir)
    return records, failures


def load_records(records_dir: str | os.PathLike) -> list[RunRecord]:
    paths = sorted(Path(records_dir).glob("cell_*.json"))
    if not paths:
        raise ConfigError(f"no cell_*.json records under {records_dir}")
    return [RunRecord.from_json_dict(json.loads(p.read_text())) for p in paths]


# --- plot emission ----------------------------------------------------------


def _series_file(
    path: Path, xlabel: str, ylabel: str, meta: dict, points: list[tuple[float, float]]
) -> None:
    header = f"# x={xlabel} y={ylabel}"
    for key, value in meta.items():
        header += f" {key}={value}"
    body = "\n".join(f"{x!r} {y!r}" for x, y in points)
    _atomic_write(path, header + "\n" + body + "\n")


def emit_plots(records: list[RunRecord], output_dir: str | os.PathLike) -> list[Path]:
    """Write plot-ready series files and SVG renderings.

    Families: 1-fidelity vs layers (log y, with the 99% threshold), total
    evaluations vs layers, and per-cell fidelity staircases over slicing
    steps.
    """
    if not records:
        raise ConfigError("no records to plot")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    series: dict[tuple[str, int], list[RunRecord]] = {}
    for record in records:
        series.setdefault((record.arm, record.slices), []).append(record)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "slicevqe"

    fig_fid, ax_fid = plt.subplots(figsize=(6, 4))
    fig_ev, ax_ev = plt.subplots(figsize=(6, 4))
    for (arm, slices), recs in sorted(series.items()):
        recs = sorted(recs, key=lambda r: r.layers)
        label = f"{arm}-s{slices}"
        fid_points = [(float(r.layers), 1.0 - r.fidelity) for r in recs]
        ev_points = [(float(r.layers), float(r.cost_evals)) for r in recs]
        path = out / f"one_minus_fidelity_{label}.dat"
        _series_file(
            path,
            "layers",
            "one_minus_fidelity",
            {"yscale": "log", "arm": arm, "slices": slices},
            fid_points,
        )
        written.append(path)
        path = out / f"evaluations_{label}.dat"
        _series_file(
            path, "layers", "cost_evals", {"arm": arm, "slices": slices}, ev_points
        )
        written.append(path)
        ax_fid.semilogy(
            [x for x, _ in fid_points],
            [max(y, 1e-16) for _, y in fid_points],
            marker="o",
            label=label,
        )
        ax_ev.plot(
            [x for x, _ in ev_points], [y for _, y in ev_points], marker="s", label=label
        )

    ax_fid.axhline(0.01, color="black", linestyle="--", linewidth=1, label="99% fidelity")
    ax_fid.set_xlabel("layers")
    ax_fid.set_ylabel("1 - fidelity")
    ax_fid.legend(fontsize=7)
    ax_ev.set_xlabel("layers")
    ax_ev.set_ylabel("objective evaluations")
    ax_ev.legend(fontsize=7)

    for fig, name in ((fig_fid, "one_minus_fidelity.svg"), (fig_ev, "evaluations.svg")):
        fig.tight_layout()
        fig.savefig(out / name, metadata={"Date": None})
        written.append(out / name)
        plt.close(fig)

    stair_records = [r for r in records if r.steps]
    if stair_records:
        fig, ax = plt.subplots(figsize=(6, 4))
        for record in sorted(stair_records, key=lambda r: (r.layers, r.slices)):
            points = [(float(s.step), s.fidelity) for s in record.steps]
            points.append((float(record.final.step), record.final.fidelity))
            path = out / f"staircase_L{record.layers}S{record.slices}.dat"
            _series_file(
                path,
                "step",
                "fidelity",
                {"layers": record.layers, "slices": record.slices, "arm": record.arm},
                points,
            )
            written.append(path)
            ax.plot(
                [x for x, _ in points],
                [y for _, y in points],
                marker="^",
                label=f"L{record.layers}S{record.slices}",
            )
            ax.plot(
                [points[-1][0]], [points[-1][1]], marker="o", color="red", zorder=5
            )
        ax.axhline(0.99, color="black", linestyle="--", linewidth=1)
        ax.set_xlabel("optimization step (last point = full optimization)")
        ax.set_ylabel("fidelity")
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(out / "staircase.svg", metadata={"Date": None})
        written.append(out / "staircase.svg")
        plt.close(fig)

    return written
