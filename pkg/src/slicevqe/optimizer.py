"""Block-wise warm-started subspace optimization with a standard-VQE baseline.

The sliced run appends ansatz blocks one at a time: block t is optimized with
blocks 1..t-1 frozen at their earlier optima (equivalently, from the evolved
state they produce), then one full optimization over all parameters starts
from the concatenated block optima.  New blocks start at zero parameters, so
each step's initial energy equals the previous step's final energy exactly.

Zero parameters are an exact stationary point of the HVA landscape whenever
the generators and the current state are real (the energy is even under a
global sign flip of the new block's parameters).  When the zero-init gradient
is already below tolerance, the minimizer restarts once from a small fixed
offset; the recorded initial energy still refers to the identity-block start,
and the best iterate seen (including the start) is returned, so monotonicity
and warm-start continuity are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.optimize

from .ansatz import AnsatzBlock, AnsatzCircuit
from .errors import ContractError, OptimizationAbortError
from .oracle import GroundSpace, fidelity
from .paulis import PauliSum
from .states import StateVector, adjoint_gradient, apply_circuit

DEFAULT_GTOL = 1e-5
MAX_ITERATIONS = 200  # per optimization; line search uses strong Wolfe (1e-4, 0.9)
SADDLE_KICK = 1e-2
ENERGY_SLACK = 1e-9

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass(frozen=True)
class Schedule:
    """Block plan for a sliced run; the final full optimization always runs."""

    blocks: tuple[AnsatzBlock, ...]
    final_full_opt: bool = True
    gtol: float = DEFAULT_GTOL

    def __post_init__(self):
        if self.gtol <= 0:
            raise ValueError("gtol must be positive")
        if not self.blocks:
            raise ValueError("schedule needs at least one block")
        if not self.final_full_opt:
            raise ValueError("the method always ends with a full optimization")

    def check_tiles(self, circuit: AnsatzCircuit) -> None:
        cursor = 0
        for block in self.blocks:
            if block.start != cursor:
                raise ContractError("schedule blocks must tile the circuit contiguously")
            cursor = block.stop
        if cursor != circuit.n_params:
            raise ContractError("schedule blocks must cover the whole circuit")


@dataclass(frozen=True)
class StepRecord:
    """Metrics of one optimization (a slicing step or the final run)."""

    step: int
    param_count: int
    initial_energy: float
    final_energy: float
    fidelity: float
    cost_evals: int
    grad_evals: int
    warning: bool = False


@dataclass(frozen=True)
class EvalTotals:
    cost_evals: int
    grad_evals: int


@dataclass(frozen=True)
class OptimizationTrace:
    steps: tuple[StepRecord, ...]
    final: StepRecord

    @property
    def totals(self) -> "EvalTotals":
        return count_report(self)


@dataclass(frozen=True)
class VqeResult:
    params: np.ndarray
    energy: float
    fidelity: float
    trace: OptimizationTrace


def count_report(trace: OptimizationTrace) -> EvalTotals:
    """Summed evaluation counters over all steps plus the final optimization."""
    cost = sum(s.cost_evals for s in trace.steps) + trace.final.cost_evals
    grad = sum(s.grad_evals for s in trace.steps) + trace.final.grad_evals
    return EvalTotals(cost_evals=cost, grad_evals=grad)


class _CountingObjective:
    """Counts joint (value, gradient) evaluations and tracks the best iterate."""

    def __init__(self, objective: Objective):
        self._objective = objective
        self.cost_evals = 0
        self.grad_evals = 0
        self.best_x: np.ndarray | None = None
        self.best_value = np.inf
        self.first_value: float | None = None
        self.first_grad: np.ndarray | None = None

    def __call__(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad = self._objective(np.asarray(x, dtype=float))
        self.cost_evals += 1
        self.grad_evals += 1
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            raise OptimizationAbortError(
                f"objective returned non-finite value {value!r} at iterate "
                f"{np.array2string(np.asarray(x), precision=6)}",
                best_x=self.best_x,
                best_value=self.best_value,
                cost_evals=self.cost_evals,
                grad_evals=self.grad_evals,
            )
        if self.first_value is None:
            self.first_value = float(value)
            self.first_grad = np.asarray(grad, dtype=float).copy()
        if value < self.best_value:
            self.best_value = float(value)
            self.best_x = np.array(x, dtype=float, copy=True)
        return float(value), np.asarray(grad, dtype=float)


def bfgs_minimize(
    objective: Objective,
    x0: np.ndarray,
    gtol: float = DEFAULT_GTOL,
) -> tuple[np.ndarray, float, int, int]:
    """BFGS with strong-Wolfe line search; stops at max-norm(grad) <= gtol.

    The objective returns (value, gradient) jointly; both evaluation counters
    increment together on every call.  Returns the best iterate seen.
    """
    x0 = np.asarray(x0, dtype=float)
    counting = _CountingObjective(objective)
    if x0.size == 0:
        value, _ = counting(x0)
        return x0.copy(), value, counting.cost_evals, counting.grad_evals
    scipy.optimize.minimize(
        counting,
        x0,
        jac=True,
        method="BFGS",
        options={"gtol": gtol, "maxiter": MAX_ITERATIONS},
    )
    return (
        counting.best_x,
        counting.best_value,
        counting.cost_evals,
        counting.grad_evals,
    )


@dataclass(frozen=True)
class _BlockOpt:
    x: np.ndarray
    value: float
    start_value: float
    cost_evals: int
    grad_evals: int
    warning: bool = False


def _kick_pattern(size: int) -> np.ndarray:
    # fixed non-uniform offset; breaks the sign-flip symmetry deterministically
    return SADDLE_KICK * (1.0 + np.arange(size) % 3)


def _optimize_block(
    objective: Objective,
    x0: np.ndarray,
    gtol: float,
    capture_abort: bool,
) -> _BlockOpt:
    """One bounded optimization with saddle restart and best-iterate semantics.

    Evaluates the start point first (recorded as the step's initial energy).
    If the start is all zeros and its gradient is already below gtol, restarts
    once from the fixed kick offset; a warm start below gtol is accepted as
    converged.  With `capture_abort`, a non-finite objective downgrades to a
    warning and the best iterate found so far is kept.
    """
    x0 = np.asarray(x0, dtype=float)
    counting = _CountingObjective(objective)
    warning = False
    options = {"gtol": gtol, "maxiter": MAX_ITERATIONS}
    try:
        if x0.size == 0:
            counting(x0)
        else:
            scipy.optimize.minimize(counting, x0, jac=True, method="BFGS", options=options)
            zero_start_stuck = (
                not np.any(x0) and np.max(np.abs(counting.first_grad)) <= gtol
            )
            if zero_start_stuck:
                scipy.optimize.minimize(
                    counting,
                    x0 + _kick_pattern(x0.size),
                    jac=True,
                    method="BFGS",
                    options=options,
                )
    except OptimizationAbortError:
        # a failed very first evaluation leaves nothing to fall back on
        if not capture_abort or counting.first_value is None:
            raise
        warning = True
    return _BlockOpt(
        x=counting.best_x if counting.best_x is not None else x0.copy(),
        value=counting.best_value,
        start_value=counting.first_value,
        cost_evals=counting.cost_evals,
        grad_evals=counting.grad_evals,
        warning=warning,
    )


def _make_objective(
    init: StateVector, gates: Sequence, h: PauliSum
) -> Objective:
    gates = list(gates)

    def objective(theta: np.ndarray) -> tuple[float, np.ndarray]:
        return adjoint_gradient(init, gates, theta, h)

    return objective


def _check_variational_bound(energy: float, oracle: GroundSpace) -> None:
    if energy < oracle.energy - ENERGY_SLACK:
        raise ContractError(
            f"energy {energy!r} undercuts the exact ground energy {oracle.energy!r}"
        )


def run_standard_vqe(
    h: PauliSum,
    circuit: AnsatzCircuit,
    init: StateVector,
    gtol: float = DEFAULT_GTOL,
    oracle: GroundSpace | None = None,
) -> VqeResult:
    """Baseline: one BFGS run over the full parameter vector from zeros."""
    gates = list(circuit.gates)
    objective = _make_objective(init, gates, h)
    opt = _optimize_block(objective, np.zeros(circuit.n_params), gtol, capture_abort=False)
    final_state = init.copy()
    apply_circuit(final_state, gates, opt.x)
    fid = fidelity(final_state, oracle) if oracle is not None else float("nan")
    final = StepRecord(
        step=0,
        param_count=circuit.n_params,
        initial_energy=opt.start_value,
        final_energy=opt.value,
        fidelity=fid,
        cost_evals=opt.cost_evals,
        grad_evals=opt.grad_evals,
        warning=opt.warning,
    )
    if oracle is not None:
        _check_variational_bound(opt.value, oracle)
    trace = OptimizationTrace(steps=(), final=final)
    return VqeResult(params=opt.x, energy=opt.value, fidelity=fid, trace=trace)


def run_quasi_dynamic(
    h: PauliSum,
    circuit: AnsatzCircuit,
    schedule: Schedule,
    init: StateVector,
    oracle: GroundSpace | None = None,
) -> VqeResult:
    """Sliced run: per-block subspace optimizations, then one full optimization.

    Block t is optimized from the state evolved through blocks 1..t-1 at
    their fixed optima; its parameters start at zero (identity), so the
    recorded initial energy continues the previous step's final energy.  A
    step whose optimization aborts keeps its best-found parameters and sets a
    warning flag.  The final optimization opens all parameters, starting from
    the concatenated block optima.
    """
    schedule.check_tiles(circuit)
    gates = list(circuit.gates)
    state = init.copy()
    records: list[StepRecord] = []
    fixed: list[np.ndarray] = []
    for t, block in enumerate(schedule.blocks, start=1):
        block_gates = gates[block.start : block.stop]
        objective = _make_objective(state, block_gates, h)
        opt = _optimize_block(
            objective, np.zeros(block.param_count), schedule.gtol, capture_abort=True
        )
        apply_circuit(state, block_gates, opt.x)
        fid = fidelity(state, oracle) if oracle is not None else float("nan")
        records.append(
            StepRecord(
                step=t,
                param_count=block.param_count,
                initial_energy=opt.start_value,
                final_energy=opt.value,
                fidelity=fid,
                cost_evals=opt.cost_evals,
                grad_evals=opt.grad_evals,
                warning=opt.warning,
            )
        )
        fixed.append(opt.x)

    objective = _make_objective(init, gates, h)
    opt = _optimize_block(
        objective, np.concatenate(fixed), schedule.gtol, capture_abort=True
    )
    final_state = init.copy()
    apply_circuit(final_state, gates, opt.x)
    fid = fidelity(final_state, oracle) if oracle is not None else float("nan")
    final = StepRecord(
        step=len(records) + 1,
        param_count=circuit.n_params,
        initial_energy=opt.start_value,
        final_energy=opt.value,
        fidelity=fid,
        cost_evals=opt.cost_evals,
        grad_evals=opt.grad_evals,
        warning=opt.warning,
    )
    if oracle is not None:
        _check_variational_bound(opt.value, oracle)
    trace = OptimizationTrace(steps=tuple(records), final=final)
    return VqeResult(params=opt.x, energy=opt.value, fidelity=fid, trace=trace)
