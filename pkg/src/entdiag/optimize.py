"""Plain gradient descent on the circuit energy and its diagnostics."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .circuit import CircuitSpec
from .entanglement import ReducedState, distance_to_mixed, partial_trace, renyi, schmidt_spectrum
from .hamiltonians import ITERATIVE_MAX_N, GroundSolution, HamiltonianModel, ground_state

SUCCESS_THRESHOLD = 0.1


class OptimizationError(ArithmeticError):
    """Non-finite gradient; ``state`` carries the parameters at failure."""

    def __init__(self, msg: str, state: dict):
        super().__init__(msg)
        self.state = state


@dataclass(frozen=True)
class OptimizerConfig:
    eta: float = 0.005
    max_steps: int = 10_000
    record_every: int = 10
    grad_tol: float = 0.0

    def __post_init__(self):
        if not self.eta >= 0:
            raise ValueError("eta must be non-negative")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class GroundReference:
    """Ground-state quantities shared read-only by every run on one Hamiltonian."""

    energy: float
    rho_A: ReducedState
    renyi2: float
    degenerate: bool

    @classmethod
    def from_solution(cls, sol: GroundSolution) -> GroundReference:
        rho = partial_trace(sol.state)
        return cls(sol.energy, rho, renyi(rho.eigs, 2), sol.degenerate)

    @classmethod
    def of(cls, H: HamiltonianModel) -> GroundReference | None:
        if H.n > ITERATIVE_MAX_N:
            return None
        return cls.from_solution(ground_state(H))


@dataclass
class OptimizationTrace:
    seed: int
    tau: list[int] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    gap: list[float] = field(default_factory=list)
    grad_norm: list[float] = field(default_factory=list)
    renyi2: list[float] = field(default_factory=list)
    trace_dist: list[float] = field(default_factory=list)
    energies: np.ndarray | None = None  # every step, for the descent check
    final_params: np.ndarray | None = None
    flags: list[str] = field(default_factory=list)

    @property
    def final_gap(self) -> float:
        return self.gap[-1]

    def ascent_steps(self, tol: float = 1e-9) -> int:
        return int(np.count_nonzero(np.diff(self.energies) > tol))

    def rows(self):
        for i, t in enumerate(self.tau):
            yield self.seed, t, self.energy[i], self.gap[i], self.grad_norm[i], self.renyi2[i], self.trace_dist[i]


def _diagnostics(psi: np.ndarray, ref: GroundReference | None):
    n = psi.size.bit_length() - 1
    if ref is None:
        lam = schmidt_spectrum(psi, n // 2)
        return renyi(lam, 2), math.nan
    m = psi.reshape(-1, 1 << (n // 2))
    rho = m.T @ m.conj()
    diff = rho - ref.rho_A.rho
    lam = np.linalg.eigvalsh(rho)
    return renyi(lam, 2), 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def gradient_descent(spec: CircuitSpec, H: HamiltonianModel, cfg: OptimizerConfig = OptimizerConfig(), ref: GroundReference | None = None) -> OptimizationTrace:
    """theta <- theta - eta * grad E(theta), recording diagnostics every ``record_every`` steps.

    The final point (after ``max_steps`` updates, or where ``grad_tol`` stops the
    run) is always recorded.
    """
    if ref is None:
        ref = GroundReference.of(H)
    trace = OptimizationTrace(seed=spec.seed)
    if ref is None:
        trace.flags.append("no_ground_state")
    elif ref.degenerate:
        trace.flags.append("degenerate_ground")
    restricted = spec.architecture == "restricted"
    params = spec.params.copy()
    pairs, mask = spec.pairs, spec.cz_mask
    mat = H.sparse_real
    dim = 1 << spec.n
    e_ref = ref.energy if ref is not None else math.nan
    energies = np.empty(cfg.max_steps + 1)

    for tau in range(cfg.max_steps + 1):
        theta = np.ascontiguousarray(np.repeat(params[:, None], spec.n, axis=1) if restricted else params)
        psi = np.zeros(dim)
        psi[0] = 1.0
        if spec.L:
            kernels.forward(psi, theta, pairs, mask)
        lam = mat @ psi
        e = float(psi @ lam)
        energies[tau] = e
        # backward() rewinds psi in place, so keep the state if it may be needed
        kept = psi.copy()
        if spec.L:
            grad = kernels.backward(psi, lam, theta, pairs, mask)
            if restricted:
                grad = grad.sum(axis=1)
        else:
            grad = np.zeros(params.shape)
        gnorm = float(np.linalg.norm(grad))
        if not np.isfinite(gnorm):
            raise OptimizationError(f"non-finite gradient at step {tau}", {"tau": tau, "params": params.copy(), "energy": e})
        stop = cfg.grad_tol > 0 and gnorm < cfg.grad_tol
        if tau % cfg.record_every == 0 or tau == cfg.max_steps or stop:
            r2, td = _diagnostics(kept, ref)
            trace.tau.append(tau)
            trace.energy.append(e)
            trace.gap.append(e - e_ref)
            trace.grad_norm.append(gnorm)
            trace.renyi2.append(r2)
            trace.trace_dist.append(td)
        if stop:
            trace.flags.append("grad_tol")
            energies = energies[: tau + 1]
            break
        if tau == cfg.max_steps:
            break
        params -= cfg.eta * grad
    trace.energies = energies
    trace.final_params = params
    return trace


@dataclass
class SweepRow:
    """Ensemble means at one depth, before (tau = 0) and after optimization."""

    L: int
    seeds: list[int]
    final_gaps: list[float]
    gap_before: float
    gap_after: float
    trace_before: float
    trace_after: float
    renyi2_before: float
    renyi2_after: float
    threshold: float = SUCCESS_THRESHOLD

    @property
    def success_rate(self) -> float:
        return float(np.mean(np.asarray(self.final_gaps) < self.threshold))

    def to_record(self) -> dict:
        return {
            "L": self.L,
            "seeds": len(self.seeds),
            "success_rate": self.success_rate,
            "gap_before": self.gap_before,
            "gap_after": self.gap_after,
            "trace_before": self.trace_before,
            "trace_after": self.trace_after,
            "renyi2_before": self.renyi2_before,
            "renyi2_after": self.renyi2_after,
        }


@dataclass
class SweepTable:
    hamiltonian: str
    n: int
    architecture: str
    rows: list[SweepRow]
    traces: dict = field(default_factory=dict)  # (L, seed) -> OptimizationTrace

    def rates(self) -> dict[int, float]:
        return {r.L: r.success_rate for r in self.rows}

    def failure_onset(self, level: float = 0.5) -> float:
        """Smallest swept L whose success rate drops below ``level``; inf if none does."""
        for r in self.rows:
            if r.success_rate < level:
                return r.L
        return math.inf

    def success_edge(self, level: float = 0.5) -> float:
        """Largest swept L with every depth up to it at rate >= ``level``; 0 if the first fails."""
        edge = 0
        for r in self.rows:
            if r.success_rate < level:
                break
            edge = r.L
        return edge


def _sweep_task(args):
    L, seed, n, architecture, p, H, cfg, ref = args
    spec = CircuitSpec.random(n, L, architecture, p=p, seed=seed)
    return gradient_descent(spec, H, cfg, ref)


def success_sweep(
    n: int,
    H: HamiltonianModel,
    depths,
    seeds=range(20),
    cfg: OptimizerConfig = OptimizerConfig(),
    architecture: str = "brickwall",
    p: float | None = None,
    workers: int = 1,
    keep_traces: bool = False,
) -> SweepTable:
    """Run the seed ensemble at every depth and aggregate before/after means.

    Cells are (L, seed); results are merged by that key, so the table does not
    depend on the worker count.
    """
    depths = [int(L) for L in depths]
    if depths != sorted(depths):
        raise ValueError("depths must be sorted")
    if H.n != n:
        raise ValueError(f"Hamiltonian has n={H.n}, sweep asked for n={n}")
    seeds = [int(s) for s in seeds]
    ref = GroundReference.of(H)
    tasks = [(L, s, n, architecture, p, H, cfg, ref) for L in depths for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]
    by_key = {(t[0], t[1]): r for t, r in zip(tasks, results)}

    rows = []
    for L in depths:
        tr = [by_key[(L, s)] for s in seeds]
        first = lambda attr: float(np.mean([getattr(t, attr)[0] for t in tr]))
        last = lambda attr: float(np.mean([getattr(t, attr)[-1] for t in tr]))
        rows.append(
            SweepRow(
                L, seeds, [t.final_gap for t in tr],
                first("gap"), last("gap"),
                first("trace_dist"), last("trace_dist"),
                first("renyi2"), last("renyi2"),
            )
        )
    table = SweepTable(H.kind, n, architecture, rows)
    if keep_traces:
        table.traces = by_key
    return table


@dataclass
class EvolutionCurve:
    label: str
    L: int
    tau: np.ndarray
    renyi2: np.ndarray
    ground_renyi2: float

    @property
    def gap(self) -> np.ndarray:
        return np.abs(self.renyi2 - self.ground_renyi2)

    def closes_by(self, tol: float) -> float:
        """First recorded tau where the R2 gap is below ``tol``; inf if never."""
        hit = np.flatnonzero(self.gap < tol)
        return float(self.tau[hit[0]]) if hit.size else math.inf

    def rows(self):
        for t, r in zip(self.tau, self.renyi2):
            yield self.label, self.L, int(t), float(r)


def entanglement_evolution(
    hamiltonians: dict,
    n: int = 12,
    depths=(12, 40, 68),
    seed: int = 0,
    cfg: OptimizerConfig = OptimizerConfig(),
    architecture: str = "brickwall",
) -> list[EvolutionCurve]:
    """R2(tau) of the half-chain reduction during descent, one curve per (H, L)."""
    curves = []
    for label, H in hamiltonians.items():
        if H.n != n:
            raise ValueError(f"{label}: Hamiltonian has n={H.n}, expected {n}")
        ref = GroundReference.of(H)
        if ref is None:
            raise ValueError(f"{label}: no ground-state reference for n={n}")
        for L in depths:
            tr = gradient_descent(CircuitSpec.random(n, L, architecture, seed=seed), H, cfg, ref)
            curves.append(EvolutionCurve(label, int(L), np.asarray(tr.tau), np.asarray(tr.renyi2), ref.renyi2))
    return curves
