"""Reduced states, entropies (bits), trace distances and entropy inequalities.

Subsystem A is the block of the ``n_A`` least significant qubits. Eigenvalues
below ``EIG_FLOOR`` are clamped to zero before any logarithm and do not count
towards the rank.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .circuit import StateVector

EIG_FLOOR = 1e-12
DEFAULT_KS = (2, 4, 6)


class ReducedState:
    """Hermitian, unit-trace density matrix of ``n_A`` qubits."""

    def __init__(self, rho: np.ndarray, eigs: np.ndarray | None = None):
        rho = np.asarray(rho)
        dim = rho.shape[0]
        if rho.shape != (dim, dim) or dim & (dim - 1):
            raise ValueError(f"density matrix must be square with power-of-two size, got {rho.shape}")
        self.rho = rho
        self.n_A = dim.bit_length() - 1
        if eigs is not None:
            self.__dict__["eigs"] = np.sort(np.asarray(eigs, dtype=float))[::-1]

    @cached_property
    def eigs(self) -> np.ndarray:
        """Eigenvalues, descending."""
        return np.linalg.eigvalsh(self.rho)[::-1]

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def maximally_mixed(cls, n_A: int) -> ReducedState:
        dim = 1 << n_A
        return cls(np.eye(dim) / dim, np.full(dim, 1.0 / dim))

    @classmethod
    def from_eigs(cls, eigs) -> ReducedState:
        eigs = np.asarray(eigs, dtype=float)
        return cls(np.diag(eigs), eigs)


def _split(amps: np.ndarray, n_A: int) -> np.ndarray:
    n = amps.size.bit_length() - 1
    if not 0 < n_A < n:
        raise ValueError(f"n_A={n_A} out of range for n={n}")
    # row index: qubits of B, column index: qubits of A
    return amps.reshape(1 << (n - n_A), 1 << n_A)


def partial_trace(state, n_A: int | None = None) -> ReducedState:
    """rho_A = Tr_B |psi><psi| for A = the first ``n_A`` qubits (default n/2)."""
    amps = state.amps if isinstance(state, StateVector) else np.asarray(state)
    n = amps.size.bit_length() - 1
    if n_A is None:
        n_A = n // 2
    m = _split(amps, n_A).T
    return ReducedState(m @ m.conj().T)


def partial_trace_complement(state, n_A: int | None = None) -> ReducedState:
    """rho_B for the complementary block of the last ``n - n_A`` qubits."""
    amps = state.amps if isinstance(state, StateVector) else np.asarray(state)
    n = amps.size.bit_length() - 1
    if n_A is None:
        n_A = n // 2
    m = _split(amps, n_A)
    return ReducedState(m @ m.conj().T)


def schmidt_spectrum(amps: np.ndarray, n_A: int) -> np.ndarray:
    """Eigenvalues of rho_A from the singular values of the amplitude matrix."""
    s = np.linalg.svd(_split(np.asarray(amps), n_A), compute_uv=False)
    return s * s


@dataclass
class EntropyReport:
    n_A: int
    s_ee: float
    renyi: dict[int, float]
    s_max: float
    s_min: float
    purity: float

    def to_record(self) -> dict:
        rec = {"n_A": self.n_A, "s_ee": self.s_ee}
        rec.update({f"renyi_{k}": v for k, v in sorted(self.renyi.items())})
        rec.update({"s_max": self.s_max, "s_min": self.s_min, "purity": self.purity})
        return rec


def _clamped(eigs) -> np.ndarray:
    lam = np.asarray(eigs, dtype=float)
    return np.where(lam > EIG_FLOOR, lam, 0.0)


def von_neumann(eigs) -> float:
    lam = _clamped(eigs)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def renyi(eigs, k: float) -> float:
    if k == 1:
        return von_neumann(eigs)
    lam = _clamped(eigs)
    return float(max(0.0, math.log2(np.sum(lam**k)) / (1.0 - k)))


def entropies_from_eigs(eigs, ks=DEFAULT_KS) -> EntropyReport:
    lam = _clamped(eigs)
    n_A = lam.size.bit_length() - 1
    rank = int(np.count_nonzero(lam))
    return EntropyReport(
        n_A=n_A,
        s_ee=von_neumann(lam),
        renyi={int(k): renyi(lam, k) for k in ks},
        s_max=math.log2(rank) if rank else 0.0,
        s_min=float(max(0.0, -math.log2(lam.max()))),
        purity=float(np.sum(lam * lam)),
    )


def entropies(rho: ReducedState, ks=DEFAULT_KS) -> EntropyReport:
    return entropies_from_eigs(rho.eigs, ks)


def trace_norm_hermitian(a: np.ndarray) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def trace_distance(rho: ReducedState, sigma: ReducedState) -> float:
    """Half the trace norm of rho - sigma."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return 0.5 * trace_norm_hermitian(rho.rho - sigma.rho)


def distance_to_mixed(eigs) -> float:
    lam = np.asarray(eigs, dtype=float)
    return 0.5 * float(np.sum(np.abs(lam - 1.0 / lam.size)))


@dataclass
class BoundsReport:
    n_A: int
    trace_dist_to_mixed: float
    upper: float
    lower: dict[int, float]
    asymptotic_lower: float

    def holds(self, atol: float = 0.0) -> bool:
        d = self.trace_dist_to_mixed
        return d <= self.upper + atol and all(lo <= d + atol for lo in self.lower.values())

    def to_record(self) -> dict:
        rec = {"n_A": self.n_A, "trace_dist_to_mixed": self.trace_dist_to_mixed, "upper": self.upper}
        rec.update({f"lower_{k}": v for k, v in sorted(self.lower.items())})
        rec["asymptotic_lower"] = self.asymptotic_lower
        return rec


def theorem1_bounds(rho: ReducedState | np.ndarray, ks=DEFAULT_KS) -> BoundsReport:
    """Entropic upper/lower bounds on the distance of rho_A to I/2^n_A.

    upper = sqrt((n_A - S_EE)/2), lower_k = (Tr rho^k - 2^{(1-k) n_A}) / (2k).
    """
    eigs = rho.eigs if isinstance(rho, ReducedState) else np.asarray(rho)
    lam = _clamped(eigs)
    n_A = lam.size.bit_length() - 1
    s_ee = von_neumann(lam)
    lower = {}
    for k in ks:
        tr_k = 2.0 ** ((1 - k) * renyi(lam, k))
        lower[int(k)] = (tr_k - 2.0 ** ((1 - k) * n_A)) / (2 * k)
    return BoundsReport(
        n_A=n_A,
        trace_dist_to_mixed=distance_to_mixed(eigs),
        upper=math.sqrt(max(0.0, n_A - s_ee) / 2.0),
        lower=lower,
        asymptotic_lower=1.0 - s_ee / n_A,
    )


def binary_entropy(t: float) -> float:
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return float(-t * math.log2(t) - (1 - t) * math.log2(1 - t))


def relative_entropy(rho: ReducedState, sigma: ReducedState, base: float = 2.0) -> float:
    """S(rho||sigma); +inf when supp(rho) is not inside supp(sigma)."""
    lr, vr = np.linalg.eigh(rho.rho)
    ls, vs = np.linalg.eigh(sigma.rho)
    lr = _clamped(lr)
    ls = _clamped(ls)
    overlap = np.abs(vr.conj().T @ vs) ** 2  # [i, j] = |<r_i|s_j>|^2
    weight = lr[:, None] * overlap
    if np.any(weight[:, ls == 0] > EIG_FLOOR):
        return math.inf
    pos = lr > 0
    term1 = np.sum(lr[pos] * np.log(lr[pos]))
    term2 = np.sum(weight[:, ls > 0] * np.log(ls[ls > 0]))
    return float(max(0.0, term1 - term2) / math.log(base))


def pure_state_trace_norm(psi: StateVector, phi: StateVector) -> float:
    """|| |psi><psi| - |phi><phi| ||_1 = 2 sqrt(1 - |<psi|phi>|^2)."""
    ov = abs(np.vdot(psi.amps, phi.amps)) ** 2
    return 2.0 * math.sqrt(max(0.0, 1.0 - ov))


@dataclass
class Check:
    lhs: float
    rhs: float
    flag: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


@dataclass
class ContinuityReport:
    checks: dict[str, Check] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def violations(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.ok]


def continuity_checks(
    rho: ReducedState,
    sigma: ReducedState,
    ks=DEFAULT_KS,
    full: tuple[StateVector, StateVector] | None = None,
) -> ContinuityReport:
    """Pinsker, Fannes-Audenaert, Renyi continuity and (given ``full``) trace monotonicity."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    rep = ContinuityReport()
    norm1 = 2.0 * trace_distance(rho, sigma)
    t = 0.5 * norm1
    d = rho.dim
    n_A = rho.n_A

    # Pinsker is stated with the relative entropy in nats
    rel = relative_entropy(rho, sigma, base=math.e)
    rep.checks["pinsker"] = Check(0.5 * norm1**2, rel, "unsupported" if math.isinf(rel) else "")

    s_rho, s_sig = von_neumann(rho.eigs), von_neumann(sigma.eigs)
    fa_rhs = (t * math.log2(d - 1) if d > 1 else 0.0) + binary_entropy(min(t, 1.0))
    rep.checks["fannes_audenaert"] = Check(abs(s_rho - s_sig), fa_rhs)

    for k in ks:
        lhs = abs(renyi(rho.eigs, k) - renyi(sigma.eigs, k))
        rep.checks[f"renyi_{k}"] = Check(lhs, k * 2.0 ** (n_A * (k - 1)) * norm1)

    if full is not None:
        psi, phi = full
        rep.checks["partial_trace_monotonicity"] = Check(norm1, pure_state_trace_norm(psi, phi))
    return rep


def _contract_others(psi: np.ndarray, factors: np.ndarray, q: int) -> np.ndarray:
    n = psi.ndim
    t = psi
    # qubit r sits on axis n-1-r; walking r upwards removes axes from the top
    # down, so the remaining axis numbers below stay valid
    for r in range(n):
        if r != q:
            t = np.tensordot(t, factors[r].conj(), axes=([n - 1 - r], [0]))
    return t


def geometric_measure(state: StateVector, restarts: int = 16, tol: float = 1e-10, seed: int = 0, max_sweeps: int = 10_000) -> float:
    """-log2 of the largest squared overlap with a product state.

    Alternating maximisation: with all factors but one fixed, the best remaining
    factor is the normalised partial contraction of the state.
    """
    n = state.n
    if n > 14:
        raise ValueError(f"geometric measure refused for n={n} > 14")
    psi = state.amps.reshape((2,) * n)
    rng = np.random.default_rng(seed)
    best = 0.0
    unconverged = 0
    for _ in range(restarts):
        factors = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
        factors /= np.linalg.norm(factors, axis=1, keepdims=True)
        prev = -1.0
        ov = 0.0
        for _sweep in range(max_sweeps):
            for q in range(n):
                v = _contract_others(psi, factors, q)
                nv = np.linalg.norm(v)
                if nv > 0.0:
                    factors[q] = v / nv
            ov = float(nv * nv)
            if abs(ov - prev) < tol:
                break
            prev = ov
        else:
            unconverged += 1
        best = max(best, ov)
    if unconverged:
        warnings.warn(f"geometric measure: {unconverged}/{restarts} restarts hit {max_sweeps} sweeps", RuntimeWarning)
    return float(-math.log2(min(1.0, best)))
