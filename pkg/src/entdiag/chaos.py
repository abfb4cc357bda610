"""Spectral form factor of rho_A, operator spreading and the random-walk front model."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .circuit import CircuitSpec
from .entanglement import ReducedState

MAX_PAULI_N = 8
MAX_SPREAD_N = 10

# single-qubit Pauli order used for coefficient tables: I, X, Y, Z
PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
PAULI_INDEX = {"i": 0, "x": 1, "y": 2, "z": 3}


class BudgetError(ValueError):
    """Operator too large for dense evolution or a full Pauli table."""


# ------------------------------------------------------------------ SFF


@dataclass
class SpectralFormFactor:
    taus: np.ndarray
    values: np.ndarray  # |Z(tau)|^2 / Z(0)^2
    N: int
    n_label: int

    def within_bounds(self, lower: float | None = None, atol: float = 1e-9) -> bool:
        lo = 1.0 / self.N if lower is None else lower
        return bool(np.all(self.values <= 1.0 + atol) and np.all(self.values >= lo - atol))

    def rows(self):
        for t, v in zip(self.taus, self.values):
            yield float(t), float(v)


def sff(rho: ReducedState | np.ndarray, taus, label: str = "dimension") -> SpectralFormFactor:
    """|Tr exp(-i tau rho)|^2 normalised by its tau=0 value N^2.

    ``label`` only changes the reported ``n_label``: the Hilbert-space dimension
    N (``"dimension"``) or the qubit count log2 N (``"qubits"``).
    """
    eigs = rho.eigs if isinstance(rho, ReducedState) else np.asarray(rho, dtype=float)
    taus = np.asarray(taus, dtype=float)
    N = eigs.size
    z = np.exp(-1j * np.outer(taus, eigs)).sum(axis=1)
    vals = np.abs(z) ** 2 / float(N * N)
    if label not in ("dimension", "qubits"):
        raise ValueError(f"unknown label convention {label!r}")
    n_label = N if label == "dimension" else N.bit_length() - 1
    return SpectralFormFactor(taus, vals, N, n_label)


def sff_average(spectra, taus, label: str = "dimension") -> SpectralFormFactor:
    """Ensemble average <|Z(tau)|^2> / N^2 over several spectra."""
    parts = [sff(s, taus, label) for s in spectra]
    vals = np.mean([p.values for p in parts], axis=0)
    return SpectralFormFactor(np.asarray(taus, float), vals, parts[0].N, parts[0].n_label)


def sff_pure_closed_form(N: int, taus) -> np.ndarray:
    """|((N-1) + e^{-i tau}) / N|^2 for a rank-one rho."""
    taus = np.asarray(taus, dtype=float)
    return (N * N - 2 * N + 2 + 2 * (N - 1) * np.cos(taus)) / float(N * N)


def sff_thermal_unnormalised(eigs, taus) -> np.ndarray:
    """N + sum_{i != j} cos((l_i - l_j) tau), i.e. |Z|^2 before dividing by N^2."""
    eigs = np.asarray(eigs, dtype=float)
    taus = np.asarray(taus, dtype=float)
    d = eigs[:, None] - eigs[None, :]
    off = ~np.eye(eigs.size, dtype=bool)
    return eigs.size + np.cos(np.multiply.outer(taus, d[off])).sum(axis=1)


def thermal_spectrum(energies, beta: float) -> np.ndarray:
    w = np.exp(-beta * (np.asarray(energies, float) - np.min(energies)))
    return w / w.sum()


# ------------------------------------------------------- Pauli coefficients


def pauli_coefficients(op: np.ndarray) -> np.ndarray:
    """h_P = 2^{-n/2} Tr(P op) for every Pauli string P.

    Returns an array of shape (4,)*n; axis ``n-1-q`` holds the Pauli index
    (I, X, Y, Z) of qubit q, so ``h.ravel()`` is ordered with qubit 0 fastest.
    Cost O(n 4^n): one 2x2 -> 4 contraction per qubit.
    """
    op = np.asarray(op)
    dim = op.shape[0]
    n = dim.bit_length() - 1
    if op.shape != (dim, dim) or 1 << n != dim:
        raise ValueError(f"operator must be square with power-of-two size, got {op.shape}")
    if n > MAX_PAULI_N:
        raise BudgetError(f"Pauli table refused for n={n} > {MAX_PAULI_N}")
    # Tr(P M) = sum_{r,c} P[c, r] M[r, c]
    kernel = PAULIS.transpose(0, 2, 1)  # [a, r, c] = P_a[c, r]
    t = op.reshape((2,) * (2 * n))
    # row axes 0..n-1, column axes n..2n-1, both most-significant qubit first
    for k in range(n):
        # contract the leading row axis and its column partner, append Pauli axis
        t = np.tensordot(t, kernel, axes=([0, n - k], [1, 2]))
        # t: remaining row axes, remaining col axes, produced Pauli axes...
    # after n steps only Pauli axes remain, in order of qubits n-1 .. 0
    return t * 2.0 ** (-n / 2)


def pauli_reconstruct(h: np.ndarray) -> np.ndarray:
    n = h.ndim
    out = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    for idx in zip(*np.nonzero(np.abs(h) > 0)):
        mat = np.array([[1.0 + 0j]])
        for a in idx:  # qubit n-1 first: kron order puts it most significant
            mat = np.kron(mat, PAULIS[a])
        out += h[idx] * mat
    return out * 2.0 ** (-n / 2)


def pauli_string_matrix(labels: dict[int, str], n: int) -> np.ndarray:
    """Dense matrix of a Pauli string given as {qubit: 'x'|'y'|'z'}."""
    mat = np.array([[1.0 + 0j]])
    for q in range(n - 1, -1, -1):
        mat = np.kron(mat, PAULIS[PAULI_INDEX[labels.get(q, "i").lower()]])
    return mat


def pauli_weights(h: np.ndarray) -> np.ndarray:
    """Share of sum |h|^2 carried by strings of each weight 0..n."""
    n = h.ndim
    w2 = np.abs(h) ** 2
    weight = np.zeros((4,) * n, dtype=np.int64)
    for ax in range(n):
        shape = [1] * n
        shape[ax] = 4
        weight = weight + (np.arange(4) > 0).reshape(shape)
    dist = np.bincount(weight.ravel(), weights=w2.ravel(), minlength=n + 1)
    return dist / dist.sum()


def coefficient_entropy(h: np.ndarray) -> float:
    """-sum w log2 w over weights w = |h|^2 normalised to one."""
    w = np.abs(h.ravel()) ** 2
    w = w / w.sum()
    w = w[w > 1e-300]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def otoc_profile(h: np.ndarray, probe: str = "z") -> np.ndarray:
    """C(x) = 2^{1-n} * sum of |h|^2 over strings whose letter at x is neither I nor the probe."""
    n = h.ndim
    a = PAULI_INDEX[probe.lower()]
    w2 = np.abs(h) ** 2
    out = np.empty(n)
    for x in range(n):
        ax = n - 1 - x
        per = np.moveaxis(w2, ax, 0).reshape(4, -1).sum(axis=1)
        out[x] = sum(per[b] for b in range(1, 4) if b != a)
    return out * 2.0 ** (1 - n)


def otoc_direct(op: np.ndarray, x: int, probe: str = "z") -> float:
    """1/2 * 2^{-n} Tr([O, s]^dag [O, s]) by dense matrices."""
    n = op.shape[0].bit_length() - 1
    s = pauli_string_matrix({x: probe}, n)
    c = op @ s - s @ op
    return 0.5 * float(np.real(np.trace(c.conj().T @ c))) / (1 << n)


# ------------------------------------------------------------ spreading


def _apply_layer_rows(u: np.ndarray, spec: CircuitSpec, ell: int) -> None:
    # rotations on the row index of a C-ordered matrix: bit q of the row is
    # bit q + n of the flattened index
    n = spec.n
    flat = u.reshape(-1)
    th = spec.theta[ell]
    for q in range(n):
        kernels.rotate(flat, q + n, math.cos(th[q]), math.sin(th[q]))
    for k, (i, j) in enumerate(spec.pairs[ell]):
        if spec.cz_mask[ell, k]:
            kernels.cz(flat, int(i) + n, int(j) + n)


def light_cone(spec: CircuitSpec, support, t: int) -> set[int]:
    """Sites reachable from ``support`` through the CZ gates of layers t..1."""
    s = set(int(q) for q in support)
    for ell in range(t - 1, -1, -1):
        for k, (i, j) in enumerate(spec.pairs[ell]):
            if spec.cz_mask[ell, k] and (i in s or j in s):
                s.update((int(i), int(j)))
    return s


@dataclass
class SpreadProfile:
    label: str
    times: list[int]
    C: np.ndarray  # (len(times), n)
    weights: np.ndarray  # (len(times), n+1)
    entropy: np.ndarray  # (len(times),)
    norm2: np.ndarray  # sum |h|^2 per time
    probe: str = "z"
    cones: list[set] = field(default_factory=list)

    def front(self, frac: float = 0.5) -> np.ndarray:
        """Largest site index with C above ``frac`` of its row maximum (-1 if none)."""
        out = []
        for row in self.C:
            m = row.max()
            hit = np.flatnonzero(row >= frac * m) if m > 0 else []
            out.append(int(hit.max()) if len(hit) else -1)
        return np.array(out)

    def rows(self):
        for ti, t in enumerate(self.times):
            for x, c in enumerate(self.C[ti]):
                yield t, x, float(c)


def spread_profile(op0: np.ndarray, spec: CircuitSpec, times, probe: str = "z", label: str = "", support=None) -> SpreadProfile:
    """Heisenberg evolution O(t) = U(t)^dag O(0) U(t) with U(t) the first t layers."""
    n = spec.n
    if n > MAX_SPREAD_N:
        raise BudgetError(f"dense operator evolution refused for n={n} > {MAX_SPREAD_N}")
    times = sorted(int(t) for t in times)
    if times and (times[0] < 0 or times[-1] > spec.L):
        raise ValueError(f"times must lie in [0, {spec.L}]")
    dim = 1 << n
    op0 = np.asarray(op0, dtype=np.complex128)
    u = np.eye(dim)
    done = 0
    Cs, ws, ents, norms, cones = [], [], [], [], []
    for t in times:
        while done < t:
            _apply_layer_rows(u, spec, done)
            done += 1
        op_t = u.T @ op0 @ u
        h = pauli_coefficients(op_t) if n <= MAX_PAULI_N else None
        if h is not None:
            Cs.append(otoc_profile(h, probe))
            ws.append(pauli_weights(h))
            ents.append(coefficient_entropy(h))
            norms.append(float(np.sum(np.abs(h) ** 2)))
        else:
            Cs.append(np.array([otoc_direct(op_t, x, probe) for x in range(n)]))
            ws.append(np.full(n + 1, np.nan))
            ents.append(np.nan)
            norms.append(float(np.real(np.trace(op_t.conj().T @ op_t))))
        if support is not None:
            cones.append(light_cone(spec, support, t))
    return SpreadProfile(label, times, np.array(Cs), np.array(ws), np.array(ents), np.array(norms), probe, cones)


# ---------------------------------------------------------- walk model


@dataclass(frozen=True)
class WalkModel:
    """Biased random walk of the operator front: shrink with probability p."""

    p: float
    t: float
    v_B: float
    mu: float
    sigma: float
    var: float


def walk_model(p: float, t: float) -> WalkModel:
    """mean (1-2p) t and standard deviation sqrt(2 p (1-p) t)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if t < 0:
        raise ValueError("t must be non-negative")
    v_b = 1.0 - 2.0 * p
    var = 2.0 * p * (1.0 - p) * t
    # 1 - v_B^2 = 4 p (1-p): the variance is half of (1 - v_B^2) t
    assert math.isclose(var, (1.0 - v_b * v_b) * t / 2.0, rel_tol=1e-12, abs_tol=1e-15)
    return WalkModel(p, t, v_b, v_b * t, math.sqrt(var), var)
