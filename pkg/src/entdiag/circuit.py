"""Statevectors and the layered R_y / CZ circuit families.

Three architectures share one layer structure (rotations on every qubit, then
CZ on a brickwall set of disjoint pairs):

* ``brickwall``  every CZ applied;
* ``stochastic`` each CZ kept with probability ``p``, drawn once per circuit;
* ``restricted`` all angles of a layer tied to one parameter.

Angles and CZ masks are drawn from generators keyed by ``(seed, stream, layer)``
so that growing ``L`` never changes the draws of earlier layers.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import kernels

ARCHITECTURES = ("brickwall", "stochastic", "restricted")

_ANGLE_STREAM = 0
_MASK_STREAM = 1


class CircuitError(ValueError):
    """Unsupported circuit configuration or invalid gate arguments."""


class StateVector:
    """Pure state of ``n`` qubits stored as ``2**n`` complex amplitudes."""

    __slots__ = ("amps",)

    def __init__(self, amps):
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0 or amps.size & (amps.size - 1):
            raise CircuitError(f"amplitude array must be 1-d with a power-of-two length, got {amps.shape}")
        self.amps = amps

    @classmethod
    def zero(cls, n: int) -> StateVector:
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps)

    @property
    def n(self) -> int:
        return self.amps.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> StateVector:
        return StateVector(self.amps.copy())

    def __repr__(self) -> str:
        return f"StateVector(n={self.n})"

    # Debug dump: 8-byte little-endian n, then interleaved re/im float64 (LE).
    def dump(self, path) -> None:
        data = np.empty(2 * self.amps.size, dtype="<f8")
        data[0::2] = self.amps.real
        data[1::2] = self.amps.imag
        with open(path, "wb") as fh:
            fh.write(struct.pack("<Q", self.n))
            fh.write(data.tobytes())

    @classmethod
    def load(cls, path) -> StateVector:
        raw = Path(path).read_bytes()
        (n,) = struct.unpack("<Q", raw[:8])
        data = np.frombuffer(raw[8:], dtype="<f8")
        if data.size != 2 << n:
            raise CircuitError(f"dump holds {data.size} floats, expected {2 << n} for n={n}")
        return cls(data[0::2] + 1j * data[1::2])


class GateRecord(NamedTuple):
    layer: int
    pair: tuple[int, int]
    angles: tuple[float, float]
    cz_applied: bool


def brickwall_pairs(n: int, layer: int) -> np.ndarray:
    """Disjoint nearest-neighbour pairs of ``layer``; odd offset wraps (n-1, 0)."""
    if n < 2 or n % 2:
        raise CircuitError(f"brickwall layers need an even qubit count, got n={n}")
    offset = layer % 2
    first = (offset + 2 * np.arange(n // 2)) % n
    return np.stack([first, (first + 1) % n], axis=1).astype(np.int64)


def _layer_rng(seed: int, stream: int, layer: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(stream, layer))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True, eq=False)
class CircuitSpec:
    """Architecture, depth and parameters of one circuit instance.

    ``params`` has shape ``(L, n)``, or ``(L,)`` for restricted circuits; the
    ``theta`` property always gives the replicated ``(L, n)`` angle table.
    """

    n: int
    L: int
    architecture: str
    params: np.ndarray
    cz_mask: np.ndarray
    p: float = 1.0
    seed: int = 0
    _pairs: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise CircuitError(f"unknown architecture {self.architecture!r}")
        if self.n < 2 or self.n % 2:
            raise CircuitError(f"n must be even and >= 2, got {self.n}")
        if self.L < 0:
            raise CircuitError("L must be non-negative")
        params = np.asarray(self.params, dtype=np.float64)
        expected = (self.L,) if self.architecture == "restricted" else (self.L, self.n)
        if params.shape != expected:
            raise CircuitError(f"params shape {params.shape} != {expected}")
        mask = np.asarray(self.cz_mask, dtype=np.bool_)
        if mask.shape != (self.L, self.n // 2):
            raise CircuitError(f"cz_mask shape {mask.shape} != {(self.L, self.n // 2)}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "cz_mask", mask)
        if self._pairs is None:
            pairs = np.stack([brickwall_pairs(self.n, ell) for ell in range(self.L)]) if self.L else np.zeros((0, self.n // 2, 2), np.int64)
            object.__setattr__(self, "_pairs", pairs)

    @classmethod
    def random(cls, n: int, L: int, architecture: str = "brickwall", p: float | None = None, seed: int = 0) -> CircuitSpec:
        """Draw angles from U(0, 2pi) and, for stochastic circuits, the CZ mask."""
        if architecture not in ARCHITECTURES:
            raise CircuitError(f"unknown architecture {architecture!r}")
        if n < 2 or n % 2:
            raise CircuitError(f"n must be even and >= 2, got {n}")
        if L < 0:
            raise CircuitError("L must be non-negative")
        if p is None:
            p = 0.5 if architecture == "stochastic" else 1.0
        if not 0.0 <= p <= 1.0:
            raise CircuitError(f"entangler probability must lie in [0, 1], got {p}")
        if architecture != "stochastic" and p != 1.0:
            raise CircuitError(f"{architecture} circuits apply every CZ (p=1)")
        m = n // 2
        params = np.empty((L,) if architecture == "restricted" else (L, n))
        mask = np.ones((L, m), dtype=np.bool_)
        for ell in range(L):
            draws = _layer_rng(seed, _ANGLE_STREAM, ell).uniform(0.0, 2 * np.pi, size=n)
            params[ell] = draws[0] if architecture == "restricted" else draws
            if architecture == "stochastic":
                mask[ell] = _layer_rng(seed, _MASK_STREAM, ell).random(m) < p
        return cls(n=n, L=L, architecture=architecture, params=params, cz_mask=mask, p=float(p), seed=int(seed))

    @classmethod
    def from_angles(cls, theta, architecture: str = "brickwall", cz_mask=None, seed: int = 0) -> CircuitSpec:
        theta = np.asarray(theta, dtype=np.float64)
        L = theta.shape[0]
        n = theta.shape[1] if theta.ndim == 2 else None
        if n is None:
            raise CircuitError("from_angles needs an (L, n) table; use the constructor for restricted params")
        if cz_mask is None:
            cz_mask = np.ones((L, n // 2), dtype=np.bool_)
        return cls(n=n, L=L, architecture=architecture, params=theta, cz_mask=cz_mask, seed=seed)

    @property
    def theta(self) -> np.ndarray:
        if self.architecture == "restricted":
            return np.repeat(self.params[:, None], self.n, axis=1)
        return self.params

    @property
    def pairs(self) -> np.ndarray:
        return self._pairs

    @property
    def n_params(self) -> int:
        return self.params.size

    def with_params(self, params) -> CircuitSpec:
        return replace(self, params=np.array(params, dtype=np.float64).reshape(self.params.shape))

    def truncated(self, L: int) -> CircuitSpec:
        """The first ``L`` layers of this circuit."""
        return replace(self, L=L, params=self.params[:L].copy(), cz_mask=self.cz_mask[:L], _pairs=self._pairs[:L])

    def gates(self, layer: int) -> list[GateRecord]:
        th = self.theta[layer]
        return [
            GateRecord(layer, (int(i), int(j)), (float(th[i]), float(th[j])), bool(self.cz_mask[layer, k]))
            for k, (i, j) in enumerate(self._pairs[layer])
        ]


def _check_qubit(n: int, q: int) -> int:
    if not 0 <= q < n:
        raise IndexError(f"qubit {q} out of range for n={n}")
    return int(q)


def apply_rotation(state: StateVector, qubit: int, phi: float) -> StateVector:
    """Apply exp(i sigma_y phi) = [[cos, sin], [-sin, cos]] to ``qubit``."""
    q = _check_qubit(state.n, qubit)
    out = state.amps.copy()
    kernels.rotate(out, q, np.cos(phi), np.sin(phi))
    return StateVector(out)


def apply_cz(state: StateVector, pair) -> StateVector:
    i, j = pair
    if i == j:
        raise CircuitError(f"CZ needs two distinct qubits, got ({i}, {j})")
    i, j = _check_qubit(state.n, i), _check_qubit(state.n, j)
    out = state.amps.copy()
    kernels.cz(out, i, j)
    return StateVector(out)


def apply_layer(state: StateVector, spec: CircuitSpec, layer: int) -> StateVector:
    if state.n != spec.n:
        raise CircuitError(f"state has {state.n} qubits, circuit has {spec.n}")
    if not 0 <= layer < spec.L:
        raise IndexError(f"layer {layer} out of range for L={spec.L}")
    out = state.amps.copy()
    kernels.layer(out, spec.theta[layer], spec.pairs[layer], spec.cz_mask[layer])
    return StateVector(out)


def evolve_real(spec: CircuitSpec) -> np.ndarray:
    """Real amplitude vector U(theta)|0...0>; the gate set keeps states real."""
    psi = np.zeros(1 << spec.n)
    psi[0] = 1.0
    if spec.L:
        kernels.forward(psi, np.ascontiguousarray(spec.theta), spec.pairs, spec.cz_mask)
    return psi


def run_circuit(spec: CircuitSpec) -> StateVector:
    return StateVector(evolve_real(spec))


def energy(state: StateVector, H) -> float:
    """<psi|H|psi>; the imaginary residue is checked and dropped."""
    if state.n != H.n:
        raise CircuitError(f"state has {state.n} qubits, Hamiltonian has {H.n}")
    val = np.vdot(state.amps, H.matvec(state.amps))
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > 1e-10 * scale:
        raise ArithmeticError(f"expectation value has imaginary part {val.imag:.3e}")
    return float(val.real)


def energy_and_gradient(spec: CircuitSpec, H) -> tuple[float, np.ndarray]:
    """Energy and its exact gradient by a reverse (adjoint) sweep.

    Only the real symmetric part of H enters since circuit states are real.
    The gradient has the shape of ``spec.params``.
    """
    if spec.n != H.n:
        raise CircuitError(f"circuit has {spec.n} qubits, Hamiltonian has {H.n}")
    psi = evolve_real(spec)
    lam = H.matvec_real(psi)
    e = float(psi @ lam)
    if spec.L == 0:
        return e, np.zeros(spec.params.shape)
    grad = kernels.backward(psi, lam, np.ascontiguousarray(spec.theta), spec.pairs, spec.cz_mask)
    if spec.architecture == "restricted":
        grad = grad.sum(axis=1)
    return e, grad


def energy_gradient(spec: CircuitSpec, H) -> np.ndarray:
    return energy_and_gradient(spec, H)[1]


# ------------------------------------------------------- two-qubit gate charge

_CZ4 = np.diag([1.0, 1.0, 1.0, -1.0])


def rotation_matrix(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def gate_matrix(theta_i: float, theta_j: float) -> np.ndarray:
    """CZ . R(theta_i) x R(theta_j) in the |b_i b_j> basis."""
    return _CZ4 @ np.kron(rotation_matrix(theta_i), rotation_matrix(theta_j))


def charge_matrix(q1: float, q2: float) -> np.ndarray:
    """Two-parameter charge q1*I + q2*SWAP."""
    return np.array(
        [
            [q1 + q2, 0, 0, 0],
            [0, q1, q2, 0],
            [0, q2, q1, 0],
            [0, 0, 0, q1 + q2],
        ],
        dtype=np.float64,
    )


def charge_commutator_norm(theta_i: float, theta_j: float, q1: float, q2: float) -> float:
    g = gate_matrix(theta_i, theta_j)
    q = charge_matrix(q1, q2)
    return float(np.linalg.norm(g @ q - q @ g))
