"""Nearest-neighbour Ising, long-range Ising and SYK_4 Hamiltonians."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import pauli
from .circuit import StateVector

DENSE_MAX_N = 12
ITERATIVE_MAX_N = 16


class SolverError(RuntimeError):
    """Iterative eigensolver failed; ``residual`` holds the last residual norm."""

    def __init__(self, msg: str, residual: float = float("nan")):
        super().__init__(msg)
        self.residual = residual


@dataclass(frozen=True)
class PauliTerm:
    coeff: float
    x: int
    z: int

    def label(self, n: int) -> str:
        return pauli.label(self.x, self.z, n)


@dataclass(frozen=True, eq=False)
class HamiltonianModel:
    """Real-coefficient sum of Pauli strings with cached sparse/dense matrices."""

    kind: str
    n: int
    terms: tuple[PauliTerm, ...]
    params: dict = field(default_factory=dict)
    couplings: tuple = ()

    def __post_init__(self):
        bad = [t for t in self.terms if not math.isfinite(t.coeff)]
        if bad:
            raise ValueError(f"non-finite coefficient on {bad[0].label(self.n)}")

    @cached_property
    def sparse(self) -> sp.csr_matrix:
        dim = 1 << self.n
        diag_by_x: dict[int, np.ndarray] = {}
        for t in self.terms:
            d = diag_by_x.setdefault(t.x, np.zeros(dim, dtype=np.complex128))
            d += t.coeff * pauli.action_phases(t.x, t.z, self.n)
        b = np.arange(dim)
        rows, cols, vals = [], [], []
        for x, d in sorted(diag_by_x.items()):
            keep = np.abs(d) > 1e-15
            rows.append(b[keep] ^ x)
            cols.append(b[keep])
            vals.append(d[keep])
        if not rows:
            return sp.csr_matrix((dim, dim), dtype=np.complex128)
        mat = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim))
        return mat.tocsr()

    @cached_property
    def sparse_real(self) -> sp.csr_matrix:
        """Real part of H: the only part seen by real amplitude vectors."""
        m = self.sparse.real.tocsr()
        m.eliminate_zeros()
        return m

    @cached_property
    def is_real(self) -> bool:
        return not np.any(self.sparse.imag.data)

    def dense(self) -> np.ndarray:
        if self.n > DENSE_MAX_N:
            raise MemoryError(f"dense matrix refused for n={self.n} > {DENSE_MAX_N}")
        return self.sparse.toarray()

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.sparse @ v

    def matvec_real(self, v: np.ndarray) -> np.ndarray:
        return self.sparse_real @ v

    def expectation(self, amps: np.ndarray) -> float:
        return float(np.vdot(amps, self.matvec(amps)).real)

    def dump_couplings(self) -> str:
        """SYK couplings as a JSON array of {indices, J} records."""
        return json.dumps([{"indices": list(idx), "J": float(j)} for idx, j in self.couplings])


def build_nn_ising(n: int, g: float) -> HamiltonianModel:
    """sum_i Z_i Z_{i+1} + g sum_i X_i with periodic boundary."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even, got {n}")
    if g < 0:
        raise ValueError("g must be non-negative")
    terms = [PauliTerm(1.0, 0, (1 << i) | (1 << ((i + 1) % n))) for i in range(n)]
    terms += [PauliTerm(float(g), 1 << i, 0) for i in range(n)]
    return HamiltonianModel("nn_ising", n, tuple(terms), {"g": float(g)})


def exact_nn_ising_energy(n: int, g: float, momenta: str = "integer") -> float:
    """Free-fermion ground energy of the periodic NN chain.

    ``momenta="integer"`` sums over k = 0..n-1, the usual textbook closed form.
    ``"half_integer"`` uses k + 1/2, the even-parity sector that actually holds
    the ground state of the finite ring; only this one agrees with ED at g > 0.
    """
    if momenta not in ("integer", "half_integer"):
        raise ValueError(f"unknown momenta convention {momenta!r}")
    k = np.arange(n) + (0.5 if momenta == "half_integer" else 0.0)
    return float(-np.sum(np.sqrt(1.0 + g * g - 2.0 * g * np.cos(2.0 * np.pi * k / n))))


def ring_distance(i: int, j: int, n: int) -> int:
    d = abs(i - j)
    return min(d, n - d)


def build_long_range_ising(n: int, alpha: float, g: float) -> HamiltonianModel:
    """sum_{i<j} d(i,j)^-alpha Z_i Z_j + g sum_i X_i, ring distance d."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even, got {n}")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    terms = [
        PauliTerm(float(ring_distance(i, j, n)) ** (-alpha), 0, (1 << i) | (1 << j))
        for i, j in itertools.combinations(range(n), 2)
    ]
    terms += [PauliTerm(float(g), 1 << i, 0) for i in range(n)]
    return HamiltonianModel("long_range_ising", n, tuple(terms), {"alpha": float(alpha), "g": float(g)})


def majorana_strings(n: int) -> list[tuple[int, int]]:
    """Jordan-Wigner Pauli strings of the 2n Majoranas (unscaled)."""
    out = []
    for k in range(n):
        zs = (1 << k) - 1
        out.append((1 << k, zs))  # Z..Z X_k
        out.append((1 << k, zs | (1 << k)))  # Z..Z Y_k
    return out


def majorana_matrix(i: int, n: int) -> np.ndarray:
    """gamma_i as a dense matrix, scaled so that {gamma_i, gamma_j} = delta_ij."""
    x, z = majorana_strings(n)[i]
    return pauli.matrix(x, z, n) / math.sqrt(2.0)


def syk_variance(n: int, q: int = 4) -> float:
    return math.factorial(q - 1) / (2 * n) ** (q - 1)


def build_syk4(n: int, seed: int, couplings=None) -> HamiltonianModel:
    """i^2 sum_{i1<i2<i3<i4} J gamma gamma gamma gamma over 2n Majoranas.

    J ~ N(0, 3!/(2n)^3) in lexicographic index order unless ``couplings``
    (a sequence of ((i1, i2, i3, i4), J)) is supplied.
    """
    if 2 * n < 4:
        raise ValueError("SYK_4 needs at least 4 Majoranas")
    gam = majorana_strings(n)
    idx = list(itertools.combinations(range(2 * n), 4))
    if couplings is None:
        rng = np.random.default_rng(seed)
        js = rng.normal(0.0, math.sqrt(syk_variance(n)), size=len(idx))
        couplings = tuple(zip(idx, (float(j) for j in js)))
    else:
        couplings = tuple((tuple(int(a) for a in c), float(j)) for c, j in couplings)
    terms: dict[tuple[int, int], float] = {}
    for quad, j in couplings:
        phase, x, z = 1.0 + 0j, 0, 0
        for a in quad:
            ph, x, z = pauli.multiply((x, z), gam[a])
            phase *= ph
        # i^2 prefactor, (1/sqrt2)^4 normalisation
        coeff = -0.25 * j * phase
        if abs(coeff.imag) > 1e-12:
            raise AssertionError("non-Hermitian Majorana product")
        terms[(x, z)] = terms.get((x, z), 0.0) + coeff.real
    pterms = tuple(PauliTerm(c, x, z) for (x, z), c in terms.items())
    return HamiltonianModel("syk4", n, pterms, {"seed": int(seed)}, couplings)


def load_syk4(n: int, text: str, seed: int = -1) -> HamiltonianModel:
    records = json.loads(text)
    return build_syk4(n, seed, [(r["indices"], r["J"]) for r in records])


def build_hamiltonian(spec: dict) -> HamiltonianModel:
    """Factory from a plain dict, e.g. {"kind": "nn_ising", "n": 8, "g": 2}."""
    kind = spec["kind"]
    n = int(spec["n"])
    if kind == "nn_ising":
        return build_nn_ising(n, float(spec.get("g", 1.0)))
    if kind == "long_range_ising":
        return build_long_range_ising(n, float(spec.get("alpha", 1.0)), float(spec.get("g", 1.0)))
    if kind == "syk4":
        return build_syk4(n, int(spec.get("seed", 0)))
    raise ValueError(f"unknown Hamiltonian kind {kind!r}")


@dataclass
class GroundSolution:
    energy: float
    state: StateVector
    degenerate: bool
    solver: str
    gap: float
    residual: float


def ground_state(H: HamiltonianModel, solver: str | None = None) -> GroundSolution:
    """Lowest eigenpair: dense for n <= 12, Lanczos (ARPACK) up to n = 16."""
    if H.n > ITERATIVE_MAX_N:
        raise ValueError(f"ground state refused for n={H.n} > {ITERATIVE_MAX_N}")
    if solver is None:
        solver = "dense" if H.n <= DENSE_MAX_N else "iterative"
    if solver == "dense":
        mat = H.dense()
        if H.is_real:
            mat = mat.real
        vals, vecs = scipy.linalg.eigh(mat, subset_by_index=[0, 1])
    elif solver == "iterative":
        vals, vecs = _lanczos_lowest(H)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    vec = vecs[:, 0].astype(np.complex128)
    # fix the global phase: largest component real positive
    k = int(np.argmax(np.abs(vec)))
    vec *= np.abs(vec[k]) / vec[k]
    residual = float(np.linalg.norm(H.matvec(vec) - vals[0] * vec))
    gap = float(vals[1] - vals[0])
    return GroundSolution(float(vals[0]), StateVector(vec), gap < 1e-9, solver, gap, residual)


def _lanczos_lowest(H: HamiltonianModel, tol: float = 1e-10, max_matvecs: int = 5000):
    mat = H.sparse_real if H.is_real else H.sparse
    count = 0

    def mv(v):
        nonlocal count
        count += 1
        return mat @ v

    op = spla.LinearOperator(mat.shape, matvec=mv, dtype=mat.dtype)
    ncv = 40
    v0 = np.random.default_rng(0).standard_normal(mat.shape[0]).astype(mat.dtype)
    try:
        vals, vecs = spla.eigsh(op, k=2, which="SA", tol=tol, ncv=ncv, maxiter=max(1, max_matvecs // ncv), v0=v0)
    except spla.ArpackNoConvergence as exc:
        res = float("nan")
        if exc.eigenvalues.size:
            v = exc.eigenvectors[:, 0]
            res = float(np.linalg.norm(mat @ v - exc.eigenvalues[0] * v))
        raise SolverError(f"Lanczos did not converge within {count} matvecs", res) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    res = float(np.linalg.norm(mat @ vecs[:, 0] - vals[0] * vecs[:, 0]))
    if res > 1e-8:
        raise SolverError(f"Lanczos residual {res:.2e} above 1e-8", res)
    return vals, vecs
