"""Ensemble entanglement growth and the phenomenological growth fits."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .circuit import CircuitSpec
from .entanglement import EIG_FLOOR, schmidt_spectrum

KINDS = ("s_ee", "renyi_2", "renyi_4", "renyi_6", "s_max", "s_min")
MAX_GROWTH_N = 20


def _entropy_row(lam: np.ndarray, kinds) -> np.ndarray:
    lam = np.where(lam > EIG_FLOOR, lam, 0.0)
    nz = lam[lam > 0]
    out = np.empty(len(kinds))
    for i, kind in enumerate(kinds):
        if kind == "s_ee":
            v = -np.sum(nz * np.log2(nz))
        elif kind == "s_max":
            v = math.log2(nz.size)
        elif kind == "s_min":
            v = -math.log2(nz.max())
        elif kind.startswith("renyi_"):
            k = int(kind[6:])
            v = math.log2(np.sum(nz**k)) / (1 - k)
        else:
            raise ValueError(f"unknown entropy kind {kind!r}")
        out[i] = max(0.0, v)
    return out


def growth_trajectory(n: int, architecture: str, seed: int, L_max: int, kinds=KINDS, p: float | None = None) -> np.ndarray:
    """Entropies of one circuit after 0..L_max layers; shape (L_max+1, len(kinds))."""
    spec = CircuitSpec.random(n, L_max, architecture, p=p, seed=seed)
    theta = np.ascontiguousarray(spec.theta)
    psi = np.zeros(1 << n)
    psi[0] = 1.0
    n_A = n // 2
    out = np.empty((L_max + 1, len(kinds)))
    out[0] = _entropy_row(schmidt_spectrum(psi, n_A), kinds)
    for ell in range(L_max):
        kernels.layer(psi, theta[ell], spec.pairs[ell], spec.cz_mask[ell])
        out[ell + 1] = _entropy_row(schmidt_spectrum(psi, n_A), kinds)
    return out


def _trajectory_task(args):
    return growth_trajectory(*args)


@dataclass
class GrowthCurve:
    n: int
    architecture: str
    seeds: list[int]
    kinds: tuple[str, ...]
    samples: np.ndarray  # (n_seeds, L_max+1, n_kinds)
    p: float = 1.0

    @property
    def L_max(self) -> int:
        return self.samples.shape[1] - 1

    @property
    def depths(self) -> np.ndarray:
        return np.arange(self.L_max + 1)

    def mean(self, kind: str) -> np.ndarray:
        return self.samples[:, :, self.kinds.index(kind)].mean(axis=0)

    def stderr(self, kind: str) -> np.ndarray:
        vals = self.samples[:, :, self.kinds.index(kind)]
        return vals.std(axis=0, ddof=1) / math.sqrt(vals.shape[0])

    def rows(self):
        """(L, kind, mean, stderr) rows, kind-major."""
        for kind in self.kinds:
            m, s = self.mean(kind), self.stderr(kind)
            for L in range(self.L_max + 1):
                yield L, kind, float(m[L]), float(s[L])


def run_growth(
    n: int,
    architecture: str = "brickwall",
    seeds=range(50),
    L_max: int = 250,
    kinds=KINDS,
    p: float | None = None,
    workers: int = 1,
) -> GrowthCurve:
    if n > MAX_GROWTH_N:
        raise ValueError(f"growth runs refused for n={n} > {MAX_GROWTH_N}")
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    seeds = [int(s) for s in seeds]
    if len(seeds) < 2:
        raise ValueError("at least two seeds are needed for standard errors")
    kinds = tuple(kinds)
    tasks = [(n, architecture, s, L_max, kinds, p) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            samples = list(ex.map(_trajectory_task, tasks))
    else:
        samples = [_trajectory_task(t) for t in tasks]
    if p is None:
        p = 0.5 if architecture == "stochastic" else 1.0
    return GrowthCurve(n, architecture, seeds, kinds, np.stack(samples), float(p))


@dataclass
class GrowthFit:
    kind: str
    n: int
    v: float
    L_l: int
    r: float
    L_s: int
    rms_linear: float
    rms_saturation: float
    intercept: float = 0.0
    flags: list[str] = field(default_factory=list)

    @property
    def c(self) -> float:
        return self.n / 2 - self.r

    def to_record(self) -> dict:
        return {
            "type": self.kind,
            "n": self.n,
            "v_k": self.v,
            "L_l": self.L_l,
            "r": self.r,
            "L_s": self.L_s,
            "c_k": self.c,
            "rms_linear": self.rms_linear,
            "rms_saturation": self.rms_saturation,
            "flags": list(self.flags),
        }


def _rms(resid: np.ndarray) -> float:
    return float(np.sqrt(np.mean(resid * resid)))


def fit_velocity(curve: GrowthCurve | np.ndarray, kind: str | None = None, n: int | None = None, intercept: bool = False) -> tuple[float, float]:
    """Least-squares slope over 0 <= L <= n/2 and the RMS of R(L) - v L there.

    The line runs through the origin (R = v L) unless ``intercept`` is set, in
    which case the intercept is fitted and discarded. ``curve`` may be a
    GrowthCurve (with ``kind``) or a bare mean curve (with ``n``).
    """
    y, n = _mean_curve(curve, kind, n)
    hi = n // 2
    if hi + 1 < 2 or y.size < hi + 1:
        raise ValueError("linear window needs at least two points")
    L = np.arange(hi + 1, dtype=float)
    win = y[: hi + 1]
    if intercept:
        slope = np.polyfit(L, win, 1)[0]
    else:
        slope = (L @ win) / (L @ L)
    return float(slope), _rms(win - slope * L)


def _mean_curve(curve, kind, n):
    if isinstance(curve, GrowthCurve):
        return curve.mean(kind), curve.n
    if n is None:
        raise ValueError("n is required for a bare curve")
    return np.asarray(curve, dtype=float), n


def fit_timescales(curve: GrowthCurve | np.ndarray, v: float | None = None, kind: str | None = None, n: int | None = None, window=(200, 250)) -> GrowthFit:
    """Saturation value and the early/late timescales from 2xRMS bands."""
    y, n = _mean_curve(curve, kind, n)
    a, b = window
    if y.size < b + 1:
        raise ValueError(f"curve must reach L={b}")
    v_fit, rms_lin = fit_velocity(y, n=n)
    if v is None:
        v = v_fit
    else:
        rms_lin = _rms(y[: n // 2 + 1] - v * np.arange(n // 2 + 1))
    L = np.arange(y.size)
    r = float(np.mean(y[a : b + 1]))
    rms_sat = _rms(y[a : b + 1] - r)
    flags = []
    lin = np.flatnonzero(np.abs(y - v * L) <= 2 * rms_lin)
    if lin.size:
        L_l = int(lin.max())
    else:
        L_l, flags = 0, flags + ["L_l_empty"]
    sat = np.flatnonzero(np.abs(y - r) <= 2 * rms_sat)
    if sat.size:
        L_s = int(sat.min())
    else:
        L_s, flags = int(L[-1]), flags + ["L_s_empty"]
    return GrowthFit(kind or "", n, float(v), L_l, r, L_s, rms_lin, rms_sat, flags=flags)
