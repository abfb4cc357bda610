"""Statevector kernels for the R_y / CZ layered circuits.

Every kernel exists twice: a numba version (``*_nb``) and a vectorised numpy
version (``*_np``). The unsuffixed names are bound to one of the two according
to :mod:`entdiag._accel`. All kernels mutate their amplitude arguments in place.

Layout: qubit ``q`` is bit ``q`` of the basis index, counted from the least
significant end. A layer is described by one row of angles (length n), one row
of qubit pairs (m x 2) and one row of CZ flags (length m).
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._accel import USE_NUMBA, jit

# ---------------------------------------------------------------- numba path


@jit
def rotate_nb(amps, q, c, s):
    stride = 1 << q
    dim = amps.shape[0]
    for base in range(0, dim, 2 * stride):
        for k in range(base, base + stride):
            a0 = amps[k]
            a1 = amps[k + stride]
            amps[k] = c * a0 + s * a1
            amps[k + stride] = c * a1 - s * a0


@jit
def cz_nb(amps, i, j):
    mask = (1 << i) | (1 << j)
    for k in range(amps.shape[0]):
        if (k & mask) == mask:
            amps[k] = -amps[k]


@jit
def layer_nb(amps, theta_row, pairs_row, mask_row):
    for q in range(theta_row.shape[0]):
        rotate_nb(amps, q, np.cos(theta_row[q]), np.sin(theta_row[q]))
    for p in range(pairs_row.shape[0]):
        if mask_row[p]:
            cz_nb(amps, pairs_row[p, 0], pairs_row[p, 1])


@jit
def forward_nb(amps, theta, pairs, mask):
    for ell in range(theta.shape[0]):
        layer_nb(amps, theta[ell], pairs[ell], mask[ell])


@jit
def backward_nb(psi, lam, theta, pairs, mask):
    # psi: final state, lam: H @ psi. Both real and consumed.
    n_layers, n = theta.shape
    grad = np.zeros((n_layers, n))
    dim = psi.shape[0]
    for ell in range(n_layers - 1, -1, -1):
        for p in range(pairs.shape[1] - 1, -1, -1):
            if mask[ell, p]:
                cz_nb(psi, pairs[ell, p, 0], pairs[ell, p, 1])
                cz_nb(lam, pairs[ell, p, 0], pairs[ell, p, 1])
        for q in range(n - 1, -1, -1):
            c = np.cos(theta[ell, q])
            s = np.sin(theta[ell, q])
            stride = 1 << q
            acc = 0.0
            for base in range(0, dim, 2 * stride):
                for k in range(base, base + stride):
                    p0 = psi[k]
                    p1 = psi[k + stride]
                    l0 = lam[k]
                    l1 = lam[k + stride]
                    # undo R: apply R^T
                    p0n = c * p0 - s * p1
                    p1n = s * p0 + c * p1
                    l0n = c * l0 - s * l1
                    l1n = s * l0 + c * l1
                    psi[k] = p0n
                    psi[k + stride] = p1n
                    lam[k] = l0n
                    lam[k + stride] = l1n
                    acc += l0n * p1n - l1n * p0n
            grad[ell, q] = 2.0 * acc
    return grad


# ---------------------------------------------------------------- numpy path


def rotate_np(amps, q, c, s):
    view = amps.reshape(-1, 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :].copy()
    view[:, 0, :] = c * a0 + s * a1
    view[:, 1, :] = c * a1 - s * a0


@lru_cache(maxsize=256)
def _cz_indices(dim: int, i: int, j: int) -> np.ndarray:
    mask = (1 << i) | (1 << j)
    idx = np.arange(dim)
    return np.flatnonzero((idx & mask) == mask)


def cz_np(amps, i, j):
    amps[_cz_indices(amps.shape[0], int(i), int(j))] *= -1


def layer_np(amps, theta_row, pairs_row, mask_row):
    for q in range(theta_row.shape[0]):
        rotate_np(amps, q, np.cos(theta_row[q]), np.sin(theta_row[q]))
    for p in range(pairs_row.shape[0]):
        if mask_row[p]:
            cz_np(amps, pairs_row[p, 0], pairs_row[p, 1])


def forward_np(amps, theta, pairs, mask):
    for ell in range(theta.shape[0]):
        layer_np(amps, theta[ell], pairs[ell], mask[ell])


def backward_np(psi, lam, theta, pairs, mask):
    n_layers, n = theta.shape
    grad = np.zeros((n_layers, n))
    for ell in range(n_layers - 1, -1, -1):
        for p in range(pairs.shape[1] - 1, -1, -1):
            if mask[ell, p]:
                cz_np(psi, pairs[ell, p, 0], pairs[ell, p, 1])
                cz_np(lam, pairs[ell, p, 0], pairs[ell, p, 1])
        for q in range(n - 1, -1, -1):
            c = np.cos(theta[ell, q])
            s = np.sin(theta[ell, q])
            rotate_np(psi, q, c, -s)
            rotate_np(lam, q, c, -s)
            pv = psi.reshape(-1, 2, 1 << q)
            lv = lam.reshape(-1, 2, 1 << q)
            acc = np.sum(lv[:, 0, :] * pv[:, 1, :]) - np.sum(lv[:, 1, :] * pv[:, 0, :])
            grad[ell, q] = 2.0 * acc
    return grad


if USE_NUMBA:
    rotate, cz, layer, forward, backward = rotate_nb, cz_nb, layer_nb, forward_nb, backward_nb
else:
    rotate, cz, layer, forward, backward = rotate_np, cz_np, layer_np, forward_np, backward_np
