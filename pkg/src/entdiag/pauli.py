"""Symplectic Pauli strings.

A string on n qubits is a pair of bit masks ``(x, z)``; per qubit (0,0)=I,
(1,0)=X, (0,1)=Z, (1,1)=Y. Its action on a basis state is

    P(x, z)|b> = i^{|x & z|} (-1)^{|b & z|} |b ^ x>.
"""
from __future__ import annotations

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}


def popcount(x: int) -> int:
    return int(x).bit_count()


def label(x: int, z: int, n: int) -> str:
    """Character ``q`` of the label is the Pauli acting on qubit ``q``."""
    return "".join(_LETTERS[((x >> q) & 1, (z >> q) & 1)] for q in range(n))


def from_label(text: str) -> tuple[int, int]:
    x = z = 0
    for q, ch in enumerate(text.upper()):
        bx, bz = _BITS[ch]
        x |= bx << q
        z |= bz << q
    return x, z


def multiply(a: tuple[int, int], b: tuple[int, int]) -> tuple[complex, int, int]:
    """P_a P_b = phase * P_c, returned as (phase, x_c, z_c)."""
    xa, za = a
    xb, zb = b
    # P = i^{|x&z|} X^x Z^z and Z^za X^xb = (-1)^{|za&xb|} X^xb Z^za
    k = popcount(xa & za) + popcount(xb & zb) + 2 * popcount(za & xb)
    xc, zc = xa ^ xb, za ^ zb
    k -= popcount(xc & zc)
    return 1j ** (k % 4), xc, zc


def action_phases(x: int, z: int, n: int) -> np.ndarray:
    """Vector d with P(x, z)|b> = d[b] |b ^ x>."""
    b = np.arange(1 << n, dtype=np.uint64)
    sign = 1.0 - 2.0 * (np.bitwise_count(b & np.uint64(z)) & 1)
    return (1j ** (popcount(x & z) % 4)) * sign


def matrix(x: int, z: int, n: int) -> np.ndarray:
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=np.complex128)
    b = np.arange(dim)
    out[b ^ x, b] = action_phases(x, z, n)
    return out
