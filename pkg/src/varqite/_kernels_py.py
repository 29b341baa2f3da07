"""Pure-numpy statevector kernels; fallback when the compiled core is absent.

All kernels take a 1-D complex128 amplitude array of length 2**n and return a
new array. Qubit q occupies bit position n-1-q (qubit 0 is the most
significant bit of the basis index).
"""

from __future__ import annotations

import math

import numpy as np

NAME = "python"


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.uint64, copy=True)
    v ^= v >> np.uint64(32)
    v ^= v >> np.uint64(16)
    v ^= v >> np.uint64(8)
    v ^= v >> np.uint64(4)
    v ^= v >> np.uint64(2)
    v ^= v >> np.uint64(1)
    return (v & np.uint64(1)).astype(bool)


def apply_1q(amps, n, q, m00, m01, m10, m11):
    a = amps.reshape(1 << q, 2, -1)
    out = np.empty_like(a)
    out[:, 0, :] = m00 * a[:, 0, :] + m01 * a[:, 1, :]
    out[:, 1, :] = m10 * a[:, 0, :] + m11 * a[:, 1, :]
    return out.reshape(-1)


def apply_ctrl_1q(amps, n, control, target, m00, m01, m10, m11):
    out = amps.reshape((2,) * n).copy()
    sub = np.moveaxis(out, (control, target), (0, 1))[1]
    new0 = m00 * sub[0] + m01 * sub[1]
    new1 = m10 * sub[0] + m11 * sub[1]
    sub[0] = new0
    sub[1] = new1
    return out.reshape(-1)


def apply_pauli(amps, n, x_mask, z_mask, prefactor):
    idx = np.arange(amps.shape[0], dtype=np.uint64)
    signs = np.where(_parity(idx & np.uint64(z_mask)), -prefactor, prefactor)
    out = np.empty_like(amps)
    out[idx ^ np.uint64(x_mask)] = signs * amps
    return out


def apply_ctrl_pauli(amps, n, control_mask, x_mask, z_mask, prefactor):
    out = amps.copy()
    idx = np.arange(amps.shape[0], dtype=np.uint64)
    src = idx[(idx & np.uint64(control_mask)) != 0]
    signs = np.where(_parity(src & np.uint64(z_mask)), -prefactor, prefactor)
    out[src ^ np.uint64(x_mask)] = signs * amps[src]
    return out


def apply_pauli_exp(amps, n, x_mask, z_mask, prefactor, theta):
    c = math.cos(theta)
    s = math.sin(theta)
    return c * amps + 1j * s * apply_pauli(amps, n, x_mask, z_mask, prefactor)
