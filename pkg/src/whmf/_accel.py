"""Float kernels for the zero locator: series evaluation and contour phase sums.

The numba versions are used when numba imports and ``WHMF_DISABLE_NUMBA`` is
unset (or ``0``); the numpy versions are the fallback and the reference the
tests compare against. Only float work lives here; exact series arithmetic
stays in Python integers.
"""

from __future__ import annotations

import os

import numpy as np

TWO_PI = 2.0 * np.pi


def _numba_wanted() -> bool:
    return os.environ.get("WHMF_DISABLE_NUMBA", "0") in ("", "0", "false", "False")


def eval_series_numpy(coeffs: np.ndarray, valuation: int, z: np.ndarray) -> np.ndarray:
    """``sum_i coeffs[i] q^(valuation+i)`` at ``q = e^{2 pi i z}`` for every ``z``."""
    q = np.exp(1j * TWO_PI * z)
    acc = np.zeros(z.shape, dtype=np.complex128)
    for c in coeffs[::-1]:
        acc = acc * q + c
    if valuation:
        acc = acc * q ** valuation
    return acc


def phase_sums_numpy(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Total and largest single phase step around each closed contour (one per row)."""
    nxt = np.roll(values, -1, axis=1)
    steps = np.angle(nxt / values)
    return steps.sum(axis=1), np.abs(steps).max(axis=1)


try:
    if not _numba_wanted():
        raise ImportError("disabled by WHMF_DISABLE_NUMBA")
    from numba import njit

    @njit(cache=True, fastmath=True)
    def _eval_series_jit(coeffs, valuation, z):
        # Horner with the point index innermost and real/imaginary parts split,
        # so the inner loop vectorizes
        m = z.shape[0]
        qr = np.empty(m)
        qi = np.empty(m)
        for i in range(m):
            q = np.exp(1j * TWO_PI * z[i])
            qr[i] = q.real
            qi[i] = q.imag
        ar = np.zeros(m)
        ai = np.zeros(m)
        for j in range(coeffs.shape[0] - 1, -1, -1):
            c = coeffs[j]
            for i in range(m):
                r = ar[i] * qr[i] - ai[i] * qi[i] + c
                ai[i] = ar[i] * qi[i] + ai[i] * qr[i]
                ar[i] = r
        out = np.empty(m, dtype=np.complex128)
        for i in range(m):
            v = complex(ar[i], ai[i])
            if valuation != 0:
                v = v * complex(qr[i], qi[i]) ** valuation
            out[i] = v
        return out

    @njit(cache=True)
    def _phase_sums_jit(values):
        rows, cols = values.shape
        total = np.empty(rows)
        worst = np.empty(rows)
        for r in range(rows):
            s = 0.0
            w = 0.0
            for c in range(cols):
                nxt = values[r, (c + 1) % cols]
                d = np.angle(nxt / values[r, c])
                s += d
                if abs(d) > w:
                    w = abs(d)
            total[r] = s
            worst[r] = w
        return total, worst

    def eval_series(coeffs: np.ndarray, valuation: int, z: np.ndarray) -> np.ndarray:
        flat = np.ascontiguousarray(z, dtype=np.complex128).ravel()
        return _eval_series_jit(np.ascontiguousarray(coeffs, dtype=np.float64), valuation,
                                flat).reshape(np.shape(z))

    def phase_sums(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _phase_sums_jit(np.ascontiguousarray(values, dtype=np.complex128))

    BACKEND = "numba"
except ImportError:
    def eval_series(coeffs: np.ndarray, valuation: int, z: np.ndarray) -> np.ndarray:
        return eval_series_numpy(np.asarray(coeffs, dtype=np.float64), valuation,
                                 np.asarray(z, dtype=np.complex128))

    phase_sums = phase_sums_numpy
    BACKEND = "numpy"
