"""Hot loops of the minimality search.

Each kernel takes a batch of constant Hamiltonians, packed as rows
``(H00, H11, Re H01, Im H01)``, diagonalizes every row in closed form, and
evolves it on a shared time grid via the spectral form of ``exp(-iHt)``.
The result is, per row, the index of the first grid time at which the
target is reached (``-1`` if never).

Two interchangeable backends exist: numba-compiled loops and a vectorized
numpy path.  Set ``QSLGATE_DISABLE_NUMBA=1`` to force the numpy path.
"""
from __future__ import annotations

import os
import warnings

import numpy as np

_DISABLE = os.environ.get("QSLGATE_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLE:
        raise ImportError("numba disabled by QSLGATE_DISABLE_NUMBA")
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

# older system TBB: numba falls back to another threading layer on its own
warnings.filterwarnings("ignore", message="The TBB threading layer requires")

# rows * times per numpy chunk
_CHUNK_ELEMS = 1 << 20


def pack_hamiltonians(h: np.ndarray) -> np.ndarray:
    """(N, 2, 2) complex Hermitian stack -> (N, 4) float rows."""
    h = np.asarray(h)
    return np.ascontiguousarray(
        np.stack([h[:, 0, 0].real, h[:, 1, 1].real, h[:, 0, 1].real, h[:, 0, 1].imag], axis=1),
        dtype=np.float64,
    )


# ---------------------------------------------------------------- numpy path


def _spectral_np(rows: np.ndarray):
    p, r, qre, qim = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
    mean = 0.5 * (p + r)
    d = 0.5 * (p - r)
    q2 = qre * qre + qim * qim
    rad = np.sqrt(d * d + q2)
    lo, hi = mean - rad, mean + rad
    q = qre + 1j * qim

    pos = d >= 0
    # pos: v_hi ~ (d+rad, conj q); else v_hi ~ (q, rad-d)
    x = np.where(pos, d + rad, rad - d)
    n2 = x * x + q2
    offdiag = q == 0
    safe = np.where(offdiag, 1.0, n2)
    p00 = np.where(pos, x * x, q2) / safe
    p11 = np.where(pos, q2, x * x) / safe
    p01 = q * x / safe
    # diagonal input: computational basis, v_hi is the slot with the larger entry
    diag_hi0 = p > r
    p00 = np.where(offdiag, np.where(diag_hi0, 1.0, 0.0), p00)
    p11 = np.where(offdiag, np.where(diag_hi0, 0.0, 1.0), p11)
    p01 = np.where(offdiag, 0.0, p01)
    return lo, hi, p00, p11, p01


def _chunks(n: int, k: int):
    step = max(1, _CHUNK_ELEMS // max(k, 1))
    for start in range(0, n, step):
        yield slice(start, min(n, start + step))


def _first_true(mask: np.ndarray) -> np.ndarray:
    idx = np.argmax(mask, axis=1)
    return np.where(mask[np.arange(mask.shape[0]), idx], idx, -1).astype(np.int64)


def scan_gate_numpy(rows, times, theta, tol):
    rows = np.asarray(rows, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    out = np.empty(rows.shape[0], dtype=np.int64)
    lo, hi, _, _, p01 = _spectral_np(rows)
    rot = np.exp(1j * theta)
    fmin, cmin = 1.0 - tol, np.cos(tol)
    for sl in _chunks(rows.shape[0], times.size):
        diff = np.exp(-1j * np.outer(hi[sl], times)) - np.exp(-1j * np.outer(lo[sl], times))
        z1 = diff * (p01[sl] * rot)[:, None]
        z2 = diff * (np.conj(p01[sl]) * rot)[:, None]
        a1, a2 = np.abs(z1), np.abs(z2)
        ok = (a1 >= fmin) & (a2 >= fmin) & (z1.real >= a1 * cmin) & (z2.real >= a2 * cmin)
        out[sl] = _first_true(ok)
    return out


def scan_rotation_numpy(rows, times, a, b, threshold):
    rows = np.asarray(rows, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    out = np.empty(rows.shape[0], dtype=np.int64)
    lo, hi, p00, p11, p01 = _spectral_np(rows)
    # weight of the state on the upper eigenvector
    w = (p00 * abs(a) ** 2 + p11 * abs(b) ** 2 + 2.0 * np.real(np.conj(a) * p01 * b)).real
    for sl in _chunks(rows.shape[0], times.size):
        el = np.exp(-1j * np.outer(lo[sl], times))
        eh = np.exp(-1j * np.outer(hi[sl], times))
        amp = (1.0 - w[sl])[:, None] * el + w[sl][:, None] * eh
        out[sl] = _first_true(np.abs(amp) <= threshold)
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _spectral_nb(p, r, qre, qim):
        mean = 0.5 * (p + r)
        d = 0.5 * (p - r)
        q2 = qre * qre + qim * qim
        rad = np.sqrt(d * d + q2)
        lo = mean - rad
        hi = mean + rad
        if q2 == 0.0:
            if p > r:
                return lo, hi, 1.0, 0.0, 0.0 + 0.0j
            return lo, hi, 0.0, 1.0, 0.0 + 0.0j
        q = complex(qre, qim)
        if d >= 0.0:
            x = d + rad
            n2 = x * x + q2
            return lo, hi, x * x / n2, q2 / n2, q * x / n2
        x = rad - d
        n2 = x * x + q2
        return lo, hi, q2 / n2, x * x / n2, q * x / n2

    @njit(cache=True, parallel=True)
    def scan_gate_numba(rows, times, theta, tol):
        n = rows.shape[0]
        k = times.shape[0]
        out = np.full(n, -1, dtype=np.int64)
        rot = np.exp(1j * theta)
        fmin = 1.0 - tol
        cmin = np.cos(tol)
        for i in prange(n):
            lo, hi, _, _, p01 = _spectral_nb(rows[i, 0], rows[i, 1], rows[i, 2], rows[i, 3])
            c1 = p01 * rot
            c2 = np.conj(p01) * rot
            for j in range(k):
                t = times[j]
                diff = np.exp(-1j * hi * t) - np.exp(-1j * lo * t)
                z1 = diff * c1
                a1 = abs(z1)
                if a1 < fmin or z1.real < a1 * cmin:
                    continue
                z2 = diff * c2
                a2 = abs(z2)
                if a2 < fmin or z2.real < a2 * cmin:
                    continue
                out[i] = j
                break
        return out

    @njit(cache=True, parallel=True)
    def scan_rotation_numba(rows, times, a, b, threshold):
        n = rows.shape[0]
        k = times.shape[0]
        out = np.full(n, -1, dtype=np.int64)
        for i in prange(n):
            lo, hi, p00, p11, p01 = _spectral_nb(rows[i, 0], rows[i, 1], rows[i, 2], rows[i, 3])
            w = (p00 * abs(a) ** 2 + p11 * abs(b) ** 2 + 2.0 * (np.conj(a) * p01 * b).real)
            for j in range(k):
                t = times[j]
                amp = (1.0 - w) * np.exp(-1j * lo * t) + w * np.exp(-1j * hi * t)
                if abs(amp) <= threshold:
                    out[i] = j
                    break
        return out

    scan_gate = scan_gate_numba
    scan_rotation = scan_rotation_numba
else:
    scan_gate = scan_gate_numpy
    scan_rotation = scan_rotation_numpy
