"""Hot kernel: reorder an amplitude vector by a permutation of its sites.

Everything downstream (reduced matrices, subset purities) runs off a single
primitive: gather the d**n amplitudes so that a chosen ordering of sites
becomes the base-d digit ordering of the output index. Two interchangeable
implementations exist, a numba-compiled digit gather and a pure-numpy
fallback that realizes the same gather through reshape/transpose strides.
Set ENTQ_KERNEL=numpy or ENTQ_KERNEL=numba to pin one; the default is numba
when importable. benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BACKEND_ENV = "ENTQ_KERNEL"
_BACKENDS = ("numba", "numpy")

_active: str | None = None


def _resolve_backend() -> str:
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice and choice not in _BACKENDS:
        raise ValueError(
            f"{BACKEND_ENV} must be one of {_BACKENDS}, got {choice!r}"
        )
    if choice == "numba" and not HAVE_NUMBA:
        raise ValueError(f"{BACKEND_ENV}=numba requested but numba is not importable")
    if not choice:
        choice = "numba" if HAVE_NUMBA else "numpy"
    return choice


def active_backend() -> str:
    """Name of the gather implementation in use, "numba" or "numpy"."""
    global _active
    if _active is None:
        _active = _resolve_backend()
    return _active


def use_backend(name: str) -> str:
    """Switch the gather backend and return the previous one."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}, expected one of {_BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    previous = active_backend()
    _active = name
    return previous


if HAVE_NUMBA:

    @njit(cache=True)
    def _digit_gather(amps, out, d, strides):
        # odometer walk: digit counters carry instead of div/mod per element
        n = strides.shape[0]
        counters = np.zeros(n, dtype=np.int64)
        src = 0
        for t in range(out.shape[0]):
            out[t] = amps[src]
            for i in range(n - 1, -1, -1):
                counters[i] += 1
                src += strides[i]
                if counters[i] < d:
                    break
                counters[i] = 0
                src -= d * strides[i]


def _gather_numpy(amps: np.ndarray, d: int, order: tuple[int, ...]) -> np.ndarray:
    n = len(order)
    axes = tuple(s - 1 for s in order)
    cube = amps.reshape((d,) * n)
    return np.ascontiguousarray(cube.transpose(axes)).reshape(amps.size)


def _gather_numba(amps: np.ndarray, d: int, order: tuple[int, ...]) -> np.ndarray:
    n = len(order)
    strides = np.array([d ** (n - s) for s in order], dtype=np.int64)
    out = np.empty(amps.size, dtype=amps.dtype)
    _digit_gather(amps, out, np.int64(d), strides)
    return out


def gather(amps: np.ndarray, d: int, site_order: Sequence[int]) -> np.ndarray:
    """Return amplitudes reordered so digit i of the result reads site_order[i].

    site_order is a 1-based permutation of (1, ..., n); entry i names the
    source site supplying the i-th (most significant first) output digit.
    The identity permutation returns the input array unchanged.
    """
    order = tuple(int(s) for s in site_order)
    n = len(order)
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"site order {order!r} is not a permutation of 1..{n}")
    if amps.size != d**n:
        raise ValueError(f"expected {d**n} amplitudes, got {amps.size}")
    if order == tuple(range(1, n + 1)):
        return amps
    if active_backend() == "numba":
        return _gather_numba(amps, d, order)
    return _gather_numpy(amps, d, order)
