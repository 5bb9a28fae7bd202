"""Pure states of n qudits: index conventions, builders, local operations.

Index convention used everywhere in this package: basis index k encodes the
per-site digits (s_1, ..., s_n) in base d with site 1 as the MOST significant
digit, k = sum_i s_i * d**(n-i). Sites are 1-based in every public interface.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels

DEFAULT_SIZE_CAP = 1 << 26
SIZE_CAP_ENV = "ENTQ_SIZE_CAP"

NORM_ACCEPT_TOL = 1e-8
UNITARY_TOL = 1e-10

FAMILIES = ("basis", "product", "ghz", "w", "haar")


def size_cap() -> int:
    """Maximum allowed amplitude count, overridable via ENTQ_SIZE_CAP."""
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{SIZE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 2:
        raise ValueError(f"{SIZE_CAP_ENV} must be at least 2, got {cap}")
    return cap


def _check_dims(d: int, n: int) -> int:
    if d < 2:
        raise ValueError(f"local dimension must be at least 2, got {d}")
    if n < 1:
        raise ValueError(f"need at least one site, got n={n}")
    dim = d**n
    cap = size_cap()
    if dim > cap:
        raise ValueError(
            f"d**n = {dim} exceeds the size cap {cap} "
            f"(set {SIZE_CAP_ENV} to override)"
        )
    return dim


def index_to_digits(k: int, d: int, n: int) -> tuple[int, ...]:
    """Base-d digits of index k, site 1 (most significant) first."""
    if not 0 <= k < d**n:
        raise ValueError(f"index {k} out of range for d={d}, n={n}")
    digits = []
    for _ in range(n):
        digits.append(k % d)
        k //= d
    return tuple(reversed(digits))


def digits_to_index(digits: Sequence[int], d: int) -> int:
    """Inverse of index_to_digits."""
    k = 0
    for s in digits:
        s = int(s)
        if not 0 <= s < d:
            raise ValueError(f"digit {s} out of range for d={d}")
        k = k * d + s
    return k


class QuditState:
    """Normalized pure state of n qudits with uniform local dimension d.

    Instances are immutable: the amplitude array is marked read-only and
    operations return new states, so sharing across threads is safe.
    """

    __slots__ = ("d", "n", "amplitudes")

    def __init__(self, d: int, n: int, amplitudes, *, normalize: bool = False):
        d, n = int(d), int(n)
        dim = _check_dims(d, n)
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.shape != (dim,):
            raise ValueError(
                f"expected {dim} amplitudes for d={d}, n={n}, got shape {amps.shape}"
            )
        norm = float(np.linalg.norm(amps))
        if norm == 0.0:
            raise ValueError("state vector has zero norm")
        if not normalize and abs(norm - 1.0) > NORM_ACCEPT_TOL:
            raise ValueError(
                f"state norm {norm!r} deviates from 1 by more than "
                f"{NORM_ACCEPT_TOL}; pass normalize=True to rescale explicitly"
            )
        amps /= norm
        amps.flags.writeable = False
        self.d = d
        self.n = n
        self.amplitudes = amps

    @classmethod
    def _trusted(cls, d: int, n: int, amps: np.ndarray) -> "QuditState":
        # internal: amps must already be unit-norm complex128 of length d**n
        obj = cls.__new__(cls)
        amps.flags.writeable = False
        obj.d = d
        obj.n = n
        obj.amplitudes = amps
        return obj

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __repr__(self) -> str:
        return f"QuditState(d={self.d}, n={self.n}, dim={self.dim})"


@dataclass(frozen=True)
class StateSpec:
    """Recipe for a named state family.

    digits: base-d digit string, site 1 first (family "basis").
    site_amplitudes: one length-d amplitude sequence per site (family
    "product"); each site vector is normalized individually.
    seed: RNG seed (family "haar").
    """

    family: str
    d: int
    n: int
    digits: str | None = None
    site_amplitudes: tuple | None = None
    seed: int | None = None

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}, expected one of {FAMILIES}"
            )
        _check_dims(self.d, self.n)
        if self.family == "basis":
            if self.digits is None:
                raise ValueError("family 'basis' needs a digit string")
            if len(self.digits) != self.n:
                raise ValueError(
                    f"digit string {self.digits!r} has length {len(self.digits)}, "
                    f"expected n={self.n}"
                )
        elif self.family == "product":
            if self.site_amplitudes is None:
                raise ValueError("family 'product' needs per-site amplitudes")
            if len(self.site_amplitudes) != self.n:
                raise ValueError(
                    f"got {len(self.site_amplitudes)} site vectors, expected n={self.n}"
                )
            for i, vec in enumerate(self.site_amplitudes, start=1):
                if len(vec) != self.d:
                    raise ValueError(
                        f"site {i} vector has length {len(vec)}, expected d={self.d}"
                    )
        elif self.family == "w":
            if self.d != 2:
                raise ValueError("family 'w' requires d = 2")
        elif self.family == "haar":
            if self.seed is None:
                raise ValueError("family 'haar' needs a seed for reproducibility")


_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _digit_value(ch: str, d: int) -> int:
    v = _DIGIT_CHARS.find(ch.lower())
    if v < 0 or v >= d:
        raise ValueError(f"invalid base-{d} digit {ch!r}")
    return v


def haar_state(d: int, n: int, rng: np.random.Generator) -> QuditState:
    """Draw a state uniformly from the unit sphere of the d**n space."""
    dim = _check_dims(d, n)
    re = rng.standard_normal(dim)
    im = rng.standard_normal(dim)
    amps = re + 1j * im
    amps /= np.linalg.norm(amps)
    return QuditState._trusted(d, n, amps)


def build(spec: StateSpec) -> QuditState:
    """Construct the state described by spec. Always returns unit norm."""
    spec.validate()
    d, n = spec.d, spec.n
    dim = d**n

    if spec.family == "basis":
        amps = np.zeros(dim, dtype=np.complex128)
        idx = digits_to_index([_digit_value(ch, d) for ch in spec.digits], d)
        amps[idx] = 1.0
        return QuditState._trusted(d, n, amps)

    if spec.family == "product":
        amps = np.ones(1, dtype=np.complex128)
        for i, vec in enumerate(spec.site_amplitudes, start=1):
            site = np.asarray(vec, dtype=np.complex128)
            norm = np.linalg.norm(site)
            if norm == 0.0:
                raise ValueError(f"site {i} vector has zero norm")
            amps = np.kron(amps, site / norm)
        amps /= np.linalg.norm(amps)
        return QuditState._trusted(d, n, amps)

    if spec.family == "ghz":
        amps = np.zeros(dim, dtype=np.complex128)
        for j in range(d):
            amps[digits_to_index([j] * n, d)] = 1.0
        amps *= d**-0.5
        return QuditState._trusted(d, n, amps)

    if spec.family == "w":
        amps = np.zeros(dim, dtype=np.complex128)
        for i in range(1, n + 1):
            amps[2 ** (n - i)] = 1.0
        amps *= n**-0.5
        return QuditState._trusted(d, n, amps)

    # haar
    return haar_state(d, n, np.random.default_rng(spec.seed))


def normalize(state: QuditState) -> QuditState:
    """Rescale to unit norm; idempotent on already-normalized states."""
    amps = state.amplitudes / np.linalg.norm(state.amplitudes)
    return QuditState._trusted(state.d, state.n, amps)


def apply_local_unitary(state: QuditState, site: int, u) -> QuditState:
    """Apply a d x d unitary to one site (1-based). Norm is preserved."""
    d, n = state.d, state.n
    if not 1 <= site <= n:
        raise ValueError(f"site {site} out of range 1..{n}")
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got shape {u.shape}")
    defect = np.max(np.abs(u @ u.conj().T - np.eye(d)))
    if defect > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (defect {defect:.2e})")
    left = d ** (site - 1)
    right = d ** (n - site)
    cube = state.amplitudes.reshape(left, d, right)
    out = np.einsum("ij,ajb->aib", u, cube).reshape(state.dim)
    return QuditState._trusted(d, n, out)


def permute_sites(state: QuditState, new_labels: Sequence[int]) -> QuditState:
    """Relabel sites: old site i becomes site new_labels[i-1] of the result."""
    n = state.n
    labels = tuple(int(x) for x in new_labels)
    if sorted(labels) != list(range(1, n + 1)):
        raise ValueError(f"{labels!r} is not a permutation of 1..{n}")
    # digit j of the result is sourced from the old site mapped onto label j
    source = [0] * n
    for old, new in enumerate(labels, start=1):
        source[new - 1] = old
    amps = kernels.gather(state.amplitudes, state.d, source)
    if amps is state.amplitudes:
        return state
    return QuditState._trusted(state.d, n, amps)
