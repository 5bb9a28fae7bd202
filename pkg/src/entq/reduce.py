"""Reduced-state purities for arbitrary site subsets.

The fast path never builds a density matrix. For a subset with k =
min(m, n-m) sites on its smaller side, the amplitudes are gathered so that
side leads the digit ordering, viewed as a d**k x d**(n-k) matrix M, and the
purity is the squared Frobenius norm of the Gram matrix G = M M^dagger. The
Schmidt spectra of complementary sides coincide, which is what licenses
always working on the smaller side.

Gram reductions come in two flavors. Small problems (matrix size and Gram
dimension below the EXACT_* bounds) use exactly rounded summation
(math.fsum), which makes every purity, and everything averaged from it,
bit-for-bit invariant under site relabeling. Larger problems use BLAS plus
numpy's pairwise summation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import fsum

import numpy as np

from . import kernels
from .qstate import QuditState

# exact-summation bounds: amplitude count and Gram dimension
EXACT_MAX_SIZE = 4096
EXACT_MAX_ROWS = 64

_METHODS = ("auto", "exact", "blas")


@dataclass(frozen=True)
class SubsetSpec:
    """Strictly increasing 1-based site indices, proper nonempty subset."""

    sites: tuple[int, ...]
    n: int

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        n = self.n
        if not 1 <= len(sites) <= n - 1:
            raise ValueError(
                f"subset must keep between 1 and n-1 of {n} sites, got {sites!r}"
            )
        if any(b <= a for a, b in zip(sites, sites[1:])):
            raise ValueError(f"sites must be strictly increasing, got {sites!r}")
        if sites[0] < 1 or sites[-1] > n:
            raise ValueError(f"sites {sites!r} out of range 1..{n}")

    @property
    def m(self) -> int:
        return len(self.sites)

    @property
    def complement(self) -> "SubsetSpec":
        keep = set(self.sites)
        rest = tuple(i for i in range(1, self.n + 1) if i not in keep)
        return SubsetSpec(rest, self.n)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.sites)) + "}"


@dataclass(frozen=True)
class PurityReport:
    """Purities of every size-m subset, in lexicographic subset order."""

    m: int
    per_subset: tuple[tuple[SubsetSpec, float], ...]
    average: float


def enumerate_subsets(n: int, m: int) -> list[SubsetSpec]:
    """All C(n, m) subsets of {1..n} with |S| = m, lexicographically."""
    if not 1 <= m <= n - 1:
        raise ValueError(f"subset size must satisfy 1 <= m <= n-1, got m={m}, n={n}")
    return [SubsetSpec(c, n) for c in itertools.combinations(range(1, n + 1), m)]


def _as_subset(state: QuditState, s) -> SubsetSpec:
    if isinstance(s, SubsetSpec):
        if s.n != state.n:
            raise ValueError(f"subset is over {s.n} sites but the state has {state.n}")
        return s
    return SubsetSpec(tuple(s), state.n)


def _side_matrix(state: QuditState, side: tuple[int, ...]) -> np.ndarray:
    """Gathered amplitudes as a (d**k, d**(n-k)) matrix, side digits leading."""
    keep = set(side)
    order = list(side) + [i for i in range(1, state.n + 1) if i not in keep]
    flat = kernels.gather(state.amplitudes, state.d, order)
    return flat.reshape(state.d ** len(side), -1)


def _gram_purity_exact(m: np.ndarray) -> float:
    rows = m.shape[0]
    conj = m.conj()
    terms = []
    for i in range(rows):
        gii = fsum((m[i] * conj[i]).real.tolist())
        terms.append(gii * gii)
        for j in range(i + 1, rows):
            prod = m[i] * conj[j]
            gr = fsum(prod.real.tolist())
            gi = fsum(prod.imag.tolist())
            terms.append(2.0 * (gr * gr + gi * gi))
    return fsum(terms)


def _gram_purity_blas(m: np.ndarray) -> float:
    g = m @ m.conj().T
    return float(np.sum(g.real**2 + g.imag**2))


def _gram_purity(m: np.ndarray, method: str) -> float:
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    if method == "auto":
        small = m.size <= EXACT_MAX_SIZE and m.shape[0] <= EXACT_MAX_ROWS
        method = "exact" if small else "blas"
    if method == "exact":
        return _gram_purity_exact(m)
    return _gram_purity_blas(m)


def reduced_density_matrix(state: QuditState, s) -> np.ndarray:
    """Explicit reduced matrix for subset s, a d**m x d**m complex array.

    Row and column digits follow the ascending site order of s. The result
    is Hermitian, positive semidefinite, and has unit trace up to rounding.
    """
    s = _as_subset(state, s)
    m = _side_matrix(state, s.sites)
    return m @ m.conj().T


def purity(state: QuditState, s, *, method: str = "auto") -> float:
    """Tr[rho_S**2] via the smaller-side Gram matrix. Lies in (0, 1]."""
    s = _as_subset(state, s)
    side = s.sites if 2 * s.m <= state.n else s.complement.sites
    return _gram_purity(_side_matrix(state, side), method)


def purity_one_sided(state: QuditState, s, *, method: str = "auto") -> float:
    """Tr[rho_S**2] computed on the side of s itself, never the complement.

    The public purity() collapses every subset onto its smaller side, so
    comparing purity(S) with purity(complement) would compare a computation
    with itself. This variant keeps the two sides independent; complement
    checks compare it across S and its complement.
    """
    s = _as_subset(state, s)
    return _gram_purity(_side_matrix(state, s.sites), method)


def purity_report(state: QuditState, m: int, *, method: str = "auto") -> PurityReport:
    """Purities of all size-m subsets plus their arithmetic mean."""
    subsets = enumerate_subsets(state.n, m)
    values = [purity(state, s, method=method) for s in subsets]
    average = fsum(values) / len(values)
    return PurityReport(m=m, per_subset=tuple(zip(subsets, values)), average=average)
