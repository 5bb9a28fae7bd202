"""Brute-force reference implementations, used by the test suite only.

Deliberately naive and deliberately disjoint from the production code: the
partial trace is a direct index summation over an explicit outer-product
density matrix, and purities come from eigenvalues instead of Gram norms.
Agreement between the two stacks is evidence, not tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import QuditState
from .reduce import SubsetSpec

ORACLE_SIZE_CAP = 4096

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Square complex matrix checked to be Hermitian with unit trace."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {entries.shape}")
        defect = np.max(np.abs(entries - entries.conj().T))
        if defect > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.2e})")
        tr = complex(np.trace(entries))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} is not 1")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def full_density_matrix(state: QuditState) -> DensityMatrix:
    """Rank-1 projector onto the state, as an explicit dim x dim matrix."""
    if state.dim > ORACLE_SIZE_CAP:
        raise ValueError(
            f"oracle handles at most {ORACLE_SIZE_CAP} amplitudes, got {state.dim}"
        )
    return DensityMatrix(np.outer(state.amplitudes, state.amplitudes.conj()))


def partial_trace_naive(rho: DensityMatrix, d: int, n: int, s) -> DensityMatrix:
    """Trace out the complement of s by summing over its digit indices."""
    if rho.dim != d**n:
        raise ValueError(f"matrix dimension {rho.dim} does not match d**n = {d**n}")
    if not isinstance(s, SubsetSpec):
        s = SubsetSpec(tuple(s), n)
    if s.n != n:
        raise ValueError(f"subset is over {s.n} sites, expected {n}")
    keep = set(s.sites)
    tensor = rho.entries.reshape((d,) * (2 * n))
    # row axis i keeps label i; a traced column axis repeats its row label,
    # which makes einsum sum that digit directly
    row_labels = list(range(n))
    col_labels = [n + i if (i + 1) in keep else i for i in range(n)]
    out_labels = [i for i in range(n) if (i + 1) in keep]
    out_labels += [n + i for i in range(n) if (i + 1) in keep]
    dim_keep = d ** s.m
    reduced = np.einsum(tensor, row_labels + col_labels, out_labels)
    return DensityMatrix(reduced.reshape(dim_keep, dim_keep))


def purity_by_eigenvalues(rho: DensityMatrix | np.ndarray) -> float:
    """Sum of squared eigenvalues of a Hermitian unit-trace matrix."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(np.asarray(rho))
    w = np.linalg.eigvalsh(rho.entries)
    if w.min() < -EIGENVALUE_TOL:
        raise ValueError(f"matrix has a negative eigenvalue ({w.min():.2e})")
    return float(np.sum(w**2))
