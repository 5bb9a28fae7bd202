"""Averaged-bipartition entanglement measures Q_m.

For a pure state of n qudits, Q_m rescales the mean linear entropy of all
C(n, m) size-m reductions so that product states score 0 and the maximum is
1. Sizes m and n-m probe the same bipartitions, so Q_m and Q_{n-m} are
proportional for every pure state; complement_coefficient gives the exact
factor and verify_complement_relation checks it numerically. Q_1 is the
Meyer-Wallach global entanglement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qstate import QuditState, haar_state, size_cap
from .reduce import enumerate_subsets, purity_one_sided, purity_report


@dataclass(frozen=True)
class ProfileEntry:
    m: int
    q: float
    average_purity: float
    subset_count: int
    beyond_half: bool  # size exceeds floor(n/2): redundant with its complement


@dataclass(frozen=True)
class ScottProfile:
    d: int
    n: int
    entries: tuple[ProfileEntry, ...]
    includes_beyond_half: bool


@dataclass(frozen=True)
class ComplementCheck:
    m: int
    q_m: float
    q_complement: float
    coefficient: float
    predicted: float
    residual: float


@dataclass(frozen=True)
class VerificationReport:
    d: int
    n: int
    tolerance: float
    checks: tuple[ComplementCheck, ...]
    max_purity_residual: float
    passed: bool


@dataclass(frozen=True)
class HaarEntry:
    m: int
    mean: float
    std: float
    stderr: float


@dataclass(frozen=True)
class HaarStatistics:
    d: int
    n: int
    samples: int
    seed: int
    entries: tuple[HaarEntry, ...]


def qm_from_average(d: int, m: int, average_purity: float) -> float:
    """Rescale an average size-m purity into the [0, 1] measure."""
    dm = d**m
    return (dm / (dm - 1)) * (1.0 - average_purity)


def compute_qm(state: QuditState, m: int, *, method: str = "auto") -> float:
    """Q_m of a pure state, for any 1 <= m <= n-1.

    Sizes above floor(n/2) are permitted; they carry no information beyond
    their complement (see complement_coefficient) and profile() flags them.
    """
    report = purity_report(state, m, method=method)
    return qm_from_average(state.d, m, report.average)


def profile(state: QuditState, m_max: int | None = None) -> ScottProfile:
    """Q_m for m = 1..m_max (default: floor(n/2))."""
    half = state.n // 2
    if m_max is None:
        m_max = half
    m_max = int(m_max)
    if not 0 <= m_max <= state.n - 1:
        raise ValueError(f"m_max must lie in 0..{state.n - 1}, got {m_max}")
    entries = []
    for m in range(1, m_max + 1):
        report = purity_report(state, m)
        entries.append(
            ProfileEntry(
                m=m,
                q=qm_from_average(state.d, m, report.average),
                average_purity=report.average,
                subset_count=len(report.per_subset),
                beyond_half=m > half,
            )
        )
    return ScottProfile(
        d=state.d,
        n=state.n,
        entries=tuple(entries),
        includes_beyond_half=m_max > half,
    )


def complement_coefficient(d: int, n: int, m: int) -> float:
    """The exact factor c with Q_{n-m} = c * Q_m for every pure state."""
    if d < 2:
        raise ValueError(f"local dimension must be at least 2, got {d}")
    if not 1 <= m <= n - 1:
        raise ValueError(f"subset size must satisfy 1 <= m <= n-1, got m={m}, n={n}")
    dm = d**m
    dc = d ** (n - m)
    return (dc * (dm - 1)) / ((dc - 1) * dm)


def verify_complement_relation(
    state: QuditState, tolerance: float = 1e-10
) -> VerificationReport:
    """Check Q_{n-m} = c(d,n,m) * Q_m and per-subset complement purities.

    Each subset purity is recomputed on its own side of the bipartition
    (no smaller-side shortcut), so the per-subset residuals compare two
    genuinely different calculations. Cost grows steeply with n; intended
    for desk-scale states.
    """
    d, n = state.d, state.n
    if n < 2:
        raise ValueError("verification needs at least two sites")
    checks = []
    for m in range(1, n // 2 + 1):
        q_m = compute_qm(state, m)
        q_c = compute_qm(state, n - m)
        c = complement_coefficient(d, n, m)
        predicted = c * q_m
        checks.append(
            ComplementCheck(
                m=m,
                q_m=q_m,
                q_complement=q_c,
                coefficient=c,
                predicted=predicted,
                residual=abs(q_c - predicted),
            )
        )
    max_residual = 0.0
    for m in range(1, n // 2 + 1):
        for s in enumerate_subsets(n, m):
            r = abs(
                purity_one_sided(state, s) - purity_one_sided(state, s.complement)
            )
            if r > max_residual:
                max_residual = r
    passed = (
        all(ch.residual < tolerance for ch in checks) and max_residual < tolerance
    )
    return VerificationReport(
        d=d,
        n=n,
        tolerance=tolerance,
        checks=tuple(checks),
        max_purity_residual=max_residual,
        passed=passed,
    )


def haar_statistics(
    d: int,
    n: int,
    m_values: Sequence[int],
    samples: int,
    seed: int,
) -> HaarStatistics:
    """Monte-Carlo mean and spread of Q_m over Haar-random states.

    Sample i uses its own child of SeedSequence(seed), so results do not
    depend on how the sample range might be partitioned across workers.
    """
    ms = [int(m) for m in m_values]
    if not ms:
        raise ValueError("need at least one subset size")
    for m in ms:
        if not 1 <= m <= n - 1:
            raise ValueError(f"subset size must satisfy 1 <= m <= n-1, got m={m}")
    samples = int(samples)
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    if d**n > size_cap():
        raise ValueError(f"d**n = {d**n} exceeds the size cap {size_cap()}")
    unique = list(dict.fromkeys(ms))
    acc = {m: np.empty(samples) for m in unique}
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(samples)):
        state = haar_state(d, n, np.random.default_rng(child))
        for m in unique:
            acc[m][i] = compute_qm(state, m)
    entries = []
    for m in ms:
        arr = acc[m]
        mean = float(arr.mean())
        std = float(arr.std(ddof=1)) if samples > 1 else 0.0
        entries.append(HaarEntry(m=m, mean=mean, std=std, stderr=std / math.sqrt(samples)))
    return HaarStatistics(d=d, n=n, samples=samples, seed=int(seed), entries=tuple(entries))
