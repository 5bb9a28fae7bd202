"""Multipartite entanglement measures from averaged subsystem purities."""

from . import kernels, oracle
from .qstate import (
    QuditState,
    StateSpec,
    apply_local_unitary,
    build,
    haar_state,
    normalize,
    permute_sites,
)
from .reduce import (
    PurityReport,
    SubsetSpec,
    enumerate_subsets,
    purity,
    purity_one_sided,
    purity_report,
    reduced_density_matrix,
)
from .scott import (
    HaarStatistics,
    ProfileEntry,
    ScottProfile,
    VerificationReport,
    complement_coefficient,
    compute_qm,
    haar_statistics,
    profile,
    qm_from_average,
    verify_complement_relation,
)

__version__ = "0.1.0"

__all__ = [
    "QuditState",
    "StateSpec",
    "apply_local_unitary",
    "build",
    "haar_state",
    "normalize",
    "permute_sites",
    "PurityReport",
    "SubsetSpec",
    "enumerate_subsets",
    "purity",
    "purity_one_sided",
    "purity_report",
    "reduced_density_matrix",
    "HaarStatistics",
    "ProfileEntry",
    "ScottProfile",
    "VerificationReport",
    "complement_coefficient",
    "compute_qm",
    "haar_statistics",
    "profile",
    "qm_from_average",
    "verify_complement_relation",
    "kernels",
    "oracle",
    "__version__",
]
