import numpy as np


def random_unitary(d, rng):
    """Haar-distributed d x d unitary (QR of a complex Gaussian matrix)."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases.conj()
