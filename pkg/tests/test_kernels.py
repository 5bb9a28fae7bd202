import os
import subprocess
import sys

import numpy as np
import pytest

from entq import kernels


def reference_gather(amps, d, order):
    """Literal digit-by-digit source index computation."""
    n = len(order)
    out = np.empty_like(amps)
    for t in range(amps.size):
        digits = []
        rem = t
        for _ in range(n):
            digits.append(rem % d)
            rem //= d
        digits.reverse()
        src = sum(dig * d ** (n - site) for dig, site in zip(digits, order))
        out[t] = amps[src]
    return out


def random_amps(d, n, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(d**n) + 1j * rng.standard_normal(d**n)
    return z / np.linalg.norm(z)


@pytest.mark.parametrize("d,n", [(2, 3), (2, 6), (3, 4), (5, 3)])
def test_backends_match_reference(d, n):
    rng = np.random.default_rng(17)
    amps = random_amps(d, n, 17)
    for _ in range(5):
        order = tuple(rng.permutation(n) + 1)
        expected = reference_gather(amps, d, order)
        for backend in ("numpy", "numba") if kernels.HAVE_NUMBA else ("numpy",):
            previous = kernels.use_backend(backend)
            try:
                got = kernels.gather(amps, d, order)
            finally:
                kernels.use_backend(previous)
            assert np.array_equal(got, expected), (backend, order)


def test_identity_order_returns_input():
    amps = random_amps(2, 4, 3)
    assert kernels.gather(amps, 2, (1, 2, 3, 4)) is amps


def test_gather_rejects_bad_input():
    amps = random_amps(2, 3, 5)
    with pytest.raises(ValueError):
        kernels.gather(amps, 2, (1, 2, 2))
    with pytest.raises(ValueError):
        kernels.gather(amps, 2, (1, 2))


def test_use_backend_switch():
    previous = kernels.use_backend("numpy")
    try:
        assert kernels.active_backend() == "numpy"
    finally:
        kernels.use_backend(previous)
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_invalid_env_choice_rejected(monkeypatch):
    monkeypatch.setenv(kernels.BACKEND_ENV, "bogus")
    monkeypatch.setattr(kernels, "_active", None)
    with pytest.raises(ValueError):
        kernels.active_backend()


@pytest.mark.parametrize("choice", ["numpy", "numba"])
def test_env_flag_selects_backend(choice):
    if choice == "numba" and not kernels.HAVE_NUMBA:
        pytest.skip("numba not importable")
    env = dict(os.environ, **{kernels.BACKEND_ENV: choice})
    out = subprocess.run(
        [sys.executable, "-c", "import entq.kernels as k; print(k.active_backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == choice
