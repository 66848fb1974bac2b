import os
import subprocess
import sys
from math import comb, factorial

import numpy as np
import pytest

from modfluct import kernels

BACKENDS = []
for name in ("numpy", "numba"):
    try:
        BACKENDS.append((name, kernels.load_backend(name)))
    except ImportError:
        pass


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_inversion_count(name, backend):
    assert backend.inversion_count(np.array([1, 2, 3])) == 0
    assert backend.inversion_count(np.array([3, 2, 1])) == 3
    rng = np.random.default_rng(0)
    for _ in range(10):
        sigma = rng.permutation(40) + 1
        brute = sum(
            1 for i in range(40) for j in range(i + 1, 40) if sigma[i] > sigma[j]
        )
        assert backend.inversion_count(sigma) == brute


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_pattern_profile_totals_and_values(name, backend):
    rng = np.random.default_rng(1)
    sigma = rng.permutation(12) + 1
    from modfluct.combinatorics.perms import occ

    for k in (2, 3, 4):
        profile = backend.pattern_profile(sigma, k)
        assert profile.sum() == comb(12, k)
        assert len(profile) == factorial(k)
        for idx, tau in enumerate(kernels.patterns_by_index(k)):
            assert kernels.pattern_index(tau) == idx
            assert profile[idx] == occ(tau, tuple(sigma)), (k, tau)


def test_pattern_profile_documented_example():
    sigma = np.array([2, 4, 5, 3, 6, 1])
    profile = kernels.pattern_profile(sigma, 3)
    assert profile[kernels.pattern_index((2, 1, 3))] == 2


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_adjacency_kernels(name, backend):
    rng = np.random.default_rng(2)
    for n in (10, 70):
        adj = rng.random((n, n)) < 0.4
        adj = np.triu(adj, 1)
        adj = adj | adj.T
        a = adj.astype(np.int64)
        assert backend.edge_count(adj) == a.sum() // 2
        assert backend.path2_hom(adj) == int((a.sum(axis=1) ** 2).sum())
        assert backend.triangle_count(adj) == int(np.trace(a @ a @ a)) // 6


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_rsk_kernels_shape(name, backend):
    # all-equal weak letters pile into one row; strict ones into one column
    rows = backend.rsk_row_lengths(np.full(6, 1.0), 1.5)
    assert list(rows) == [6]
    rows = backend.rsk_row_lengths(np.full(6, 2.0), 1.5)
    assert list(rows) == [1] * 6
    # distinct continuous letters: plain RSK of a permutation;
    # 3 1 2 inserts to shape (2, 1)
    rows = backend.rsk_row_lengths(np.array([3.0, 1.0, 2.0]), 0.5)
    assert list(rows) == [2, 1]


def test_backends_agree_on_rsk_words():
    if len(BACKENDS) < 2:
        pytest.skip("only one backend importable")
    rng = np.random.default_rng(3)
    a = dict(BACKENDS)["numpy"]
    b = dict(BACKENDS)["numba"]
    for _ in range(50):
        letters = rng.choice([1.0, 2.0, 3.0, 4.5, 5.25, 5.75], size=30)
        assert list(a.rsk_row_lengths(letters, 2.5)) == list(b.rsk_row_lengths(letters, 2.5))


def test_env_flag_selects_backend():
    code = "import modfluct.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, MODFLUCT_KERNELS="numpy")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"
    env = dict(os.environ, MODFLUCT_KERNELS="bogus")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode != 0


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_profile_k_cap(name, backend):
    with pytest.raises(ValueError):
        backend.pattern_profile(np.arange(1, 9), 5)
