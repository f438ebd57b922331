import itertools

import numpy as np
import pytest

from bosent.fock_space import basis
from bosent.states import pure_state, pure_to_density


def noon(N):
    """(|N;0> + |0;N>)/sqrt(2) as a density matrix on two modes."""
    fb = basis(N, 2, 1)
    amps = np.zeros(fb.dim)
    amps[fb.flat_index(*fb.index_of((N, 0)))] = 1
    amps[fb.flat_index(*fb.index_of((0, N)))] = 1
    return pure_to_density(pure_state(fb, amps, normalize=True))


def shapes(n_max=4, m_max=4, include_trivial=True):
    out = []
    for N in range(1, n_max + 1):
        for M in range(2, m_max + 1):
            lo, hi = (0, M) if include_trivial else (1, M - 1)
            for m in range(lo, hi + 1):
                out.append((N, M, m))
    return out


def brute_occupations(N, M):
    return [occ for occ in itertools.product(range(N + 1), repeat=M) if sum(occ) == N]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
