"""Haar-random unitaries with counter-based, partition-independent seeding.

Samples are produced in fixed-size blocks.  Block ``b`` of a sampler draws
from its own generator seeded by ``SeedSequence(base_seed, spawn_key=(stream,
b))``, so sample ``i`` is a function of ``(base_seed, stream, i)`` only.  Any
split of an index range across workers reproduces exactly the same matrices.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import swap_operator

__all__ = [
    "BLOCK_SIZE",
    "HaarSampler",
    "ginibre",
    "haar_from_ginibre",
    "sample_unitary",
    "estimate_m_operator",
]

BLOCK_SIZE = 256


def ginibre(rng, shape):
    """Standard complex normal entries ``(x + iy)/sqrt(2)``."""
    x = rng.standard_normal(shape + (2,))
    return (x[..., 0] + 1j * x[..., 1]) / np.sqrt(2)


def haar_from_ginibre(z, rephase=True):
    """QR-factorise a stack of Ginibre matrices into unitaries.

    With ``rephase`` the columns of ``Q`` are multiplied by the unit phases of
    ``diag(R)``, which makes the result exactly Haar distributed.  Without it
    the distribution depends on the sign convention of the LAPACK routine and
    is biased; the flag exists so that bias can be demonstrated.
    """
    q, r = np.linalg.qr(z)
    if rephase:
        diag = np.diagonal(r, axis1=-2, axis2=-1)
        q = q * (diag / np.abs(diag))[..., None, :]
    return q


@dataclass(frozen=True)
class HaarSampler:
    """Deterministic source of Haar-random ``dim x dim`` unitaries.

    ``stream`` separates independent families drawn from the same seed (for
    instance the ``U`` and ``V`` of a local-unitary average).
    """

    dim: int
    base_seed: int
    stream: int = 0
    rephase: bool = True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")

    def block(self, b):
        """All unitaries of block ``b`` (indices ``b*BLOCK_SIZE`` onward)."""
        ss = np.random.SeedSequence(self.base_seed, spawn_key=(self.stream, b))
        rng = np.random.default_rng(ss)
        z = ginibre(rng, (BLOCK_SIZE, self.dim, self.dim))
        return haar_from_ginibre(z, self.rephase)

    def batch(self, start, stop):
        """Unitaries with indices ``start, ..., stop - 1`` as a
        ``(stop - start, dim, dim)`` array."""
        if start < 0 or stop < start:
            raise ValueError("need 0 <= start <= stop")
        out = np.empty((stop - start, self.dim, self.dim), dtype=complex)
        i = start
        while i < stop:
            b, off = divmod(i, BLOCK_SIZE)
            take = min(BLOCK_SIZE - off, stop - i)
            out[i - start : i - start + take] = self.block(b)[off : off + take]
            i += take
        return out

    def blocks(self, n):
        """Yield ``(start, unitaries)`` for whole blocks covering ``0..n-1``."""
        for b in range(-(-n // BLOCK_SIZE)):
            start = b * BLOCK_SIZE
            u = self.block(b)
            yield start, u[: min(BLOCK_SIZE, n - start)]

    def sample(self, index):
        return sample_unitary(self, index)


def sample_unitary(sampler, index):
    """The ``index``-th unitary of ``sampler``."""
    if index < 0:
        raise ValueError("index must be non-negative")
    return sampler.batch(index, index + 1)[0]


def estimate_m_operator(sampler, n_samples):
    """Empirical mean of ``U ⊗ U^†`` over the first ``n_samples`` draws.

    Converges to ``F / d`` with ``F`` the swap operator.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    d = sampler.dim
    acc = np.zeros((d, d, d, d), dtype=complex)
    for _, u in sampler.blocks(n_samples):
        udag = np.conj(np.swapaxes(u, -1, -2))
        # (U ⊗ U^†)[(i,k),(j,l)] = U[i,j] U^†[k,l]
        acc += np.einsum("nij,nkl->ikjl", u, udag)
    return acc.reshape(d * d, d * d) / n_samples


def m_operator_error(sampler, n_samples):
    """``||M_hat - F/d||_HS`` for the swap identity."""
    m = estimate_m_operator(sampler, n_samples)
    return float(np.linalg.norm(m - swap_operator(sampler.dim) / sampler.dim))
