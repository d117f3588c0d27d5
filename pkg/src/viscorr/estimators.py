"""Monte Carlo Haar averages and the checks built on them.

Per-sample values are written into a preallocated array indexed by sample
number and reduced once at the end, so an estimate is bit-identical for any
``workers`` count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .channels import dephase_full, noisy_measure
from .haar import BLOCK_SIZE, HaarSampler
from .linalg import purity
from .measures import (
    concurrence,
    ef_decomposition_average,
    ef_visibility_bound,
    linear_entanglement,
    q_disturbance,
)
from .states import PureState, as_bipartite, random_decomposition, spectral_decomposition

__all__ = [
    "DEFAULT_SAMPLES",
    "DEFAULT_SIGMA",
    "EstimateResult",
    "TheoremCheck",
    "VisibilityEntanglement",
    "EFBoundReport",
    "sample_values",
    "mc_avg_sq_visibility",
    "mc_avg_sq_visibility_local",
    "verify_theorem1",
    "verify_noisy_theorem",
    "entanglement_from_visibility",
    "verify_ef_bound",
]

DEFAULT_SAMPLES = 50_000
DEFAULT_SIGMA = 4.0


@dataclass(frozen=True)
class EstimateResult:
    mean: float
    std_error: float
    n_samples: int
    seed: int
    exact_value: Optional[float] = None

    @classmethod
    def from_values(cls, values, seed, exact_value=None):
        values = np.asarray(values, dtype=float)
        n = values.size
        se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else float("inf")
        return cls(float(values.mean()), se, n, seed, exact_value)

    def to_dict(self):
        return asdict(self)


def _sigma_distance(mean, predicted, std_error):
    diff = abs(mean - predicted)
    if std_error > 0:
        return diff / std_error
    # a zero-variance estimate only passes when it is exact
    return 0.0 if diff <= 1e-14 else math.inf


@dataclass(frozen=True)
class TheoremCheck:
    estimated: EstimateResult
    predicted: float
    sigma_distance: float
    passed: bool
    threshold: float = DEFAULT_SIGMA
    details: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, estimated, predicted, threshold=DEFAULT_SIGMA, **details):
        dist = _sigma_distance(estimated.mean, predicted, estimated.std_error)
        return cls(estimated, float(predicted), dist, dist <= threshold, threshold, details)

    def to_dict(self):
        out = {
            "estimate": self.estimated.mean,
            "std_error": self.estimated.std_error,
            "n_samples": self.estimated.n_samples,
            "seed": self.estimated.seed,
            "predicted": self.predicted,
            "sigma_distance": self.sigma_distance,
            "threshold": self.threshold,
            "pass": self.passed,
        }
        out.update(self.details)
        return out


def sample_values(samplers, n, fn, workers=1):
    """Evaluate ``fn(U_batch, V_batch, ...)`` over ``n`` joint draws.

    ``samplers`` is a sequence of :class:`HaarSampler`; sample ``i`` of each
    is passed in the same position.  ``fn`` maps batches of shape
    ``(k, d, d)`` to ``k`` real values.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    values = np.empty(n)
    n_blocks = -(-n // BLOCK_SIZE)

    def work(b):
        start = b * BLOCK_SIZE
        stop = min(start + BLOCK_SIZE, n)
        batches = [s.block(b)[: stop - start] for s in samplers]
        values[start:stop] = fn(*batches)

    if workers <= 1:
        for b in range(n_blocks):
            work(b)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, range(n_blocks)))
    return values


def _traces(rho):
    rho = np.asarray(rho)
    return lambda u: np.einsum("ij,nji->n", rho, u)


def _sq_vis(rho):
    tr = _traces(rho)
    return lambda u: np.abs(tr(u)) ** 2


def _check_n(n):
    if n < 2:
        raise ValueError("n must be >= 2 for a standard error")


def mc_avg_sq_visibility(rho, n=DEFAULT_SAMPLES, seed=0, workers=1):
    """Haar average of ``|Tr(rho U)|^2`` over ``U(d)``; exact value
    ``Tr(rho^2)/d``.  ``rho`` may be any density matrix, not only a
    bipartite one."""
    _check_n(n)
    rho = as_bipartite(rho).rho if hasattr(rho, "dims") else np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    vals = sample_values([HaarSampler(d, seed)], n, _sq_vis(rho), workers)
    return EstimateResult.from_values(vals, seed, purity(rho) / d)


def mc_avg_sq_visibility_local(state, n=DEFAULT_SAMPLES, seed=0, workers=1):
    """Average of ``|Tr(rho (U ⊗ V))|^2`` with independent Haar ``U`` on A
    and ``V`` on B; exact value ``Tr(rho^2)/(dA dB)``."""
    _check_n(n)
    state = as_bipartite(state)
    d_a, d_b = state.dims
    r = state.rho.reshape(d_a, d_b, d_a, d_b)

    def fn(u, v):
        return np.abs(np.einsum("abcd,nca,ndb->n", r, u, v)) ** 2

    samplers = [HaarSampler(d_a, seed, stream=0), HaarSampler(d_b, seed, stream=1)]
    vals = sample_values(samplers, n, fn, workers)
    return EstimateResult.from_values(vals, seed, purity(state.rho) / state.dim)


def _visibility_drop(rho, rho_after, predicted, n, seed, sigma, paired, workers, **details):
    d = rho.shape[0]
    before, after = _sq_vis(rho), _sq_vis(rho_after)
    if paired:
        vals = sample_values([HaarSampler(d, seed)], n, lambda u: before(u) - after(u), workers)
        est = EstimateResult.from_values(vals, seed, predicted)
    else:
        e1 = EstimateResult.from_values(
            sample_values([HaarSampler(d, seed, stream=0)], n, before, workers), seed)
        e2 = EstimateResult.from_values(
            sample_values([HaarSampler(d, seed, stream=1)], n, after, workers), seed)
        est = EstimateResult(e1.mean - e2.mean, math.hypot(e1.std_error, e2.std_error),
                             n, seed, predicted)
    return TheoremCheck.compare(est, predicted, sigma, paired=paired, **details)


def verify_theorem1(state, basis_a=None, basis_b=None, n=DEFAULT_SAMPLES, seed=0,
                    sigma=DEFAULT_SIGMA, paired=True, workers=1):
    """Estimate ``E_U[|Tr(rho U)|^2 - |Tr(Phi(rho) U)|^2]`` and compare it with
    ``Q^2/(dA dB)``.

    ``paired`` uses the same ``U`` for both terms; otherwise the two averages
    come from independent streams and their errors add in quadrature.
    """
    _check_n(n)
    state = as_bipartite(state)
    q = q_disturbance(state, basis_a, basis_b)
    predicted = q**2 / state.dim
    phi = dephase_full(state, basis_a, basis_b).rho
    return _visibility_drop(state.rho, phi, predicted, n, seed, sigma, paired, workers, q=q)


def verify_noisy_theorem(state, epsilon, basis_a=None, basis_b=None, n=DEFAULT_SAMPLES,
                         seed=0, sigma=DEFAULT_SIGMA, paired=True, workers=1):
    """Same as :func:`verify_theorem1` with the noisy measurement; the
    prediction is ``eps (2 - eps) Q^2/(dA dB)``."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    _check_n(n)
    state = as_bipartite(state)
    q = q_disturbance(state, basis_a, basis_b)
    predicted = epsilon * (2 - epsilon) * q**2 / state.dim
    after = noisy_measure(state, epsilon, basis_a, basis_b).rho
    return _visibility_drop(state.rho, after, predicted, n, seed, sigma, paired, workers,
                            q=q, epsilon=epsilon)


class VisibilityEntanglement(NamedTuple):
    entanglement: TheoremCheck
    concurrence: TheoremCheck
    avg_sq_visibility: EstimateResult


def entanglement_from_visibility(psi, n=DEFAULT_SAMPLES, seed=0, sigma=DEFAULT_SIGMA,
                                 workers=1):
    """Recover ``E(psi)`` and ``C(psi)`` from the Haar-averaged visibility of
    subsystem A under ``U ⊗ I``.

    ``E = 1 - dA * Vbar^2`` is linear in the samples, so its error is exact.
    The concurrence ``sqrt(2 E)`` gets a delta-method error ``se_E / C``; near
    ``C = 0`` the derivative blows up, so ``C`` is floored at ``sqrt(2 se_E)``
    there.
    """
    if not isinstance(psi, PureState):
        raise TypeError("entanglement_from_visibility needs a PureState")
    _check_n(n)
    d_a = psi.dims[0]
    rho_a = psi.reduced("A")
    vals = sample_values([HaarSampler(d_a, seed)], n, _sq_vis(rho_a), workers)
    vbar = EstimateResult.from_values(vals, seed, purity(rho_a) / d_a)

    e_exact = linear_entanglement(psi)
    e_est = EstimateResult.from_values(1.0 - d_a * vals, seed, e_exact)
    e_check = TheoremCheck.compare(e_est, e_exact, sigma)

    c_exact = concurrence(psi)
    c_mean = math.sqrt(max(2.0 * e_est.mean, 0.0))
    c_se = e_est.std_error / max(c_mean, math.sqrt(2.0 * e_est.std_error))
    c_est = EstimateResult(c_mean, c_se, n, seed, c_exact)
    c_check = TheoremCheck.compare(c_est, c_exact, sigma)
    return VisibilityEntanglement(e_check, c_check, vbar)


@dataclass(frozen=True)
class EFBoundReport:
    """Decomposition averages tested against ``1 - dA * Vbar^2``.

    ``averages[0]`` is the spectral decomposition; the rest come from random
    isometries.  ``best`` is the smallest average seen, the tightest upper
    bound on the entanglement of formation found.
    """

    bound: float
    averages: tuple
    best: float
    max_excess: float
    satisfied: bool
    slack: float

    def to_dict(self):
        return {
            "bound": self.bound,
            "best_decomposition_average": self.best,
            "max_excess": self.max_excess,
            "n_decompositions": len(self.averages),
            "satisfied": self.satisfied,
            "slack": self.slack,
        }


def verify_ef_bound(state, n_decomps=50, seed=0, n_members=None, slack=1e-10):
    if n_decomps < 1:
        raise ValueError("n_decomps must be >= 1")
    state = as_bipartite(state)
    bound = ef_visibility_bound(state)
    decomps = [spectral_decomposition(state)]
    decomps += [random_decomposition(state, seed, n_members, index=i) for i in range(n_decomps)]
    avgs = np.array([ef_decomposition_average(dec) for dec in decomps])
    excess = float(np.max(avgs - bound))
    return EFBoundReport(bound, tuple(avgs.tolist()), float(avgs.min()), excess,
                         excess <= slack, slack)
