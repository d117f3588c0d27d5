"""Scalar quantities: visibility, measurement disturbance, entanglement.

Nothing in here computes the convex-roof entanglement of formation itself.
Every ``ef_*`` output is an upper bound on it.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .channels import dephase_full, dephase_one_sided, noisy_measure
from .linalg import hs_norm, purity
from .states import BipartiteState, PureDecomposition, PureState, as_bipartite

__all__ = [
    "TOL_PHASE",
    "UndefinedPhaseError",
    "SchmidtSpectrum",
    "ComplementarityReport",
    "visibility",
    "squared_visibility",
    "relative_phase",
    "q_disturbance",
    "q_squared_from_purities",
    "q_disturbance_one_sided",
    "q_disturbance_noisy",
    "schmidt",
    "linear_entanglement",
    "concurrence",
    "ef_decomposition_average",
    "ef_visibility_bound",
    "complementarity_report",
    "purity_ratio_check",
]

TOL_PHASE = 1e-9
# agreement required between ||rho - Phi(rho)||^2 and Tr rho^2 - Tr Phi(rho)^2
_Q_CONSISTENCY = 1e-10


class UndefinedPhaseError(ValueError):
    """Relative phase requested where the visibility is (numerically) zero."""


def _matrix(rho):
    if isinstance(rho, (BipartiteState, PureState)):
        return as_bipartite(rho).rho
    return np.asarray(rho)


def _overlap(rho, u):
    rho, u = _matrix(rho), np.asarray(u)
    if rho.shape != u.shape:
        raise ValueError(f"state shape {rho.shape} does not match unitary {u.shape}")
    return complex(np.einsum("ij,ji->", rho, u))


def visibility(rho, u):
    """``V = |Tr(rho U)|``."""
    return abs(_overlap(rho, u))


def squared_visibility(rho, u):
    return abs(_overlap(rho, u)) ** 2


def relative_phase(rho, u, tol=TOL_PHASE):
    """``Arg Tr(rho U)`` in ``(-pi, pi]``."""
    z = _overlap(rho, u)
    if abs(z) <= tol:
        raise UndefinedPhaseError(f"visibility {abs(z):.3g} is below {tol:g}; phase undefined")
    phase = float(np.angle(z))
    return np.pi if phase == -np.pi else phase


def _checked_q(rho, dephased):
    q2_direct = hs_norm(rho - dephased) ** 2
    q2_purity = purity(rho) - purity(dephased)
    if abs(q2_direct - q2_purity) > _Q_CONSISTENCY:
        raise ArithmeticError(
            f"Q^2 mismatch: norm form {q2_direct!r} vs purity form {q2_purity!r}"
        )
    return float(np.sqrt(q2_direct))


def q_disturbance(state, basis_a=None, basis_b=None):
    """``Q = ||rho - Phi(rho)||_HS`` for local measurements on both sides.

    The squared value is cross-checked against ``Tr rho^2 - Tr Phi(rho)^2``.
    """
    state = as_bipartite(state)
    return _checked_q(state.rho, dephase_full(state, basis_a, basis_b).rho)


def q_squared_from_purities(state, basis_a=None, basis_b=None):
    state = as_bipartite(state)
    return purity(state.rho) - purity(dephase_full(state, basis_a, basis_b).rho)


def q_disturbance_one_sided(state, basis_a=None):
    """Disturbance caused by measuring subsystem A only."""
    state = as_bipartite(state)
    return _checked_q(state.rho, dephase_one_sided(state, basis_a).rho)


def q_disturbance_noisy(state, epsilon, basis_a=None, basis_b=None):
    """``Q_eps = ||rho - Phi_eps(rho)||_HS``, evaluated directly (it equals
    ``eps * Q``)."""
    state = as_bipartite(state)
    return hs_norm(state.rho - noisy_measure(state, epsilon, basis_a, basis_b).rho)


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    coefficients: np.ndarray
    dims: tuple

    def to_dict(self):
        return {"coefficients": self.coefficients.tolist(), "dims": list(self.dims)}


def schmidt(psi):
    """Schmidt probabilities: squared singular values of the amplitude
    matrix, nonincreasing, of length ``min(dA, dB)``."""
    s = np.linalg.svd(psi.matrix(), compute_uv=False)
    return SchmidtSpectrum(s**2, psi.dims)


def linear_entanglement(psi):
    """``E = 1 - Tr(rho_A^2) = 1 - sum lambda_i^2``."""
    lam = schmidt(psi).coefficients
    return float(1.0 - np.sum(lam**2))


def concurrence(psi):
    """``C = sqrt(2 (1 - Tr rho_A^2))``."""
    return float(np.sqrt(max(2.0 * linear_entanglement(psi), 0.0)))


def ef_decomposition_average(decomp):
    """``sum_j p_j E(psi_j)``, an upper bound on the entanglement of
    formation."""
    if not isinstance(decomp, PureDecomposition):
        raise TypeError("expected a PureDecomposition")
    return float(sum(p * linear_entanglement(m) for p, m in zip(decomp.weights, decomp.members)))


def ef_visibility_bound(state, avg_sq_visibility=None):
    """``1 - dA * Vbar^2`` where ``Vbar^2`` is the Haar average of
    ``|Tr(rho_A U)|^2``.

    Without ``avg_sq_visibility`` the average is taken in closed form,
    ``Tr(rho_A^2)/dA``, giving ``1 - Tr(rho_A^2)``.  Pass a Monte Carlo
    estimate to evaluate the bound from sampled visibilities instead.
    """
    state = as_bipartite(state)
    if avg_sq_visibility is None:
        return 1.0 - purity(state.reduced("A"))
    return 1.0 - state.dims[0] * float(avg_sq_visibility)


@dataclass(frozen=True)
class ComplementarityReport:
    """Terms of ``E_F + Q/dB + P(rho_B)/(dA dB) <= 1``.

    ``ef_bound`` stands in for ``E_F``.  ``lhs_q_squared`` uses ``Q^2`` (the
    form the purity inequalities actually imply) and ``lhs_q_linear`` the
    first power of ``Q``; both are reported, only the squared form is a
    guaranteed inequality.
    """

    ef_bound: float
    q: float
    purity_a: float
    purity_b: float
    q_term: float
    purity_term: float
    lhs_q_squared: float
    lhs_q_linear: float
    slack: float

    def to_dict(self):
        return asdict(self)


def complementarity_report(state, basis_a=None):
    state = as_bipartite(state)
    d_a, d_b = state.dims
    q = q_disturbance_one_sided(state, basis_a)
    p_a = purity(state.reduced("A"))
    p_b = purity(state.reduced("B"))
    ef = 1.0 - p_a
    purity_term = p_b / (d_a * d_b)
    lhs_sq = ef + q**2 / d_b + purity_term
    return ComplementarityReport(
        ef_bound=ef,
        q=q,
        purity_a=p_a,
        purity_b=p_b,
        q_term=q**2 / d_b,
        purity_term=purity_term,
        lhs_q_squared=lhs_sq,
        lhs_q_linear=ef + q / d_b + purity_term,
        slack=1.0 - lhs_sq,
    )


def purity_ratio_check(state, tol=1e-12):
    """``Tr(rho_AB^2) / Tr(rho_A^2)`` and whether it lies in ``[1/dB, dB]``."""
    state = as_bipartite(state)
    d_b = state.dims[1]
    ratio = purity(state.rho) / purity(state.reduced("A"))
    return ratio, bool(1.0 / d_b - tol <= ratio <= d_b + tol)
