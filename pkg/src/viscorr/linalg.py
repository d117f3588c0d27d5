"""Dense complex-matrix kernel.

Everything here operates on plain ``numpy.ndarray`` objects.  Bipartite
operators are stored in the ``A ⊗ B`` ordering, i.e. the row index of a
``(dA*dB, dA*dB)`` matrix is ``a*dB + b``.
"""

import numpy as np

__all__ = [
    "TOL_HERM",
    "TOL_TRACE",
    "TOL_UNIT",
    "TOL_PSD",
    "DensityValidationError",
    "kron",
    "partial_trace",
    "swap_operator",
    "hs_norm",
    "purity",
    "validate_density",
    "density_violations",
    "is_unitary",
    "validate_unitary",
]

TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_UNIT = 1e-9
# partial traces can leave eigenvalues a little below zero
TOL_PSD = 1e-8


class DensityValidationError(ValueError):
    """Raised when a matrix is not a valid density operator.

    ``violations`` maps the name of each failed invariant (``"shape"``,
    ``"finite"``, ``"hermiticity"``, ``"trace"``, ``"psd"``, ``"dims"``) to
    its magnitude.
    """

    def __init__(self, violations, message=None):
        self.violations = dict(violations)
        if message is None:
            parts = [f"{k}={v:.3g}" for k, v in self.violations.items()]
            message = "invalid density matrix: " + ", ".join(parts)
        super().__init__(message)


def kron(a, b):
    """Kronecker product ``a ⊗ b`` with block structure ``a[i, j] * b``."""
    return np.kron(np.asarray(a), np.asarray(b))


def _split_dims(dims, d):
    d_a, d_b = (int(x) for x in dims)
    if d_a < 1 or d_b < 1 or d_a * d_b != d:
        raise DensityValidationError(
            {"dims": float(abs(d - d_a * d_b))},
            f"dims {tuple(dims)} do not match matrix dimension {d}",
        )
    return d_a, d_b


def partial_trace(rho, dims, keep="A"):
    """Reduced operator of one subsystem of a bipartite operator.

    Parameters
    ----------
    rho : (d, d) array_like
        Operator on ``C^dA ⊗ C^dB``.
    dims : pair of int
        ``(dA, dB)``.
    keep : {"A", "B"}
        Subsystem to keep; the other one is traced out.
    """
    rho = np.asarray(rho)
    d_a, d_b = _split_dims(dims, rho.shape[0])
    t = rho.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def swap_operator(d):
    """The swap ``F = sum_ij |ij><ji|`` on ``C^d ⊗ C^d``."""
    if d < 1:
        raise ValueError("d must be positive")
    f = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    f[(i * d + j).ravel(), (j * d + i).ravel()] = 1.0
    return f


def hs_norm(a):
    """Hilbert-Schmidt (Frobenius) norm ``sqrt(Tr(a^† a))``."""
    return float(np.linalg.norm(np.asarray(a), "fro"))


def purity(rho):
    """``Tr(rho^2)`` of a Hermitian operator."""
    rho = np.asarray(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def density_violations(m, tol_herm=TOL_HERM, tol_trace=TOL_TRACE, tol_psd=TOL_PSD):
    """Return ``{invariant: magnitude}`` for every density-matrix invariant
    that ``m`` breaks.  An empty dict means ``m`` is a valid state.

    Hermiticity is measured as ``||m - m^†||_HS / 2``; the positivity check
    runs a Hermitian eigensolver on the symmetrised part ``(m + m^†)/2`` so
    the two errors are reported separately.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return {"shape": float("nan")}
    if not np.all(np.isfinite(m)):
        return {"finite": float(np.sum(~np.isfinite(m)))}
    out = {}
    herm_err = hs_norm(m - m.conj().T) / 2
    if herm_err > tol_herm:
        out["hermiticity"] = herm_err
    tr_err = abs(np.trace(m) - 1.0)
    if tr_err > tol_trace:
        out["trace"] = float(tr_err)
    min_eig = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
    if min_eig < -tol_psd:
        out["psd"] = -min_eig
    return out


def validate_density(m, tol_herm=TOL_HERM, tol_trace=TOL_TRACE, tol_psd=TOL_PSD):
    """Check that ``m`` is Hermitian, unit-trace and positive semidefinite.

    Returns ``m`` as a complex array on success and raises
    :class:`DensityValidationError` otherwise.
    """
    bad = density_violations(m, tol_herm, tol_trace, tol_psd)
    if bad:
        raise DensityValidationError(bad)
    return np.asarray(m, dtype=complex)


def is_unitary(u, tol=TOL_UNIT):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return hs_norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol


def validate_unitary(u, tol=TOL_UNIT):
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ValueError("matrix is not unitary within tolerance")
    return u
