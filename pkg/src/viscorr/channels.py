"""Local projective measurement channels.

A measurement basis is stored as a unitary whose columns are the measured
vectors.  Dephasing is done by masking in the rotated frame: conjugate with
the basis unitary, zero the off-diagonal entries (or blocks), rotate back.
The computational basis skips the rotation entirely, so diagonal inputs are
reproduced bit-for-bit.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _jsonio
from .linalg import TOL_UNIT, is_unitary
from .states import BipartiteState, as_bipartite

__all__ = [
    "MeasurementBasis",
    "dephase_full",
    "dephase_one_sided",
    "noisy_measure",
    "load_basis",
    "save_basis",
]


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Complete rank-one projective measurement ``{|b_i><b_i|}``.

    ``unitary`` is ``None`` for the computational basis of dimension ``dim``.
    """

    dim: int
    unitary: np.ndarray = None

    def __post_init__(self):
        if self.unitary is not None:
            u = np.asarray(self.unitary, dtype=complex)
            if u.shape != (self.dim, self.dim) or not is_unitary(u, TOL_UNIT):
                raise ValueError("basis columns must form an orthonormal basis")
            object.__setattr__(self, "unitary", u)

    @classmethod
    def computational(cls, dim):
        return cls(dim)

    @property
    def is_computational(self):
        return self.unitary is None

    def matrix(self):
        return np.eye(self.dim, dtype=complex) if self.unitary is None else self.unitary

    def projectors(self):
        b = self.matrix()
        return [np.outer(b[:, i], b[:, i].conj()) for i in range(self.dim)]

    def rotated(self, w):
        """Basis with columns ``w @ b_i``."""
        return MeasurementBasis(self.dim, np.asarray(w) @ self.matrix())


def _basis(basis, dim):
    if basis is None:
        return MeasurementBasis(dim)
    if not isinstance(basis, MeasurementBasis):
        basis = MeasurementBasis(dim, basis)
    if basis.dim != dim:
        raise ValueError(f"basis has dim {basis.dim}, subsystem has dim {dim}")
    return basis


def _frame(basis_a, basis_b):
    if basis_a.is_computational and basis_b.is_computational:
        return None
    return np.kron(basis_a.matrix(), basis_b.matrix())


def dephase_full(state, basis_a=None, basis_b=None):
    """``sum_ij (Pi_i ⊗ Pi_j) rho (Pi_i ⊗ Pi_j)`` for local bases on A and B."""
    state = as_bipartite(state)
    d_a, d_b = state.dims
    w = _frame(_basis(basis_a, d_a), _basis(basis_b, d_b))
    rho = state.rho
    if w is None:
        return BipartiteState(np.diag(np.diag(rho)), state.dims)
    p = np.real(np.einsum("ji,jk,ki->i", w.conj(), rho, w))
    return BipartiteState((w * p) @ w.conj().T, state.dims)


def dephase_one_sided(state, basis_a=None):
    """``sum_i (Pi_i ⊗ I) rho (Pi_i ⊗ I)``: measure subsystem A only."""
    state = as_bipartite(state)
    d_a, d_b = state.dims
    basis_a = _basis(basis_a, d_a)
    w = None if basis_a.is_computational else np.kron(basis_a.matrix(), np.eye(d_b))
    rho = state.rho if w is None else w.conj().T @ state.rho @ w
    mask = np.kron(np.eye(d_a), np.ones((d_b, d_b)))
    out = rho * mask
    if w is not None:
        out = w @ out @ w.conj().T
    return BipartiteState(out, state.dims)


def noisy_measure(state, epsilon, basis_a=None, basis_b=None):
    """``eps * Phi(rho) + (1 - eps) * rho`` with ``Phi`` the full dephasing."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    state = as_bipartite(state)
    phi = dephase_full(state, basis_a, basis_b).rho
    return BipartiteState(epsilon * phi + (1 - epsilon) * state.rho, state.dims)


def basis_from_dict(obj):
    if not isinstance(obj, dict) or obj.get("kind") != "basis":
        raise ValueError("basis file must be an object with kind 'basis'")
    u = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    return MeasurementBasis(int(obj["dim"]), u)


def load_basis(source, dim):
    """``source`` is either the keyword ``"computational"`` or a path to a
    ``{"kind": "basis", "dim": d, "re": ..., "im": ...}`` file."""
    if source is None or source == "computational":
        return MeasurementBasis(dim)
    basis = basis_from_dict(json.loads(Path(source).read_text()))
    if basis.dim != dim:
        raise ValueError(f"basis file has dim {basis.dim}, expected {dim}")
    return basis


def save_basis(basis, path):
    u = basis.matrix()
    obj = {"kind": "basis", "dim": basis.dim, "re": u.real.tolist(), "im": u.imag.tolist()}
    Path(path).write_text(_jsonio.dumps(obj) + "\n")
