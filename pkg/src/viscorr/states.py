"""State containers, canonical fixtures, random states and the JSON state file.

Bell index convention: ``0 -> Φ+``, ``1 -> Φ-``, ``2 -> Ψ+``, ``3 -> Ψ-``.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _jsonio
from .haar import HaarSampler, ginibre
from .linalg import (
    DensityValidationError,
    density_violations,
    partial_trace,
    validate_density,
)

__all__ = [
    "BipartiteState",
    "PureState",
    "PureDecomposition",
    "StateFileError",
    "bell_state",
    "werner",
    "product_state",
    "schmidt_state",
    "classical_classical",
    "maximally_mixed",
    "random_pure",
    "random_density",
    "spectral_decomposition",
    "isometry_decomposition",
    "random_decomposition",
    "as_bipartite",
    "load_state",
    "save_state",
    "state_to_dict",
    "state_from_dict",
]

NORM_TOL = 1e-10


class StateFileError(ValueError):
    """Malformed or inconsistent state file."""


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix ``rho`` on ``C^dA ⊗ C^dB``."""

    rho: np.ndarray
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=complex))
        d = self.dims[0] * self.dims[1]
        if self.rho.shape != (d, d):
            raise DensityValidationError(
                {"dims": float(abs(self.rho.shape[0] - d))},
                f"dims {self.dims} need a {d}x{d} matrix, got {self.rho.shape}",
            )

    @property
    def dim(self):
        return self.dims[0] * self.dims[1]

    def reduced(self, keep="A"):
        return partial_trace(self.rho, self.dims, keep)

    def validate(self, **tolerances):
        validate_density(self.rho, **tolerances)
        return self


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on ``C^dA ⊗ C^dB``."""

    amplitudes: np.ndarray
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        psi = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", psi)
        if psi.size != self.dims[0] * self.dims[1]:
            raise DensityValidationError(
                {"dims": float(abs(psi.size - self.dims[0] * self.dims[1]))},
                f"dims {self.dims} need {self.dims[0] * self.dims[1]} amplitudes, "
                f"got {psi.size}",
            )
        norm_err = abs(np.linalg.norm(psi) - 1.0)
        if norm_err > NORM_TOL:
            raise DensityValidationError({"norm": norm_err})

    @property
    def dim(self):
        return self.dims[0] * self.dims[1]

    def matrix(self):
        """Amplitudes reshaped to the ``dA x dB`` coefficient matrix."""
        return self.amplitudes.reshape(self.dims)

    def density(self):
        psi = self.amplitudes
        return BipartiteState(np.outer(psi, psi.conj()), self.dims)

    def reduced(self, keep="A"):
        c = self.matrix()
        return c @ c.conj().T if keep == "A" else (c.T @ c.conj())


@dataclass(frozen=True, eq=False)
class PureDecomposition:
    """``rho = sum_j weights[j] |members[j]><members[j]|``."""

    weights: np.ndarray
    members: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) == 0 or len(self.members) != w.size:
            raise ValueError("need one weight per member and at least one member")
        if np.any(w < 0) or abs(w.sum() - 1.0) > NORM_TOL:
            raise ValueError("weights must be a probability vector")
        if len({m.dims for m in self.members}) != 1:
            raise ValueError("all members must have identical dims")

    @property
    def dims(self):
        return self.members[0].dims

    def density(self):
        psis = np.stack([m.amplitudes for m in self.members])
        rho = np.einsum("j,ja,jb->ab", self.weights, psis, psis.conj())
        return BipartiteState(rho, self.dims)


def as_bipartite(state):
    """Density-matrix view of either a :class:`PureState` or a
    :class:`BipartiteState`."""
    if isinstance(state, PureState):
        return state.density()
    if isinstance(state, BipartiteState):
        return state
    raise TypeError(f"expected a state, got {type(state).__name__}")


# --- canonical fixtures -----------------------------------------------------

def bell_state(index=0):
    s = 1 / np.sqrt(2)
    table = {
        0: [s, 0, 0, s],
        1: [s, 0, 0, -s],
        2: [0, s, s, 0],
        3: [0, s, -s, 0],
    }
    if index not in table:
        raise ValueError(f"Bell index must be 0..3, got {index}")
    return PureState(np.array(table[index], dtype=complex), (2, 2))


def werner(p):
    """``p |Φ+><Φ+| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    bell = bell_state(0).density().rho
    return BipartiteState(p * bell + (1 - p) * np.eye(4) / 4, (2, 2))


def product_state(psi_a, psi_b):
    psi_a = np.asarray(psi_a, dtype=complex).ravel()
    psi_b = np.asarray(psi_b, dtype=complex).ravel()
    for v in (psi_a, psi_b):
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValueError("factors must be normalized")
    return PureState(np.kron(psi_a, psi_b), (psi_a.size, psi_b.size))


def schmidt_state(coefficients, dims=None):
    """``sum_i sqrt(c_i) |ii>`` for Schmidt probabilities ``c``."""
    c = np.asarray(coefficients, dtype=float)
    if np.any(c < 0) or abs(c.sum() - 1.0) > NORM_TOL:
        raise ValueError("Schmidt coefficients must be a probability vector")
    dims = (c.size, c.size) if dims is None else tuple(dims)
    if c.size > min(dims):
        raise ValueError("more Schmidt coefficients than min(dA, dB)")
    m = np.zeros(dims, dtype=complex)
    m[np.arange(c.size), np.arange(c.size)] = np.sqrt(c)
    return PureState(m.ravel(), dims)


def classical_classical(probabilities):
    """``sum_ij p_ij |ij><ij|`` from a ``dA x dB`` probability grid."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 2:
        raise ValueError("probabilities must be a 2-D grid")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    return BipartiteState(np.diag(p.ravel()).astype(complex), p.shape)


def maximally_mixed(dims):
    d = dims[0] * dims[1]
    return BipartiteState(np.eye(d, dtype=complex) / d, dims)


# --- random states ----------------------------------------------------------

def random_pure(dims, seed):
    """Unitarily invariant random pure state (normalised Ginibre vector)."""
    rng = np.random.default_rng(seed)
    v = ginibre(rng, (dims[0] * dims[1],))
    return PureState(v / np.linalg.norm(v), dims)


def random_density(dims, rank, seed):
    """Induced-measure mixed state: trace out a ``rank``-dimensional ancilla
    from a random pure state on ``C^(dA dB) ⊗ C^rank``."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    d = dims[0] * dims[1]
    if rank == 1:
        return random_pure(dims, seed).density()
    big = random_pure((d, rank), seed)
    c = big.matrix()
    return BipartiteState(c @ c.conj().T, dims)


# --- pure-state decompositions ----------------------------------------------

def spectral_decomposition(state, tol=1e-12):
    """Eigen-decomposition of ``state`` restricted to its support."""
    state = as_bipartite(state)
    evals, evecs = np.linalg.eigh(state.rho)
    keep = evals > tol
    w = evals[keep]
    w = w / w.sum()
    members = [PureState(v / np.linalg.norm(v), state.dims) for v in evecs[:, keep].T]
    return PureDecomposition(w, members)


def isometry_decomposition(state, isometry, tol=1e-12):
    """Mix the eigen-ensemble of ``state`` with an ``m x r`` isometry.

    With ``rho = sum_k lambda_k |e_k><e_k|`` of rank ``r`` the unnormalised
    members are ``sum_k W[j, k] sqrt(lambda_k) |e_k>``; every pure-state
    ensemble of ``rho`` with ``m`` members arises this way.  Members with
    vanishing weight are dropped.
    """
    state = as_bipartite(state)
    evals, evecs = np.linalg.eigh(state.rho)
    keep = evals > tol
    lam, e = evals[keep], evecs[:, keep]
    w_mat = np.asarray(isometry, dtype=complex)
    if w_mat.shape[1] != lam.size:
        raise ValueError(f"isometry needs {lam.size} columns, got {w_mat.shape[1]}")
    tilde = (w_mat * np.sqrt(lam)) @ e.T  # row j = unnormalised member j
    p = np.sum(np.abs(tilde) ** 2, axis=1)
    nz = p > tol
    members = [PureState(v / np.sqrt(pj), state.dims) for v, pj in zip(tilde[nz], p[nz])]
    return PureDecomposition(p[nz] / p[nz].sum(), members)


def random_decomposition(state, seed, n_members=None, index=0):
    """Decomposition obtained from the first ``r`` columns of a Haar unitary
    of size ``n_members`` (default: the rank ``r``)."""
    state = as_bipartite(state)
    rank = int(np.sum(np.linalg.eigvalsh(state.rho) > 1e-12))
    m = rank if n_members is None else int(n_members)
    if m < rank:
        raise ValueError(f"need at least rank={rank} members, got {m}")
    u = HaarSampler(m, seed).sample(index)
    return isometry_decomposition(state, u[:, :rank])


# --- JSON state files -------------------------------------------------------

def state_to_dict(state):
    if isinstance(state, PureState):
        psi = state.amplitudes
        return {"kind": "pure", "dims": list(state.dims),
                "re": psi.real.tolist(), "im": psi.imag.tolist()}
    rho = state.rho
    return {"kind": "density", "dims": list(state.dims),
            "re": rho.real.tolist(), "im": rho.imag.tolist()}


def _array(obj, key):
    try:
        return np.asarray(obj[key], dtype=float)
    except KeyError:
        raise StateFileError(f"missing field {key!r}") from None
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"field {key!r} is not a numeric array: {exc}") from None


def state_from_dict(obj, validate=True):
    """Build a state from the parsed JSON schema.  Density matrices are run
    through :func:`validate_density` unless ``validate`` is false."""
    if not isinstance(obj, dict):
        raise StateFileError("state file must hold a JSON object")
    kind = obj.get("kind")
    dims = obj.get("dims")
    if (not isinstance(dims, list) or len(dims) != 2
            or not all(isinstance(x, int) and x >= 1 for x in dims)):
        raise StateFileError(f"dims must be two positive integers, got {dims!r}")
    re, im = _array(obj, "re"), _array(obj, "im")
    if re.shape != im.shape:
        raise StateFileError(f"re shape {re.shape} != im shape {im.shape}")
    z = re + 1j * im
    if kind == "pure":
        if z.ndim == 2 and z.shape[0] == 1:
            z = z[0]
        if z.ndim != 1:
            raise StateFileError("pure state amplitudes must be a single row")
        return PureState(z, dims)
    if kind == "density":
        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise StateFileError(f"density matrix must be square, got {z.shape}")
        state = BipartiteState(z, dims)
        if validate:
            bad = density_violations(z)
            if bad:
                raise DensityValidationError(bad)
        return state
    raise StateFileError(f"unknown kind {kind!r}")


def save_state(state, path):
    Path(path).write_text(_jsonio.dumps(state_to_dict(state)) + "\n")


def load_state(path, validate=True):
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: not valid JSON ({exc})") from None
    return state_from_dict(obj, validate=validate)
