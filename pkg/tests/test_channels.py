import numpy as np
import pytest

from oracles import dephase_one_sided_projector_sum, dephase_projector_sum
from viscorr.channels import (
    MeasurementBasis,
    dephase_full,
    dephase_one_sided,
    load_basis,
    noisy_measure,
    save_basis,
)
from viscorr.haar import HaarSampler
from viscorr.linalg import purity
from viscorr.states import (
    BipartiteState,
    bell_state,
    classical_classical,
    random_density,
    werner,
)

DIMS = [(2, 2), (2, 3), (3, 2), (3, 3)]


def _random_bases(dims, seed):
    return (MeasurementBasis(dims[0], HaarSampler(dims[0], seed, stream=3).sample(0)),
            MeasurementBasis(dims[1], HaarSampler(dims[1], seed, stream=4).sample(0)))


def test_bell_full_dephasing():
    np.testing.assert_allclose(dephase_full(bell_state(0)).rho, np.diag([0.5, 0, 0, 0.5]),
                               atol=1e-15)


def test_werner_full_dephasing():
    np.testing.assert_allclose(dephase_full(werner(0.5)).rho,
                               np.diag([0.375, 0.125, 0.125, 0.375]), atol=1e-15)


def test_classical_unchanged():
    cc = classical_classical([[0.1, 0.2], [0.3, 0.4]])
    np.testing.assert_array_equal(dephase_full(cc).rho, cc.rho)


@pytest.mark.parametrize("dims", DIMS)
def test_full_dephasing_matches_projector_sum(dims):
    for seed in range(5):
        state = random_density(dims, 3, seed)
        ba, bb = _random_bases(dims, seed)
        out = dephase_full(state, ba, bb).rho
        np.testing.assert_allclose(out, dephase_projector_sum(state.rho, ba.matrix(), bb.matrix()),
                                   atol=1e-13)
        # diagonal in the product basis
        w = np.kron(ba.matrix(), bb.matrix())
        inner = w.conj().T @ out @ w
        np.testing.assert_allclose(inner - np.diag(np.diag(inner)), 0, atol=1e-13)


@pytest.mark.parametrize("dims", DIMS)
def test_one_sided_matches_projector_sum(dims):
    for seed in range(5):
        state = random_density(dims, 2, seed)
        ba, _ = _random_bases(dims, seed)
        out = dephase_one_sided(state, ba).rho
        ref = dephase_one_sided_projector_sum(state.rho, ba.matrix(), dims[1])
        np.testing.assert_allclose(out, ref, atol=1e-13)
        np.testing.assert_allclose(dephase_one_sided(state).rho,
                                   dephase_one_sided_projector_sum(state.rho, np.eye(dims[0]),
                                                                   dims[1]), atol=1e-15)


def test_one_sided_fixtures(rng):
    ra = np.diag([0.3, 0.7])
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rb = g @ g.conj().T
    rb /= np.trace(rb)
    prod = BipartiteState(np.kron(ra, rb), (2, 3))
    np.testing.assert_allclose(dephase_one_sided(prod).rho, prod.rho, atol=1e-15)
    np.testing.assert_allclose(dephase_one_sided(bell_state(0)).rho, np.diag([0.5, 0, 0, 0.5]),
                               atol=1e-15)


@pytest.mark.parametrize("dims", DIMS)
def test_one_sided_leaves_b_untouched(dims):
    for seed in range(20 // len(DIMS) + 1):
        state = random_density(dims, 3, seed)
        ba, _ = _random_bases(dims, seed)
        out = dephase_one_sided(state, ba)
        np.testing.assert_allclose(out.reduced("B"), state.reduced("B"), atol=1e-13)
        assert abs(purity(out.reduced("B")) - purity(state.reduced("B"))) <= 1e-12


def test_noisy_endpoints_and_midpoint():
    b = bell_state(0).density()
    np.testing.assert_array_equal(noisy_measure(b, 0.0).rho, b.rho)
    np.testing.assert_allclose(noisy_measure(b, 1.0).rho, dephase_full(b).rho, atol=1e-15)
    mid = noisy_measure(b, 0.5).rho
    np.testing.assert_allclose(mid, (b.rho + dephase_full(b).rho) / 2, atol=1e-15)
    with pytest.raises(ValueError):
        noisy_measure(b, 1.5)


def test_noisy_is_affine_in_epsilon():
    state = random_density((2, 3), 6, 4)
    a, b, c = (noisy_measure(state, e).rho for e in (0.2, 0.5, 0.8))
    np.testing.assert_allclose(b - a, c - b, atol=1e-14)


def _channels(state, ba, bb):
    yield dephase_full(state, ba, bb).rho
    yield dephase_one_sided(state, ba).rho
    yield noisy_measure(state, 0.37, ba, bb).rho


def test_channels_preserve_trace_hermiticity_positivity():
    for i in range(100):
        dims = DIMS[i % len(DIMS)]
        state = random_density(dims, 1 + i % (dims[0] * dims[1]), i)
        ba, bb = _random_bases(dims, i)
        for out in _channels(state, ba, bb):
            assert abs(np.trace(out) - 1) <= 1e-12
            np.testing.assert_allclose(out, out.conj().T, atol=1e-13)
            assert np.linalg.eigvalsh(out).min() >= -1e-10


@pytest.mark.parametrize("dims", DIMS)
def test_idempotence_purity_and_orthogonality(dims):
    for seed in range(5):
        state = random_density(dims, 2, seed)
        ba, bb = _random_bases(dims, seed)
        for phi in (lambda s: dephase_full(s, ba, bb), lambda s: dephase_one_sided(s, ba)):
            once = phi(state)
            np.testing.assert_allclose(phi(once).rho, once.rho, atol=1e-12)
            assert purity(once.rho) <= purity(state.rho) + 1e-12
            overlap = np.trace(state.rho @ once.rho).real
            assert abs(overlap - np.trace(once.rho @ once.rho).real) <= 1e-12


def test_basis_validation_and_files(tmp_path):
    with pytest.raises(ValueError):
        MeasurementBasis(2, np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        dephase_full(bell_state(0), MeasurementBasis(3))
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    basis = MeasurementBasis(2, h)
    save_basis(basis, tmp_path / "h.json")
    back = load_basis(tmp_path / "h.json", 2)
    np.testing.assert_array_equal(back.matrix(), basis.matrix())
    assert load_basis("computational", 3).is_computational
    total = sum(basis.projectors())
    np.testing.assert_allclose(total, np.eye(2), atol=1e-15)
