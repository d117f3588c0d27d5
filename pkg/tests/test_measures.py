import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SX, SZ
from oracles import dephase_projector_sum, partial_trace_loops
from viscorr.channels import MeasurementBasis, dephase_full
from viscorr.haar import HaarSampler
from viscorr.linalg import purity
from viscorr.measures import (
    UndefinedPhaseError,
    complementarity_report,
    concurrence,
    ef_decomposition_average,
    ef_visibility_bound,
    linear_entanglement,
    purity_ratio_check,
    q_disturbance,
    q_disturbance_noisy,
    q_disturbance_one_sided,
    q_squared_from_purities,
    relative_phase,
    schmidt,
    squared_visibility,
    visibility,
)
from viscorr.states import (
    PureDecomposition,
    bell_state,
    classical_classical,
    maximally_mixed,
    product_state,
    random_decomposition,
    random_density,
    random_pure,
    schmidt_state,
    spectral_decomposition,
    werner,
)

dims_st = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)])
seed_st = st.integers(0, 2**31 - 1)


def _state(dims, seed):
    rank = 1 + seed % (dims[0] * dims[1])
    return random_density(dims, rank, seed)


def test_visibility_fixtures():
    assert visibility(werner(0.3), np.eye(4)) == pytest.approx(1.0, abs=1e-15)
    assert visibility(np.eye(2) / 2, SZ) == 0.0
    # Tr(|Φ+><Φ+| σz⊗I) = (1 - 1)/2
    assert visibility(bell_state(0), np.kron(SZ, np.eye(2))) == pytest.approx(0.0, abs=1e-15)
    u = HaarSampler(4, 1).sample(0)
    assert squared_visibility(werner(0.5), u) == pytest.approx(visibility(werner(0.5), u) ** 2)


def test_visibility_dimension_mismatch():
    with pytest.raises(ValueError):
        visibility(np.eye(2) / 2, np.eye(3))


def test_relative_phase_fixtures():
    theta = 0.7
    rho0 = np.diag([1.0, 0.0])
    assert relative_phase(rho0, np.diag([np.exp(1j * theta), 1])) == pytest.approx(theta)
    assert relative_phase(werner(0.2), np.eye(4)) == 0.0
    plus = np.full((2, 2), 0.5)
    assert relative_phase(plus, SX) == pytest.approx(0.0, abs=1e-15)
    assert relative_phase(rho0, -np.eye(2)) == pytest.approx(np.pi)


def test_relative_phase_undefined():
    with pytest.raises(UndefinedPhaseError):
        relative_phase(np.eye(2) / 2, SZ)


def test_q_fixtures():
    assert q_disturbance(bell_state(0)) == pytest.approx(np.sqrt(0.5), abs=1e-14)
    assert q_disturbance(classical_classical(np.ones((2, 2)) / 4)) == 0.0
    assert q_disturbance(werner(0.5)) == pytest.approx(np.sqrt(0.125), abs=1e-14)
    assert q_disturbance(werner(0.5)) == pytest.approx(0.35355, abs=1e-5)


def test_q_noisy_fixtures():
    b = bell_state(0)
    assert q_disturbance_noisy(b, 0.0) == 0.0
    assert q_disturbance_noisy(b, 1.0) == pytest.approx(np.sqrt(0.5), abs=1e-14)
    assert q_disturbance_noisy(b, 0.5) == pytest.approx(0.5 * np.sqrt(0.5), abs=1e-14)
    assert q_disturbance_noisy(b, 0.5) == pytest.approx(0.35355, abs=1e-5)


@pytest.mark.parametrize("seed", range(20))
def test_q_noisy_is_linear_in_epsilon(seed):
    state = _state((2, 3), seed)
    q = q_disturbance(state)
    for eps in np.linspace(0, 1, 11):
        assert abs(q_disturbance_noisy(state, eps) - eps * q) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(dims_st, seed_st)
def test_q_squared_two_routes(dims, seed):
    state = _state(dims, seed)
    ba = MeasurementBasis(dims[0], HaarSampler(dims[0], seed, 1).sample(0))
    bb = MeasurementBasis(dims[1], HaarSampler(dims[1], seed, 2).sample(0))
    q = q_disturbance(state, ba, bb)
    ref = dephase_projector_sum(state.rho, ba.matrix(), bb.matrix())
    assert abs(q**2 - (np.trace(state.rho @ state.rho) - np.trace(ref @ ref)).real) <= 1e-10
    assert abs(q**2 - q_squared_from_purities(state, ba, bb)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(dims_st, seed_st)
def test_q_basis_covariance(dims, seed):
    state = _state(dims, seed)
    wa = HaarSampler(dims[0], seed, 5).sample(0)
    wb = HaarSampler(dims[1], seed, 6).sample(0)
    ba = MeasurementBasis(dims[0], HaarSampler(dims[0], seed, 7).sample(0))
    bb = MeasurementBasis(dims[1], HaarSampler(dims[1], seed, 8).sample(0))
    w = np.kron(wa, wb)
    moved = type(state)(w @ state.rho @ w.conj().T, dims)
    assert abs(q_disturbance(state, ba, bb)
               - q_disturbance(moved, ba.rotated(wa), bb.rotated(wb))) <= 1e-12


def test_schmidt_fixtures():
    np.testing.assert_allclose(schmidt(bell_state(0)).coefficients, [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(schmidt(product_state([1, 0], [0, 1])).coefficients, [1, 0],
                               atol=1e-15)
    np.testing.assert_allclose(schmidt(schmidt_state([0.8, 0.2])).coefficients, [0.8, 0.2],
                               atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(dims_st, seed_st)
def test_schmidt_reconstruction(dims, seed):
    psi = random_pure(dims, seed)
    spec = schmidt(psi)
    assert spec.coefficients.size == min(dims)
    assert np.all(np.diff(spec.coefficients) <= 1e-15)
    assert abs(spec.coefficients.sum() - 1) <= 1e-10
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    evals = np.sort(np.linalg.eigvalsh(partial_trace_loops(rho, *dims, "A")))[::-1]
    np.testing.assert_allclose(evals[: min(dims)], spec.coefficients, atol=1e-10)


def test_entanglement_fixtures():
    s = schmidt_state([0.8, 0.2])
    assert linear_entanglement(bell_state(0)) == pytest.approx(0.5, abs=1e-15)
    assert linear_entanglement(product_state([1, 0], [1, 0])) == 0.0
    assert linear_entanglement(s) == pytest.approx(0.32, abs=1e-15)
    assert concurrence(bell_state(0)) == pytest.approx(1.0, abs=1e-15)
    assert concurrence(product_state([1, 0], [1, 0])) == 0.0
    assert concurrence(s) == pytest.approx(0.8, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(dims_st, seed_st)
def test_entanglement_ranges(dims, seed):
    psi = random_pure(dims, seed)
    e = linear_entanglement(psi)
    d_min = min(dims)
    assert -1e-15 <= e <= 1 - 1 / d_min + 1e-12
    assert abs(e - (1 - purity(psi.reduced("A")))) <= 1e-12
    assert abs(concurrence(psi) ** 2 - 2 * e) <= 1e-12


def test_ef_decomposition_fixtures():
    s = schmidt_state([0.8, 0.2])
    single = PureDecomposition([1.0], [s])
    assert ef_decomposition_average(single) == pytest.approx(0.32, abs=1e-15)
    assert ef_decomposition_average(spectral_decomposition(werner(1.0))) == pytest.approx(0.5)
    mix = PureDecomposition([0.5, 0.5], [product_state([1, 0], [1, 0]),
                                         product_state([0, 1], [0, 1])])
    assert ef_decomposition_average(mix) == 0.0


def test_ef_visibility_bound_fixtures():
    assert ef_visibility_bound(bell_state(0)) == pytest.approx(0.5, abs=1e-15)
    assert ef_visibility_bound(product_state([1, 0], [1, 0])) == pytest.approx(0.0, abs=1e-15)
    mix = classical_classical([[0.5, 0], [0, 0.5]])
    assert ef_visibility_bound(mix) == pytest.approx(0.5, abs=1e-15)
    assert ef_decomposition_average(spectral_decomposition(mix)) == 0.0
    # from an externally supplied average: 1 - 2 * 0.25
    assert ef_visibility_bound(bell_state(0), 0.25) == pytest.approx(0.5)


@settings(max_examples=40, deadline=None)
@given(dims_st, seed_st, st.integers(0, 20))
def test_decomposition_average_below_visibility_bound(dims, seed, index):
    state = _state(dims, seed)
    dec = random_decomposition(state, seed, index=index)
    assert ef_decomposition_average(dec) <= ef_visibility_bound(state) + 1e-10


def test_complementarity_bell():
    r = complementarity_report(bell_state(0))
    assert r.ef_bound == pytest.approx(0.5)
    assert r.q_term == pytest.approx(0.25)
    assert r.purity_term == pytest.approx(0.125)
    assert r.lhs_q_squared == pytest.approx(0.875)
    assert r.lhs_q_linear == pytest.approx(0.5 + np.sqrt(0.5) / 2 + 0.125)
    assert r.slack == pytest.approx(0.125)


def test_complementarity_mixed_and_product():
    r = complementarity_report(maximally_mixed((2, 2)))
    assert (r.ef_bound, r.q, r.purity_term, r.lhs_q_squared) == pytest.approx(
        (0.5, 0.0, 0.125, 0.625))
    r = complementarity_report(product_state([1, 0], [1, 0]))
    assert (r.ef_bound, r.q, r.purity_term, r.lhs_q_squared) == pytest.approx(
        (0.0, 0.0, 0.25, 0.25), abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(dims_st, seed_st)
def test_complementarity_chain(dims, seed):
    state = _state(dims, seed)
    d_a, d_b = dims
    ba = MeasurementBasis(d_a, HaarSampler(d_a, seed, 9).sample(0))
    q1 = q_disturbance_one_sided(state, ba)
    p_a, p_b = purity(state.reduced("A")), purity(state.reduced("B"))
    assert p_a >= q1**2 / d_b + p_b / (d_a * d_b) - 1e-10
    assert complementarity_report(state, ba).lhs_q_squared <= 1 + 1e-10


def test_purity_ratio_fixtures():
    ratio, ok = purity_ratio_check(maximally_mixed((2, 2)))
    assert ratio == pytest.approx(0.5) and ok
    ratio, ok = purity_ratio_check(product_state([1, 0], [1, 0]))
    assert ratio == pytest.approx(1.0) and ok
    ratio, ok = purity_ratio_check(bell_state(0))
    assert ratio == pytest.approx(2.0) and ok


@settings(max_examples=60, deadline=None)
@given(dims_st, seed_st)
def test_purity_ratio_property(dims, seed):
    assert purity_ratio_check(_state(dims, seed))[1]


def test_q_agrees_with_swap_of_dephasing(rng):
    state = random_density((2, 2), 4, 3)
    np.testing.assert_allclose(dephase_full(state).rho,
                               dephase_projector_sum(state.rho, np.eye(2), np.eye(2)),
                               atol=1e-15)
