"""
Interference visibility and purity
==================================

A mixed state sent through an interferometer with a unitary ``U`` in one arm
shows fringes of visibility ``|Tr(rho U)|`` shifted by ``Arg Tr(rho U)``.
Averaged over Haar-random ``U`` the squared visibility only depends on the
purity of the state.
"""

import numpy as np

import viscorr as vc
from viscorr.haar import m_operator_error

###############################################################################
# Visibility and relative phase for a single unitary
# --------------------------------------------------
theta = 0.7
rho = np.diag([1.0, 0.0])
u = np.diag([np.exp(1j * theta), 1.0])
print("V =", vc.visibility(rho, u), " phase =", vc.relative_phase(rho, u))

###############################################################################
# The Haar average of U ⊗ U^† is the swap operator divided by d
# -------------------------------------------------------------
for d in (2, 3, 4):
    print(f"d={d}: ||M_hat - F/d||_HS = {m_operator_error(vc.HaarSampler(d, 1), 20_000):.4f}")

###############################################################################
# Consequently the average squared visibility is Tr(rho^2)/d
# ----------------------------------------------------------
print(f"{'p':>5} {'purity':>8} {'MC':>10} {'+-':>8} {'exact':>10}")
for p in (0.0, 0.25, 0.5, 0.75, 1.0):
    w = vc.werner(p)
    r = vc.mc_avg_sq_visibility(w, 50_000, seed=3)
    print(f"{p:5.2f} {vc.purity(w.rho):8.4f} {r.mean:10.5f} {r.std_error:8.5f} {r.exact_value:10.5f}")

###############################################################################
# The same holds when only local unitaries U ⊗ V are applied
# ----------------------------------------------------------
state = vc.random_density((2, 3), 3, seed=5)
r = vc.mc_avg_sq_visibility_local(state, 50_000, seed=6)
print(f"local average: {r.mean:.5f} +- {r.std_error:.5f}, exact {r.exact_value:.5f}")
