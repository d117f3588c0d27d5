"""
Measurement disturbance seen through visibility
===============================================

Dephasing a bipartite state in local bases lowers its Haar-averaged squared
visibility by exactly ``Q^2/(dA dB)``, where ``Q`` is the Hilbert-Schmidt
distance between the state and its dephased image.  A noisy measurement that
fires with probability ``eps`` scales the drop by ``eps (2 - eps)``.
"""

import numpy as np

import viscorr as vc

###############################################################################
# Q for a few fixtures
# --------------------
for name, state in [("Bell", vc.bell_state(0)), ("Werner 1/2", vc.werner(0.5)),
                    ("classical", vc.classical_classical([[0.5, 0], [0, 0.5]]))]:
    print(f"{name:>11}: Q = {vc.q_disturbance(state):.5f}")

###############################################################################
# The visibility drop, paired versus unpaired sampling
# ----------------------------------------------------
# Using the same unitary for the state and its dephased image cancels most of
# the sampling noise.
for paired in (True, False):
    c = vc.verify_theorem1(vc.bell_state(0), n=50_000, seed=7, paired=paired)
    print(f"paired={paired!s:5}: {c.estimated.mean:.5f} +- {c.estimated.std_error:.5f} "
          f"(predicted {c.predicted:.5f}, {c.sigma_distance:.2f} sigma)")

###############################################################################
# The measured basis matters: a Hadamard basis on A
# -------------------------------------------------
h = vc.MeasurementBasis(2, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
state = vc.random_density((2, 2), 2, seed=1)
print("Q computational:", vc.q_disturbance(state), " Q Hadamard on A:", vc.q_disturbance(state, h))

###############################################################################
# Noisy measurements
# ------------------
print(f"{'eps':>5} {'MC drop':>10} {'predicted':>10} {'Q_eps':>8}")
for eps in np.linspace(0, 1, 5):
    c = vc.verify_noisy_theorem(vc.bell_state(0), eps, n=50_000, seed=8)
    print(f"{eps:5.2f} {c.estimated.mean:10.5f} {c.predicted:10.5f} "
          f"{vc.q_disturbance_noisy(vc.bell_state(0), eps):8.5f}")
