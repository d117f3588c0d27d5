"""
Complementarity of entanglement and disturbance
===============================================

For a one-sided measurement on A the global and local purities give
``Tr(rho_A^2) >= Q^2/dB + Tr(rho_B^2)/(dA dB)``, so the visibility bound on the
entanglement of formation, the disturbance and the purity of B cannot all be
large at once.  The report carries both the squared and the linear form of the
disturbance term; only the squared one is a proven inequality.
"""

import numpy as np

import viscorr as vc

###############################################################################
# Werner family
# -------------
print(f"{'p':>5} {'EF bound':>9} {'Q^2/dB':>8} {'P_B term':>9} {'lhs(Q^2)':>9} {'lhs(Q)':>8}")
ps = np.linspace(0, 1, 11)
rows = []
for p in ps:
    r = vc.complementarity_report(vc.werner(p))
    rows.append(r)
    print(f"{p:5.2f} {r.ef_bound:9.4f} {r.q_term:8.4f} {r.purity_term:9.4f} "
          f"{r.lhs_q_squared:9.4f} {r.lhs_q_linear:8.4f}")

###############################################################################
# Random states of several sizes
# ------------------------------
slacks = []
for k in range(300):
    dims = [(2, 2), (2, 3), (3, 3)][k % 3]
    state = vc.random_density(dims, 1 + k % (dims[0] * dims[1]), seed=k)
    slacks.append(vc.complementarity_report(state).slack)
print(f"smallest slack over 300 random states: {min(slacks):.4f}")

###############################################################################
# Plot (optional)
# ---------------
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.plot(ps, [r.ef_bound for r in rows], label="EF bound")
    ax.plot(ps, [r.q_term for r in rows], label="Q^2 / dB")
    ax.plot(ps, [r.lhs_q_squared for r in rows], label="sum")
    ax.axhline(1.0, color="k", lw=0.5)
    ax.set_xlabel("Werner p")
    ax.legend()
    fig.savefig("complementarity.png", dpi=120)
    print("wrote complementarity.png")
