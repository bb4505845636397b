import numpy as np

from cvrealism import ck, states

# Damped packet with eps = 1, tau_E = 3 (zeta = 1/sqrt 3, overdamped)
p = ck.CKParams.from_dimensionless(1.0, 3.0)
print(p.zeta, p.regime, ck.regime_exponents(p))

# Centroid follows the classical trajectory exactly
t = np.linspace(0, 5, 6)
q0, p0 = -2.0, 10.0
print(ck.centroid(p, q0, p0, t).mean_q)
print(ck.classical_trajectory(p, q0, p0, t).q)

# Widths: position shrinks, momentum grows, product never below hbar/2
w = ck.widths(p, t)
print(w.delta_q)
print(w.delta_p)
print(w.delta_q * w.delta_p / 0.5)

# Independent check: brute-force split-step integration of the same Hamiltonian
gr = ck.suggest_grid(p, 2.0)
psi = states.PureState.from_unnormalized(gr, np.exp(-gr.q**2 / 4.0))
psi = ck.tdse_propagate(gr, p, psi, 2.0, 1e-3)
m = states.moments(psi)
print(m.sd_q, ck.widths(p, 2.0).delta_q)
print(m.sd_p, ck.widths(p, 2.0).delta_p)

# Irreality variations: Q loses, P gains, and the sum grows at 2 zeta per unit tau
tau = np.linspace(10, 20, 101)
dq, dp = ck.irreality_variation(p, tau)
print(np.polyfit(tau, dq + dp, 1)[0], 2 * p.zeta)

# Quantum rest: by tau = 40 position and velocity are sharp and centred
first, last = ck.irreality_series(p, 0.1, 0.1, [0.0, 40.0], q0, p0)
print(first.mean_q, last.mean_q, last.mean_v)
print(first.irreality_q_discrete, last.irreality_q_discrete, last.valid_q)
