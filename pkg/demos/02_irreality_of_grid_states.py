import numpy as np

from cvrealism import grid, realism, states
from cvrealism.states import GaussianSpec

# Irreality of A in rho: entropy added by an unrevealed measurement of A.
g = grid.make_grid(1.0, 101)
Q, P = realism.position_basis(g), realism.momentum_basis(g)

# A flat state over Delta cells is real for nothing but a Delta-valued record:
# its position irreality is exactly ln Delta.
for d in (1, 3, 5, 7):
    print(d, realism.irreality(states.uniform_state(g, d), Q), np.log(d))

# Gaussians approach ln(sqrt(2 pi e) Delta) once Delta >= 1, and 0 below
for d in (0.3, 1.0, 2.0, 4.0):
    psi = states.gaussian_state(g, GaussianSpec(d))
    print(d, realism.irreality(psi, Q), realism.gaussian_irreality(d),
          np.log(np.sqrt(2 * np.pi * np.e) * d))

# Position and momentum irrealities trade off: a narrow packet in q is broad in p
for d in (2.0, 4.0, 8.0):
    psi = states.gaussian_state(g, GaussianSpec(d))
    iq, ip = realism.irreality(psi, Q), realism.irreality(psi, P)
    print(d, iq, ip, iq + ip, np.log(2 * np.pi * np.e))

# Bipartite version: mutually unbiased pair on a random two-qutrit state
rng = np.random.default_rng(1)
rho = realism.random_bipartite_state(3, 3, rng)
b = realism.ObservableBasis(realism.random_unitary(3, rng))
b2 = realism.unbiased_partner(b)
print(realism.max_overlap(b, b2), realism.uncertainty_slack(rho, b, b2))

# With a second basis that is not unbiased the slack may go negative,
# bounded by -ln(d c) with c the largest overlap
b3 = realism.ObservableBasis(realism.random_unitary(3, rng))
c = realism.max_overlap(b, b3)
print(c, realism.uncertainty_slack(rho, b, b3), -np.log(3 * c))

# Maximal entanglement: the bound reaches 2 ln d
print(realism.info_lower_bound(realism.maximally_entangled_state(3)), 2 * np.log(3))
