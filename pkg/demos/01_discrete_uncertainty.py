import numpy as np

from cvrealism import grid, numerics, states
from cvrealism.states import GaussianSpec

# A grid of xi points with spacing dq; the momentum spacing follows from the
# discrete Fourier kernel, dq * dp = 2 pi hbar / xi.
g = grid.make_grid(1.0, 101)
print(g.xi, g.delta_q, g.delta_p, g.delta_q * g.delta_p * g.xi / (2 * np.pi))

# Sampled Gaussians: normalization is a theta series, replaced here by a
# two-branch approximation that is never off by more than 0.0271%
for d in (0.3, 0.7, 1.0, 2.0):
    exact = numerics.theta3_gaussian_norm(d)
    print(d, exact, numerics.n_approx(d) / exact - 1)

# eta is the sampled spread in cells over the nominal width Delta_q.
# It sits essentially at 1 once the packet covers a cell, and collapses below.
for d in (0.2, 0.5, 1 / np.sqrt(2), 1.0, 2.0):
    print(round(d, 4), states.eta(d), states.eta_approx(d))

# The same number measured on an actual grid state
psi = states.gaussian_state(g, GaussianSpec(1 / np.sqrt(2)))
print(states.moments(psi).sd_q / (1 / np.sqrt(2)))

# Broad packets: position and momentum spreads multiply to the continuum bound
psi = states.gaussian_state(g, GaussianSpec(3.0))
m = states.moments(psi)
print(m.sd_q * m.sd_p / (g.hbar / 2))
