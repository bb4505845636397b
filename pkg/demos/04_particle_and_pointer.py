import numpy as np

from cvrealism import ck, grid, pointer, realism

rel = ck.CKParams.from_dimensionless(1.0, 3.0)

# Start from a lab-frame product state: zero entanglement at t = 0
sigma_cm = pointer.product_state_sigma_cm(rel, 1.0)
pp = pointer.PointerParams.from_relative(rel, 1.0, sigma_cm)
tau = np.array([0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0])
print(pointer.gamma(pp, tau))
print(pointer.entanglement(pp, tau))

# Closed-form purity against direct quadrature of the reduced density matrix
for tt in (0.0, 1.0, 2.0):
    print(tt, pointer.reduced_purity(pp, tt), pointer.purity_oracle(pp, tt))

# Unequal masses: a heavy pointer
heavy = pointer.PointerParams.from_relative(rel, 10.0, 1.0)
print(pointer.entanglement(heavy, tau))

# Late times: the particle is fully entangled with the pointer and its
# reduced state has no position coherence left
g = grid.make_grid(1.0, 121)
rho = pointer.asymptotic_pointer_state(pp, g)
print(realism.irreality(rho, realism.position_basis(g)),
      realism.irreality(rho, realism.momentum_basis(g)))
