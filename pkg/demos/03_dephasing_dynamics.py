"""
Dephasing dynamics
==================

The decoherence factor r_kk'(t) multiplies each coherence of the register.
Pairs inside a decoherence-free subspace keep |r| = 1 for all times; other
pairs oscillate and, for large baths, decay.
"""

import math

import numpy as np

from spindfs import EnvState, InteractionMatrix, RegisterDensity, evolve_density, rate_series
from spindfs.sampling import random_env_state

# Single register spin, single bath spin, g = 2, bath in |+>: r(t) = cos(2t).
G = InteractionMatrix.from_rows([[2]])
grid = np.linspace(0, math.pi, 9)
s = rate_series(G, 0, 1, EnvState.uniform(1), grid)
print("t      r(t)      cos(2t)")
for t, r in s.samples:
    print(f"{t:5.3f}  {r.real:+.6f}  {math.cos(2 * t):+.6f}")

# %%
# Three collectively coupled register spins and an 8-spin bath.
rng = np.random.default_rng(0)
G = InteractionMatrix.collective(3, [1, "1/2", "1/3", "1/4", "1/5", "1/6", "1/7", "1/8"])
bath = random_env_state(rng, 8)
grid = np.linspace(0, 20, 201)
inside = rate_series(G, 0b011, 0b101, bath, grid)     # same number of zeros
outside = rate_series(G, 0b011, 0b111, bath, grid)
print("\nmin |r| inside a DFS :", np.min(np.abs(inside.values)))
print("min |r| across DFSs  :", np.min(np.abs(outside.values)))

# %%
# A logical state stored in the weight-1 subspace stays pure; the uniform
# superposition of all eight basis states does not.
def purity_after(amplitudes, t):
    rho = evolve_density(G, RegisterDensity.pure(amplitudes), bath, t)
    return rho.purity()

encoded = np.zeros(8, dtype=complex)
encoded[[0b011, 0b101, 0b110]] = [1, 1j, -1]
for t in (0.0, 2.0, 10.0):
    print(f"t={t:4.1f}  purity encoded={purity_after(encoded, t):.6f}  "
          f"uniform={purity_after(np.ones(8), t):.6f}")

# %%
# CSV for plotting elsewhere
print()
print(outside.to_csv().splitlines()[0])
print(outside.to_csv().splitlines()[1])
