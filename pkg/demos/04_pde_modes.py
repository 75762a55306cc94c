"""The reference solver: exact heat decay, truncation modes, weak residual."""

import numpy as np

from powergas.pde import solve, weak_residual

# heat equation: a single cosine mode decays at the known exponential rate
grids = solve(lambda u: 0.5 + 0.1 * np.cos(2 * np.pi * u), 1.0, "power", 0.05, 512)
g = grids[-1]
amp = 2 * np.mean(g.rho * np.cos(2 * np.pi * g.u))
print(f"m=1 mode amplitude at t=0.05: {amp:.6f}"
      f"  exact {0.1 * np.exp(-4 * np.pi**2 * 0.05):.6f}")

# the truncated nonlinearity converges to the plain power as the order grows
cosine = lambda u: 0.5 + 0.3 * np.cos(2 * np.pi * u)
exact = solve(cosine, 1.5, "power", 0.05, 512)[-1].rho
for ell in (6, 12, 24):
    trunc = solve(cosine, 1.5, ("series", ell), 0.05, 512)[-1].rho
    print(f"truncation order {ell:2d}: sup |trunc - exact| = "
          f"{np.max(np.abs(trunc - exact)):.2e}")

# weak-form residual: near zero for the solver output, visibly nonzero for a
# tampered trajectory
times = np.linspace(0.0, 0.05, 201)
traj = [g.rho for g in solve(cosine, 1.5, "power", 0.05, 256, snap_times=times)]
G = lambda s, u: np.cos(2 * np.pi * u) * np.exp(-s)
Gt = lambda s, u: -G(s, u)
Guu = lambda s, u: -(2 * np.pi) ** 2 * G(s, u)
print(f"weak residual (solver)   : {weak_residual(times, traj, 1.5, G, Gt, Guu, 0.05):.2e}")
bad = [1.01 * rho for rho in traj]
print(f"weak residual (corrupted): {weak_residual(times, bad, 1.5, G, Gt, Guu, 0.05):.2e}")
