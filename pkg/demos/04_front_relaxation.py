"""Perturb the front radius and watch it relax.

The reduced equation of motion for a circular front is a scalar ODE in
R.  Near R0 the gap decays like exp(rate t), with rate given by the
linear stability analysis, so log|R - R0| should fall on a straight
line of that slope.
"""
import math

import numpy as np

from chemofront import TABLE1, analytic

s = analytic.steady_state(TABLE1)
eq = analytic.equilibrium_radius(TABLE1, s)
print(f"R0 = {eq.R0:.5f}, predicted rate {eq.radial_rate:.4f}")

for offset in (-0.03, -0.01, 0.01, 0.03):
    traj = analytic.integrate_front_radius(eq.R0 + offset, 3.0, 1e-3, TABLE1, s)
    gap = np.abs(traj.R - eq.R0)
    late = (traj.t > 1.0) & (gap > 1e-9)
    slope = np.polyfit(traj.t[late], np.log(gap[late]), 1)[0]
    print(f"start R0{offset:+.2f}: R(3) = {traj.R[-1]:.5f}, late log-slope {slope:.4f}")

# Without chemotaxis nothing holds the fungus back and it overruns the plateau.
p = TABLE1.replace(chi0=1e-9)
traj = analytic.integrate_front_radius(0.2, 10.0, 1e-3, p, s)
print(f"chi0 ~ 0: front reaches the {traj.exit_side} edge at t = {traj.t[-1]:.2f}")
