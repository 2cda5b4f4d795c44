"""Where does the fungal front settle around a bacterial colony?

The bacteria form a plateau of radius R1 and release a repellent.  The
fungus is pushed back until its front radius R0 balances the bistable
invasion speed against the chemotactic drift.  This script prints both
radii for the default parameters, checks that the circular front is
stable to every low azimuthal mode, then shows how R0 moves with the
chemotactic sensitivity chi0.  A weak repellent cannot hold the front
outside the plateau at all.
"""
import numpy as np

from chemofront import TABLE1, analytic
from chemofront.errors import NoEquilibriumError

s = analytic.steady_state(TABLE1)
eq = analytic.equilibrium_radius(TABLE1, s)

print(f"plateau radius        R1 = {s.R1:.5f}")
print(f"front radius          R0 = {eq.R0:.5f}")
print(f"shifted equilibria    u1 = {eq.u1:.4f}, u2 = {eq.u2:.4f}")
print(f"radial growth rate       = {eq.radial_rate:+.4f}  ({'stable' if eq.stable else 'unstable'})")
for m in range(5):
    print(f"  mode m={m}: rate {analytic.azimuthal_mode_rate(m, eq.R0, TABLE1, s):+.3f}")

print("\nchi0    R0       rate")
for chi0 in np.linspace(1.0, 6.0, 6):
    p = TABLE1.replace(chi0=float(chi0))
    try:
        e = analytic.equilibrium_radius(p, analytic.steady_state(p))
    except NoEquilibriumError:
        print(f"{chi0:4.1f}  none: the fungus overruns the colony")
        continue
    print(f"{chi0:4.1f}  {e.R0:.4f}  {e.radial_rate:+.3f}")
