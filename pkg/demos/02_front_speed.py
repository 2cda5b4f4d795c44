"""A bistable front in one dimension travels at sqrt(2 lam Du)(1/2 - u_star).

We integrate the 1D Nagumo equation from a step and measure the crossing
speed for a few thresholds.  Below one half the invaded state spreads,
at one half the front stalls, above it the front retreats.
"""
from chemofront import TABLE1, analytic, solver

print("u_star  measured  predicted")
for u_star in (0.1, 0.2, 0.3, 0.5, 0.7):
    p = TABLE1.replace(u_star=u_star)
    res = solver.front_speed_1d(p, domain_length=2.0, n=801, t_measure=1.5)
    pred = analytic.nagumo_speed(1.0, u_star, p.lam, p.Du)
    print(f"{u_star:5.2f}  {res.speed:+.4f}  {pred:+.4f}")
