"""
H0 for the three points 0, 1 and infinity
=========================================

The closest pairs are (0, 1) and (1, infinity), both a quarter circle apart.
The extremal surface is a lens over one of them.
"""

import math

import numpy as np

from ahlfors_h0 import Configuration, compute_H0, q3_closed_form
from ahlfors_h0 import lens_lune as ll

FOUR_PI = 4 * math.pi

# the lens family over a chord of length pi/2, as a function of the cusp angle
for theta in np.linspace(0, math.pi / 2, 7):
    t = float(theta)
    print(f"theta={t:.4f}  L={ll.L_lens(math.pi / 2, t):.6f}  A={ll.A_lens(math.pi / 2, t):.6f}"
          f"  h={ll.h_family(FOUR_PI, 3, math.pi / 2, t):.9f}")

theta_star, h_star = ll.max_h_theta(FOUR_PI, 3, math.pi / 2)
print("best cusp angle", theta_star, "value", h_star)

E3 = Configuration.of(["0", 1, "inf"])
report = compute_H0(E3)
print("H0 from the full search:", report.H0)
for w in report.winners:
    print("  winner", w.labels, "Q =", w.Q, "k =", w.k, "theta =", w.thetas, "deg_max ~", w.degmax)

# the common curvature is (q - 2) / H0
print("k * H0 =", report.simplest.k * report.H0)

print(q3_closed_form(E3))
