"""
Disks against lenses
====================

An empty disk of diameter delta has ratio (q - (q - 2) cos(delta/2)) / sin(delta/2),
which falls until delta = 2 arccos((q - 2) / q) and climbs after.  The lens over a chord of the same length always
does better once its cusp angle is tuned.
"""

import math

import numpy as np

from ahlfors_h0 import lens_lune as ll

q = 3
crit = ll.disk_critical_delta(q)
print("empty disk ratio turns at delta =", crit)

for delta in np.linspace(0.2, 2.0, 10):
    d = float(delta)
    disk = ll.h_disk(q, 0, d)
    _, lens = ll.max_h_theta(4 * math.pi, q, d)
    print(f"delta={d:.2f}  disk={disk:.6f}  lens={lens:.6f}  gain={lens - disk:+.6f}")
