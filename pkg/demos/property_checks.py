"""
Randomised checks of the closed forms
=====================================

Every suite is reproducible from its seed.  ``worst`` is the largest
violation seen; negative numbers are the margin left over.
"""

from ahlfors_h0.properties import SUITES, run_suite

for name in SUITES:
    r = run_suite(name, seed=0, trials=None if name == "rh" else 300)
    status = "ok" if r.passed else "FAILED"
    print(f"{name:22s} {status:6s} trials={r.trials:6d} checks={r.checks:7d} worst={r.worst:+.3e}")
