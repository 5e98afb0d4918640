"""Walk q = 4 from the crude bound down to the r-threshold.

    python3 demos/omega_pipeline.py
"""

from primsieve.omega_bounds import crude_r_bound, leap, table2_sweep

q = 4
crude = crude_r_bound(q)
print(f"crude bound: r < {crude.r_limit:.3e}, omega < {crude.omega_limit:.3e}")

first = leap(q, 10**5, 30_000, 0.05)
print(f"leap from 1e5: reaches omega {first.omega1:.4e} (r = {first.r:.1f})")
second = leap(q, first.omega1, 15_000_000, 0.05)
print(f"second leap: reaches omega {second.omega1:.4e}")

row = table2_sweep(q)
print(f"sweep: omega >= {row.omega_threshold} settled, so only r < {row.r_threshold} remain")
