"""Tabulate the stiff-stability abscissa delta for BDF orders 1..6.

delta is the leftmost real part reached by the boundary locus: every
h*lambda with Re(h*lambda) < delta is inside the stability region, so a
stiffly stable method tolerates arbitrarily fast decay modes as long as the
slow dynamics stay resolved.  The abscissa degrades quickly with order,
which is the practical reason adaptive BDF codes stop at order 6; order 7
has no delta at all because its boundary curve self-intersects.

    python demos/delta_table.py
"""
from gearstab import bdf_coefficients, is_stiffly_stable, stiff_stability_abscissa

print(f"{'order':>5} {'delta':>12} {'stiffly stable':>15}")
for order in range(1, 7):
    method = bdf_coefficients(order)
    delta = stiff_stability_abscissa(method)
    report = is_stiffly_stable(method)
    print(f"{order:>5} {delta:>12.5f} {str(report.stiffly_stable):>15}")

report7 = is_stiffly_stable(bdf_coefficients(7))
print(f"{7:>5} {'(none)':>12} {str(report7.stiffly_stable):>15}  "
      f"({len(report7.self_intersections)} boundary self-intersections)")
