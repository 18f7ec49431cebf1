"""Render the absolute-stability regions of the BDF family as SVG files.

For orders 1 through 6 the boundary locus is a simple closed curve and the
stability region is its exterior, shown shaded, with a dashed vertical line
at the stiff-stability abscissa delta for orders 3..6.  Order 7 is different:
the locus crosses itself, which is exactly why BDF7 fails to be stiffly
stable, and the crossing points are printed alongside the plot.

Run from the repository root:

    python demos/plot_stability_regions.py

SVGs land in demos/output/.
"""
import pathlib

from gearstab import (
    bdf_coefficients,
    boundary_locus,
    default_plot_spec,
    find_self_intersections,
    locus_svg,
    stiff_stability_abscissa,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

for order in range(1, 7):
    method = bdf_coefficients(order)
    locus = boundary_locus(method, 2048)
    dashed = stiff_stability_abscissa(method) if order >= 3 else None
    spec = default_plot_spec(locus.sigmas, dashed_vertical_at=dashed)
    path = OUT / f"bdf{order}_region.svg"
    path.write_text(locus_svg(locus.sigmas, spec, title=f"BDF{order} stability boundary"))
    delta_txt = f", delta = {dashed:.4f}" if dashed is not None else ""
    print(f"wrote {path}{delta_txt}")

method7 = bdf_coefficients(7)
locus7 = boundary_locus(method7, 8192)
spec7 = default_plot_spec(locus7.sigmas)
path7 = OUT / "bdf7_region.svg"
path7.write_text(locus_svg(locus7.sigmas, spec7, title="BDF7: self-intersecting boundary"))
print(f"wrote {path7}")
print("BDF7 locus self-intersections (the region boundary is not a simple curve):")
for p in find_self_intersections(locus7):
    print(f"  sigma = {p.real:+.6f} {p.imag:+.6f}j")
