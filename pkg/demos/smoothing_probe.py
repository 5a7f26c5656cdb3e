"""Difference quotients at the discriminant locus, with and without enough decay.

f = |D|^-beta phi(|D|^-alpha).  With a gaussian phi the quotients collapse as the
step shrinks; with phi of decay order 2 (so 2 alpha < 1 + beta) they blow up.
"""
from afetrace.smoothing import SmoothProbeSpec, disc_map_gl_n, finite_order_phi, probe_derivatives

d2 = disc_map_gl_n(1, 2)
for label, spec in (
    ("gaussian, beta 0.8", SmoothProbeSpec(d2, 0.8, 0.5)),
    ("order-2 phi, beta 0.8", SmoothProbeSpec(d2, 0.8, 0.5, finite_order_phi(2), decay_order=2)),
):
    rep = probe_derivatives(spec, (2.0,))
    worst = [float(abs(q).max()) for q in rep.quotients]
    print(f"{label:24s} margin {spec.margin:+.2f}  " + "  ".join(f"h={h:.0e}: {w:.2e}" for h, w in zip(rep.steps, worst)))
