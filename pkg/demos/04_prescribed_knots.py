"""Building a network that breaks exactly where you ask.

Given interlaced knot sets (level 1 for the first layer, level 2 for the
second), synth_two_hidden returns a depth-3 network whose spline has a
knot at every prescribed point and nowhere else.  A variant without
source channels does the same with the knots packed into blocks, and a
residual formula certifies that such a no-source network is as large as
its architecture allows.
"""

import numpy as np

import relusplines as rs

# Three level-1 knots, and for each of three second-layer units four
# level-2 knots interlacing them: one left of 1, one in (1, 2), one in
# (2, 3), one right of 3.
h = rs.KnotHierarchy(
    level1=[1.0, 2.0, 3.0],
    level2=[
        [0.5, 1.5, 2.5, 3.25],
        [0.6, 1.4, 2.6, 3.2],
        [0.4, 1.6, 32.0 / 15.0, 4.3],
    ],
)

net = rs.synth_two_hidden(h)
spline = rs.dnn_to_spline(net)
wanted = rs.prescribed_knots(h)

print(f"architecture {net.widths}, {len(wanted)} prescribed knots")
got = np.array([x for x, _ in rs.active_knots(spline)])
print("active set equals prescription:",
      got.size == wanted.size and np.allclose(got, wanted, atol=1e-9))
print("that count is the theoretical maximum for this architecture:",
      len(wanted) == rs.knot_bound(net.widths))

# The same works without source channels if the knots come in blocks
# [x_k, then one zero per unit]: knots 1..9 for three blocks of three.
knots = np.arange(1.0, 10.0)
bare = rs.synth_two_hidden_no_source(knots, 3, 2)
bare_spline = rs.dnn_to_spline(bare)
print("\nno-source build on knots 1..9:")
print("  second layer A2 =", bare.layers[1].A.tolist())
print("  second layer b2 =", bare.layers[1].b.tolist())
print("  active knots:", [round(x, 9) for x, _ in rs.active_knots(bare_spline)])

# For a maximal no-source network the breakpoints obey a linear relation
# per unit: knots at even positions within the unit's slots, summed with
# signs, telescope to zero.  The residual measures how far a hierarchy
# is from satisfying it; the synthesized hierarchies satisfy it exactly,
# generic ones do not.
print("\nredundancy residuals on the reference hierarchy (index set {1, 2}):")
for j in range(3):
    print(f"  unit {j}: {rs.redundancy_residual(h, {1, 2}, j):+.2e}")

perturbed = rs.KnotHierarchy(h.level1, np.where(
    np.arange(12).reshape(3, 4) == 3, 3.4, h.level2
))
print("after moving one level-2 knot to 3.4:",
      f"{rs.redundancy_residual(perturbed, {1, 2}, 0):+.2e}")
