"""Designing the modal controller.

Walks through the controller design for the reference vehicle: pick a
closed-loop spectrum with one well-damped pair (fast tilt recovery) and one
purely imaginary pair (the undamped mode that lets encounters conserve the
swarm's RMS velocity), then solve for the feedback gains by matching the
closed-loop characteristic polynomial coefficient by coefficient.
"""

import numpy as np

from swarmform import (PlantParams, PoleSpec, closed_loop_polynomial,
                       desired_polynomial, direct_gain_formula, place_gains,
                       poles_from_spec)

plant = PlantParams(k_p=6.0, k_d=25.0, g=9.8)
spec = PoleSpec(rl=12.0, iml=0.1, imr=0.55)

poles = poles_from_spec(spec)
print("target poles:")
for p in poles:
    print(f"   {p:+.3f}")

target = desired_polynomial(poles)
print("\ntarget characteristic polynomial (monic, descending):")
print("  ", "  ".join(f"{c:.10g}" for c in target))

gains = place_gains(plant, poles)
print("\nfeedback gains (u = -K x):")
print(f"   k_pos  = {gains.k_pos:+.7f}  rad/m")
print(f"   k_vel  = {gains.k_vel:+.7f}  rad s/m")
print(f"   k_tilt = {gains.k_tilt:+.7f}")
print(f"   k_rate = {gains.k_rate:+.7f}  s")
print(f"   k1     = {gains.k1:+.7f}  rad/m   (pairwise stiffness, defaults to k_pos)")

achieved = closed_loop_polynomial(plant, gains)
residual = max(abs(a - b) for a, b in zip(achieved, target))
print(f"\nclosed-loop polynomial reproduces the target to {residual:.3g}")

# independent check through the eigenvalues of A - B K
A = np.array([[0, 1, 0, 0],
              [0, 0, plant.g, 0],
              [0, 0, 0, 1],
              [0, 0, -plant.k_p * plant.k_d, -plant.k_d]])
B = np.array([[0], [0], [0], [plant.k_p * plant.k_d]])
K = np.array([[gains.k_pos, gains.k_vel, gains.k_tilt, gains.k_rate]])
print("\neigenvalues of the closed loop:")
for ev in sorted(np.linalg.eigvals(A - B @ K), key=lambda z: (z.real, z.imag)):
    print(f"   {ev:+.6f}")

# alternative closed-form evaluation, kept as a cross-check: note the
# transposed first two entries and the +1 folded into the third
direct = direct_gain_formula(plant, poles)
print("\ndirect closed-form evaluation (printed order):")
print("  ", "  ".join(f"{v:+.7f}" for v in direct))
print("   -> entry1 = k_vel, entry2 = k_pos, entry3 = 1 + k_tilt, entry4 = k_rate")
