"""Why "the partial trace does not derive state reduction" is wrong.

After measuring sigma_z on |+>, the object is in I/2, which decomposes as
an equal mixture of |0>,|1> *and* as an equal mixture of |+>,|->.  The
density operator alone cannot choose.  But the per-outcome maps are fixed
uniquely by the operation, and they produce exactly the z-basis branches.
"""

import numpy as np

from reduction_lab import nonuniqueness_exhibit
from reduction_lab.quantum import projector_onto

ex = nonuniqueness_exhibit(2)

print("post-measurement mixture:")
print(np.round(ex.mixed_state.matrix.real, 6))

for label, (weights, states) in zip(("basis", "rotated"), ex.decompositions):
    print(f"\n{label} decomposition:")
    for w, s in zip(weights, states):
        print(f"  weight {w:.2f}, state {np.round(s.vector, 4)}")
    reassembled = sum(w * projector_onto(s.vector) for w, s in zip(weights, states))
    print(f"  reassembly error: {np.max(np.abs(reassembled - ex.mixed_state.matrix)):.1e}")

print("\ninstrument components T_a(|+><+|) -- the physical decomposition:")
for a, image in sorted(ex.component_images.items(), reverse=True):
    print(f"  outcome {a:+.0f}:")
    print(np.round(image.real, 6))
