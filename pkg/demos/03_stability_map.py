"""Where is the constant-coefficient scheme stable?

m(c, d, r) is the largest amplification over all Fourier modes. A text map of
m over (c, r) at d = 0 shows the stable region, and the orthotope check
certifies a whole box of parameters at once.
"""

import numpy as np

from ader_adr.stability import Orthotope, check_orthotope, m_theta

cs = np.linspace(0.0, 1.3, 14)
rs = np.linspace(0.0, -2.0, 9)

print("r \\ c " + "".join(f"{c:5.1f}" for c in cs))
for r in rs:
    row = "".join("    #" if m_theta(c, 0.0, r) <= 1 + 1e-12 else "    ." for c in cs)
    print(f"{r:6.2f}" + row)
print("# stable, . unstable")

for box in (Orthotope(1.0, 0.25, -0.5), Orthotope(1.2, 0.25, -0.5)):
    rep = check_orthotope(box)
    print(f"{box}: max |A| = {rep.max_norm:.6f}, stable = {rep.stable}")
