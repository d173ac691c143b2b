"""The spiral model: a green point on a circle and a small relation ledger.

Run: python3 demos/spiral_ec.py
"""

import math
from fractions import Fraction

from greenlab.spiral import PlaneSystem, SpiralParams, ec_search, green_member, projection_scan, relation_ledger

ONE = SpiralParams.make(1)
CIRCLE = PlaneSystem.circle(3, 1)


def main():
    scan = projection_scan(ONE, CIRCLE, (0, 2), 200)
    print("s-intervals with a nonempty fiber:", [(round(a, 3), round(b, 3)) for a, b in scan.intervals])

    (cert,) = ec_search(ONE, CIRCLE)
    print(f"certificate: s = {cert.s_coords[0]}, t = {cert.t:.12f}, residual = {cert.residual:.1e}")

    # the point is green by construction; reading it back recovers the rational s
    x = math.exp(cert.t + 0.7) * math.cos(cert.t)
    y = math.exp(cert.t + 0.7) * math.sin(cert.t)
    print("membership:", green_member(ONE, (x, y)).s_coords)

    rep = relation_ledger(ONE, [([(1, "1")], [Fraction(1, 3)]), ([(2, "1")], [Fraction(2, 3)])])
    print("md of two samples:", rep.md_exact, " relations:", rep.relations.basis.rows)


if __name__ == "__main__":
    main()
