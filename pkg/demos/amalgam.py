"""Free amalgam of two extensions of a strong selection, and iterated copies.

Run: python3 demos/amalgam.py
"""

from greenlab.amalgam import free_amalgam, iterate_copies, verify_amalgam
from greenlab.cli import parse_config
from greenlab.config import SubSelection, delta

Y_TEXT = """transcendentals t1 t2 s1
green x1 = (t1, t2)
green n1 = (s1 + t1, 1)
"""

Z_TEXT = """transcendentals t1 t2 s1 s2
green x1 = (t1, t2)
green n1 = (s1, s2)
"""


def main():
    Y = parse_config(Y_TEXT).config
    Z = parse_config(Z_TEXT).config
    X = SubSelection.of(Y, ["x1"])
    a = free_amalgam(X, Y, Z, 2)
    print("transcendentals:", " ".join(a.result.transcendentals))
    print("points:", " ".join(a.result.point_names))
    print("Z renamed:", a.embed_Z, a.freshness)
    rep = verify_amalgam(a, 2, Y, Z)
    print("verified:", rep)
    print("delta of the amalgam:", delta(a.result, a.result.point_names))

    k3 = iterate_copies(X, Y, 3, 2)
    print("3 copies over x1:", " ".join(k3.point_names), " delta =", delta(k3, k3.point_names))


if __name__ == "__main__":
    main()
