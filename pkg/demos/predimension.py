"""Predimension of a generic green point and its square, and the w example.

Run: python3 demos/predimension.py
"""

from pathlib import Path

from greenlab.cli import parse_config
from greenlab.config import SubSelection, delta, hull, is_strong, md_cl_green, trd, validate

CONFIGS = Path(__file__).resolve().parent / "configs"


def load(name):
    c = parse_config((CONFIGS / name).read_text()).config
    validate(c)
    return c


def main():
    sq = load("square.gp")
    for pts in (["z1"], ["z2"], ["z1", "z2"]):
        print(f"{','.join(pts):6s} trd = {trd(sq, pts)}  md = {md_cl_green(sq, pts)}  delta = {delta(sq, pts)}")

    # z2 = z1^2, so the relation [2 -1] keeps md at 1 and delta stays 1 on the pair
    w = load("wexample.gp")
    X = SubSelection.of(w, ["z"])
    v = is_strong(w, X, 2)
    print("X = {z} strong:", not v.violated, " witness:", v.witness.tolist() if v.witness is not None else None)
    H, verdict = hull(w, X, 2)
    print("hull green words:", [list(v) for v in H.words()], " search:", verdict.status)


if __name__ == "__main__":
    main()
