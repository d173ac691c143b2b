"""Rotundity checks: a violated pair and the generic hyperplane loci.

Run: python3 demos/rotundity.py
"""

from pathlib import Path

from greenlab.cli import parse_config
from greenlab.rotund import gen_hyperplane, is_rotund

CONFIGS = Path(__file__).resolve().parent / "configs"


def main():
    sq = parse_config((CONFIGS / "square.gp").read_text()).config
    rep = is_rotund(sq, ["z1", "z2"], 2)
    print("(z1, z2=z1^2) rotund:", rep.rotund, " witness:", rep.verdict.witness.tolist())

    for n in (1, 2):
        c, locus = gen_hyperplane(parse_config("").config, n)
        rep = is_rotund(c, locus.witness, 2)
        print(f"hyperplane n={n}: dim = {rep.dim}, rotund = {rep.rotund}, "
              f"strict = {not rep.strict_verdict.violated}")


if __name__ == "__main__":
    main()
