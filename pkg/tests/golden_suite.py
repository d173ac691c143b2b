"""Golden CLI transcripts: one command per case, stored under tests/golden/.

Run this file directly with --regen to rewrite the transcripts after an
intended output change.
"""

import io
import shlex
import sys
from pathlib import Path

from greenlab.cli import run

HERE = Path(__file__).resolve().parent
GOLDEN = HERE / "golden"
CONFIGS = HERE.parent / "demos" / "configs"

CASES = [
    ("validate_square", "validate {cfg}/square.gp"),
    ("validate_zero", "validate {cfg}/zero.gp"),
    ("validate_const", "validate {cfg}/const.gp"),
    ("delta_z1", "delta {cfg}/square.gp --points z1"),
    ("delta_all", "delta {cfg}/square.gp --points z1,z2"),
    ("trd_square", "trd {cfg}/square.gp --points z1,z2"),
    ("md_square", "md {cfg}/square.gp --points z1"),
    ("strong_w", "strong {cfg}/wexample.gp --selection X"),
    ("hull_w", "hull {cfg}/wexample.gp --selection X"),
    ("dim_w", "dim {cfg}/wexample.gp --points z"),
    ("clmember_w", "clmember {cfg}/wexample.gp --point w --over-points z"),
    ("classify_w", "classify {cfg}/wexample.gp --x-points z --y-points z,w"),
    ("rotund_square", "rotund {cfg}/square.gp --points z1,z2 --bound 2"),
    ("rotund_tsv", "--format tsv rotund {cfg}/square.gp --points z1 --bound 2"),
    ("hyperplane_n1", "hyperplane --n 1"),
    ("phi_holds", "phi-check {cfg}/real.gp --points a,b --mu A,B"),
    ("phi_fails", "phi-check {cfg}/real.gp --points a,b --mu B"),
    ("phi_base", "phi-check {cfg}/real.gp --points a,b --mu A --cosets C --base-relative"),
    ("amalgamate_square", "amalgamate {cfg}/square.gp {cfg}/square.gp --x-points z1 --bound 2"),
    ("amalgamate_w", "amalgamate {cfg}/wexample.gp {cfg}/wexample.gp --x-points z"),
    ("copies_square", "copies {cfg}/square.gp --x-points z1 --k 3 --bound 2"),
    ("spiral_point", "spiral-point --beta 1 --t 0 --s 1"),
    ("spiral_member", "spiral-member --beta 1 --point 2.718281828459045,0"),
    ("spiral_nonmember", "spiral-member --beta 2*pi --denom-bound 50 --point 2,0"),
    ("spiral_fiber", "spiral-fiber --beta 1 --circle 3 1 --s 0.7"),
    ("spiral_scan", "spiral-scan --beta 1 --circle 3 1 --grid 40"),
    ("spiral_ec", "spiral-ec --beta 1 --circle 3 1"),
    ("spiral_ec_file", "spiral-ec {cfg}/circle.gp"),
    ("spiral_ec_empty", "spiral-ec --beta 1 --eq 1 --grid 10"),
    ("ledger", "ledger --beta 1 --sample 1;0 --sample 2;0"),
    ("parse_error", "validate {cfg}/bad.gp"),
    ("missing_file", "validate {cfg}/missing.gp"),
    ("overflow", "spiral-point --beta 1 --t 1000 --s 0"),
]


def argv_for(cmd: str):
    return [a.replace("{cfg}", str(CONFIGS)) for a in shlex.split(cmd)]


def transcript(cmd: str) -> str:
    out, err = io.StringIO(), io.StringIO()
    code = run(argv_for(cmd), out, err)
    text = f"$ greenlab {cmd}\n{out.getvalue()}"
    if err.getvalue():
        text += "[stderr]\n" + err.getvalue()
    text += f"[exit {code}]\n"
    return text.replace(str(CONFIGS), "{cfg}")


def golden_path(name: str) -> Path:
    return GOLDEN / f"{name}.txt"


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, cmd in CASES:
        golden_path(name).write_text(transcript(cmd), encoding="utf-8")


if __name__ == "__main__":
    if "--regen" in sys.argv:
        regenerate()
    for name, cmd in CASES:
        print(transcript(cmd), end="")
