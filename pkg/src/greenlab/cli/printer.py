"""Canonical text form of a parsed document (parse(print(doc)) reproduces doc)."""

from __future__ import annotations

from typing import List

from ..config.model import Configuration
from ..exactalg.poly import format_poly
from .parser import ConfigDocument


def _row(r) -> str:
    return "[" + " ".join(str(x) for x in r) + "]"


def _point_lines(config: Configuration, names, indent: str = "") -> List[str]:
    out = []
    for name in names:
        x, y = config.coords(name)
        kw = "green" if config.is_green(name) else "point"
        out.append(f"{indent}{kw} {name} = ({x}, {y})")
    return out


def print_config(config: Configuration) -> str:
    """A configuration alone, with its base block first."""
    lines: List[str] = []
    base = config.base
    skip_t, skip_p = set(), set()
    if base is not None:
        lines.append("base {")
        lines.append("  transcendentals " + " ".join(base.transcendentals))
        lines.extend(_point_lines(base, base.point_names, "  "))
        lines.append("}")
        skip_t = set(base.transcendentals)
        skip_p = set(base.point_names)
    own = [t for t in config.transcendentals if t not in skip_t]
    if own:
        lines.append("transcendentals " + " ".join(own))
    lines.extend(_point_lines(config, [p for p in config.point_names if p not in skip_p]))
    return "\n".join(lines) + "\n"


def print_document(doc: ConfigDocument) -> str:
    out = [print_config(doc.config).rstrip("\n")]
    for name, (pts, rows) in doc.selection_src.items():
        s = f"selection {name} = points({', '.join(pts)})"
        if rows:
            s += " greens(" + "; ".join(_row(r) for r in rows) + ")"
        out.append(s)
    for name, sysm in doc.systems.items():
        out.append(f"system {name} {{")
        for p in sysm.equalities:
            out.append(f"  eq {format_poly(p)}")
        for p in sysm.inequalities:
            out.append(f"  gt {format_poly(p)}")
        out.append("}")
    if doc.spiral is not None:
        out.append("spiral {")
        out.append(f"  beta = {doc.spiral_beta_text}")
        out.append("  qbasis = " + " ".join(str(q) for q in doc.spiral.q_basis))
        out.append("}")
    for name, A in doc.mu.items():
        out.append(f"mu {name} = rows(" + "; ".join(_row(r) for r in A.defining.rows) + ")")
    for name, (sub, c) in doc.cosets.items():
        reps = " ".join(f"({z.real_part()}, {z.imag_part()})" for z in c.representative)
        out.append(f"coset {name} = {sub} at {reps}")
    return "\n".join(x for x in out if x) + "\n"
