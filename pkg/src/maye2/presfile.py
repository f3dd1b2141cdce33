"""Presentation files mirroring the chart layout (generators, part-i, part-ii)."""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .f2alg import Poly, Ring, TriDegree
from .maycomplex import from_descriptor
from .presentation import (NamedClass, Presentation, attach_named_resolver,
                           parse_relation)

__all__ = ["write_presentation", "read_presentation_file"]


def write_presentation(path: str, pres: Presentation,
                       sections: Optional[List[Tuple[str, Poly, Poly]]] = None,
                       descriptor: str = "", header: str = ""):
    """Emit generators (name, s, t, v) and relations as `lhs = rhs` lines."""
    lines = []
    if header:
        for ln in header.splitlines():
            lines.append(f"# {ln}")
    if descriptor:
        lines.append(f"ambient: {descriptor}")
    lines.append("generators:")
    for c in pres.classes:
        d = c.degree
        lines.append(f"{c.name} {d.s} {d.t} {d.v}")
    if sections:
        current = None
        for section, lhs, ext in sections:
            if section != current:
                lines.append(f"{section}:")
                current = section
            lines.append(f"{lhs} = {ext if ext else 0}")
    else:
        lines.append("relations:")
        for p in sorted(pres.relations, key=lambda q: q.sort_key()):
            lines.append(f"{p} = 0")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_presentation_file(path: str):
    """Parse a presentation file; returns (descriptor, ring, sections dict)."""
    descriptor = None
    gens: List[Tuple[str, TriDegree]] = []
    sections: Dict[str, List[str]] = {}
    mode = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("ambient:"):
                descriptor = line.split(":", 1)[1].strip()
                continue
            if line.endswith(":") and " " not in line:
                mode = line[:-1]
                if mode != "generators":
                    sections.setdefault(mode, [])
                continue
            if mode == "generators":
                name, s, t, v = line.split()
                s, t, v = int(s), int(t), int(v)
                gens.append((name, TriDegree(s, t, v - s)))
            elif mode is not None:
                sections[mode].append(line)
            else:
                raise ValueError(f"line outside any section: {line!r}")
    ring = Ring(gens)
    attach_named_resolver(ring)
    parsed = {k: [parse_relation(ring, ln) for ln in v] for k, v in sections.items()}
    return descriptor, ring, parsed
