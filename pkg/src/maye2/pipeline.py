"""The staged computation of HX_7: seed, seven adjunctions, final reduced basis."""
from __future__ import annotations

import os
import time
from typing import Callable, Dict, List, Optional

from . import appendix
from .f2alg import Poly
from .groebner import GroebnerBasis
from .presentation import (Presentation, adjoin_variable, eliminate_generators,
                           parse_relation, resolve_extensions, seed_hx17)
from .presfile import write_presentation

__all__ = ["PipelineResult", "run_pipeline"]


class PipelineResult:
    def __init__(self):
        self.seed: Optional[Presentation] = None
        self.stages: Dict[int, Presentation] = {}
        self.e0s: Dict[int, object] = {}
        self.final: Optional[Presentation] = None
        self.timings: Dict[str, float] = {}

    @property
    def final_gb(self) -> GroebnerBasis:
        return self.final.gb


def run_pipeline(n: int = 7, fixtures: Optional[str] = None,
                 out_dir: Optional[str] = None,
                 log: Optional[Callable[[str], None]] = None) -> PipelineResult:
    """Compute HX_{n,1..n} by adjoining R_01..R_0n to the seed presentation."""
    if n != 7:
        raise ValueError("the staged computation is implemented for n = 7")
    say = log or (lambda s: None)
    res = PipelineResult()
    t0 = time.time()
    res.seed = seed_hx17(appendix.hx17_relation_lines(fixtures))
    res.timings["seed"] = time.time() - t0
    say(f"seed: {len(res.seed.gb)} basis elements")
    pres = res.seed
    for stage in range(1, n + 1):
        t1 = time.time()
        e0 = adjoin_variable(pres, stage, n)
        pres = resolve_extensions(e0)
        res.e0s[stage] = e0
        res.stages[stage] = pres
        res.timings[f"stage{stage}"] = time.time() - t1
        say(f"stage {stage}: +{e0.new_names} gb={len(pres.gb)} "
            f"({res.timings[f'stage{stage}']:.0f}s)")
        if out_dir:
            path = os.path.join(out_dir, f"hx_{n}_{stage}.pres")
            write_presentation(path, pres, getattr(pres, "stage_sections", None),
                               descriptor=f"complex Xnk {n} {stage}",
                               header=f"stage {stage} presentation")
    t1 = time.time()
    drop = [c.name for c in pres.classes if c.kind == "r"]
    res.final = eliminate_generators(pres, drop)
    res.timings["eliminate"] = time.time() - t1
    res.timings["total"] = time.time() - t0
    say(f"final: {res.final.ring.ngens} generators, "
        f"{len(res.final.gb)} reduced basis elements")
    if out_dir:
        write_presentation(os.path.join(out_dir, f"hx_{n}_final.pres"), res.final,
                           descriptor=f"complex X {n}",
                           header="generators and reduced relations")
    return res
