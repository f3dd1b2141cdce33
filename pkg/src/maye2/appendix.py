"""Loaders for the golden fixture files shipped with the package."""
from __future__ import annotations

import os
import re
from typing import Dict, List, Optional, Tuple

__all__ = [
    "fixture_dir", "hx17_relation_lines", "stage_chart", "groebner_lines",
    "family_lines", "d3_table_lines",
]

_DEFAULT = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_dir(override: Optional[str] = None) -> str:
    if override:
        return override
    return os.environ.get("MAYE2_FIXTURES", _DEFAULT)


def _read(name: str, fixtures: Optional[str] = None) -> List[str]:
    path = os.path.join(fixture_dir(fixtures), name)
    out = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out


def hx17_relation_lines(fixtures: Optional[str] = None) -> List[str]:
    return _read("hx17_relations.txt", fixtures)


class StageChart:
    def __init__(self, stage: int):
        self.stage = stage
        self.ann_input: Optional[str] = None
        self.ann_gens: List[str] = []
        self.part_i: List[str] = []
        self.part_ii: List[str] = []


def stage_chart(fixtures: Optional[str] = None) -> Dict[int, StageChart]:
    charts: Dict[int, StageChart] = {}
    cur: Optional[StageChart] = None
    section = None
    for line in _read("stage_charts.txt", fixtures):
        m = re.fullmatch(r"stage (\d+):", line)
        if m:
            cur = StageChart(int(m.group(1)))
            charts[cur.stage] = cur
            section = None
            continue
        m = re.fullmatch(r"ann (r_\d+): (.*)", line)
        if m:
            cur.ann_input = m.group(1)
            cur.ann_gens = [x.strip() for x in m.group(2).split(";")]
            continue
        if line == "part-i:":
            section = "i"
            continue
        if line == "part-ii:":
            section = "ii"
            continue
        (cur.part_i if section == "i" else cur.part_ii).append(line)
    return charts


def groebner_lines(fixtures: Optional[str] = None) -> List[str]:
    return _read("hx7_groebner.txt", fixtures)


def family_lines(fixtures: Optional[str] = None) -> Dict[str, List[str]]:
    out: Dict[str, List[str]] = {}
    cur = None
    for line in _read("relations_by_family.txt", fixtures):
        m = re.fullmatch(r"family (\w+):", line)
        if m:
            cur = out.setdefault(m.group(1), [])
            continue
        cur.append(line)
    return out


def d3_table_lines(fixtures: Optional[str] = None) -> List[str]:
    return _read("d3_table.txt", fixtures)
