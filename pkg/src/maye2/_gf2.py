"""GF(2) linear algebra on int bitsets (row = Python int, bit i = column i)."""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

__all__ = ["Echelon", "gf2_rank"]


class Echelon:
    """Incremental reduced echelon form with combination tracking.

    Each inserted row is remembered; `combo` bitmasks refer to insertion order,
    so a solved target can be expressed as an XOR of original rows.
    """

    def __init__(self):
        self.pivots: Dict[int, Tuple[int, int]] = {}  # pivot bit -> (row, combo)
        self.n_inserted = 0

    def _reduce(self, row: int, combo: int) -> Tuple[int, int]:
        while row:
            b = row.bit_length() - 1
            hit = self.pivots.get(b)
            if hit is None:
                return row, combo
            row ^= hit[0]
            combo ^= hit[1]
        return row, combo

    def insert(self, row: int) -> bool:
        """Insert a row; returns True when it enlarged the row space."""
        combo = 1 << self.n_inserted
        self.n_inserted += 1
        row, combo = self._reduce(row, combo)
        if not row:
            return False
        self.pivots[row.bit_length() - 1] = (row, combo)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, target: int) -> Optional[int]:
        """Combination bitmask of inserted rows XOR-ing to target, or None."""
        row, combo = self._reduce(target, 0)
        return None if row else combo

    def contains(self, target: int) -> bool:
        return self.solve(target) is not None


def gf2_rank(rows: Iterable[int]) -> int:
    ech = Echelon()
    for r in rows:
        ech.insert(r)
    return ech.rank
