"""GF(2) linear algebra on Python integers used as bit vectors.

Row ``i`` of a matrix is an ``int`` whose bit ``j`` is the entry in column
``j``.  XOR is row addition; big-int operations keep this fast for the
sparse boundary matrices we feed it.
"""

from __future__ import annotations

from typing import Iterable


def to_bits(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


class XorBasis:
    """Incremental echelon basis keyed by leading bit."""

    def __init__(self):
        self._pivots: dict[int, int] = {}

    def __len__(self):
        return len(self._pivots)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            p = self._pivots.get(top)
            if p is None:
                return v
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True when it was independent."""
        v = self.reduce(v)
        if not v:
            return False
        self._pivots[v.bit_length() - 1] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0


def rank(rows: Iterable[int]) -> int:
    basis = XorBasis()
    for r in rows:
        basis.add(r)
    return len(basis)


def rank_of_sets(sets: Iterable[Iterable[int]]) -> int:
    """Rank of the span of indicator vectors of the given index sets."""
    return rank(to_bits(s) for s in sets)
