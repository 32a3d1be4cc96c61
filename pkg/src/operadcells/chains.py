"""Chain patterns: weak orders with strict separators on a set of length
variables, pinned between the endpoints 0 and 1.

A pattern is a tuple of blocks, bottom (nearest 0) to top (nearest 1),
each block a sorted tuple of variable names.  The pattern with m blocks
names an m-simplex in the order-complex triangulation of a cube; its
vertices run from the all-zero end to the all-one end.  Face i merges a
separator: face 0 pins the top block at 1, face m sends the bottom block
to 0, and intermediate faces merge two adjacent blocks.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


@lru_cache(maxsize=None)
def ordered_partitions_tuple(items: tuple) -> tuple:
    return tuple(ordered_partitions(items))


def ordered_partitions(items):
    """All ordered partitions of `items` into nonempty blocks, each block
    sorted, in a deterministic order."""
    items = tuple(sorted(items))
    if not items:
        yield ()
        return
    for k in range(1, len(items) + 1):
        for first in combinations(items, k):
            remaining = tuple(x for x in items if x not in first)
            for tail in ordered_partitions(remaining):
                yield (first,) + tail


def pattern_face(pattern, i):
    """Face i of the simplex named by `pattern`.

    Returns ("pin", blocks, top_block), ("merge", blocks) or
    ("zero", bottom_block, blocks)."""
    m = len(pattern)
    if not 0 <= i <= m:
        raise IndexError(f"face index {i} out of range for an {m}-simplex")
    if i == 0:
        return ("pin", pattern[:-1], pattern[-1])
    if i == m:
        return ("zero", pattern[0], pattern[1:])
    pos = m - i - 1
    merged = tuple(sorted(pattern[pos] + pattern[pos + 1]))
    return ("merge", pattern[:pos] + (merged,) + pattern[pos + 2:])


def variable_levels(pattern, pinned):
    """Level of each variable: 1..m for blocks bottom to top, and the
    symbolic top level for pinned variables."""
    m = len(pattern)
    lv = {v: m + 1 for v in pinned}
    for i, blk in enumerate(pattern, start=1):
        for v in blk:
            lv[v] = i
    return lv


def rational_sample(pattern, pinned):
    """A rational point in the open simplex: block j of m sits at
    j/(m+1), pinned variables at 1."""
    from fractions import Fraction

    m = len(pattern)
    pt = {v: Fraction(1) for v in pinned}
    for j, blk in enumerate(pattern, start=1):
        for v in blk:
            pt[v] = Fraction(j, m + 1)
    return pt
