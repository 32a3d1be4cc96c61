"""The W-construction associahedra as simplicial complexes.

Cells are pairs (stable tree, pinned internal edges): the metric trees
of that shape whose pinned edges have length 1 and whose other internal
edges lie in (0,1).  Edges of length 0 never appear; they are contracted
away, which is how neighbouring cubes glue.  Each cube carries its
order-complex triangulation, so a simplex is (tree, pinned, pattern).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .chains import ordered_partitions_tuple, pattern_face
from .complexes import CellularMap, SimplicialComplex, identity_surj, product_complex
from .trees import InvalidTreeError, RibbonTree, contract_edges, enumerate_stable_trees, graft


def simplex_key(r, shape, pinned, pattern):
    return ("kw", r, shape, tuple(sorted(pinned)), tuple(pattern))


def cell_key(r, shape, pinned):
    return ("kwcell", r, shape, tuple(sorted(pinned)))


@lru_cache(maxsize=None)
def _contracted(shape, edges):
    tree, vmap = contract_edges(RibbonTree(shape), edges)
    return tree.shape, tuple(sorted(vmap.items()))


def cube_face(r, shape, pinned, pattern, i):
    """Target key of face i of the simplex (tree, pinned, pattern):
    pinning grows `pinned`, a zero-merge contracts tree edges."""
    data = pattern_face(pattern, i)
    if data[0] == "pin":
        _, blocks, top = data
        return simplex_key(r, shape, tuple(sorted(pinned + top)), blocks)
    if data[0] == "merge":
        return simplex_key(r, shape, pinned, data[1])
    _, bottom, blocks = data
    new_shape, vitems = _contracted(shape, bottom)
    vmap = dict(vitems)
    new_pinned = tuple(sorted(vmap[e] for e in pinned))
    new_blocks = tuple(tuple(sorted(vmap[e] for e in blk)) for blk in blocks)
    return simplex_key(r, new_shape, new_pinned, new_blocks)


@lru_cache(maxsize=None)
def associahedron_complex(r: int) -> SimplicialComplex:
    """All cube cells over stable trees with r leaves, glued along
    zero-length contractions; boundary cells are those with a pinned edge."""
    if r < 1:
        raise InvalidTreeError("arity must be at least 1")
    gens = {}
    cells = {}
    boundary = []
    for t in enumerate_stable_trees(r):
        edges = tuple(sorted(t.internal_edges()))
        for k in range(len(edges) + 1):
            for pinned in combinations(edges, k):
                free = tuple(e for e in edges if e not in pinned)
                ck = cell_key(r, t.shape, pinned)
                members = []
                for pattern in ordered_partitions_tuple(free):
                    key = simplex_key(r, t.shape, pinned, pattern)
                    n = len(pattern)
                    faces = tuple(
                        ("f", cube_face(r, t.shape, pinned, pattern, i))
                        for i in range(n + 1)
                    ) if n else ()
                    gens[key] = (n, faces)
                    members.append(key)
                cells[ck] = members
                if pinned:
                    boundary.append(ck)
    return SimplicialComplex.assemble(
        gens,
        cells,
        label=f"kw-{r}",
        meta={"kind": "kw", "r": r, "boundary_cells": boundary},
    )


def cube_cell_census(r: int) -> int:
    """Number of cube cells: one per (tree, pinned subset)."""
    return sum(2 ** len(t.internal_edges()) for t in enumerate_stable_trees(r))


@lru_cache(maxsize=None)
def composition_map(r: int, s: int, i: int):
    """The operadic composition as a cellular map from the product of two
    associahedra: graft at leaf i, with the new internal edge pinned at 1."""
    if not 1 <= i <= r:
        raise InvalidTreeError(f"composition index {i} out of range 1..{r}")
    kr = associahedron_complex(r)
    ks = associahedron_complex(s)
    kt = associahedron_complex(r + s - 1)
    prod = product_complex([kr, ks], label=f"kw-{r}x{s}")
    entries = []
    for key in prod.keys:
        pairs = key[2]
        (i1, h1), (i2, h2) = pairs
        _, _, sh1, pin1, pat1 = kr.keys[i1]
        _, _, sh2, pin2, pat2 = ks.keys[i2]
        tkey = _composed_simplex(r, s, i, sh1, pin1, pat1, h1, sh2, pin2, pat2, h2)
        n = len(h1) - 1
        entries.append((kt.index[tkey], identity_surj(n)))
    return CellularMap(prod, kt, entries, label=f"kw-compose-{r},{s}@{i}")


def _composed_simplex(r, s, i, sh1, pin1, pat1, h1, sh2, pin2, pat2, h2):
    tree, new_edge = graft(RibbonTree(sh1), RibbonTree(sh2), i)
    at = RibbonTree(sh1).leaf_paths()[i - 1]
    pinned = list(pin1) + [at + q for q in pin2]
    if new_edge is not None:
        pinned.append(new_edge)
    # vertex j of a pattern simplex has its top j blocks at 1: the factor
    # block advancing to 1 at joint step t is the h[t]-th from the top, and
    # it sits at joint level n+1-t, so steps are read in reverse
    n = len(h1) - 1
    blocks = []
    for t in range(n, 0, -1):
        blk = []
        if h1[t] > h1[t - 1]:
            blk.extend(pat1[len(pat1) - h1[t]])
        if h2[t] > h2[t - 1]:
            blk.extend(at + q for q in pat2[len(pat2) - h2[t]])
        blocks.append(tuple(sorted(blk)))
    return simplex_key(r + s - 1, tree.shape, tuple(sorted(pinned)), tuple(blocks))
