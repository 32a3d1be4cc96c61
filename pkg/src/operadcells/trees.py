"""Stable rooted ribbon trees.

A rooted ribbon tree is encoded by its shape: a leaf is the empty tuple
and an interior vertex is the tuple of its children, ordered left to
right.  The encoding is the canonical form, so structural equality of
shapes is equality of isomorphism classes.  Vertices are addressed by
paths: the root is (), the j-th child of the vertex at path p is
p + (j,).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class InvalidTreeError(ValueError):
    pass


@dataclass(frozen=True)
class RibbonTree:
    shape: tuple

    def __post_init__(self):
        _check_shape(self.shape)

    # -- basic census ---------------------------------------------------

    @property
    def is_leaf(self) -> bool:
        return self.shape == ()

    def leaf_count(self) -> int:
        return _leaf_count(self.shape)

    def leaf_paths(self) -> list:
        """Paths of the leaves in left-to-right order."""
        out = []
        _collect(self.shape, (), lambda sh: sh == (), out)
        return out

    def interior_paths(self) -> list:
        """Paths of vertices with at least one child, preorder."""
        out = []
        _collect(self.shape, (), lambda sh: sh != (), out)
        return out

    def interior_count(self) -> int:
        return len(self.interior_paths())

    def vertex_paths(self) -> list:
        out = []
        _collect(self.shape, (), lambda sh: True, out)
        return out

    def subtree(self, path) -> tuple:
        sh = self.shape
        for j in path:
            sh = sh[j]
        return sh

    def arity(self, path) -> int:
        return len(self.subtree(path))

    def internal_edges(self) -> list:
        """Paths of non-root interior vertices; the edge is the one above
        the vertex.  Both endpoints of such an edge are interior."""
        return [p for p in self.interior_paths() if p != ()]

    def is_stable(self) -> bool:
        return all(len(self.subtree(p)) >= 2 for p in self.interior_paths())

    def dimension(self) -> int:
        """r - (number of interior vertices) - 1; the codimension of the
        corresponding cube cell in the W-construction associahedron."""
        r = self.leaf_count()
        if r < 2:
            raise InvalidTreeError("dimension is undefined for the one-leaf tree")
        if not self.is_stable():
            raise InvalidTreeError("dimension is defined for stable trees only")
        return r - self.interior_count() - 1

    # -- notation --------------------------------------------------------

    def format(self) -> str:
        return _format(self.shape)

    @staticmethod
    def parse(text: str) -> "RibbonTree":
        shape, rest = _parse(text.strip())
        if rest:
            raise InvalidTreeError(f"trailing input {rest!r}")
        return RibbonTree(shape)

    def __repr__(self):
        return f"RibbonTree({self.format()!r})"


def _check_shape(shape):
    if not isinstance(shape, tuple):
        raise InvalidTreeError(f"tree shapes are tuples, got {type(shape).__name__}")
    for c in shape:
        _check_shape(c)


def _leaf_count(shape):
    if shape == ():
        return 1
    return sum(_leaf_count(c) for c in shape)


def _collect(shape, path, keep, out):
    if keep(shape):
        out.append(path)
    for j, c in enumerate(shape):
        _collect(c, path + (j,), keep, out)


def _format(shape):
    if shape == ():
        return "*"
    return "(" + "".join(_format(c) for c in shape) + ")"


def _parse(text):
    if not text:
        raise InvalidTreeError("empty tree expression")
    if text[0] == "*":
        return (), text[1:]
    if text[0] != "(":
        raise InvalidTreeError(f"unexpected {text[0]!r}")
    rest = text[1:]
    children = []
    while rest and rest[0] != ")":
        child, rest = _parse(rest)
        children.append(child)
    if not rest:
        raise InvalidTreeError("unbalanced parentheses")
    return tuple(children), rest[1:]


# -- enumeration ----------------------------------------------------------


def enumerate_stable_trees(r: int) -> list:
    """One representative per isomorphism class of stable rooted ribbon
    trees with r leaves, in a fixed deterministic order."""
    if r < 1:
        raise InvalidTreeError("need at least one leaf")
    return [RibbonTree(sh) for sh in _enum_shapes(r)]


@lru_cache(maxsize=None)
def _enum_shapes(r: int) -> tuple:
    if r == 1:
        return ((),)
    out = []
    for k in range(2, r + 1):
        for comp in _compositions(r, k):
            for combo in _product_of_shapes(comp):
                out.append(tuple(combo))
    return tuple(sorted(out))


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _product_of_shapes(comp):
    if not comp:
        yield ()
        return
    for head in _enum_shapes(comp[0]):
        for tail in _product_of_shapes(comp[1:]):
            yield (head,) + tail


# -- grafting and contraction ---------------------------------------------


def graft(t1: RibbonTree, t2: RibbonTree, i: int):
    """Replace the i-th leaf (1-based) of t1 by the root of t2.

    Returns (tree, new_edge) where new_edge is the path of the grafting
    edge when it is internal to the result (both grafted trees have an
    interior vertex at the junction), else None.  Internal edges of t1
    keep their paths; those of t2 are prefixed by the junction path.
    """
    leaves = t1.leaf_paths()
    if not 1 <= i <= len(leaves):
        raise InvalidTreeError(f"leaf index {i} out of range 1..{len(leaves)}")
    at = leaves[i - 1]
    shape = _replace(t1.shape, at, t2.shape)
    new_edge = at if (t2.shape != () and at != ()) else None
    return RibbonTree(shape), new_edge


def _replace(shape, path, repl):
    if not path:
        return repl
    j = path[0]
    return shape[:j] + (_replace(shape[j], path[1:], repl),) + shape[j + 1:]


def contract_edges(tree: RibbonTree, edges):
    """Contract a set of internal edges (given by their lower-vertex
    paths), splicing child order.

    Returns (tree, vertex_map) where vertex_map sends every old vertex
    path to its path in the contracted tree; a contracted vertex maps to
    the vertex it was merged into.  For a surviving internal edge p the
    image edge is vertex_map[p].
    """
    e0 = frozenset(tuple(p) for p in edges)
    internal = set(tree.internal_edges())
    for p in e0:
        if p not in internal:
            raise InvalidTreeError(f"{p} is not an internal edge")
    vmap = {}

    def build(shape, oldpath, newpath):
        vmap[oldpath] = newpath
        slots = []

        def splice(sh, pth):
            for j, c in enumerate(sh):
                p = pth + (j,)
                if p in e0:
                    vmap[p] = newpath
                    splice(c, p)
                else:
                    slots.append((p, c))

        splice(shape, oldpath)
        return tuple(
            build(c, p, newpath + (j,)) for j, (p, c) in enumerate(slots)
        )

    return RibbonTree(build(tree.shape, (), ())), vmap


LEAF = RibbonTree(())


def corolla(r: int) -> RibbonTree:
    if r < 2:
        raise InvalidTreeError("a corolla has at least two leaves")
    return RibbonTree(((),) * r)
