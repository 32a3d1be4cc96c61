"""Stable tree-pairs: a bubble tree of forks, seams and marks mapped
coherently onto a seam tree.

The canonical representation is a recursive item grammar over a seam
tree whose vertices we address by paths:

    ("m",)               a mark; sits over a leaf of the seam tree
    ("t", items)         a fork with a single seam whose contents keep
                         the fork's own seam-tree vertex (one incoming
                         solid edge)
    ("b", s_1, ..., s_k) a fork whose k seams realize the k incoming
                         edges of its seam-tree vertex; s_j is the tuple
                         of items over the j-th child vertex

Items of a seam are ordered (the ribbon structure).  The grammar is
exactly the class of valid bubble trees, so structural equality is
equality of isomorphism classes.  An explicit graph form and a
bullet-by-bullet validator are provided so that malformed pairs can be
expressed and rejected.

Edge lengths live on the outgoing edges of non-root forks, written
("L", path), and on internal seam-tree edges, written ("l", vertex).
The coherence system ties them: each internal seam edge equals the max
of the fork lengths along each ascent that realizes it, and ascents to
a common single-seam ancestor must have equal maxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .trees import RibbonTree, contract_edges, enumerate_stable_trees

MARK = ("m",)


class InvalidTreePairError(ValueError):
    pass


class InconsistentZeroSetError(ValueError):
    pass


@dataclass(frozen=True)
class TreePair:
    seam: RibbonTree
    root: tuple

    @property
    def key(self):
        return (self.seam.shape, self.root)

    def __repr__(self):
        return f"TreePair({self.seam.format()!r}, {format_item(self.root)!r})"

    # -- traversal -------------------------------------------------------

    def walk(self):
        """Yield (path, item, image) over all items, preorder; the root
        has path ()."""
        stack = [((), self.root, ())]
        while stack:
            path, item, image = stack.pop()
            yield path, item, image
            if item[0] == "t":
                for i, c in reversed(list(enumerate(item[1]))):
                    stack.append((path + ((0, i),), c, image))
            elif item[0] == "b":
                for j, seam in reversed(list(enumerate(item[1:]))):
                    for i, c in reversed(list(enumerate(seam))):
                        stack.append((path + ((j, i),), c, image + (j,)))

    def item_at(self, path):
        item = self.root
        for (j, i) in path:
            item = item[1][i] if item[0] == "t" else item[1 + j][i]
        return item

    def type_vector(self) -> tuple:
        leaves = self.seam.leaf_paths()
        pos = {p: i for i, p in enumerate(leaves)}
        n = [0] * len(leaves)
        for _, item, image in self.walk():
            if item[0] == "m":
                n[pos[image]] += 1
        return tuple(n)

    def variables(self) -> tuple:
        out = [("L", path) for path, item, _ in self.walk() if item[0] != "m" and path != ()]
        out.extend(("l", v) for v in self.seam.internal_edges())
        return tuple(sorted(out))

    def single_seam_fork_count(self) -> int:
        return sum(1 for _, item, _ in self.walk() if item[0] == "t")

    def dimension(self) -> int:
        """Codimension of the pair's cell: |n| + r - #single-seam forks
        - #interior seam vertices - 2."""
        n = self.type_vector()
        return (
            sum(n)
            + len(n)
            - self.single_seam_fork_count()
            - self.seam.interior_count()
            - 2
        )

    def cell_dimension(self) -> int:
        return self.single_seam_fork_count() + self.seam.interior_count() - 1 \
            if self.variables() else 0

    def validate(self) -> list:
        return validate_tree_pair_graph(to_graph(self), self.type_vector())


# -- grammar-level structural check (used by the enumerator) ----------------


def check_structure(pair: TreePair):
    seam = pair.seam

    def check(item, image):
        kind = item[0]
        if kind == "m":
            if seam.subtree(image) != ():
                raise InvalidTreePairError("mark over an interior seam vertex")
            return
        if kind == "t":
            items = item[1]
            if len(items) < 2:
                raise InvalidTreePairError("single-seam fork with fewer than two items")
            for c in items:
                check(c, image)
            return
        if kind == "b":
            seams = item[1:]
            arity = len(seam.subtree(image))
            if arity < 2:
                raise InvalidTreePairError("branch fork over a non-interior seam vertex")
            if len(seams) != arity:
                raise InvalidTreePairError("branch fork seam count mismatch")
            if all(len(s) == 0 for s in seams):
                raise InvalidTreePairError("branch fork with all seams empty")
            for j, s in enumerate(seams):
                for c in s:
                    check(c, image + (j,))
            return
        raise InvalidTreePairError(f"unknown item kind {kind!r}")

    if pair.root[0] == "m" and seam.shape != ():
        raise InvalidTreePairError("mark root needs the one-vertex seam tree")
    check(pair.root, ())


# -- explicit graph form and the bullet validator ----------------------------


@dataclass
class TreePairGraph:
    seam: RibbonTree
    kinds: dict          # vertex id -> "fork" | "seam" | "mark"
    out_edge: dict       # vertex id -> (parent id, "solid" | "dashed") or None
    children: dict       # vertex id -> ordered tuple of child ids
    fmap: dict           # vertex id -> seam-tree vertex path
    root: str


def to_graph(pair: TreePair) -> TreePairGraph:
    kinds, out_edge, children, fmap = {}, {}, {}, {}
    counter = [0]

    def fresh(prefix):
        counter[0] += 1
        return f"{prefix}{counter[0]}"

    def build(item, image, parent):
        kind = item[0]
        if kind == "m":
            v = fresh("m")
            kinds[v] = "mark"
            children[v] = ()
            fmap[v] = image
            out_edge[v] = parent and (parent, "dashed")
            return v
        v = fresh("f")
        kinds[v] = "fork"
        fmap[v] = image
        out_edge[v] = parent and (parent, "dashed")
        seams = [item[1]] if kind == "t" else list(item[1:])
        seam_ids = []
        for j, items in enumerate(seams):
            s = fresh("s")
            kinds[s] = "seam"
            simage = image if kind == "t" else image + (j,)
            fmap[s] = simage
            out_edge[s] = (v, "solid")
            seam_ids.append(s)
            children[s] = tuple(build(c, simage, s) for c in items)
        children[v] = tuple(seam_ids)
        return v

    root = build(pair.root, (), None)
    return TreePairGraph(pair.seam, kinds, out_edge, children, fmap, root)


def validate_tree_pair_graph(g: TreePairGraph, type_vector=None) -> list:
    """Check every defining property of a stable tree-pair on the explicit
    graph; each violation is reported with the offending vertex."""
    report = []
    seam = g.seam
    svertices = set(seam.vertex_paths())

    def incoming(v, kind):
        return [
            c for c in g.children[v] if g.out_edge[c] and g.out_edge[c][1] == kind
        ]

    for v, k in sorted(g.kinds.items()):
        solid_in = incoming(v, "solid")
        dashed_in = incoming(v, "dashed")
        oe = g.out_edge[v]
        if k == "fork":
            if not solid_in:
                report.append(f"{v}: fork with no solid incoming edge")
            if dashed_in:
                report.append(f"{v}: fork with a dashed incoming edge")
            if oe and oe[1] != "dashed":
                report.append(f"{v}: fork with a solid outgoing edge")
        elif k == "seam":
            if solid_in:
                report.append(f"{v}: seam with a solid incoming edge")
            if not oe or oe[1] != "solid":
                report.append(f"{v}: seam without a solid outgoing edge")
        elif k == "mark":
            if g.children[v]:
                report.append(f"{v}: mark has incoming edge")
            if oe and oe[1] != "dashed":
                report.append(f"{v}: mark with a solid outgoing edge")
        if g.fmap[v] not in svertices:
            report.append(f"{v}: image outside the seam tree")
    # stability
    for v, k in sorted(g.kinds.items()):
        if k != "fork":
            continue
        seams = g.children[v]
        if len(seams) == 1:
            if len(g.children[seams[0]]) < 2:
                report.append(f"{v}: single-seam fork whose seam has < 2 items")
        elif seams:
            if all(len(g.children[s]) == 0 for s in seams):
                report.append(f"{v}: branching fork with all seams empty")
    # coherence map conditions
    if g.fmap[g.root] != ():
        report.append("root is not sent to the seam-tree root")
    for v in sorted(g.kinds):
        oe = g.out_edge[v]
        if oe is None:
            continue
        p, kind = oe
        fv, fp = g.fmap[v], g.fmap[p]
        if not (fv == fp or (len(fv) == len(fp) + 1 and fv[: len(fp)] == fp)):
            report.append(f"{v}: image is neither the parent's image nor a child of it")
        if kind == "dashed" and fv != fp:
            report.append(f"{v}: dashed edge not contracted by the coherence map")
        if kind == "solid" and g.kinds[p] == "fork" and len(g.children[p]) == 1:
            if fv != fp:
                report.append(f"{v}: solid edge into a single-seam fork not contracted")
    for v in sorted(g.kinds):
        if g.kinds[v] != "fork" or len(g.children[v]) < 2:
            continue
        arity = len(seam.subtree(g.fmap[v]))
        seams = g.children[v]
        if len(seams) != arity:
            report.append(
                f"{v}: fork realizes {len(seams)} edges, seam tree has {arity}"
            )
            continue
        for j, s in enumerate(seams):
            if g.fmap[s] != g.fmap[v] + (j,):
                report.append(
                    f"{v}: incoming edges not mapped bijectively in order at seam {s}"
                )
    # marks go to leaves with the right fiber counts
    leaves = seam.leaf_paths()
    counts = {p: 0 for p in leaves}
    for v, k in sorted(g.kinds.items()):
        if k != "mark":
            continue
        if g.fmap[v] not in counts:
            report.append(f"{v}: mark not sent to a leaf")
        else:
            counts[g.fmap[v]] += 1
    if type_vector is not None:
        got = tuple(counts[p] for p in leaves)
        if got != tuple(type_vector):
            report.append(f"mark fibers {got} differ from the type {tuple(type_vector)}")
    return report


# -- enumeration ---------------------------------------------------------------


def enumerate_tree_pairs(n) -> tuple:
    """One canonical representative per isomorphism class of stable
    tree-pairs of the given type, deterministically ordered."""
    n = tuple(n)
    if not n or any(x < 0 for x in n) or all(x == 0 for x in n):
        raise InvalidTreePairError("the type must be a nonzero vector of nonnegative ints")
    return _enumerate_cached(n)


@lru_cache(maxsize=None)
def _enumerate_cached(n):
    out = []
    r = len(n)
    for seam in enumerate_stable_trees(r):
        leaves = seam.leaf_paths()
        below = {}
        for v in seam.vertex_paths():
            below[v] = tuple(
                i for i, p in enumerate(leaves) if p[: len(v)] == v
            )
        memo = {}

        def items_for(image, vec):
            key = (image, vec)
            if key in memo:
                return memo[key]
            total = sum(vec)
            out_items = []
            is_leaf = seam.subtree(image) == ()
            if is_leaf and total == 1:
                out_items.append(MARK)
            # single-seam fork: >= 2 items over the same vertex
            if total >= 2:
                for parts in _vector_compositions(vec, minimum_parts=2):
                    for combo in _choices(parts, image, items_for):
                        out_items.append(("t", combo))
            if not is_leaf and total >= 1:
                arity = len(seam.subtree(image))
                per_child = []
                for j in range(arity):
                    child = image + (j,)
                    cvec = tuple(
                        vec[i] if i in set(below[child]) else 0 for i in range(r)
                    )
                    per_child.append(seam_lists(child, cvec))
                for seams in _cartesian(per_child):
                    out_items.append(("b",) + seams)
            memo[key] = tuple(out_items)
            return memo[key]

        def seam_lists(image, vec):
            if sum(vec) == 0:
                return ((),)
            lists = []
            for parts in _vector_compositions(vec, minimum_parts=1):
                for combo in _choices(parts, image, items_for):
                    lists.append(combo)
            return tuple(lists)

        for root in items_for((), n):
            pair = TreePair(seam, root)
            check_structure(pair)
            out.append(pair)
    return tuple(sorted(out, key=lambda p: repr(p.key)))


def _vector_compositions(vec, minimum_parts):
    """Ordered decompositions of a nonzero vector into nonzero vectors."""
    out = []

    def rec(remaining, acc):
        if sum(remaining) == 0:
            if len(acc) >= minimum_parts:
                out.append(tuple(acc))
            return
        for part in _nonzero_subvectors(remaining):
            rest = tuple(a - b for a, b in zip(remaining, part))
            rec(rest, acc + [part])

    rec(tuple(vec), [])
    return out


@lru_cache(maxsize=None)
def _nonzero_subvectors(vec):
    ranges = [range(x + 1) for x in vec]
    out = []

    def rec(i, acc):
        if i == len(vec):
            if any(acc):
                out.append(tuple(acc))
            return
        for v in ranges[i]:
            rec(i + 1, acc + [v])

    rec(0, [])
    return tuple(out)


def _choices(parts, image, items_for):
    """All tuples taking one item per part vector."""
    pools = [items_for(image, part) for part in parts]
    return _cartesian(pools)


def _cartesian(pools):
    out = [()]
    for pool in pools:
        out = [acc + (x,) for acc in out for x in pool]
    return tuple(out)


# -- coherence system ------------------------------------------------------------


def coherence_system(pair: TreePair) -> tuple:
    """Max-equalities on the length variables, each as a pair of variable
    tuples (A, B) meaning max(A) = max(B); a seam-edge equation has
    A = (the edge,)."""
    info = {}
    for path, item, image in pair.walk():
        info[path] = (item[0], image)
    equations = set()
    prefixes = {}  # single-seam ancestor path -> [(branch path, prefix vars)]
    for path, (kind, image) in sorted(info.items()):
        if kind != "b" or path == ():
            continue
        ascent = [("L", path)]
        anc = path[:-1]
        while True:
            akind, aimage = info[anc]
            if akind != "t":
                break
            prefixes.setdefault(anc, []).append((path, tuple(ascent)))
            if anc == ():
                break
            ascent.append(("L", anc))
            anc = anc[:-1]
        if image != ():
            equations.add(((("l", image),), tuple(sorted(ascent))))
    for anc, entries in prefixes.items():
        for a in range(len(entries)):
            for b in range(a + 1, len(entries)):
                lhs = tuple(sorted(entries[a][1]))
                rhs = tuple(sorted(entries[b][1]))
                if lhs != rhs:
                    equations.add(tuple(sorted((lhs, rhs))))
    return tuple(sorted(equations))


# -- zero-length normalization ----------------------------------------------------


def closed_zero_set(pair: TreePair, zeros) -> bool:
    zeros = frozenset(zeros)
    for lhs, rhs in coherence_system(pair):
        if (set(lhs) <= zeros) != (set(rhs) <= zeros):
            return False
    return True


def normalize_zero_lengths(pair: TreePair, zeros):
    """Contract the given zero-length edges and restore validity by the
    minimal local collapses.  Returns (pair, variable map) where the map
    sends each surviving variable to its name in the result.

    The zero set must be closed under the coherence system: a set whose
    vanishing forces further lengths to vanish is rejected.
    """
    zeros = frozenset(zeros)
    varset = set(pair.variables())
    if not zeros <= varset:
        raise InconsistentZeroSetError("unknown length variable in the zero set")
    if not closed_zero_set(pair, zeros):
        raise InconsistentZeroSetError("zero set forces further lengths to vanish")
    seam_zero = [v for kind, v in zeros if kind == "l"]
    new_seam, svmap = contract_edges(pair.seam, seam_zero)
    var_map = {
        ("l", v): ("l", svmap[v])
        for v in pair.seam.internal_edges()
        if ("l", v) not in zeros
    }

    def surviving_children(v):
        total = 0
        for j in range(len(pair.seam.subtree(v))):
            c = v + (j,)
            total += surviving_children(c) if ("l", c) in zeros else 1
        return total

    def rebuild(item, path, image):
        kind = item[0]
        if kind == "m":
            return ("items", [MARK])
        zero = path != () and ("L", path) in zeros
        if kind == "t":
            res = _merge_parts(
                [rebuild(c, path + ((0, i),), image) for i, c in enumerate(item[1])]
            )
            if res[0] == "plain":
                if zero:
                    return ("items", res[1])
                return ("items", [("t", tuple(res[1]), path)])
            seams = res[1]
            if len(seams) != surviving_children(image):
                raise InconsistentZeroSetError(
                    "collapsed fork does not match the contracted seam tree"
                )
            if zero:
                return ("bmerge", seams)
            return ("items", [("b", tuple(seams), path)])
        new_seams = []
        for j, seamitems in enumerate(item[1:]):
            child = image + (j,)
            res = _merge_parts(
                [
                    rebuild(c, path + ((j, i),), child)
                    for i, c in enumerate(seamitems)
                ]
            )
            child_zero = ("l", child) in zeros
            if res[0] == "plain":
                if child_zero:
                    if res[1]:
                        raise InconsistentZeroSetError(
                            "zero seam edge with surviving content"
                        )
                    new_seams.extend([()] * surviving_children(child))
                else:
                    new_seams.append(tuple(res[1]))
            else:
                if not child_zero:
                    raise InconsistentZeroSetError(
                        "collapsed forks under a surviving seam edge"
                    )
                if len(res[1]) != surviving_children(child):
                    raise InconsistentZeroSetError(
                        "collapsed fork does not match the contracted seam tree"
                    )
                new_seams.extend(res[1])
        if zero:
            return ("bmerge", new_seams)
        return ("items", [("b", tuple(new_seams), path)])

    res = rebuild(pair.root, (), ())
    if res[0] != "items" or len(res[1]) != 1:
        raise InconsistentZeroSetError("root collapsed away")

    def strip(tagged, newpath):
        kind = tagged[0]
        if kind == "m":
            return MARK
        if kind == "t":
            items, oldpath = tagged[1], tagged[2]
            var_map[("L", oldpath)] = ("L", newpath)
            return (
                "t",
                tuple(
                    strip(c, newpath + ((0, i),)) for i, c in enumerate(items)
                ),
            )
        seams, oldpath = tagged[1], tagged[2]
        var_map[("L", oldpath)] = ("L", newpath)
        return ("b",) + tuple(
            tuple(strip(c, newpath + ((j, i),)) for i, c in enumerate(s))
            for j, s in enumerate(seams)
        )

    tagged_root = res[1][0]
    if tagged_root[0] == "m":
        new_root = MARK
    else:
        new_root = strip(tagged_root, ())
    # the root owns no length variable
    var_map.pop(("L", ()), None)
    new_pair = TreePair(new_seam, new_root)
    check_structure(new_pair)
    for v in list(var_map):
        if v in zeros:
            del var_map[v]
    return new_pair, var_map


def _merge_parts(parts):
    if any(p[0] == "bmerge" for p in parts):
        plain = [p for p in parts if p[0] != "bmerge"]
        if any(p[1] for p in plain):
            raise InconsistentZeroSetError(
                "collapsing forks mixed with surviving items in one seam"
            )
        widths = {len(p[1]) for p in parts if p[0] == "bmerge"}
        if len(widths) != 1:
            raise InconsistentZeroSetError("collapsing forks of unequal widths")
        width = widths.pop()
        merged = [[] for _ in range(width)]
        for p in parts:
            if p[0] == "bmerge":
                for j in range(width):
                    merged[j].extend(p[1][j])
        return ("bmerge", [tuple(s) for s in merged])
    out = []
    for p in parts:
        out.extend(p[1])
    return ("plain", out)


# -- notation ------------------------------------------------------------------


def format_item(item) -> str:
    if item[0] == "m":
        return "m"
    if item[0] == "t":
        return "[" + " ".join(format_item(c) for c in item[1]) + "]"
    return "{" + "|".join(" ".join(format_item(c) for c in s) for s in item[1:]) + "}"


def format_pair(pair: TreePair) -> str:
    return f"{pair.seam.format()} : {format_item(pair.root)}"


def parse_pair(text: str) -> TreePair:
    seam_text, _, item_text = text.partition(":")
    seam = RibbonTree.parse(seam_text.strip())
    item, rest = _parse_item(item_text.strip())
    if rest.strip():
        raise InvalidTreePairError(f"trailing input {rest!r}")
    pair = TreePair(seam, item)
    check_structure(pair)
    return pair


def _parse_item(text):
    text = text.lstrip()
    if text.startswith("m"):
        return MARK, text[1:]
    if text.startswith("["):
        items, rest = _parse_items(text[1:], "]")
        return ("t", tuple(items)), rest[1:]
    if text.startswith("{"):
        seams = []
        rest = text[1:]
        while True:
            items, rest = _parse_items(rest, "|}")
            seams.append(tuple(items))
            if rest.startswith("|"):
                rest = rest[1:]
                continue
            if rest.startswith("}"):
                return ("b",) + tuple(seams), rest[1:]
            raise InvalidTreePairError("unbalanced braces")
    raise InvalidTreePairError(f"unexpected {text[:1]!r}")


def _parse_items(text, stop):
    items = []
    rest = text.lstrip()
    while rest and rest[0] not in stop:
        item, rest = _parse_item(rest)
        items.append(item)
        rest = rest.lstrip()
    if not rest:
        raise InvalidTreePairError("unterminated item list")
    return items, rest
