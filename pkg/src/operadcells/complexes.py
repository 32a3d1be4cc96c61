"""Simplicial sets presented by nondegenerate simplices.

A complex stores its nondegenerate simplices with, for each n-simplex,
n+1 face entries.  A face entry is either another nondegenerate simplex
of dimension n-1 or a collapse: a degenerate simplex written as a lower
nondegenerate simplex together with the monotone surjection of vertex
indices that squashes onto it.  Degenerate references (simplex, surjection)
form the normalized face algebra used throughout: quotient maps and
products both produce them.

Simplices are partitioned into named cells; closure finiteness of that
partition is a checkable property, not an assumption.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field


class AssemblyError(ValueError):
    pass


def canonical_encode(obj) -> str:
    if isinstance(obj, tuple):
        return "(" + ",".join(canonical_encode(x) for x in obj) + ")"
    if isinstance(obj, bool) or obj is None:
        raise TypeError(f"unsupported key component {obj!r}")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return "'" + obj + "'"
    raise TypeError(f"unsupported key component {obj!r}")


def key_digest(key) -> str:
    return hashlib.sha256(canonical_encode(key).encode()).hexdigest()[:16]


def identity_surj(n: int) -> tuple:
    return tuple(range(n + 1))


def compose_surj(outer: tuple, inner: tuple) -> tuple:
    """(outer o inner) on vertex indices."""
    return tuple(outer[v] for v in inner)


def is_monotone_surjection(h: tuple, target_dim: int) -> bool:
    if not h or h[0] != 0 or h[-1] != target_dim:
        return False
    return all(0 <= b - a <= 1 for a, b in zip(h, h[1:]))


# face entries: ("f", idx) plain, ("c", idx, h) collapse onto a lower simplex


class SimplicialComplex:
    def __init__(self, label, keys, dims, faces, cells, meta=None):
        self.label = label
        self.keys = keys
        self.dims = dims
        self.faces = faces
        self.index = {k: i for i, k in enumerate(keys)}
        self.cells = cells  # list of (cell_key, dim, tuple of simplex idxs)
        self.cell_index = {c[0]: j for j, c in enumerate(cells)}
        self.cell_of = [None] * len(keys)
        for j, (_, _, members) in enumerate(cells):
            for i in members:
                self.cell_of[i] = j
        self.meta = meta or {}

    # -- construction ------------------------------------------------------

    @staticmethod
    def assemble(generators, cell_partition, label="complex", meta=None):
        """Build a complex from keyed generator data.

        generators: mapping key -> (dim, faces) with each face either
        ("f", key) or ("c", key, surjection).  cell_partition: mapping
        cell key -> iterable of simplex keys.  Raises AssemblyError on the
        first structural violation (dangling reference, dimension
        mismatch, simplex in zero or two cells).
        """
        items = sorted(generators.items(), key=lambda kv: (kv[1][0], repr(kv[0])))
        index = {k: i for i, (k, _) in enumerate(items)}
        keys = [k for k, _ in items]
        dims = [d for _, (d, _) in items]
        faces = []
        for k, (d, fl) in items:
            if d < 0:
                raise AssemblyError(f"negative dimension on {k!r}")
            if d == 0:
                if fl:
                    raise AssemblyError(f"0-simplex {k!r} lists faces")
                faces.append(())
                continue
            if len(fl) != d + 1:
                raise AssemblyError(
                    f"simplex {k!r} of dimension {d} lists {len(fl)} faces"
                )
            entries = []
            for e in fl:
                if e[0] == "f":
                    t = e[1]
                    if t not in index:
                        raise AssemblyError(f"dangling face reference {t!r} on {k!r}")
                    ti = index[t]
                    if dims[ti] != d - 1:
                        raise AssemblyError(
                            f"dimension mismatch: face of {k!r} has dimension "
                            f"{dims[ti]}, expected {d - 1}"
                        )
                    entries.append(("f", ti))
                elif e[0] == "c":
                    t, h = e[1], tuple(e[2])
                    if t not in index:
                        raise AssemblyError(f"dangling collapse reference {t!r} on {k!r}")
                    ti = index[t]
                    if dims[ti] >= d - 1:
                        raise AssemblyError(
                            f"collapse face of {k!r} must strictly lower dimension"
                        )
                    if len(h) != d or not is_monotone_surjection(h, dims[ti]):
                        raise AssemblyError(f"bad collapse surjection {h} on {k!r}")
                    entries.append(("c", ti, h))
                else:
                    raise AssemblyError(f"unknown face entry kind {e[0]!r}")
            faces.append(tuple(entries))
        seen = {}
        cells = []
        for ck in sorted(cell_partition, key=canonical_encode):
            members = sorted(index[s] for s in cell_partition[ck])
            if not members:
                raise AssemblyError(f"cell {ck!r} is empty")
            for i in members:
                if i in seen:
                    raise AssemblyError(
                        f"simplex {keys[i]!r} assigned to two cells"
                    )
                seen[i] = ck
            cdim = max(dims[i] for i in members)
            cells.append((ck, cdim, tuple(members)))
        missing = [keys[i] for i in range(len(keys)) if i not in seen]
        if missing:
            raise AssemblyError(f"simplices outside the cell partition: {missing[:3]}")
        return SimplicialComplex(label, keys, dims, faces, cells, meta)

    # -- basic queries -------------------------------------------------------

    @property
    def dimension(self) -> int:
        return max(self.dims, default=0)

    def __len__(self):
        return len(self.keys)

    def simplex_id(self, i) -> str:
        return key_digest(self.keys[i])

    def cell_id(self, j) -> str:
        return key_digest(self.cells[j][0])

    def face_entry(self, i, j):
        return self.faces[i][j]

    def ref_face(self, ref, j):
        """j-th face of a degenerate reference (idx, surjection)."""
        idx, h = ref
        h2 = h[:j] + h[j + 1:]
        top = h[-1]
        if is_monotone_surjection(h2, top):
            return (idx, h2)
        v = h[j]  # the single skipped value
        renum = tuple(x if x < v else x - 1 for x in h2)
        entry = self.faces[idx][v]
        if entry[0] == "f":
            return (entry[1], renum)
        return (entry[1], compose_surj(entry[2], renum))

    def plain_ref(self, i):
        return (i, identity_surj(self.dims[i]))

    # -- validation -----------------------------------------------------------

    def validate(self) -> list:
        """Empty iff all record invariants hold; entries name each violation."""
        report = []
        for i, entries in enumerate(self.faces):
            d = self.dims[i]
            if d == 0:
                continue
            if len(entries) != d + 1:
                report.append(f"simplex {self.simplex_id(i)}: wrong face count")
                continue
            for e in entries:
                if e[0] == "f" and self.dims[e[1]] != d - 1:
                    report.append(
                        f"simplex {self.simplex_id(i)}: face dimension mismatch"
                    )
                if e[0] == "c":
                    if self.dims[e[1]] >= d - 1 or not is_monotone_surjection(
                        e[2], self.dims[e[1]]
                    ) or len(e[2]) != d:
                        report.append(
                            f"simplex {self.simplex_id(i)}: bad collapse entry"
                        )
        for i in range(len(self.keys)):
            d = self.dims[i]
            if d < 2:
                continue
            ref = self.plain_ref(i)
            for j in range(d + 1):
                fj = self.ref_face(ref, j)
                for k in range(j):
                    lhs = self.ref_face(fj, k)
                    rhs = self.ref_face(self.ref_face(ref, k), j - 1)
                    if lhs != rhs:
                        report.append(
                            f"simplex {self.simplex_id(i)}: identity "
                            f"d_{k} d_{j} != d_{j-1} d_{k} "
                            f"({lhs} vs {rhs})"
                        )
        for ck, cdim, members in self.cells:
            if cdim != max(self.dims[i] for i in members):
                report.append(f"cell {key_digest(ck)}: dim is not max member dim")
        if any(c is None for c in self.cell_of):
            report.append("simplex outside the cell partition")
        return report

    # -- invariants ------------------------------------------------------------

    def euler_characteristic(self) -> int:
        return sum((-1) ** d for d in self.dims)

    def closure_simplices(self, idxs) -> set:
        out = set(idxs)
        stack = list(idxs)
        while stack:
            i = stack.pop()
            for e in self.faces[i]:
                t = e[1]
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return out

    def cell_closure(self, j) -> set:
        return self.closure_simplices(self.cells[j][2])

    def closure_finiteness_report(self) -> list:
        """For each cell, its closure must be a disjoint union of whole
        cells of dimension at most its own, meeting that dimension only
        at the cell itself."""
        report = []
        for j, (ck, cdim, members) in enumerate(self.cells):
            closure = self.cell_closure(j)
            touched = {self.cell_of[i] for i in closure}
            for t in sorted(touched):
                tk, tdim, tmembers = self.cells[t]
                if tdim > cdim:
                    report.append(
                        f"cell {key_digest(ck)}: closure meets higher cell {key_digest(tk)}"
                    )
                elif tdim == cdim and t != j:
                    report.append(
                        f"cell {key_digest(ck)}: closure meets same-dimension "
                        f"cell {key_digest(tk)}"
                    )
                if not set(tmembers) <= closure:
                    report.append(
                        f"cell {key_digest(ck)}: closure contains part of cell "
                        f"{key_digest(tk)} but not all of it"
                    )
        return report

    def boundary_cells(self) -> list:
        flags = self.meta.get("boundary_cells")
        if flags is None:
            raise ValueError(f"complex {self.label} carries no boundary data")
        return flags


class CellularMap:
    """Simplex-level map between complexes: each source simplex goes to a
    target simplex with a vertex surjection (identity when plain)."""

    def __init__(self, source, target, entries, label="map"):
        self.source = source
        self.target = target
        self.entries = entries  # list over source idx of (target idx, surjection)
        self.label = label

    @staticmethod
    def from_key_dict(source, target, mapping, label="map"):
        entries = []
        for i, k in enumerate(source.keys):
            if k not in mapping:
                raise AssemblyError(f"map {label}: no image for {key_digest(k)}")
            t_key, h = mapping[k]
            entries.append((target.index[t_key], tuple(h)))
        return CellularMap(source, target, entries, label)

    def apply_ref(self, ref):
        idx, g = ref
        t, h = self.entries[idx]
        return (t, compose_surj(h, g))

    def verify(self) -> list:
        """Empty iff the assignment commutes with faces and lands in the
        skeleton of matching dimension."""
        report = []
        for i, (t, h) in enumerate(self.entries):
            d = self.source.dims[i]
            if len(h) != d + 1 or not is_monotone_surjection(h, self.target.dims[t]):
                report.append(f"{self.label}: bad image surjection on simplex {i}")
                continue
            if self.target.dims[t] > d:
                report.append(f"{self.label}: simplex {i} raises dimension")
            if d == 0:
                continue
            for j in range(d + 1):
                e = self.source.faces[i][j]
                if e[0] == "f":
                    lhs = self.apply_ref(self.source.plain_ref(e[1]))
                else:
                    lhs = self.apply_ref((e[1], e[2]))
                rhs = self.target.ref_face((t, h), j)
                if lhs != rhs:
                    report.append(
                        f"{self.label}: face {j} of simplex {i} does not commute"
                    )
        return report

    def compose(self, then, label=None):
        """Composite map: first self, then `then`."""
        if then.source is not self.target and then.source.keys != self.target.keys:
            raise AssemblyError("composition mismatch")
        entries = [then.apply_ref(e) for e in self.entries]
        return CellularMap(
            self.source, then.target, entries, label or f"{self.label};{then.label}"
        )

    def same_as(self, other) -> bool:
        def same_cx(a, b):
            return a is b or a.keys == b.keys

        return (
            same_cx(self.source, other.source)
            and same_cx(self.target, other.target)
            and self.entries == other.entries
        )


# -- products -----------------------------------------------------------------


def _joint_paths(dims):
    """Monotone lattice paths from the origin to `dims` whose steps raise
    at least one coordinate by one; each is a tuple of 0/1 step vectors."""
    if all(d == 0 for d in dims):
        yield ()
        return
    options = [
        step
        for step in itertools.product((0, 1), repeat=len(dims))
        if any(step)
        and all(s <= d for s, d in zip(step, dims))
    ]
    for step in options:
        rest = tuple(d - s for d, s in zip(dims, step))
        for tail in _joint_paths(rest):
            yield (step,) + tail


def product_complex(factors, label, simplex_filter=None, meta=None):
    """Product of complexes, triangulated by joint staircase paths.

    A product n-simplex is one nondegenerate simplex per factor with a
    monotone vertex surjection from the joint simplex, such that every
    joint step advances some factor.  `simplex_filter`, when given, keeps
    only simplices it accepts; it must be closed under faces (fiber
    products over equalized images are the intended use).
    """
    gens = {}
    cells = {}
    labels = tuple(f.label for f in factors)

    def key_of(pairs):
        return ("x", labels, pairs)

    for combo in itertools.product(*(range(len(f)) for f in factors)):
        fdims = [factors[i].dims[s] for i, s in enumerate(combo)]
        for path in _joint_paths(tuple(fdims)):
            hs = []
            for i in range(len(factors)):
                acc = [0]
                for step in path:
                    acc.append(acc[-1] + step[i])
                hs.append(tuple(acc))
            pairs = tuple((combo[i], hs[i]) for i in range(len(factors)))
            key = key_of(pairs)
            if simplex_filter is not None and not simplex_filter(pairs):
                continue
            n = len(path)
            entries = []
            for j in range(n + 1) if n else []:
                entries.append(_product_face(factors, pairs, j, key_of))
            gens[key] = (n, tuple(entries))
            ck = ("xcell", labels, tuple(
                factors[i].cells[factors[i].cell_of[combo[i]]][0]
                for i in range(len(factors))
            ))
            cells.setdefault(ck, []).append(key)
    cx = SimplicialComplex.assemble(gens, cells, label=label, meta=meta)
    return cx


def _product_face(factors, pairs, j, key_of):
    refs = []
    for i, (si, hi) in enumerate(pairs):
        refs.append(factors[i].ref_face((si, hi), j))
    n = len(pairs[0][1]) - 2  # face dimension
    keep = [0]
    for t in range(1, n + 1):
        if any(g[t] != g[t - 1] for _, g in refs):
            keep.append(t)
    if len(keep) == n + 1:
        newpairs = tuple((idx, g) for idx, g in refs)
        return ("f", key_of(newpairs))
    # some joint levels stall in every factor: the face is degenerate
    newpairs = tuple((idx, tuple(g[t] for t in keep)) for idx, g in refs)
    surj = []
    c = 0
    for t in range(n + 1):
        if t in keep[1:]:
            c += 1
        surj.append(c)
    return ("c", key_of(newpairs), tuple(surj))


def product_pairs_of(key):
    return key[2]


# -- quotients ------------------------------------------------------------------


@dataclass
class QuotientBuilder:
    """Glue a family of complexes by identifications and collapses of
    simplices, then emit the quotient as a complex.

    Slots are (tag, simplex index) pairs.  identify() declares two slots
    equal (same dimension); collapse() declares a slot degenerate,
    squashing onto another slot by a vertex surjection.
    """

    instances: dict = field(default_factory=dict)
    _parent: dict = field(default_factory=dict)
    _collapse: dict = field(default_factory=dict)
    _extra: list = field(default_factory=list)

    def add_complex(self, tag, cx):
        self.instances[tag] = cx

    def _find(self, slot):
        root = slot
        while self._parent.get(root, root) != root:
            root = self._parent[root]
        while self._parent.get(slot, slot) != slot:
            self._parent[slot], slot = root, self._parent[slot]
        return root

    def identify(self, a, b):
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            if self._slot_sort_key(rb) < self._slot_sort_key(ra):
                ra, rb = rb, ra
            self._parent[rb] = ra
            if rb in self._collapse:
                rec = self._collapse.pop(rb)
                self._note_collapse(ra, rec)

    def collapse(self, slot, target_slot, h):
        self._note_collapse(self._find(slot), (target_slot, tuple(h)))

    def _note_collapse(self, root, rec):
        if root in self._collapse:
            if self._collapse[root] != rec:
                # several collapse routes: they must agree once resolved;
                # kept aside so build() can cross-check
                self._extra.append((root, rec))
        else:
            self._collapse[root] = rec

    def _slot_sort_key(self, slot):
        tag, idx = slot
        cx = self.instances[tag]
        return (cx.dims[idx], canonical_encode(tag), canonical_encode(cx.keys[idx]))

    def dim_of(self, slot):
        tag, idx = slot
        return self.instances[tag].dims[idx]

    def resolve(self, slot, _memo=None):
        """(class root, surjection) for a slot, following collapses."""
        memo = _memo if _memo is not None else {}
        root = self._find(slot)
        if root in memo:
            return memo[root]
        rec = self._collapse.get(root)
        if rec is None:
            out = (root, identity_surj(self.dim_of(root)))
        else:
            t_slot, h = rec[0], rec[1]
            troot, g = self.resolve(t_slot, memo)
            out = (troot, compose_surj(g, h))
        memo[root] = out
        return out

    def build(self, cell_partition, label, meta=None):
        """cell_partition: mapping cell key -> slots whose classes make up
        the open cell.  Returns (complex, resolve_fn) where resolve_fn maps
        any slot to (class simplex key, surjection)."""
        memo = {}
        all_slots = [
            (tag, i)
            for tag, cx in sorted(self.instances.items(), key=lambda kv: canonical_encode(kv[0]))
            for i in range(len(cx))
        ]
        # consistency of doubled collapse routes
        for root, rec in self._extra:
            a = self.resolve(root, memo)
            t_root, g = self.resolve(rec[0], memo)
            b = (t_root, compose_surj(g, rec[1]))
            if a != b:
                raise AssemblyError(
                    f"quotient {label}: inconsistent collapse routes at {root}"
                )
        survivors = {}
        for slot in all_slots:
            root = self._find(slot)
            if root not in self._collapse:
                survivors.setdefault(root, []).append(slot)
        class_key = {
            root: ("q", min(self._slot_sort_key(s) for s in members)[1:])
            for root, members in survivors.items()
        }

        def slot_face(slot, j):
            tag, idx = slot
            cx = self.instances[tag]
            e = cx.faces[idx][j]
            if e[0] == "f":
                troot, g = self.resolve((tag, e[1]), memo)
                if g == identity_surj(self.dim_of(troot)):
                    return ("f", class_key[troot])
                return ("c", class_key[troot], g)
            troot, g = self.resolve((tag, e[1]), memo)
            return ("c", class_key[troot], compose_surj(g, e[2]))

        gens = {}
        for root, members in survivors.items():
            d = self.dim_of(root)
            face_lists = []
            for slot in members:
                face_lists.append(tuple(slot_face(slot, j) for j in range(d + 1)) if d else ())
            if len(set(face_lists)) > 1:
                raise AssemblyError(
                    f"quotient {label}: identified simplices disagree on faces at "
                    f"{class_key[root]}"
                )
            gens[class_key[root]] = (d, face_lists[0])

        cells = {}
        for ck, slots in cell_partition.items():
            out = set()
            for slot in slots:
                root, g = self.resolve(slot, memo)
                if len(g) != self.dim_of(root) + 1 or g != identity_surj(self.dim_of(root)):
                    raise AssemblyError(
                        f"quotient {label}: cell {ck!r} contains a collapsed slot"
                    )
                out.add(class_key[root])
            cells[ck] = sorted(out, key=canonical_encode)
        cx = SimplicialComplex.assemble(gens, cells, label=label, meta=meta)

        def resolve_fn(slot):
            root, g = self.resolve(slot, memo)
            return class_key[root], g

        return cx, resolve_fn


def compress_columns(columns):
    """Drop joint levels where no column advances.  Returns (columns,
    surjection) with the surjection from the original level set."""
    n = len(columns[0][1]) - 1
    keep = [0] + [
        t for t in range(1, n + 1) if any(h[t] != h[t - 1] for _, h in columns)
    ]
    surj = []
    c = 0
    for t in range(n + 1):
        if t in keep[1:]:
            c += 1
        surj.append(c)
    newcols = tuple((idx, tuple(h[t] for t in keep)) for idx, h in columns)
    return newcols, tuple(surj)


def grouped_product_map(src_prod, group, m, tgt_prod, y_position, label="grouped"):
    """Apply the map m to a subset of factors of a product.

    src_prod is a product over factors F; `group` lists which factor
    positions feed m, in the order of m's own source factors; tgt_prod is
    the product over the remaining factors with m's target inserted at
    y_position.  Returns the induced cellular map src_prod -> tgt_prod.
    """
    src_labels = m.source.keys and m.source.keys[0][1]
    entries = []
    for key in src_prod.keys:
        columns = key[2]
        gcols = tuple(columns[g] for g in group)
        gpairs, gsurj = compress_columns(gcols)
        gkey = ("x", src_labels, gpairs)
        y, hy = m.entries[m.source.index[gkey]]
        ycol = (y, compose_surj(hy, gsurj))
        others = [columns[k] for k in range(len(columns)) if k not in group]
        tcolumns = tuple(
            others[:y_position] + [ycol] + others[y_position:]
        )
        final, fsurj = compress_columns(tcolumns)
        tkey = ("x", tgt_prod.keys[0][1], final)
        entries.append((tgt_prod.index[tkey], fsurj))
    return CellularMap(src_prod, tgt_prod, entries, label=label)


# -- subcomplexes ---------------------------------------------------------------


def induced_subcomplex(cx, idxs, label):
    """Face-closed subcomplex on the given simplices, with its inclusion.

    Cells of the ambient complex must be wholly inside or wholly outside
    the closure (guaranteed when closure finiteness holds)."""
    closed = cx.closure_simplices(idxs)
    gens = {}
    cells = {}
    for i in sorted(closed):
        entries = []
        for e in cx.faces[i]:
            if e[0] == "f":
                entries.append(("f", cx.keys[e[1]]))
            else:
                entries.append(("c", cx.keys[e[1]], e[2]))
        gens[cx.keys[i]] = (cx.dims[i], tuple(entries))
        j = cx.cell_of[i]
        ck = cx.cells[j][0]
        cells.setdefault(ck, []).append(cx.keys[i])
    for ck in cells:
        j = cx.cell_index[ck]
        if len(cells[ck]) != len(cx.cells[j][2]):
            raise AssemblyError(f"subcomplex {label}: cell {ck!r} cut in half")
    sub = SimplicialComplex.assemble(gens, cells, label=label)
    mapping = {k: (k, identity_surj(sub.dims[sub.index[k]])) for k in sub.keys}
    incl = CellularMap.from_key_dict(sub, cx, mapping, label=f"{label}->{cx.label}")
    return sub, incl
