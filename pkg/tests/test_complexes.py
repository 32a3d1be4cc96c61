import pytest

from operadcells.complexes import (
    AssemblyError,
    CellularMap,
    SimplicialComplex,
    induced_subcomplex,
    product_complex,
)
from operadcells.homology import betti_agreement_report, betti_numbers


def point():
    return SimplicialComplex.assemble(
        {"v": (0, ())}, {"pt": ["v"]}, label="point"
    )


def circle():
    gens = {
        "a": (0, ()),
        "b": (0, ()),
        "e": (1, (("f", "b"), ("f", "a"))),
        "f": (1, (("f", "a"), ("f", "b"))),
    }
    cells = {"va": ["a"], "vb": ["b"], "ce": ["e"], "cf": ["f"]}
    return SimplicialComplex.assemble(gens, cells, label="circle")


def triangle_boundary_gens():
    gens = {
        "x": (0, ()),
        "y": (0, ()),
        "z": (0, ()),
        "xy": (1, (("f", "y"), ("f", "x"))),
        "yz": (1, (("f", "z"), ("f", "y"))),
        "xz": (1, (("f", "z"), ("f", "x"))),
    }
    return gens


def test_point_complex():
    p = point()
    assert p.validate() == []
    assert p.euler_characteristic() == 1
    assert betti_numbers(p) == (1,)
    assert p.closure_finiteness_report() == []


def test_circle_complex():
    c = circle()
    assert c.validate() == []
    assert c.dimension == 1
    assert c.euler_characteristic() == 0
    assert betti_numbers(c) == (1, 1)
    assert betti_numbers(c, "mod-2") == (1, 1)
    assert betti_agreement_report(c) == []
    assert c.closure_finiteness_report() == []


def test_dimension_mismatch_rejected():
    gens = {
        "a": (0, ()),
        "e": (1, (("f", "a"), ("f", "a"))),
        "g": (1, (("f", "e"), ("f", "a"))),
    }
    with pytest.raises(AssemblyError, match="dimension mismatch"):
        SimplicialComplex.assemble(gens, {"c": ["a", "e", "g"]})


def test_dangling_face_rejected():
    with pytest.raises(AssemblyError, match="dangling"):
        SimplicialComplex.assemble(
            {"e": (1, (("f", "a"), ("f", "a")))}, {"c": ["e"]}
        )


def test_two_cells_rejected():
    with pytest.raises(AssemblyError, match="two cells"):
        SimplicialComplex.assemble(
            {"v": (0, ())}, {"c1": ["v"], "c2": ["v"]}
        )


def filled_triangle(swap=False):
    gens = triangle_boundary_gens()
    faces = [("f", "yz"), ("f", "xz"), ("f", "xy")]
    if swap:
        faces[0], faces[1] = faces[1], faces[0]
    gens["t"] = (2, tuple(faces))
    cells = {k: [k] for k in gens}
    return SimplicialComplex.assemble(gens, cells, label="triangle")


def test_simplicial_identities_detect_mutation():
    good = filled_triangle()
    assert good.validate() == []
    bad = filled_triangle(swap=True)
    rep = bad.validate()
    assert rep and any("identity" in line for line in rep)


def test_sphere_homology():
    # boundary of a tetrahedron
    vs = "0123"
    gens = {}
    for v in vs:
        gens[v] = (0, ())
    import itertools

    for a, b in itertools.combinations(vs, 2):
        gens[a + b] = (1, (("f", b), ("f", a)))
    for a, b, c in itertools.combinations(vs, 3):
        gens[a + b + c] = (2, (("f", b + c), ("f", a + c), ("f", a + b)))
    cells = {k: [k] for k in gens}
    s = SimplicialComplex.assemble(gens, cells, label="sphere")
    assert s.validate() == []
    assert s.euler_characteristic() == 2
    assert betti_numbers(s) == (1, 0, 1)
    assert betti_numbers(s, "mod-2") == (1, 0, 1)


def test_closure_finiteness_counterexample():
    # two 2-cells whose closures overlap a 1-cell that is only partly on
    # one of their boundaries: the classical decomposition failure shape
    gens = {}
    for v in ("v0", "v1", "v2", "v3"):
        gens[v] = (0, ())
    edges = {
        "e01": ("v0", "v1"),
        "e02": ("v0", "v2"),
        "e12": ("v1", "v2"),
        "e03": ("v0", "v3"),
        "e13": ("v1", "v3"),
    }
    for name, (a, b) in edges.items():
        gens[name] = (1, (("f", b), ("f", a)))
    gens["t1"] = (2, (("f", "e12"), ("f", "e02"), ("f", "e01")))
    gens["t2"] = (2, (("f", "e13"), ("f", "e03"), ("f", "e01")))
    cells = {
        "C1": ["t1"],
        "C2": ["t2"],
        "C3": ["e01", "e13"],
        "c-e02": ["e02"],
        "c-e12": ["e12"],
        "c-e03": ["e03"],
        "c-v0": ["v0"],
        "c-v1": ["v1"],
        "c-v2": ["v2"],
        "c-v3": ["v3"],
    }
    cx = SimplicialComplex.assemble(gens, cells, label="gj-failure")
    assert cx.validate() == []
    rep = cx.closure_finiteness_report()
    assert len(rep) == 1
    assert "part of" in rep[0]


def test_identity_and_constant_maps():
    c = circle()
    ident = CellularMap.from_key_dict(
        c, c, {k: (k, tuple(range(c.dims[c.index[k]] + 1))) for k in c.keys}
    )
    assert ident.verify() == []
    p = point()
    const = CellularMap.from_key_dict(
        c, p, {k: ("v", (0,) * (c.dims[c.index[k]] + 1)) for k in c.keys}
    )
    assert const.verify() == []


def test_vertex_swap_map_rejected():
    c = circle()
    mapping = {
        "a": ("b", (0,)),
        "b": ("a", (0,)),
        "e": ("e", (0, 1)),
        "f": ("f", (0, 1)),
    }
    bad = CellularMap.from_key_dict(c, c, mapping)
    assert bad.verify() != []


def test_product_square():
    # interval x interval: 4 vertices, 5 edges (one diagonal), 2 triangles
    gens = {
        "0": (0, ()),
        "1": (0, ()),
        "e": (1, (("f", "1"), ("f", "0"))),
    }
    i = SimplicialComplex.assemble(gens, {k: [k] for k in gens}, label="interval")
    sq = product_complex([i, i], label="square")
    assert sq.validate() == []
    from collections import Counter

    counts = Counter(sq.dims)
    assert counts[0] == 4 and counts[1] == 5 and counts[2] == 2
    assert sq.euler_characteristic() == 1
    assert betti_numbers(sq) == (1, 0, 0)
    assert sq.closure_finiteness_report() == []
    # cells: point x point, point x edge, edge x point, edge x edge
    assert len(sq.cells) == 9


def test_subcomplex_extraction():
    c = circle()
    sub, incl = induced_subcomplex(c, [c.index["e"]], label="arc")
    assert sub.validate() == []
    assert len(sub) == 3
    assert incl.verify() == []
