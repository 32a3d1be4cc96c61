from collections import Counter

import pytest

from operadcells.associahedra import (
    associahedron_complex,
    composition_map,
    cube_cell_census,
    cube_face,
    simplex_key,
)
from operadcells.complexes import grouped_product_map, product_complex
from operadcells.homology import betti_numbers
from operadcells.trees import InvalidTreeError, RibbonTree


def test_small_builds():
    k2 = associahedron_complex(2)
    assert len(k2) == 1 and k2.dimension == 0
    k3 = associahedron_complex(3)
    assert Counter(k3.dims) == Counter({0: 3, 1: 2})
    assert k3.euler_characteristic() == 1
    k1 = associahedron_complex(1)
    assert len(k1) == 1


def test_arity_zero_rejected():
    with pytest.raises(InvalidTreeError):
        associahedron_complex(0)


def test_k4_matches_pentagon_refinement():
    k4 = associahedron_complex(4)
    assert k4.validate() == []
    two_cells = [c for c in k4.cells if c[1] == 2]
    assert len(two_cells) == 5
    assert Counter(k4.dims)[2] == 10
    assert k4.euler_characteristic() == 1
    assert betti_numbers(k4) == (1, 0, 0)
    assert k4.closure_finiteness_report() == []


def test_cell_census_against_formula():
    for r in range(1, 6):
        kw = associahedron_complex(r)
        assert len(kw.cells) == cube_cell_census(r)


def test_global_invariants_up_to_5():
    for r in range(2, 6):
        kw = associahedron_complex(r)
        assert kw.validate() == []
        assert kw.dimension == r - 2
        assert kw.euler_characteristic() == 1
        assert betti_numbers(kw) == (1,) + (0,) * (r - 2)
        assert betti_numbers(kw, "mod-2") == (1,) + (0,) * (r - 2)
        assert kw.closure_finiteness_report() == []
        for ck, cdim, _ in kw.cells:
            tree = RibbonTree(ck[2])
            assert cdim == (r - 2) - tree.dimension() - len(ck[3])


def test_cube_face_examples():
    b3 = RibbonTree.parse("((**)*)").shape
    e = (0,)
    # zero end: contraction onto the corolla point
    assert cube_face(3, b3, (), ((e,),), 1) == simplex_key(3, ((), (), ()), (), ())
    # one end: the edge becomes pinned
    assert cube_face(3, b3, (), ((e,),), 0) == simplex_key(3, b3, (e,), ())
    # middle merge on a square: the diagonal
    b4 = RibbonTree.parse("(((**)*)*)").shape
    a, b = (0,), (0, 0)
    got = cube_face(4, b4, (), ((b,), (a,)), 1)
    assert got == simplex_key(4, b4, (), (tuple(sorted((a, b))),))


def test_compose_k2_k2():
    m = composition_map(2, 2, 1)
    assert m.verify() == []
    k3 = associahedron_complex(3)
    (t, h) = m.entries[0]
    assert k3.keys[t] == simplex_key(3, (((), ()), ()), ((0,),), ())
    assert len(m.source) == 1


def test_compose_unit():
    for r, s, i in ((1, 3, 1), (3, 1, 2)):
        m = composition_map(r, s, i)
        assert m.verify() == []
        kt = m.target
        # unit: every simplex hits its own counterpart, bijectively
        images = {t for t, _ in m.entries}
        assert len(images) == len(m.source) == len(kt)


def test_compose_lands_in_boundary():
    m = composition_map(3, 2, 1)
    assert m.verify() == []
    k4 = m.target
    for t, _ in m.entries:
        ck = k4.cells[k4.cell_of[t]][0]
        assert ck[3] != ()  # pinned set nonempty


def check_associativity(r, s, t):
    K = associahedron_complex
    kr, ks, kt = K(r), K(s), K(t)
    tp = product_complex([kr, ks, kt], label=f"kw{r}x{s}x{t}")
    for i in range(1, r + 1):
        for j in range(1, s + 1):
            m12 = composition_map(r, s, i)
            m2 = composition_map(r + s - 1, t, i - 1 + j)
            left = grouped_product_map(tp, (0, 1), m12, m2.source, 0).compose(m2)
            m23 = composition_map(s, t, j)
            m1 = composition_map(r, s + t - 1, i)
            right = grouped_product_map(tp, (1, 2), m23, m1.source, 1).compose(m1)
            assert left.verify() == []
            assert left.same_as(right), (r, s, t, i, j, "nested")
    # disjoint shape: (x o_i y) o_{j+s-1} z == (x o_j z) o_i y for i < j
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            m12 = composition_map(r, s, i)
            m2 = composition_map(r + s - 1, t, j + s - 1)
            left = grouped_product_map(tp, (0, 1), m12, m2.source, 0).compose(m2)
            m13 = composition_map(r, t, j)
            m1 = composition_map(r + t - 1, s, i)
            right = grouped_product_map(tp, (0, 2), m13, m1.source, 0).compose(m1)
            assert left.same_as(right), (r, s, t, i, j, "disjoint")


def test_operad_associativity_small():
    for r in range(1, 4):
        for s in range(1, 4):
            for t in range(1, 4):
                if r + s + t <= 7:
                    check_associativity(r, s, t)
