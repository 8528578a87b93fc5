import itertools

import pytest

from theta2.cellset import (
    Cell,
    Subobject,
    cellset_to_json,
    dump_json,
    from_simplicial,
    member,
    product,
    pullback_along,
    representable,
    subobject_closure,
    subobject_to_json,
    terminal_cellset,
    union,
)
from theta2.delta import SimplicialOperator
from theta2.sset import J, boundary_sset, standard_simplex
from theta2.theta import (
    CellularOperator,
    ThetaError,
    ThetaShape,
    degeneracies_between,
    faces_between,
    hyperfaces,
    identity_cellular,
    shapes_upto,
    vertebrae,
    vertical_hyperface,
)


def shape(*qs):
    return ThetaShape(qs)


def hyperface_cells(s):
    return [Cell(op.src, op) for _, op in hyperfaces(s)]


def test_representable_of_terminal():
    r = representable(shape(), 2)
    for sh in shapes_upto(2):
        assert len(r.cells(sh)) == 1


def test_representable_nd_cells_of_globe():
    r = representable(shape(1,))
    total = [c for sh in shapes_upto(2) for c in r.nd_cells(sh)]
    assert len(total) == 5


def test_representable_cell_count_matches_operator_enumeration():
    s = shape(0, 2)
    r = representable(s)
    from theta2.theta import cellular_ops

    for sh in shapes_upto(3):
        assert r.cells(sh) == cellular_ops(sh, s)


def test_action_functorial():
    # x . (f o g) == (x . f) . g, exhaustively at low dimension
    s = shape(1, 1)
    r = representable(s)
    from theta2.theta import cellular_ops, compose_cellular

    shs = shapes_upto(2)
    x = Cell(s, identity_cellular(s))
    for mid in shs:
        for f in cellular_ops(mid, s):
            xf = r.act(x, f)
            for low in shs:
                for g in cellular_ops(low, mid):
                    assert r.act(x, compose_cellular(g, f)) == r.act(xf, g)


def test_ez_decomposition_unique_presheaf_level():
    # brute force: every cell has exactly one (nondegenerate, degeneracy) split
    from theta2.boxprod import box_representable, vertical_extension_ambient

    for amb in (
        representable(shape(1, 1)),
        from_simplicial(J, 3),
        product(from_simplicial(J, 2), representable(shape(0,), 2), 2),
        box_representable(shape(0, 1), 3),
        vertical_extension_ambient(shape(0, 1), 1, 3),
    ):
        for sh in amb.shapes():
            if sh.dim > 3:
                continue
            for payload in amb.cells(sh):
                cell = Cell(sh, payload)
                splits = []
                for low in shapes_upto(sh.dim):
                    for deg in degeneracies_between(sh, low):
                        for y in amb.cells(low):
                            ylow = Cell(low, y)
                            if amb.is_nondegenerate(ylow) and amb.act(ylow, deg) == cell:
                                splits.append((ylow, deg))
                nd, deg = amb.nd_decompose(cell)
                assert splits == [(nd, deg)]


def test_subobject_closure_examples():
    s = shape(0, 2)
    r = representable(s)
    bd = subobject_closure(r, hyperface_cells(s))
    assert not bd.contains(r.top_cell())
    # generated by the identity cell: the whole representable
    full = subobject_closure(r, [r.top_cell()])
    assert full.is_full()
    # spine of [2;1,1] misses the lower vertical hyperface
    t = shape(1, 1)
    rt = representable(t)
    sp = subobject_closure(rt, [Cell(v.src, v) for v in vertebrae(t)])
    dv = vertical_hyperface(t, 1, 0)
    assert not member(sp, Cell(dv.src, dv))


def test_member_degeneracies_and_vertex():
    s = shape(0, 2)
    r = representable(s)
    bd = subobject_closure(r, hyperface_cells(s))
    vertex = CellularOperator(shape(), s, SimplicialOperator([0], 2), ())
    assert member(bd, Cell(vertex.src, vertex))
    # a degeneracy of a member is a member
    from theta2.theta import elementary_degeneracies

    for _, op in hyperfaces(s):
        base = Cell(op.src, op)
        for deg, sec in elementary_degeneracies(op.src):
            # y with y . deg living one level up
            img = r.act(base, sec)
            assert member(bd, img)


def test_horn_misses_named_face():
    t = shape(1, 1)
    rt = representable(t)
    keep = [
        Cell(op.src, op)
        for lbl, op in hyperfaces(t)
        if lbl.variant == "V"
    ]
    horn = subobject_closure(rt, keep)
    f = CellularOperator(
        shape(1,), t, SimplicialOperator([0, 2], 2),
        (SimplicialOperator([0, 1], 1), SimplicialOperator([0, 1], 1)),
    )
    assert not horn.contains(Cell(f.src, f))


def test_lattice_laws():
    s = shape(1, 1)
    r = representable(s)
    subs = []
    hfs = hyperface_cells(s)
    for k in range(1, len(hfs) + 1):
        subs.append(subobject_closure(r, hfs[:k]))
    empty = Subobject.empty(r)
    full = Subobject.full(r)
    for a in subs:
        assert union(a, a).same_cells(a)
        assert a.intersection(a).same_cells(a)
        assert union(a, empty).same_cells(a)
        assert a.intersection(full).same_cells(a)
        for b in subs:
            assert union(a, b).same_cells(union(b, a))
            assert a.intersection(b).same_cells(b.intersection(a))
            assert a.intersection(union(a, b)).same_cells(a)
            for c in subs:
                lhs = union(a, b.intersection(c))
                rhs = union(a, b).intersection(union(a, c))
                assert lhs.same_cells(rhs)


def test_closure_idempotent_monotone():
    s = shape(0, 2)
    r = representable(s)
    hfs = hyperface_cells(s)
    small = subobject_closure(r, hfs[:2])
    big = subobject_closure(r, hfs)
    assert small.issubset(big)
    again = subobject_closure(r, list(small.iter_nd()))
    assert again.same_cells(small)


def test_pullback_of_spine_along_inert_face():
    # inert faces pull spines back to spines, across all shapes of dim <= 4
    for s in shapes_upto(4):
        rt = representable(s)
        sp = subobject_closure(rt, [Cell(v.src, v) for v in vertebrae(s)])
        for src in shapes_upto(s.dim):
            for f in faces_between(src, s):
                if not f.is_inert():
                    continue
                pb = pullback_along(sp, Cell(f.src, f))
                src_spine = subobject_closure(
                    representable(src), [Cell(v.src, v) for v in vertebrae(src)]
                )
                assert pb.same_cells(src_spine), (s, f)


def test_pullback_of_full_is_full():
    s = shape(0, 2)
    r = representable(s)
    full = Subobject.full(r)
    for _, op in hyperfaces(s):
        pb = pullback_along(full, Cell(op.src, op))
        assert pb.is_full()


def test_from_simplicial_j_counts():
    jc = from_simplicial(J, 3)
    for sh in shapes_upto(3):
        assert len(jc.cells(sh)) == 2 ** (sh.n + 1)


def test_product_with_terminal():
    s = shape(1,)
    r = representable(s, 2)
    p = product(r, terminal_cellset(2), 2)
    for sh in shapes_upto(2):
        assert len(p.cells(sh)) == len(r.cells(sh))


def test_product_with_j_edges():
    p = product(from_simplicial(J, 2), representable(shape(0,), 2), 2)
    edge_shape = shape(0,)
    nd = [c for c in p.nd_cells(edge_shape)]
    # four edges whose representable part is the identity
    ids = [c for c in nd if c[1] == identity_cellular(edge_shape)]
    assert len(ids) == 4


def test_generator_outside_ambient_rejected():
    r = representable(shape(0,))
    t = representable(shape(1,))
    with pytest.raises((ThetaError, Exception)):
        subobject_closure(r, [t.top_cell()])


def test_serialization_shapes():
    r = representable(shape(1,))
    doc = cellset_to_json(r)
    assert doc["action"] == "representable"
    assert any(e["shape"] == "[1;1]" for e in doc["shapes"])
    jc = from_simplicial(J, 2)
    doc = cellset_to_json(jc)
    assert isinstance(doc["action"], list) and doc["action"]
    # deterministic output
    assert dump_json(doc) == dump_json(cellset_to_json(from_simplicial(J, 2)))
    sub = subobject_closure(r, hyperface_cells(shape(1,)))
    sdoc = subobject_to_json(sub)
    assert sdoc["shapes"]
