import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from systematic_k.errors import InvalidGroupError, OrderNotInvariantError
from systematic_k.groups import (
    ConeOrder,
    Extension,
    FiniteTable,
    FreeAbelian,
    LatticeQuotient,
    Semidirect,
    check_semidirect_action,
    element_sort_key,
    group_axiom_failures,
    lineality_extension,
    linear_extension,
    named_action,
    project_and_section,
    trivial_order,
)

Z1 = FreeAbelian(1)
Z2 = FreeAbelian(2)
C2 = FiniteTable.cyclic(2)

coords2 = st.tuples(st.integers(-8, 8), st.integers(-8, 8))


def test_free_abelian_compose_invert():
    assert Z2.compose((1, 2), (3, 4)) == (4, 6)
    assert Z2.invert((1, -3)) == (-1, 3)
    assert Z2.compose((5, -1), Z2.identity()) == (5, -1)


def test_semidirect_inversion_action():
    sd = Semidirect(Z1, C2, named_action("inversion", Z1, C2))
    # (2, c) * (3, 1) = (2 - 3, c); the flip inverts the lattice part
    assert sd.compose(((2,), 1), ((3,), 0)) == ((-1,), 1)
    assert sd.invert(((2,), 1)) == ((2,), 1)
    assert sd.compose(((2,), 1), sd.invert(((2,), 1))) == sd.identity()
    check_semidirect_action(sd, random.Random(0))


def test_semidirect_swap_action():
    sd = Semidirect(Z2, C2, named_action("swap", Z2, C2))
    assert sd.compose(((1, 0), 1), ((1, 0), 0)) == ((1, 1), 1)
    check_semidirect_action(sd, random.Random(0))


@settings(max_examples=60)
@given(coords2, coords2, coords2)
def test_free_abelian_axioms(a, b, c):
    assert Z2.compose(Z2.compose(a, b), c) == Z2.compose(a, Z2.compose(b, c))
    assert Z2.compose(a, Z2.invert(a)) == Z2.identity()
    assert Z2.compose(Z2.identity(), a) == a


def test_group_axiom_failures_empty_for_valid_groups():
    rng = random.Random(1)
    for grp in (Z2, C2, FiniteTable.cyclic(6),
                Semidirect(Z2, C2, named_action("swap", Z2, C2))):
        assert group_axiom_failures(grp, rng) == []


def test_finite_table_validation():
    with pytest.raises(InvalidGroupError):
        FiniteTable(((0, 1), (1, 1)))
    with pytest.raises(InvalidGroupError):
        FiniteTable(((1, 0), (0, 0)))  # no two-sided identity row/col pattern
    big = FiniteTable.cyclic(65)  # beyond the exhaustive cap: sampled checks
    assert big.order == 65
    assert big.compose(64, 1) == 0


def test_cone_order_examples():
    standard = ConeOrder(Z1, ((1,),))
    assert standard.leq((0,), (3,))
    quadrant = ConeOrder(Z2, ((1, 0), (0, 1)))
    assert not quadrant.leq((0, 0), (1, -1))
    # cone generated by (1,0) and (1,1): y >= 0 and x - y >= 0
    wedge = ConeOrder(Z2, ((0, 1), (1, -1)))
    assert wedge.leq((0, 0), (2, 1))
    assert not wedge.leq((0, 0), (1, 2))


@settings(max_examples=60)
@given(coords2, coords2, coords2, coords2)
def test_cone_order_laws(a, b, c, x):
    quadrant = ConeOrder(Z2, ((1, 0), (0, 1)))
    if quadrant.leq(a, b) and quadrant.leq(b, c):
        assert quadrant.leq(a, c)
    if quadrant.leq(a, b):
        assert quadrant.leq(Z2.compose(x, a), Z2.compose(x, b))
    assert quadrant.positive(Z2.identity())


def test_order_h_invariance():
    quadrant = ConeOrder(Z2, ((1, 0), (0, 1)))
    swap = named_action("swap", Z2, C2)
    quadrant.check_h_invariance(swap, C2.elements(), [(1, 2), (0, 3), (5, 0)])
    ray = ConeOrder(Z1, ((1,),))
    flip = named_action("inversion", Z1, C2)
    with pytest.raises(OrderNotInvariantError):
        ray.check_h_invariance(flip, C2.elements(), [(1,), (2,)])


def test_quotient_functionals_must_kill_lattice():
    quotient = LatticeQuotient(2, ((0, 1),))
    ConeOrder(quotient, ((1, 0),))
    with pytest.raises(OrderNotInvariantError):
        ConeOrder(quotient, ((0, 1),))


def test_lattice_quotient_canonical_reps():
    quotient = LatticeQuotient(2, ((0, 1),))
    assert quotient.reduce((3, 5)) == (3, 0)
    assert quotient.compose((1, 0), (2, 0)) == (3, 0)
    assert quotient.invert((3, 0)) == (-3, 0)
    assert quotient.contains((3, 0))
    assert not quotient.contains((3, 1))


def test_extension_decompose_horizontal_sublattice():
    ext = Extension(Z2, ((1, 0),))
    h, n = ext.decompose((3, 5))
    assert h == (0, 5)
    assert n == (3, 0)
    assert ext.compose(ext.section(h), n) == (3, 5)
    assert ext.n_coords((3, 0)) == (3,)
    assert ext.n_embed((3,)) == (3, 0)


def test_extension_trivial_sublattice():
    ext = Extension(Z2, ())
    h, n = ext.decompose((2, -1))
    assert h == (2, -1)
    assert n == (0, 0)


@settings(max_examples=40)
@given(coords2, coords2)
def test_extension_projection_is_homomorphism(a, b):
    ext = Extension(Z2, ((2, 1),))
    q = ext.quotient
    assert ext.project(Z2.compose(a, b)) == q.compose(ext.project(a), ext.project(b))
    assert ext.project(ext.section(ext.project(a))) == ext.project(a)


def test_custom_section():
    ext = Extension(Z2, ((1, 0),))
    moved = ext.with_section({(0, 5): (2, 5)})
    assert moved.section((0, 5)) == (2, 5)
    h, n = moved.decompose((3, 5))
    assert h == (0, 5) and n == (1, 0)
    with pytest.raises(InvalidGroupError):
        ext.with_section({(0, 5): (2, 6)})


def test_project_and_section_split_case():
    sd = Semidirect(Z1, C2, named_action("trivial", Z1, C2))
    h, n = project_and_section(sd, ((4,), 1))
    assert h == 1
    assert n == ((4,), 0)
    # with a genuine action the lattice part is transported by h^{-1}
    sd_inv = Semidirect(Z1, C2, named_action("inversion", Z1, C2))
    h, n = project_and_section(sd_inv, ((4,), 1))
    assert h == 1
    assert n == ((-4,), 0)
    assert sd_inv.compose(((0,), h), n) == ((4,), 1)


def test_linear_extension_orders_big_first():
    order = ConeOrder(Z1, ((1,),))
    out = linear_extension([(0,), (2,), (1,)], order)
    assert out == ((2,), (1,), (0,))
    quadrant = ConeOrder(Z2, ((1, 0), (0, 1)))
    out2 = linear_extension([(0, 1), (1, 0), (1, 1)], quadrant)
    assert out2[0] == (1, 1)
    # incomparable pair resolved by the canonical encoding, deterministically
    assert out2 == ((1, 1), (0, 1), (1, 0))
    assert out2 == linear_extension([(1, 0), (1, 1), (0, 1)], quadrant)


def test_linear_extension_respects_strict_pairs():
    quadrant = ConeOrder(Z2, ((1, 0), (0, 1)))
    window = [(0, 0), (2, 1), (1, 1), (0, 2), (3, 0)]
    out = linear_extension(window, quadrant)
    for i, a in enumerate(out):
        for j, b in enumerate(out):
            if quadrant.lt(b, a):
                assert i < j


def test_lineality_extension():
    full = lineality_extension(2, [(1, 0), (0, 1)])
    assert full.n_basis == ()
    band = lineality_extension(2, [(1, 0)])
    assert band.n_basis == ((0, 1),)
    everything = lineality_extension(2, [])
    assert len(everything.n_basis) == 2


def test_trivial_order_compares_everything():
    order = trivial_order(Z2)
    assert order.leq((5, -3), (0, 0)) and order.leq((0, 0), (5, -3))


def test_element_sort_key_total_order():
    values = [(0, 1), (1, 0), (1,), 3, (2, (1,))]
    keys = [element_sort_key(v) for v in values]
    assert len(set(keys)) == len(keys)
    with pytest.raises(TypeError):
        element_sort_key("x")
