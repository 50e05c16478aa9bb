import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from systematic_k.errors import (
    BudgetExceededError,
    SpecMismatchError,
    SupportViolationError,
)
from systematic_k.groups import (
    ConeOrder,
    Extension,
    FiniteTable,
    FreeAbelian,
    lineality_extension,
    named_action,
)
from systematic_k.kzero import (
    K0Element,
    OracleSlotClassifier,
    coset_window,
    degree_window,
    filtered_graded_agreement,
    k0_bruteforce,
    k0_class,
    present_k0_group,
    quotient_k0_iso,
    semidirect_k0_iso,
    semidirect_window,
    shift_action,
    slot_classifier_for,
    strong_reduction_k0,
)
from systematic_k.modcat import (
    FreeSysModule,
    IdemObject,
    SysMorphism,
    diagonal_embed,
    free_object,
    full_split,
    shift_module,
)
from systematic_k.rings import (
    F2,
    ModularBase,
    filtered_polynomial_ring,
    laurent_group_ring,
    monoid_ring,
    polynomial_ring,
    skew_group_ring,
)

Z1 = FreeAbelian(1)
Z2 = FreeAbelian(2)
C2 = FiniteTable.cyclic(2)
RAY = ConeOrder(Z1, ((1,),))
QUADRANT = ConeOrder(Z2, ((1, 0), (0, 1)))


@pytest.fixture
def f2t():
    return polynomial_ring(F2)


@pytest.fixture
def window(f2t):
    return degree_window(f2t, [(j,) for j in range(3)], RAY)


def test_k0_element_canonical_arithmetic():
    x = K0Element.make([((0,), 1), ((1,), 3)])
    y = K0Element.make([((1,), -3), ((0,), 1)])
    assert (x + y).items == (((0,), 2),)
    assert (x - x) == K0Element.zero()
    assert x.scale(2).coefficient((1,)) == 6


def test_shift_action_relabels():
    x = K0Element.make([((0,), 1), ((1,), 3)])
    assert shift_action(Z1, (2,), x).items == (((2,), 1), ((3,), 3))
    assert shift_action(Z1, (0,), x) == x


@settings(max_examples=30)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_shift_action_is_an_action(a, b):
    x = K0Element.make([((0,), 2), ((3,), -1)])
    lhs = shift_action(Z1, (a,), shift_action(Z1, (b,), x))
    assert lhs == shift_action(Z1, (a + b,), x)


def test_present_k0_group():
    free = present_k0_group(((0,), (1,)), ())
    assert free.is_free_of_rank(2)
    mod2 = present_k0_group(("c",), [(2,)])
    assert mod2.torsion_factors == (2,)
    assert mod2.free_rank == 0
    assert mod2.is_zero_element(K0Element.make([("c", 2)]))
    assert not mod2.is_zero_element(K0Element.basis("c"))
    mixed = present_k0_group(("a", "b"), [(2, 0)])
    assert mixed.free_rank == 1
    assert mixed.torsion_factors == (2,)


def test_bruteforce_f2():
    result = k0_bruteforce(F2, 2)
    assert len(result.table.reps) == 3
    assert result.group.is_free_of_rank(1)
    assert sorted(result.class_integer(i) for i in range(3)) == [0, 1, 2]
    assert result.table.witnesses  # some nontrivial identifications happened
    # the monoid addition is compatible with the ranks
    for (i, j), s in result.table.add_table.items():
        assert result.class_integer(s) == \
            result.class_integer(i) + result.class_integer(j)


def test_bruteforce_z4_small():
    result = k0_bruteforce(ModularBase(4), 1)
    assert result.table.reps == ((), (((1,),)))
    assert result.group.is_free_of_rank(1)
    trivial = k0_bruteforce(F2, 0)
    assert trivial.group.is_free_of_rank(0)
    assert len(trivial.table.reps) == 1


def test_bruteforce_budget_guard():
    with pytest.raises(BudgetExceededError):
        k0_bruteforce(ModularBase(17), 1)
    with pytest.raises(BudgetExceededError):
        k0_bruteforce(ModularBase(16), 3)


def test_degree_window_basics(f2t, window):
    assert window.group.is_free_of_rank(3)
    assert set(window.group.labels) == {(0,), (1,), (2,)}
    assert window.slots == ((2,), (1,), (0,))
    for s in window.slots:
        assert window.free_class(s) == K0Element.basis(s)
    singleton = degree_window(f2t, [(1,)], RAY)
    assert singleton.group.is_free_of_rank(1)


def test_degree_window_rejects_full_support():
    laurent = laurent_group_ring(F2, Z1)
    with pytest.raises(SupportViolationError):
        degree_window(laurent, [(0,), (1,)], RAY)


def test_classify_zero_and_diag(f2t, window):
    zero_obj = free_object(window.module([]))
    assert window.classify(zero_obj) == K0Element.zero()
    m = window.module([(0,), (1,)])
    one, zero = f2t.one(), f2t.zero()
    p = SysMorphism(m, m, [[one, zero], [zero, zero]])
    assert window.classify(IdemObject(m, p)) == K0Element.basis((0,))


def test_classify_conjugation_invariant(f2t, window):
    m = window.module([(1,), (0,)])
    one, zero, t = f2t.one(), f2t.zero(), f2t.monomial((1,))
    d = SysMorphism(m, m, [[one, zero], [zero, zero]])
    p = SysMorphism(m, m, [[one, zero], [t, zero]])
    assert p @ p == p
    assert window.classify(IdemObject(m, p)) == window.classify(IdemObject(m, d))


def test_classify_additive_on_direct_sums(f2t, window):
    rng = random.Random(5)
    X, _ = window.random_object(rng)
    Y, _ = window.random_object(rng)
    degrees = X.module.degrees + Y.module.degrees
    m = window.module(degrees)
    zero = f2t.zero()
    rows = []
    for i in range(X.rank):
        rows.append(list(X.p.entries[i]) + [zero] * Y.rank)
    for i in range(Y.rank):
        rows.append([zero] * X.rank + list(Y.p.entries[i]))
    total = IdemObject(m, SysMorphism(m, m, rows))
    assert window.classify(total) == window.classify(X) + window.classify(Y)


def test_classify_agrees_with_full_split(f2t, window):
    rng = random.Random(8)
    for _ in range(10):
        X, lt = window.random_object(rng)
        if X.rank == 0 or len([s for s in lt.sizes if s]) < 2:
            continue
        present = [k for k, s in enumerate(lt.sizes) if s]
        squeezed_lt = type(lt)(tuple(lt.sizes[k] for k in present))
        parts, _, _ = full_split(X, squeezed_lt)
        diag, _ = diagonal_embed(parts)
        assert window.classify(diag) == window.classify(X)


def test_classify_outside_window_rejected(f2t, window):
    outside = free_object(window.module([(9,)]))
    with pytest.raises(SpecMismatchError):
        window.classify(outside)


def test_shift_compatibility(f2t):
    rng = random.Random(12)
    small = degree_window(f2t, [(0,), (1,)], RAY)
    shifted = degree_window(f2t, [(2,), (3,)], RAY)
    X, _ = small.random_object(rng)
    moved = IdemObject(shift_module((2,), X.module),
                       SysMorphism(shift_module((2,), X.module),
                                   shift_module((2,), X.module),
                                   X.p.entries))
    assert shifted.classify(moved) == shift_action(Z1, (2,), small.classify(X))


def test_window_inclusion_naturality(f2t):
    rng = random.Random(14)
    small = degree_window(f2t, [(0,), (1,)], RAY)
    big = degree_window(f2t, [(j,) for j in range(4)], RAY)
    for _ in range(10):
        X, _ = small.random_object(rng)
        assert big.classify(X) == small.classify(X)


def test_oracle_slot_agreement_mod4():
    ring = polynomial_ring(ModularBase(4))
    win = degree_window(ring, [(0,), (1,), (2,)], RAY)
    oracle = k0_bruteforce(ModularBase(4), 2)
    rng = random.Random(21)
    for _ in range(25):
        X, lt = win.random_object(rng, max_per_slot=2)
        cls = win.classify(X)
        total = sum(c for _, c in cls.items)
        via_oracle = 0
        for k, slot in enumerate(win.slots):
            blk = lt.blocks[k]
            if not blk:
                continue
            rows = win._trivialise(
                slot,
                [X.module.degrees[i] for i in blk],
                [[X.p.entries[a][b] for b in blk] for a in blk])
            via_oracle += oracle.class_integer(oracle.table.class_index(rows))
        assert via_oracle == total


def test_composite_base_uses_oracle_classifier():
    z6 = ModularBase(6)
    classifier = slot_classifier_for(z6)
    assert isinstance(classifier, OracleSlotClassifier)
    assert classifier.rank == 2  # Z/6 splits into two local factors
    ring = polynomial_ring(z6)
    win = degree_window(ring, [(0,), (1,)], RAY)
    assert win.group.is_free_of_rank(4)
    cls = win.free_class((0,))
    assert sum(abs(c) for _, c in cls.items) >= 1


def test_semidirect_window_and_iso():
    ring = skew_group_ring(F2, Z1, C2, named_action("trivial", Z1, C2),
                           n_functionals=[(1,)])
    rng = random.Random(31)
    win = semidirect_window(ring, [(0,), (1,)], RAY, rng=rng)
    assert win.group.is_free_of_rank(2)
    assert win.free_class(((1,), 1)) == K0Element.basis((1,))
    report = semidirect_k0_iso(ring, [(0,), (1,), (2,)], RAY,
                               random.Random(32), samples=10)
    assert report.passed
    assert report.rank_lhs == report.rank_rhs == 3


def test_semidirect_iso_swap_action():
    ring = skew_group_ring(F2, Z2, C2, named_action("swap", Z2, C2),
                           n_functionals=[(1, 0), (0, 1)])
    report = semidirect_k0_iso(ring, [(0, 0), (1, 0), (0, 1)], QUADRANT,
                               random.Random(33), samples=10)
    assert report.passed
    assert report.rank_lhs == report.rank_rhs == 3


def test_semidirect_iso_rejects_bad_order():
    # the inversion action does not preserve the ray, so the window must
    # refuse to decompose
    ring = skew_group_ring(F2, Z1, C2, named_action("inversion", Z1, C2))
    report = semidirect_k0_iso(ring, [(0,), (1,)], RAY, random.Random(34))
    assert not report.passed
    assert dict(report.checks)["window_construction"] is False


def test_coset_window_and_quotient_iso():
    band = monoid_ring(F2, Z2, [(1, 0)])
    ext = lineality_extension(2, [(1, 0)])
    order = ConeOrder(ext.quotient, ((1, 0),))
    cosets = [(0, 0), (1, 0), (2, 0)]
    win = coset_window(band, ext, cosets, order)
    assert win.group.is_free_of_rank(3)
    gen_degree = band.group.compose(win.section((1, 0)), (0, -3))
    assert win.free_class(gen_degree) == K0Element.basis((1, 0))
    report = quotient_k0_iso(band, ext, cosets, order, random.Random(35),
                             samples=10)
    assert report.passed


def test_quotient_iso_trivial_sublattice_matches_template():
    quad_ring = monoid_ring(F2, Z2, [(1, 0), (0, 1)])
    ext = lineality_extension(2, [(1, 0), (0, 1)])
    order = ConeOrder(ext.quotient, ((1, 0), (0, 1)))
    window = [(0, 0), (1, 0), (0, 1)]
    report = quotient_k0_iso(quad_ring, ext, window, order, random.Random(36),
                             samples=8)
    assert report.passed
    direct = degree_window(quad_ring, window, QUADRANT)
    assert direct.group.is_free_of_rank(len(window))


def test_coset_window_requires_compatible_support():
    quad_ring = monoid_ring(F2, Z2, [(1, 0), (0, 1)])
    ext = lineality_extension(2, [(1, 0)])  # kills y, but support does not
    order = ConeOrder(ext.quotient, ((1, 0),))
    with pytest.raises(SupportViolationError):
        coset_window(quad_ring, ext, [(0, 0), (1, 0)], order)


def test_strong_reduction_cross_check():
    band = monoid_ring(F2, Z2, [(1, 0)])
    ext = lineality_extension(2, [(1, 0)])
    order = ConeOrder(ext.quotient, ((1, 0),))
    group, report = strong_reduction_k0(band, ext, [(0, 0), (1, 0)], order,
                                        random.Random(37), samples=8)
    assert report.passed
    assert group.is_free_of_rank(2)


def test_filtered_graded_agreement():
    report = filtered_graded_agreement(
        filtered_polynomial_ring(F2), polynomial_ring(F2),
        [(j,) for j in range(4)], RAY, random.Random(38), samples=8)
    assert report.passed


def test_k0_class_entry_point(f2t, window):
    obj = free_object(window.module([(2,)]))
    assert k0_class(obj, window) == K0Element.basis((2,))
