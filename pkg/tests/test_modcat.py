import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from systematic_k.errors import (
    MorphismViolationError,
    NonAdditiveFunctorError,
    NotIdempotentError,
    NotLowerTriangularError,
    NotStronglySystematicError,
)
from systematic_k.groups import FreeAbelian
from systematic_k.modcat import (
    AdditiveFunctor,
    FreeSysModule,
    IdemMorphism,
    IdemObject,
    LTStructure,
    SysMorphism,
    block_matrix,
    check_functor_additive,
    check_module_strong,
    check_split_naturality,
    check_transform_naturality,
    completion_morphism,
    completion_object,
    completion_transform_component,
    diagonal_embed,
    direct_sum_lt,
    epsilon_embed,
    free_object,
    full_split,
    hom_component_basis,
    identity_functor,
    identity_transform,
    idem_identity,
    left_mult_surjective_on_component,
    lt_block_functor,
    lt_block_object,
    presented_is_zero,
    presented_module,
    random_idem_morphism,
    random_lt_idempotent,
    rho_naturality_counterexample,
    shift_functor,
    shift_module,
    shift_tensor_maps,
    split_lt_idempotent,
    tensor_extend,
    validate_morphism,
)
from systematic_k.rings import (
    F2,
    ModularBase,
    laurent_group_ring,
    polynomial_ring,
    power_localization,
)

Z1 = FreeAbelian(1)


@pytest.fixture
def f2t():
    return polynomial_ring(F2)


@pytest.fixture
def laurent():
    return laurent_group_ring(F2, Z1)


def test_shift_module_examples(f2t):
    m = FreeSysModule(f2t, ((0,), (1,)))
    assert shift_module((0,), m) == m
    assert shift_module((2,), m).degrees == ((2,), (3,))


@settings(max_examples=30)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 4))
def test_shift_composition_law(a, b, g):
    ring = laurent_group_ring(F2, Z1)
    m = FreeSysModule(ring, ((g,),))
    assert shift_module((b,), shift_module((a,), m)) == shift_module((b + a,), m)


def test_morphism_validation(f2t):
    src = FreeSysModule(f2t, ((2,),))
    tgt = FreeSysModule(f2t, ((0,),))
    ok = SysMorphism(src, tgt, [[f2t.monomial((2,))]])
    assert validate_morphism(ok) == []
    bad = SysMorphism(FreeSysModule(f2t, ((0,),)), FreeSysModule(f2t, ((2,),)),
                      [[f2t.monomial((1,))]], check=False)
    assert validate_morphism(bad) == [(0, 0, (-2,))]
    with pytest.raises(MorphismViolationError):
        SysMorphism(FreeSysModule(f2t, ((0,),)), FreeSysModule(f2t, ((2,),)),
                    [[f2t.monomial((1,))]])
    zero = SysMorphism.zero(src, tgt)
    assert validate_morphism(zero) == []


def test_hom_component_basis(f2t, laurent):
    assert [x.data for x in hom_component_basis(f2t, (2,), (0,))] == \
        [(((2,), 1),)]
    assert hom_component_basis(f2t, (0,), (2,)) == []
    assert hom_component_basis(laurent, (-3,), (1,))


def test_idem_object_rejects_non_idempotent(f2t):
    m = FreeSysModule(f2t, ((0,),))
    t_like = SysMorphism(m, m, [[f2t.one() + f2t.one()]])  # = 0 in char 2
    IdemObject(m, t_like)  # the zero morphism is idempotent
    two = SysMorphism(m, m, [[f2t.monomial((0,))]])
    IdemObject(m, two)  # identity is idempotent
    bad_ring = polynomial_ring(ModularBase(4))
    mb = FreeSysModule(bad_ring, ((0,),))
    with pytest.raises(NotIdempotentError):
        IdemObject(mb, SysMorphism(mb, mb, [[bad_ring.int_scale(bad_ring.one(), 2)]]))


def test_idem_morphism_law_enforced(f2t):
    m = FreeSysModule(f2t, ((0,),))
    zero_obj = IdemObject(m, SysMorphism.zero(m, m))
    ident_obj = free_object(m)
    with pytest.raises(MorphismViolationError):
        IdemMorphism(ident_obj, zero_obj, SysMorphism.identity(m))
    IdemMorphism(zero_obj, ident_obj, SysMorphism.zero(m, m))


def _identity_two_block(ring):
    m = FreeSysModule(ring, ((1,), (0,)))
    return free_object(m), LTStructure((1, 1))


def test_split_identity_idempotent(f2t):
    X, lt = _identity_two_block(f2t)
    data = split_lt_idempotent(X, lt)
    one, zero = f2t.one(), f2t.zero()
    assert data.sigma.f.entries == ((zero,), (one,))
    assert data.pi.f.entries == ((one, zero),)
    assert data.rho.f.entries == ((zero, one),)
    assert data.mixer.f == data.diagonal.p


def test_split_block_diagonal_collapses(f2t):
    rng = random.Random(3)
    X, lt = random_lt_idempotent(f2t, (((1,), (2,)), ((0,),)), rng,
                                 force_block_diagonal=True)
    data = split_lt_idempotent(X, lt)
    p22 = block_matrix(X.p, lt, lt, 1, 1)
    assert data.rho.f.entries[0][:2] == (f2t.zero(), f2t.zero())
    assert data.rho.f.entries[0][2] == p22.entries[0][0]
    assert data.mixer.f == data.diagonal.p == X.p


@pytest.mark.parametrize("base_n", [2, 4])
def test_split_random_instances(base_n):
    ring = polynomial_ring(ModularBase(base_n))
    rng = random.Random(base_n)
    for _ in range(40):
        X, lt = random_lt_idempotent(
            ring, (((1,), (2,)), ((0,), (1,))), rng)
        data = split_lt_idempotent(X, lt)
        assert data.mixer.f @ data.to_diag.f == X.p
        assert data.to_diag.f @ data.mixer.f == data.diagonal.p


def test_full_split_three_blocks(f2t):
    rng = random.Random(9)
    for _ in range(10):
        X, lt = random_lt_idempotent(
            f2t, (((2,),), ((1,), (1,)), ((0,),)), rng)
        parts, to_diag, mixer = full_split(X, lt)
        assert len(parts) == 3
        diag_obj, _ = diagonal_embed(parts)
        assert mixer @ to_diag == X.p
        assert to_diag @ mixer == diag_obj.p


def test_lt_block_and_epsilon(f2t):
    rng = random.Random(4)
    X, lt = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    top = lt_block_object(X, lt, 0)
    bottom = lt_block_object(X, lt, 1)
    assert top.p.entries[0][0] == X.p.entries[0][0]
    assert bottom.p.entries[0][0] == X.p.entries[1][1]
    embedded, e_lt = epsilon_embed(f2t, 2, 0, top)
    assert lt_block_object(embedded, e_lt, 0) == top
    with pytest.raises(IndexError):
        lt_block_object(X, lt, 5)


def test_naturality_of_section_and_projection(f2t):
    rng = random.Random(11)
    for _ in range(25):
        X, lt = random_lt_idempotent(f2t, (((1,), (2,)), ((0,),)), rng)
        Y, _ = random_lt_idempotent(f2t, (((1,), (2,)), ((0,),)), rng)
        fm = random_idem_morphism(X, lt, Y, lt, rng)
        assert check_split_naturality(fm, lt, lt)
    X, lt = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    assert check_split_naturality(idem_identity(X), lt, lt)


def test_rho_is_not_natural(f2t, laurent):
    rng = random.Random(13)
    found = rho_naturality_counterexample(f2t, (((1,),), ((0,),)), rng,
                                          budget=500)
    assert found.found
    # replay the witness: both composites are honest morphisms that differ
    assert found.lhs != found.rhs
    found_laurent = rho_naturality_counterexample(
        laurent, (((1,),), ((0,),)), random.Random(17), budget=500)
    assert found_laurent.found
    diag_only = rho_naturality_counterexample(
        f2t, (((1,),), ((0,),)), random.Random(19), budget=60,
        force_block_diagonal=True)
    assert not diag_only.found
    assert diag_only.tried == 60


def test_direct_sum_biproduct_equations(f2t):
    rng = random.Random(23)
    X, lt_x = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    Y, lt_y = random_lt_idempotent(f2t, (((2,),), ((0,), (1,))), rng)
    total, lt, incl_x, proj_x, incl_y, proj_y = direct_sum_lt(X, lt_x, Y, lt_y)
    assert proj_x.f @ incl_x.f == X.p
    assert proj_y.f @ incl_y.f == Y.p
    assert (incl_x.f @ proj_x.f) + (incl_y.f @ proj_y.f) == total.p
    assert (proj_y.f @ incl_x.f).is_zero()
    assert lt.sizes == (2, 3)


def test_completion_functors(f2t):
    rng = random.Random(29)
    X, lt = random_lt_idempotent(f2t, (((1,), (2,)), ((0,),)), rng)
    ident = identity_functor()
    assert completion_object(ident, X) == X
    tau = identity_transform(ident)
    assert completion_transform_component(tau, X).f == X.p

    sh = shift_functor((3,))
    shifted = completion_object(sh, X)
    assert shifted.module.degrees == tuple(
        (g[0] + 3,) for g in X.module.degrees)
    # shifting commutes with the splitting data entrywise
    data = split_lt_idempotent(X, lt)
    sh_data = split_lt_idempotent(shifted, lt)
    assert sh_data.rho.f.entries == data.rho.f.entries

    blk = lt_block_functor(lt, 1)
    assert completion_object(blk, X) == lt_block_object(X, lt, 1)


def test_completion_functor_on_morphisms(f2t):
    rng = random.Random(31)
    X, lt = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    Y, _ = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    Z, _ = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    f = random_idem_morphism(X, lt, Y, lt, rng)
    g = random_idem_morphism(Y, lt, Z, lt, rng)
    sh = shift_functor((1,))
    lhs = completion_morphism(sh, g @ f)
    rhs = completion_morphism(sh, g) @ completion_morphism(sh, f)
    assert lhs.f == rhs.f


def test_functor_additivity_check(f2t):
    rng = random.Random(37)
    X, lt = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    f = random_idem_morphism(X, lt, X, lt, rng).f
    g = random_idem_morphism(X, lt, X, lt, rng).f
    check_functor_additive(shift_functor((1,)), [(f, g)])
    squarer = AdditiveFunctor("square", lambda m: m, lambda h: h @ h)
    m = FreeSysModule(f2t, ((1,), (0,)))
    zero, one, t = f2t.zero(), f2t.one(), f2t.monomial((1,))
    nil = SysMorphism(m, m, [[zero, zero], [t, zero]])
    proj = SysMorphism(m, m, [[one, zero], [zero, zero]])
    with pytest.raises(NonAdditiveFunctorError):
        check_functor_additive(squarer, [(nil, proj)])


def test_transform_naturality_on_samples(f2t):
    rng = random.Random(41)
    X, lt = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    Y, _ = random_lt_idempotent(f2t, (((1,),), ((0,),)), rng)
    fm = random_idem_morphism(X, lt, Y, lt, rng)
    assert check_transform_naturality(identity_transform(identity_functor()),
                                      [fm, idem_identity(X)])


def test_presented_module_and_tensor_extension():
    loc = power_localization(2)
    torsion = presented_module(loc, [[2]])
    assert not presented_is_zero(torsion)
    assert presented_is_zero(tensor_extend(torsion))
    free_rank_one = presented_module(loc, [[]])
    assert not presented_is_zero(free_rank_one)
    assert not presented_is_zero(tensor_extend(free_rank_one))
    trivial = presented_module(loc, [])
    assert presented_is_zero(trivial)
    with pytest.raises(MorphismViolationError):
        presented_module(loc, [[Fraction(1, 2)]])


def test_presented_module_field_case(f2t):
    invertible = presented_module(f2t, [[1]])
    assert presented_is_zero(tensor_extend(invertible))
    singular = presented_module(f2t, [[0]])
    assert not presented_is_zero(tensor_extend(singular))


def test_left_multiplication_surjectivity():
    loc = power_localization(2)
    two = loc.from_fraction(2)
    assert loc.is_unit(two)
    assert not left_mult_surjective_on_component(loc, two, (0,))
    assert left_mult_surjective_on_component(loc, loc.one(), (0,))
    assert left_mult_surjective_on_component(loc, loc.from_fraction(-1), (2,))


def test_shift_tensor_roundtrips(laurent):
    loc = power_localization(2)
    rng = random.Random(43)
    for ring, a in ((loc, 1), (loc, -2), (laurent, 3)):
        maps = shift_tensor_maps(ring, (a,))
        for _ in range(25):
            x = ring.sample_element(rng)
            assert maps.roundtrip_module(x)
    f2t = polynomial_ring(F2)
    with pytest.raises(NotStronglySystematicError):
        shift_tensor_maps(f2t, (1,))


def test_module_strong_systematicity(laurent):
    module = FreeSysModule(laurent, ((0,), (2,)))
    for g in ((0,), (1,), (-2,)):
        for h in ((0,), (1,), (-1,)):
            assert check_module_strong(module, g, h)
    loc = power_localization(2)
    module2 = FreeSysModule(loc, ((0,), (-1,)))
    assert check_module_strong(module2, (1,), (-1,))
