"""Based modules over systematic rings, degree-constrained morphism
matrices, the idempotent completion, and block-lower-triangular
decomposition with explicit splitting data.

A based module is a list of generator degrees; a morphism is a matrix
whose (i, j) entry must lie in the component R_{g_i^{-1} g'_j} for
target degree g_i and source degree g'_j.  Everything is verified by
exact arithmetic; no tolerance appears anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import (
    MorphismViolationError,
    NonAdditiveFunctorError,
    NotIdempotentError,
    NotLowerTriangularError,
    NotStronglySystematicError,
    SpecMismatchError,
    SystematicKError,
)
from .rings import (
    DualBasis,
    MonoidRing,
    PowerLocalization,
    RingElem,
    SystematicRing,
    additive_span_contains,
    dual_basis,
    random_component_element,
)


@dataclass(frozen=True)
class FreeSysModule:
    """Finitely generated systematically free based module.

    The k-th basis element sits in degree ``degrees[k]``; rank 0 is the
    zero module.
    """

    ring: SystematicRing = field(compare=False)
    degrees: tuple

    def __post_init__(self):
        if not isinstance(self.degrees, tuple):
            object.__setattr__(self, "degrees", tuple(self.degrees))
        for g in self.degrees:
            self.ring.group.require(g)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def same_space(self, other) -> bool:
        return self.ring is other.ring and self.degrees == other.degrees


def shift_module(a, module: FreeSysModule) -> FreeSysModule:
    """Reindex the degree components by a; generator degrees become a*g."""
    grp = module.ring.group
    return FreeSysModule(module.ring, tuple(grp.compose(a, g) for g in module.degrees))


def required_degree(ring, g_tgt, g_src):
    return ring.group.compose(ring.group.invert(g_tgt), g_src)


def hom_component_basis(ring, g_src, g_tgt, window=None):
    """Additive generators of the component hosting entries with the given
    source and target degrees; the empty list certifies that every such
    entry vanishes."""
    return ring.gens(required_degree(ring, g_tgt, g_src))


class SysMorphism:
    """Degree-constrained matrix between based modules.

    ``entries[i][j]`` maps the j-th source generator to the i-th target
    generator, so composition is matrix multiplication and ``f @ g``
    means "f after g".
    """

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: FreeSysModule, target: FreeSysModule,
                 entries, check: bool = True):
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != target.rank or any(len(r) != source.rank for r in entries):
            raise MorphismViolationError("matrix shape does not match the modules")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "entries", entries)
        if check:
            bad = self.violations()
            if bad:
                raise MorphismViolationError(f"degree constraint violated at {bad}")

    def __setattr__(self, *args):
        raise AttributeError("SysMorphism is immutable")

    def violations(self):
        """List of (i, j, required degree) for entries outside their component."""
        ring = self.source.ring
        out = []
        for i, g_tgt in enumerate(self.target.degrees):
            for j, g_src in enumerate(self.source.degrees):
                need = required_degree(ring, g_tgt, g_src)
                if not ring.member(self.entries[i][j], need):
                    out.append((i, j, need))
        return out

    @classmethod
    def zero(cls, source, target):
        z = source.ring.zero()
        return cls(source, target,
                   [[z] * source.rank for _ in range(target.rank)], check=False)

    @classmethod
    def identity(cls, module):
        ring = module.ring
        one, zero = ring.one(), ring.zero()
        return cls(module, module,
                   [[one if i == j else zero for j in range(module.rank)]
                    for i in range(module.rank)], check=False)

    def __matmul__(self, other: "SysMorphism") -> "SysMorphism":
        if not other.target.same_space(self.source):
            raise SpecMismatchError("composition shape mismatch")
        ring = self.source.ring
        rows = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = ring.zero()
                for k in range(self.source.rank):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return SysMorphism(other.source, self.target, rows, check=False)

    def __add__(self, other):
        if not (self.source.same_space(other.source)
                and self.target.same_space(other.target)):
            raise SpecMismatchError("sum shape mismatch")
        return SysMorphism(
            self.source, self.target,
            [[a + b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.entries, other.entries)], check=False)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SysMorphism(self.source, self.target,
                           [[-x for x in row] for row in self.entries], check=False)

    def __eq__(self, other):
        return (
            isinstance(other, SysMorphism)
            and self.source.same_space(other.source)
            and self.target.same_space(other.target)
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SysMorphism({self.source.degrees}->{self.target.degrees})"

    def is_zero(self):
        return all(not x for row in self.entries for x in row)


def shift_morphism(a, f: SysMorphism) -> SysMorphism:
    return SysMorphism(shift_module(a, f.source), shift_module(a, f.target),
                       f.entries, check=False)


def validate_morphism(f: SysMorphism):
    """Spec-level entry point: [] when every entry satisfies its constraint."""
    return f.violations()


# ---------------------------------------------------------------------------
# idempotent completion

@dataclass(frozen=True)
class IdemObject:
    """Pair (A, p) with p an idempotent endomorphism of the based module A."""

    module: FreeSysModule
    p: SysMorphism

    def __post_init__(self):
        if not (self.p.source.same_space(self.module)
                and self.p.target.same_space(self.module)):
            raise SpecMismatchError("projection does not act on the carrier")
        if self.p @ self.p != self.p:
            raise NotIdempotentError("p is not idempotent")

    @property
    def rank(self):
        return self.module.rank


def free_object(module: FreeSysModule) -> IdemObject:
    return IdemObject(module, SysMorphism.identity(module))


@dataclass(frozen=True)
class IdemMorphism:
    """Morphism f: (A, p) -> (B, q); the completion law q f p = f holds."""

    source: IdemObject
    target: IdemObject
    f: SysMorphism

    def __post_init__(self):
        if not (self.f.source.same_space(self.source.module)
                and self.f.target.same_space(self.target.module)):
            raise SpecMismatchError("underlying map does not match the objects")
        if self.target.p @ self.f @ self.source.p != self.f:
            raise MorphismViolationError("morphism law q f p = f fails")

    def __matmul__(self, other: "IdemMorphism") -> "IdemMorphism":
        return IdemMorphism(other.source, self.target, self.f @ other.f)


def idem_identity(X: IdemObject) -> IdemMorphism:
    return IdemMorphism(X, X, X.p)


# ---------------------------------------------------------------------------
# block structure

@dataclass(frozen=True)
class LTStructure:
    """Partition of the generator list into consecutive ordered blocks."""

    sizes: tuple[int, ...]
    labels: tuple = ()

    def __post_init__(self):
        if any(s < 0 for s in self.sizes):
            raise ValueError("negative block size")
        if self.labels and len(self.labels) != len(self.sizes):
            raise ValueError("one label per block expected")

    @property
    def blocks(self):
        out = []
        start = 0
        for s in self.sizes:
            out.append(range(start, start + s))
            start += s
        return out

    @property
    def total(self):
        return sum(self.sizes)


def block_module(module: FreeSysModule, lt: LTStructure, k: int) -> FreeSysModule:
    idx = lt.blocks[k]
    return FreeSysModule(module.ring, tuple(module.degrees[i] for i in idx))


def block_matrix(f: SysMorphism, lt_src: LTStructure, lt_tgt: LTStructure,
                 i: int, j: int) -> SysMorphism:
    rows = lt_tgt.blocks[i]
    cols = lt_src.blocks[j]
    return SysMorphism(
        block_module(f.source, lt_src, j),
        block_module(f.target, lt_tgt, i),
        [[f.entries[r][c] for c in cols] for r in rows],
        check=False,
    )


def require_lower_triangular(f: SysMorphism, lt_src: LTStructure,
                             lt_tgt: LTStructure):
    for i in range(len(lt_tgt.sizes)):
        for j in range(i + 1, len(lt_src.sizes)):
            if not block_matrix(f, lt_src, lt_tgt, i, j).is_zero():
                raise NotLowerTriangularError(f"block ({i}, {j}) is nonzero")


def assemble_blocks(src: FreeSysModule, tgt: FreeSysModule,
                    lt_src: LTStructure, lt_tgt: LTStructure,
                    blocks: dict) -> SysMorphism:
    """Build a full matrix from a sparse {(i, j): SysMorphism} block dict."""
    ring = src.ring
    rows = [[ring.zero()] * src.rank for _ in range(tgt.rank)]
    for (i, j), piece in blocks.items():
        rblock = lt_tgt.blocks[i]
        cblock = lt_src.blocks[j]
        for a, r in enumerate(rblock):
            for b, c in enumerate(cblock):
                rows[r][c] = piece.entries[a][b]
    return SysMorphism(src, tgt, rows, check=False)


def lt_block_object(X: IdemObject, lt: LTStructure, k: int) -> IdemObject:
    """The k-th diagonal functor on objects: (A, p) -> (A_k, p_kk)."""
    if not 0 <= k < len(lt.sizes):
        raise IndexError("block index out of range")
    return IdemObject(block_module(X.module, lt, k),
                      block_matrix(X.p, lt, lt, k, k))


def lt_block_morphism(fm: IdemMorphism, lt_src: LTStructure,
                      lt_tgt: LTStructure, k: int) -> IdemMorphism:
    return IdemMorphism(
        lt_block_object(fm.source, lt_src, k),
        lt_block_object(fm.target, lt_tgt, k),
        block_matrix(fm.f, lt_src, lt_tgt, k, k),
    )


def diagonal_embed(parts: Sequence[IdemObject]):
    """Assemble (⊕ A_k, diag(p_k)) from per-block objects."""
    if not parts:
        raise ValueError("need at least one part")
    ring = parts[0].module.ring
    degrees = tuple(g for part in parts for g in part.module.degrees)
    module = FreeSysModule(ring, degrees)
    lt = LTStructure(tuple(part.rank for part in parts))
    p = assemble_blocks(module, module, lt, lt,
                        {(k, k): part.p for k, part in enumerate(parts)})
    return IdemObject(module, p), lt


def epsilon_embed(ring, r: int, k: int, X: IdemObject):
    """Embed (A, p) as the k-th coordinate of an r-block object; the other
    blocks are zero modules, so the carrier does not change."""
    sizes = tuple(X.rank if i == k else 0 for i in range(r))
    return X, LTStructure(sizes)


# ---------------------------------------------------------------------------
# splitting a 2-block lower triangular idempotent

@dataclass(frozen=True)
class SplitData:
    """Explicit splitting of (A, p) into its diagonal blocks.

    sigma includes the bottom block, pi projects onto the top block, rho
    is the (non-natural) splitting retraction, and mixer is the inverse
    of (pi; rho) in the completion.
    """

    source: IdemObject
    top: IdemObject
    bottom: IdemObject
    diagonal: IdemObject
    sigma: IdemMorphism
    pi: IdemMorphism
    rho: IdemMorphism
    to_diag: IdemMorphism
    mixer: IdemMorphism


def split_lt_idempotent(X: IdemObject, lt: LTStructure) -> SplitData:
    """Split a 2-block lower triangular idempotent exactly.

    Verifies the block identities of the idempotent, builds the section,
    projection and retraction, and checks that (pi; rho) and the mixer
    are mutually inverse in the completion.  Raises if any exact identity
    fails, which would indicate invalid input.
    """
    if len(lt.sizes) != 2:
        raise NotLowerTriangularError("a 2-block structure is required")
    if lt.total != X.rank:
        raise NotLowerTriangularError("block sizes do not sum to the rank")
    require_lower_triangular(X.p, lt, lt)
    p11 = block_matrix(X.p, lt, lt, 0, 0)
    p21 = block_matrix(X.p, lt, lt, 1, 0)
    p22 = block_matrix(X.p, lt, lt, 1, 1)
    if p11 @ p11 != p11 or p22 @ p22 != p22:
        raise NotIdempotentError("diagonal blocks are not idempotent")
    if p21 @ p11 + p22 @ p21 != p21:
        raise NotIdempotentError("mixed block identity fails")
    if not (p22 @ p21 @ p11).is_zero():
        raise NotIdempotentError("sandwiched block is nonzero")

    module = X.module
    a1 = block_module(module, lt, 0)
    a2 = block_module(module, lt, 1)
    top = IdemObject(a1, p11)
    bottom = IdemObject(a2, p22)
    diagonal_p = assemble_blocks(module, module, lt, lt, {(0, 0): p11, (1, 1): p22})
    diagonal = IdemObject(module, diagonal_p)

    sigma_f = assemble_blocks(a2, module, LTStructure((0, a2.rank)), lt,
                              {(1, 1): p22})
    pi_f = assemble_blocks(module, a1, lt, LTStructure((a1.rank, 0)),
                           {(0, 0): p11})
    rho_f = assemble_blocks(module, a2, lt, LTStructure((0, a2.rank)),
                            {(1, 0): p22 @ p21, (1, 1): p22})
    to_diag_f = assemble_blocks(module, module, lt, lt,
                                {(0, 0): p11, (1, 0): p22 @ p21, (1, 1): p22})
    mixer_f = assemble_blocks(module, module, lt, lt,
                              {(0, 0): p11, (1, 0): p21 @ p11, (1, 1): p22})

    if mixer_f @ to_diag_f != X.p:
        raise SystematicKError("mixer is not a left inverse on the object")
    if to_diag_f @ mixer_f != diagonal_p:
        raise SystematicKError("mixer is not a right inverse on the diagonal")
    if not (pi_f @ sigma_f).is_zero():
        raise SystematicKError("projection does not annihilate the section")

    return SplitData(
        source=X,
        top=top,
        bottom=bottom,
        diagonal=diagonal,
        sigma=IdemMorphism(bottom, X, sigma_f),
        pi=IdemMorphism(X, top, pi_f),
        rho=IdemMorphism(X, bottom, rho_f),
        to_diag=IdemMorphism(X, diagonal, to_diag_f),
        mixer=IdemMorphism(diagonal, X, mixer_f),
    )


def check_split_naturality(fm: IdemMorphism, lt_src: LTStructure,
                           lt_tgt: LTStructure) -> bool:
    """Do the section and projection squares commute for this morphism?"""
    require_lower_triangular(fm.f, lt_src, lt_tgt)
    src = split_lt_idempotent(fm.source, lt_src)
    tgt = split_lt_idempotent(fm.target, lt_tgt)
    f11 = block_matrix(fm.f, lt_src, lt_tgt, 0, 0)
    f22 = block_matrix(fm.f, lt_src, lt_tgt, 1, 1)
    sigma_square = fm.f @ src.sigma.f == tgt.sigma.f @ f22
    pi_square = tgt.pi.f @ fm.f == f11 @ src.pi.f
    return sigma_square and pi_square


def full_split(X: IdemObject, lt: LTStructure):
    """Iterate the 2-block splitting across all blocks.

    Returns (parts, to_diag, mixer) with parts the diagonal objects and
    the two maps mutually inverse between X and their direct sum.
    """
    r = len(lt.sizes)
    if r == 0:
        raise ValueError("empty block structure")
    if r == 1:
        return [lt_block_object(X, lt, 0)], X.p, X.p
    outer = LTStructure((lt.total - lt.sizes[-1], lt.sizes[-1]))
    data = split_lt_idempotent(X, outer)
    prefix_lt = LTStructure(lt.sizes[:-1])
    parts, u_pref, v_pref = full_split(data.top, prefix_lt)
    module = X.module
    two = outer
    u_step = assemble_blocks(module, module, two, two,
                             {(0, 0): u_pref, (1, 1): data.bottom.p})
    v_step = assemble_blocks(module, module, two, two,
                             {(0, 0): v_pref, (1, 1): data.bottom.p})
    to_diag = u_step @ data.to_diag.f
    mixer = data.mixer.f @ v_step
    parts = parts + [data.bottom]
    diag_obj, _ = diagonal_embed(parts)
    if mixer @ to_diag != X.p or to_diag @ mixer != diag_obj.p:
        raise SystematicKError("iterated splitting failed to invert")
    return parts, to_diag, mixer


def direct_sum_lt(X: IdemObject, lt_x: LTStructure, Y: IdemObject,
                  lt_y: LTStructure):
    """Blockwise direct sum with its inclusion/projection system.

    Returns (sum object, lt, incl_x, proj_x, incl_y, proj_y) where the
    completion-level biproduct equations hold exactly.
    """
    if len(lt_x.sizes) != len(lt_y.sizes):
        raise SpecMismatchError("block counts differ")
    ring = X.module.ring
    degrees = []
    for k in range(len(lt_x.sizes)):
        degrees.extend(X.module.degrees[i] for i in lt_x.blocks[k])
        degrees.extend(Y.module.degrees[i] for i in lt_y.blocks[k])
    module = FreeSysModule(ring, tuple(degrees))
    lt = LTStructure(tuple(a + b for a, b in zip(lt_x.sizes, lt_y.sizes)))

    def inclusion(source: IdemObject, lt_s: LTStructure, offset_of) -> SysMorphism:
        rows = [[ring.zero()] * source.rank for _ in range(module.rank)]
        for k in range(len(lt.sizes)):
            for a, src_idx in enumerate(lt_s.blocks[k]):
                rows[offset_of(k) + a][src_idx] = ring.one()
        return SysMorphism(source.module, module, rows, check=False)

    def x_offset(k):
        return lt.blocks[k].start

    def y_offset(k):
        return lt.blocks[k].start + lt_x.sizes[k]

    incl_x0 = inclusion(X, lt_x, x_offset)
    incl_y0 = inclusion(Y, lt_y, y_offset)

    def transpose(f: SysMorphism, source, target):
        rows = [[f.entries[j][i] for j in range(f.target.rank)]
                for i in range(f.source.rank)]
        return SysMorphism(source, target, rows, check=False)

    proj_x0 = transpose(incl_x0, module, X.module)
    proj_y0 = transpose(incl_y0, module, Y.module)
    p_sum = (incl_x0 @ X.p @ proj_x0) + (incl_y0 @ Y.p @ proj_y0)
    total = IdemObject(module, p_sum)
    incl_x = IdemMorphism(X, total, incl_x0 @ X.p)
    incl_y = IdemMorphism(Y, total, incl_y0 @ Y.p)
    proj_x = IdemMorphism(total, X, X.p @ proj_x0)
    proj_y = IdemMorphism(total, Y, Y.p @ proj_y0)
    return total, lt, incl_x, proj_x, incl_y, proj_y


# ---------------------------------------------------------------------------
# random instances

def random_component_entry(ring, degree, rng, zero_bias: float = 0.4):
    if rng.random() < zero_bias:
        return ring.zero()
    return random_component_element(ring, degree, rng, bound=2, nonzero=True)


def random_matrix(src: FreeSysModule, tgt: FreeSysModule, rng,
                  allowed=None, zero_bias: float = 0.4) -> SysMorphism:
    """Random degree-valid matrix; ``allowed(i, j)`` can force zeros."""
    ring = src.ring
    rows = []
    for i, g_tgt in enumerate(tgt.degrees):
        row = []
        for j, g_src in enumerate(src.degrees):
            if allowed is not None and not allowed(i, j):
                row.append(ring.zero())
            else:
                row.append(random_component_entry(
                    ring, required_degree(ring, g_tgt, g_src), rng, zero_bias))
        rows.append(row)
    return SysMorphism(src, tgt, rows)


def _block_index(lt: LTStructure, i: int) -> int:
    for k, blk in enumerate(lt.blocks):
        if i in blk:
            return k
    raise IndexError(i)


def random_lt_idempotent(ring, block_degrees, rng,
                         force_block_diagonal: bool = False):
    """Random block-lower-triangular idempotent, by construction.

    A 0/1 diagonal is conjugated with a unitriangular matrix carrying
    random degree-valid strictly lower entries, which guarantees
    idempotency, triangularity and degree validity all at once.
    """
    degrees = tuple(g for blk in block_degrees for g in blk)
    module = FreeSysModule(ring, degrees)
    lt = LTStructure(tuple(len(blk) for blk in block_degrees))
    n = module.rank
    one, zero = ring.one(), ring.zero()
    diag = [[one if (i == j and rng.random() < 0.7) else zero
             for j in range(n)] for i in range(n)]
    d = SysMorphism(module, module, diag, check=False)

    def allowed(i, j):
        if i <= j:
            return False
        if force_block_diagonal:
            return _block_index(lt, i) == _block_index(lt, j)
        return True

    nilp = random_matrix(module, module, rng, allowed=allowed)
    u = SysMorphism.identity(module) + nilp
    # inverse of a unitriangular matrix via the finite geometric series
    inv = SysMorphism.identity(module)
    power = nilp
    sign = -1
    for _ in range(n):
        if power.is_zero():
            break
        inv = inv + (power if sign > 0 else -power)
        power = power @ nilp
        sign = -sign
    if u @ inv != SysMorphism.identity(module):
        raise SystematicKError("unitriangular inversion failed")
    p = u @ d @ inv
    return IdemObject(module, p), lt


def random_idem_morphism(fm_source: IdemObject, lt_src: LTStructure,
                         fm_target: IdemObject, lt_tgt: LTStructure, rng,
                         force_block_diagonal: bool = False) -> IdemMorphism:
    """Random valid completion morphism, lower triangular blockwise."""

    def allowed(i, j):
        bi, bj = _block_index(lt_tgt, i), _block_index(lt_src, j)
        if force_block_diagonal:
            return bi == bj
        return bi >= bj

    raw = random_matrix(fm_source.module, fm_target.module, rng, allowed=allowed)
    f = fm_target.p @ raw @ fm_source.p
    return IdemMorphism(fm_source, fm_target, f)


@dataclass(frozen=True)
class RhoSearchResult:
    found: bool
    tried: int
    source: IdemObject | None = None
    target: IdemObject | None = None
    morphism: IdemMorphism | None = None
    lhs: SysMorphism | None = None
    rhs: SysMorphism | None = None


def rho_naturality_counterexample(ring, block_degrees, rng, budget: int = 1000,
                                  force_block_diagonal: bool = False) -> RhoSearchResult:
    """Search for a morphism where the splitting retraction fails to be
    natural: rho_B o f differs from f_22 o rho_A.

    Returns a found/exhausted result; exhaustion is reported, not raised.
    """
    tried = 0
    while tried < budget:
        tried += 1
        X, lt = random_lt_idempotent(ring, block_degrees, rng,
                                     force_block_diagonal)
        Y, _ = random_lt_idempotent(ring, block_degrees, rng,
                                    force_block_diagonal)
        fm = random_idem_morphism(X, lt, Y, lt, rng, force_block_diagonal)
        sx = split_lt_idempotent(X, lt)
        sy = split_lt_idempotent(Y, lt)
        f22 = block_matrix(fm.f, lt, lt, 1, 1)
        lhs = sy.rho.f @ fm.f
        rhs = f22 @ sx.rho.f
        if lhs != rhs:
            return RhoSearchResult(True, tried, X, Y, fm, lhs, rhs)
    return RhoSearchResult(False, tried)


# ---------------------------------------------------------------------------
# functors and natural transformations on the completion

@dataclass(frozen=True)
class AdditiveFunctor:
    name: str
    on_module: Callable = field(compare=False)
    on_morphism: Callable = field(compare=False)


def identity_functor() -> AdditiveFunctor:
    return AdditiveFunctor("id", lambda m: m, lambda f: f)


def shift_functor(a) -> AdditiveFunctor:
    return AdditiveFunctor(f"shift[{a}]",
                           lambda m: shift_module(a, m),
                           lambda f: shift_morphism(a, f))


def lt_block_functor(lt: LTStructure, k: int) -> AdditiveFunctor:
    return AdditiveFunctor(
        f"block[{k}]",
        lambda m: block_module(m, lt, k),
        lambda f: block_matrix(f, lt, lt, k, k),
    )


def completion_object(F: AdditiveFunctor, X: IdemObject) -> IdemObject:
    return IdemObject(F.on_module(X.module), F.on_morphism(X.p))


def completion_morphism(F: AdditiveFunctor, fm: IdemMorphism) -> IdemMorphism:
    return IdemMorphism(completion_object(F, fm.source),
                        completion_object(F, fm.target),
                        F.on_morphism(fm.f))


def check_functor_additive(F: AdditiveFunctor, parallel_pairs):
    """Sampled additivity check: F(f + g) = F(f) + F(g)."""
    for f, g in parallel_pairs:
        if F.on_morphism(f + g) != F.on_morphism(f) + F.on_morphism(g):
            raise NonAdditiveFunctorError(f"functor {F.name} is not additive")


@dataclass(frozen=True)
class NatTransform:
    """Transformation between two functors, given componentwise on the
    underlying based modules."""

    name: str
    source: AdditiveFunctor
    target: AdditiveFunctor
    component: Callable = field(compare=False)


def identity_transform(F: AdditiveFunctor) -> NatTransform:
    return NatTransform("id", F, F,
                        lambda m: SysMorphism.identity(F.on_module(m)))


def completion_transform_component(tau: NatTransform, X: IdemObject) -> IdemMorphism:
    """Induced component at (A, p): target(p) composed with tau_A."""
    f = tau.target.on_morphism(X.p) @ tau.component(X.module)
    return IdemMorphism(completion_object(tau.source, X),
                        completion_object(tau.target, X), f)


def check_transform_naturality(tau: NatTransform, idem_morphisms) -> bool:
    for fm in idem_morphisms:
        lhs = completion_transform_component(tau, fm.target).f \
            @ completion_morphism(tau.source, fm).f
        rhs = completion_morphism(tau.target, fm).f \
            @ completion_transform_component(tau, fm.source).f
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# presented modules over the identity component; tensor extension

@dataclass(frozen=True)
class PresentedModule:
    """Cokernel of a matrix over the identity-degree component.

    ``rows`` is the m x n presentation matrix: m module generators, n
    relation columns.  When ``over_full_ring`` is set the same matrix is
    read as a presentation over the whole ring (the tensor extension).
    """

    ring: SystematicRing = field(compare=False)
    rows: tuple
    over_full_ring: bool = False

    def __post_init__(self):
        e = self.ring.group.identity()
        for row in self.rows:
            for x in row:
                if not self.ring.member(x, e):
                    raise MorphismViolationError(
                        "presentation entry outside the identity component")

    @property
    def n_generators(self):
        return len(self.rows)

    @property
    def n_relations(self):
        return len(self.rows[0]) if self.rows else 0


def presented_module(ring, int_rows) -> PresentedModule:
    """Presentation with integer entries, embedded into the ring."""
    return PresentedModule(
        ring,
        tuple(tuple(ring.int_scale(ring.one(), c) for c in row) for row in int_rows),
    )


def tensor_extend(L: PresentedModule) -> PresentedModule:
    """Extend scalars along K_1 -> K: the matrix is unchanged, only the
    ring it presents over grows."""
    return PresentedModule(L.ring, L.rows, over_full_ring=True)


def _elem_det(ring, rows):
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    acc = ring.zero()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _elem_det(ring, minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def presented_is_zero(L: PresentedModule) -> bool:
    """Is the presented cokernel the zero module?  Exact for the cases the
    package constructs: square presentations, and integer scalars."""
    m, n = L.n_generators, L.n_relations
    if m == 0:
        return True
    if n < m:
        return False
    ring = L.ring
    if not L.over_full_ring:
        # cokernel over the identity component: integer scalars via SNF
        from .exactla import smith_normal_form

        scalars = [[ring.to_base_scalar(x) for x in row] for row in L.rows]
        if all(isinstance(c, int) for row in scalars for c in row):
            diag, _, _ = smith_normal_form(scalars)
            return len([d for d in diag if d != 0]) == m and all(
                d == 1 for d in diag if d != 0)
        raise SystematicKError("undecided presentation over these scalars")
    if isinstance(ring, PowerLocalization):
        from .exactla import smith_normal_form

        values = [[x.data for x in row] for row in L.rows]
        den = 1
        for row in values:
            for v in row:
                den = den * v.denominator
        ints = [[int(v * den) for v in row] for row in values]
        diag, _, _ = smith_normal_form(ints)
        if len([d for d in diag if d != 0]) != m:
            return False
        unit = ring.is_unit
        return all(unit(ring.make(d)) for d in diag if d != 0)
    if m == n:
        return ring.is_unit(_elem_det(ring, [list(r) for r in L.rows]))
    raise SystematicKError("undecided non-square presentation")


def left_mult_surjective_on_component(ring, r: RingElem, degree) -> bool:
    """Does left multiplication by r map onto the component R_degree?"""
    gens = ring.gens(degree)
    images = [r * x for x in gens]
    return all(additive_span_contains(ring, images, t) for t in gens)


# ---------------------------------------------------------------------------
# the shift-by-tensor isomorphism

@dataclass(frozen=True)
class ShiftTensorMaps:
    """The mutually inverse maps between K_{a^-1} (x) K and the a-shift.

    Forward sends s (x) r to s r; backward sends x to
    sum_j alpha_j (x) (beta_j x) for a dual basis at degree a^-1.
    Both roundtrips reduce to exact ring identities, which is how they
    are checked.
    """

    ring: SystematicRing = field(compare=False)
    a: tuple
    dual: DualBasis

    def roundtrip_module(self, x: RingElem) -> bool:
        """forward o backward = id on the shifted module."""
        return self.dual.reconstruct(x) == x

    def roundtrip_tensor(self, s: RingElem) -> bool:
        """backward o forward = id on primitive tensors; after moving the
        identity-component factor across, this is the same reconstruction
        identity applied to the left slot."""
        return self.dual.reconstruct(s) == s


def shift_tensor_maps(ring, a) -> ShiftTensorMaps:
    ainv = ring.group.invert(a)
    return ShiftTensorMaps(ring, a, dual_basis(ring, ainv))


def check_shift_tensor_roundtrips(maps: ShiftTensorMaps, rng, count: int = 50):
    """Sampled verification; returns the number of failures (0 expected)."""
    ring = maps.ring
    ainv = ring.group.invert(maps.a)
    failures = 0
    for _ in range(count):
        x = ring.sample_element(rng)
        if not maps.roundtrip_module(x):
            failures += 1
        s = random_component_element(ring, ainv, rng)
        if not maps.roundtrip_tensor(s):
            failures += 1
    return failures


# ---------------------------------------------------------------------------
# module components and the strong-systematicity inheritance check

def module_component_gens(module: FreeSysModule, g):
    """Additive generators of M_g as coordinate vectors."""
    ring = module.ring
    out = []
    for i, d in enumerate(module.degrees):
        for r in ring.gens(required_degree(ring, d, g)):
            vec = [ring.zero()] * module.rank
            vec[i] = r
            out.append(tuple(vec))
    return out


def _stack(ring, vectors):
    """Flatten module vectors to integer coordinate rows (shared indexing)."""
    from math import lcm as _lcm

    if isinstance(ring, PowerLocalization):
        den = 1
        for vec in vectors:
            for x in vec:
                den = _lcm(den, x.data.denominator)
        return [tuple(int(x.data * den) for x in vec) for vec in vectors], None
    from .rings import ModularBase, RationalBase
    from .groups import element_sort_key

    axes = sorted({(i, g) for vec in vectors for i, x in enumerate(vec)
                   for g, _ in x.data},
                  key=lambda t: (t[0], element_sort_key(t[1])))
    index = {ax: k for k, ax in enumerate(axes)}
    dim = max(len(axes), 1)
    modulus = ring.base.n if isinstance(ring.base, ModularBase) else None
    if isinstance(ring.base, RationalBase):
        raise SystematicKError("rational module spans are not supported")
    rows = []
    for vec in vectors:
        row = [0] * dim
        for i, x in enumerate(vec):
            for g, c in x.data:
                row[index[(i, g)]] = int(c)
        rows.append(tuple(row))
    return rows, modulus


def module_span_equal(module: FreeSysModule, first, second) -> bool:
    """Exact equality of the integer spans of two sets of module vectors."""
    from .exactla import zspan_contains

    ring = module.ring
    all_rows, modulus = _stack(ring, list(first) + list(second))
    a = all_rows[: len(first)]
    b = all_rows[len(first):]
    return all(zspan_contains(a, t, modulus) for t in b) and all(
        zspan_contains(b, t, modulus) for t in a)


def check_module_strong(module: FreeSysModule, g, h) -> bool:
    """Over a strongly systematic ring, M_g R_h must equal M_{gh}."""
    ring = module.ring
    gh = ring.group.compose(g, h)
    products = [tuple(x * r for x in vec)
                for vec in module_component_gens(module, g)
                for r in ring.gens(h)]
    return module_span_equal(module, products, module_component_gens(module, gh))
