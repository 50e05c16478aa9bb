"""Grading groups: lattices, finite multiplication tables, semidirect
products, and lattice quotients with set-theoretic sections.

Elements are plain hashable values (tuples of ints, table indices, or
nested pairs), so they can serve directly as dictionary keys for formal
sums and as K0 basis labels.  All specs are immutable and all operations
are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

from .errors import InvalidGroupError, OrderNotInvariantError, SpecMismatchError
from .exactla import integer_kernel_basis, reduce_mod_rows, row_hnf, solve_integer

EXHAUSTIVE_ORDER_CAP = 64


def element_sort_key(el):
    """Deterministic total order on canonical element encodings."""
    if isinstance(el, bool):
        raise TypeError("bool is not a group element encoding")
    if isinstance(el, int):
        return (0, el)
    if isinstance(el, tuple):
        return (1, len(el), tuple(element_sort_key(x) for x in el))
    raise TypeError(f"unsupported element encoding: {el!r}")


class Group:
    """Interface shared by all group specs."""

    def identity(self):
        raise NotImplementedError

    def compose(self, a, b):
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def sample(self, rng, bound: int = 3):
        raise NotImplementedError

    def require(self, x):
        if not self.contains(x):
            raise SpecMismatchError(f"{x!r} is not an element of {self!r}")
        return x

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise InvalidGroupError(f"{self!r} is not finite")


@dataclass(frozen=True)
class FreeAbelian(Group):
    """Z^rank with componentwise addition; elements are int tuples."""

    rank: int

    def identity(self):
        return (0,) * self.rank

    def compose(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == self.rank
            and all(isinstance(c, int) and not isinstance(c, bool) for c in x)
        )

    def sample(self, rng, bound=3):
        return tuple(rng.randint(-bound, bound) for _ in range(self.rank))

    @property
    def is_finite(self):
        return self.rank == 0

    def elements(self):
        if self.rank == 0:
            return [()]
        raise InvalidGroupError("free abelian group of positive rank is infinite")


@dataclass(frozen=True)
class FiniteTable(Group):
    """Finite group given by its multiplication table on indices 0..m-1.

    Tables of order up to ``EXHAUSTIVE_ORDER_CAP`` are checked for the
    group axioms exhaustively at construction; larger tables only get
    sampled checks.
    """

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.table)
        if any(len(row) != m for row in self.table):
            raise InvalidGroupError("multiplication table is not square")
        if any(not (0 <= v < m) for row in self.table for v in row):
            raise InvalidGroupError("table entry out of range")
        if m == 0:
            raise InvalidGroupError("empty multiplication table")
        if m <= EXHAUSTIVE_ORDER_CAP:
            self._check_axioms(range(m))
        else:
            import random

            rng = random.Random(0)
            sample = [rng.randrange(m) for _ in range(12)]
            self._check_axioms(sample)

    def _check_axioms(self, indices):
        e = self._identity_index()
        if e is None:
            raise InvalidGroupError("table has no identity element")
        t = self.table
        for a in indices:
            if not any(t[a][b] == e for b in range(len(t))):
                raise InvalidGroupError(f"element {a} has no inverse")
            for b in indices:
                for c in indices:
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise InvalidGroupError(
                            f"associativity fails at ({a}, {b}, {c})"
                        )

    def _identity_index(self):
        m = len(self.table)
        for e in range(m):
            if all(self.table[e][j] == j and self.table[j][e] == j for j in range(m)):
                return e
        return None

    @classmethod
    def cyclic(cls, n: int) -> "FiniteTable":
        return cls(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.table)

    def identity(self):
        return self._identity_index()

    def compose(self, a, b):
        return self.table[a][b]

    def invert(self, a):
        e = self.identity()
        for b in range(self.order):
            if self.table[a][b] == e:
                return b
        raise InvalidGroupError(f"no inverse for {a}")

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.order

    def sample(self, rng, bound=3):
        return rng.randrange(self.order)

    @property
    def is_finite(self):
        return True

    def elements(self):
        return list(range(self.order))


@dataclass(frozen=True)
class Action:
    """A homomorphism from H to Aut(N), given as a procedure on elements.

    Compared by name so that group specs built from the same named action
    are equal.
    """

    name: str
    fn: Callable = field(compare=False, hash=False)

    def __call__(self, h, n):
        return self.fn(h, n)


def trivial_action() -> Action:
    return Action("trivial", lambda h, n: n)


def inversion_action(n_group: Group, h_group: Group) -> Action:
    """Nontrivial elements of H act on abelian N by inversion.

    Only a homomorphism when H has exponent 2; checked by
    :func:`check_semidirect_action` on samples.
    """
    e = h_group.identity()

    def fn(h, n):
        return n if h == e else n_group.invert(n)

    return Action("inversion", fn)


def swap_action(h_group: Group) -> Action:
    """Nontrivial elements of an order-2 group swap the two coordinates."""
    e = h_group.identity()

    def fn(h, n):
        return n if h == e else (n[1], n[0])

    return Action("swap", fn)


NAMED_ACTIONS = ("trivial", "inversion", "swap")


def named_action(name: str, n_group: Group, h_group: Group) -> Action:
    if name == "trivial":
        return trivial_action()
    if name == "inversion":
        return inversion_action(n_group, h_group)
    if name == "swap":
        return swap_action(h_group)
    raise InvalidGroupError(f"unknown action name {name!r}")


@dataclass(frozen=True)
class Semidirect(Group):
    """N x| H with multiplication (n, h)(n', h') = (n . h(n'), hh')."""

    n_group: Group
    h_group: Group
    action: Action

    def identity(self):
        return (self.n_group.identity(), self.h_group.identity())

    def compose(self, a, b):
        (n1, h1), (n2, h2) = a, b
        return (
            self.n_group.compose(n1, self.action(h1, n2)),
            self.h_group.compose(h1, h2),
        )

    def invert(self, a):
        n, h = a
        hinv = self.h_group.invert(h)
        return (self.action(hinv, self.n_group.invert(n)), hinv)

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and self.n_group.contains(x[0])
            and self.h_group.contains(x[1])
        )

    def sample(self, rng, bound=3):
        return (self.n_group.sample(rng, bound), self.h_group.sample(rng, bound))

    @property
    def is_finite(self):
        return self.n_group.is_finite and self.h_group.is_finite

    def elements(self):
        return [
            (n, h) for n in self.n_group.elements() for h in self.h_group.elements()
        ]


def check_semidirect_action(sd: Semidirect, rng, samples: int = 20) -> None:
    """Sampled check that the action is by automorphisms, homomorphically."""
    ng, hg = sd.n_group, sd.h_group
    for _ in range(samples):
        h, h2 = hg.sample(rng), hg.sample(rng)
        n, n2 = ng.sample(rng), ng.sample(rng)
        if sd.action(h, ng.compose(n, n2)) != ng.compose(
            sd.action(h, n), sd.action(h, n2)
        ):
            raise InvalidGroupError(f"action of {h!r} is not an endomorphism")
        if sd.action(hg.compose(h, h2), n) != sd.action(h, sd.action(h2, n)):
            raise InvalidGroupError("action is not a homomorphism on samples")
        if sd.action(hg.identity(), n) != n:
            raise InvalidGroupError("identity does not act trivially")


@dataclass(frozen=True)
class LatticeQuotient(Group):
    """Z^rank modulo the row lattice spanned by ``basis``.

    Elements are the canonical Hermite-normal-form coset representatives,
    encoded as int tuples of length ``rank``.
    """

    rank: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for row in self.basis:
            if len(row) != self.rank:
                raise InvalidGroupError("lattice basis vector of wrong length")

    @cached_property
    def _hnf(self):
        return row_hnf(self.basis)

    def reduce(self, vec):
        return reduce_mod_rows(vec, self._hnf)

    def identity(self):
        return (0,) * self.rank

    def compose(self, a, b):
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def invert(self, a):
        return self.reduce(tuple(-x for x in a))

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == self.rank
            and all(isinstance(c, int) and not isinstance(c, bool) for c in x)
            and self.reduce(x) == x
        )

    def sample(self, rng, bound=3):
        return self.reduce(tuple(rng.randint(-bound, bound) for _ in range(self.rank)))


@dataclass(frozen=True)
class Extension(Group):
    """A lattice G = Z^rank presented as an extension by the sublattice N.

    The quotient H = G/N carries canonical HNF coset representatives; the
    default section sends each representative to itself inside G, which
    makes the section deterministic and reproducible.  A custom section
    can be supplied as a mapping from representatives to G elements.
    """

    ambient: FreeAbelian
    n_basis: tuple[tuple[int, ...], ...]
    section_table: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()

    def __post_init__(self):
        for row in self.n_basis:
            if len(row) != self.ambient.rank:
                raise InvalidGroupError("sublattice vector of wrong length")
        for h, g in self.section_table:
            if self.project(g) != h:
                raise InvalidGroupError(
                    f"section value {g!r} does not project to {h!r}"
                )

    @cached_property
    def quotient(self) -> LatticeQuotient:
        return LatticeQuotient(self.ambient.rank, self.n_basis)

    @cached_property
    def n_group(self) -> FreeAbelian:
        return FreeAbelian(len(self.n_basis))

    @cached_property
    def _section_map(self):
        return dict(self.section_table)

    def project(self, g):
        return self.quotient.reduce(g)

    def section(self, h):
        return self._section_map.get(h, h)

    def decompose(self, g):
        """Split g as section(h) . n with h the coset of g and n in N."""
        h = self.project(g)
        n = self.ambient.compose(self.ambient.invert(self.section(h)), g)
        return h, n

    def n_coords(self, n):
        """Coordinates of an embedded N element w.r.t. the declared basis."""
        if not self.n_basis:
            if any(n):
                raise SpecMismatchError(f"{n!r} is not in the trivial sublattice")
            return ()
        matrix = [[self.n_basis[j][i] for j in range(len(self.n_basis))]
                  for i in range(self.ambient.rank)]
        sol = solve_integer(matrix, list(n))
        if sol is None:
            raise SpecMismatchError(f"{n!r} is not in the sublattice")
        return sol

    def n_embed(self, coords):
        vec = [0] * self.ambient.rank
        for c, row in zip(coords, self.n_basis):
            vec = [v + c * r for v, r in zip(vec, row)]
        return tuple(vec)

    def with_section(self, table: dict) -> "Extension":
        return Extension(self.ambient, self.n_basis,
                         tuple(sorted(table.items(), key=lambda kv: element_sort_key(kv[0]))))

    # Group interface: an extension spec still *is* the ambient group G.
    def identity(self):
        return self.ambient.identity()

    def compose(self, a, b):
        return self.ambient.compose(a, b)

    def invert(self, a):
        return self.ambient.invert(a)

    def contains(self, x):
        return self.ambient.contains(x)

    def sample(self, rng, bound=3):
        return self.ambient.sample(rng, bound)


def lineality_extension(rank: int, functionals) -> Extension:
    """Extension of Z^rank by the sublattice on which all functionals vanish.

    This is the sublattice of invertible degrees of the cone described by
    ``functionals``; the quotient inherits a well-defined cone order.
    """
    if not functionals:
        basis = [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)]
        return Extension(FreeAbelian(rank), tuple(basis))
    kernel = integer_kernel_basis([list(f) for f in functionals])
    return Extension(FreeAbelian(rank), tuple(row_hnf(kernel)))


def project_and_section(spec, g):
    """Return (h, n) with g = section(h) . n, per the spec's section choice.

    For a semidirect product the section is h -> (1, h); note that the
    N part then comes out as (h^{-1} acting on n, 1).
    """
    if isinstance(spec, Extension):
        return spec.decompose(g)
    if isinstance(spec, Semidirect):
        n, h = g
        sigma = (spec.n_group.identity(), h)
        return h, spec.compose(spec.invert(sigma), g)
    raise SpecMismatchError(f"{spec!r} carries no extension structure")


@dataclass(frozen=True)
class ConeOrder:
    """Translation-invariant partial order from integer linear functionals.

    ``a <= b`` iff every functional is nonnegative on b - a.  The owner
    must be abelian (FreeAbelian or LatticeQuotient); for quotients the
    functionals must vanish on the killed sublattice so comparisons do
    not depend on the representative.
    """

    owner: Group
    functionals: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rank = getattr(self.owner, "rank", None)
        if rank is None:
            raise OrderNotInvariantError("cone orders need an abelian lattice owner")
        for f in self.functionals:
            if len(f) != rank:
                raise OrderNotInvariantError("functional of wrong length")
        if isinstance(self.owner, LatticeQuotient):
            for f in self.functionals:
                for row in self.owner.basis:
                    if sum(a * b for a, b in zip(f, row)):
                        raise OrderNotInvariantError(
                            "functional does not vanish on the quotient lattice"
                        )

    def leq(self, a, b):
        diff = tuple(x - y for x, y in zip(b, a))
        return all(sum(f[i] * diff[i] for i in range(len(diff))) >= 0
                   for f in self.functionals)

    def lt(self, a, b):
        return a != b and self.leq(a, b)

    def positive(self, a):
        return self.leq(self.owner.identity(), a)

    def check_h_invariance(self, action: Action, h_elements, n_samples):
        """Exact check on the given elements; raises on a violation."""
        for h in h_elements:
            for n in n_samples:
                if self.positive(n) and not self.positive(action(h, n)):
                    raise OrderNotInvariantError(
                        f"action of {h!r} moves {n!r} out of the positive cone"
                    )


def trivial_order(owner: Group) -> ConeOrder:
    return ConeOrder(owner, ())


def linear_extension(elements: Iterable, order: ConeOrder):
    """Order the elements so that strictly larger ones come first.

    Deterministic: among the currently maximal elements the one with the
    smallest canonical encoding is emitted next.
    """
    remaining = list(elements)
    if len(set(remaining)) != len(remaining):
        raise InvalidGroupError("window contains repeated elements")
    out = []
    while remaining:
        maximal = [
            a for a in remaining
            if not any(order.lt(a, b) for b in remaining if b is not a)
        ]
        if not maximal:
            raise InvalidGroupError("cyclic comparison; order is not a partial order")
        pick = min(maximal, key=element_sort_key)
        out.append(pick)
        remaining.remove(pick)
    return tuple(out)


def group_axiom_failures(group: Group, rng, samples: int = 25):
    """Sampled group-axiom check; returns a list of failure descriptions."""
    failures = []
    e = group.identity()
    elems = (
        group.elements()
        if group.is_finite and len(group.elements()) <= 12
        else [group.sample(rng) for _ in range(samples)]
    )
    for a, b, c in itertools.islice(itertools.product(elems, repeat=3), 2000):
        if group.compose(group.compose(a, b), c) != group.compose(a, group.compose(b, c)):
            failures.append(("associativity", a, b, c))
    for a in elems:
        if group.compose(e, a) != a or group.compose(a, e) != a:
            failures.append(("identity", a))
        if group.compose(a, group.invert(a)) != e:
            failures.append(("inverse", a))
    return failures
