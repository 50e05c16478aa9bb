"""Concrete almost-graded rings with decidable component membership.

Every ring here is covered by a family of additive subgroups R_g indexed
by a grading group, with R_g * R_h inside R_{gh} and 1 in the identity
component.  Components expose finite additive generating sets, so
questions like "is 1 a sum of cross products" reduce to exact integer
linear algebra.

Variants:

* :class:`MonoidRing` -- formal sums over a support submonoid (graded
  rule: one degree per monomial), covering polynomial rings, Laurent and
  finite group rings, and skew group rings via a semidirect grading
  group.  A ``filtered`` mode turns the component rule into "all
  monomial degrees bounded by g", modelling positively filtered rings.
* :class:`PowerLocalization` -- Z[1/s] with components s^k Z (or the
  positively filtered variant s^{-k} Z for k >= 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable

from .errors import (
    NotStronglySystematicError,
    SpecMismatchError,
    SupportViolationError,
    WindowTooSmallError,
)
from .exactla import zspan_combination
from .groups import (
    Action,
    FiniteTable,
    FreeAbelian,
    Group,
    LatticeQuotient,
    Semidirect,
    element_sort_key,
)


# ---------------------------------------------------------------------------
# base rings of coefficients

def _prime_power(n: int):
    """Return (p, k) if n = p**k for a prime p, else None."""
    for p in range(2, n + 1):
        if p * p > n and n > 1:
            return (n, 1)
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


class BaseRing:
    """Coefficient ring interface; instances are stateless and hashable."""

    name: str

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def canonical(self, c):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def from_int(self, k: int):
        raise NotImplementedError

    def is_unit(self, c) -> bool:
        raise NotImplementedError

    def additive_gens(self):
        """Finite additive generating set of the underlying group."""
        raise NotImplementedError

    def random_scalar(self, rng, bound: int = 3):
        raise NotImplementedError


@dataclass(frozen=True)
class IntegerBase(BaseRing):
    name: str = "Z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def canonical(self, c):
        return int(c)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return k

    def is_unit(self, c):
        return c in (1, -1)

    def additive_gens(self):
        return [1]

    def random_scalar(self, rng, bound=3):
        return rng.randint(-bound, bound)


@dataclass(frozen=True)
class RationalBase(BaseRing):
    name: str = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def canonical(self, c):
        return Fraction(c)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return Fraction(k)

    def is_unit(self, c):
        return c != 0

    def additive_gens(self):
        raise WindowTooSmallError("Q is not finitely generated as an abelian group")

    def random_scalar(self, rng, bound=3):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


@dataclass(frozen=True)
class ModularBase(BaseRing):
    """Z/n with representatives 0..n-1."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def name(self):
        return f"Z/{self.n}"

    @cached_property
    def prime_power(self):
        return _prime_power(self.n)

    @property
    def is_field(self):
        pp = self.prime_power
        return pp is not None and pp[1] == 1

    @property
    def is_local(self):
        return self.prime_power is not None

    def zero(self):
        return 0

    def one(self):
        return 1

    def canonical(self, c):
        return int(c) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def from_int(self, k):
        return k % self.n

    def is_unit(self, c):
        return gcd(int(c), self.n) == 1

    def additive_gens(self):
        return [1]

    def random_scalar(self, rng, bound=3):
        return rng.randrange(self.n)

    def elements(self):
        return range(self.n)


ZZ = IntegerBase()
QQ = RationalBase()
F2 = ModularBase(2)


def base_from_name(name: str) -> BaseRing:
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name.startswith("Z/"):
        return ModularBase(int(name[2:]))
    if name.startswith("F"):
        return ModularBase(int(name[1:]))
    raise ValueError(f"unknown base ring {name!r}")


# ---------------------------------------------------------------------------
# elements

class RingElem:
    """Canonical element of a systematic ring; immutable and hashable.

    For sum-based rings ``data`` is a sorted tuple of (degree, coefficient)
    pairs with nonzero coefficients; for localizations it is a Fraction.
    """

    __slots__ = ("ring", "data")

    def __init__(self, ring, data):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "data", data)

    def __setattr__(self, *args):
        raise AttributeError("RingElem is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, RingElem)
            and self.ring is other.ring
            and self.data == other.data
        )

    def __hash__(self):
        return hash((id(self.ring), self.data))

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.add(self, self.ring.neg(other))

    def __neg__(self):
        return self.ring.neg(self)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __bool__(self):
        return not self.ring.is_zero(self)

    def __repr__(self):
        if isinstance(self.data, Fraction):
            return f"loc({self.data})"
        if not self.data:
            return "0"
        return " + ".join(f"{c}*[{g}]" for g, c in self.data)


def ring_arith(op: str, x: RingElem, y: RingElem | None = None) -> RingElem:
    """Named arithmetic entry point used by the CLI."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown ring operation {op!r}")


# ---------------------------------------------------------------------------
# support rules

@dataclass(frozen=True)
class SupportRule:
    """Which degrees may carry nonzero components.

    kind "all" allows every degree; kind "cone" requires the integer
    functionals to be nonnegative on the degree's lattice coordinates
    (the n-part coordinates when ``part`` is "n_part").
    """

    kind: str
    functionals: tuple[tuple[int, ...], ...] = ()
    part: str = "full"

    def coords(self, el):
        if self.part == "n_part":
            el = el[0]
        return el

    def contains(self, el) -> bool:
        if self.kind == "all":
            return True
        c = self.coords(el)
        return all(sum(f[i] * c[i] for i in range(len(c))) >= 0
                   for f in self.functionals)


def full_support() -> SupportRule:
    return SupportRule("all")


def cone_support(functionals, part: str = "full") -> SupportRule:
    return SupportRule("cone", tuple(tuple(f) for f in functionals), part)


# ---------------------------------------------------------------------------
# systematic rings

class SystematicRing:
    """Common interface; concrete rings are compared by identity."""

    kind: str
    group: Group
    base: BaseRing

    # construction of elements -------------------------------------------
    def zero(self) -> RingElem:
        raise NotImplementedError

    def one(self) -> RingElem:
        raise NotImplementedError

    # arithmetic -----------------------------------------------------------
    def add(self, x, y) -> RingElem:
        raise NotImplementedError

    def neg(self, x) -> RingElem:
        raise NotImplementedError

    def mul(self, x, y) -> RingElem:
        raise NotImplementedError

    def int_scale(self, x, k: int) -> RingElem:
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def is_unit(self, x) -> bool:
        raise NotImplementedError

    # the systematic structure ----------------------------------------------
    def member(self, x, g) -> bool:
        """Decide x in R_g."""
        raise NotImplementedError

    def gens(self, g) -> list[RingElem]:
        """Finite additive generating set of the component R_g."""
        raise NotImplementedError

    def support_contains(self, g) -> bool:
        """May R_g be nonzero?"""
        raise NotImplementedError

    def decompose(self, x) -> list[tuple]:
        """Write x as a finite sum of component elements (SR1 witness)."""
        raise NotImplementedError

    def sample_element(self, rng, terms: int = 3, bound: int = 2) -> RingElem:
        raise NotImplementedError

    def _check(self, x):
        if not isinstance(x, RingElem) or x.ring is not self:
            raise SpecMismatchError("element belongs to a different ring spec")
        return x


class MonoidRing(SystematicRing):
    """Formal sums of monomials with degrees in a support submonoid.

    With ``filtered=False`` the component rule is graded: x lies in R_g
    iff every monomial of x has degree exactly g.  With ``filtered=True``
    (rank-one lattices only) R_g collects the x whose monomial degrees
    are all <= g in the cone order, so R_0 <= R_1 <= ... is an exhaustive
    positive filtration.
    """

    def __init__(self, base: BaseRing, group: Group, support: SupportRule,
                 filtered: bool = False, kind: str | None = None):
        self.base = base
        self.group = group
        self.support = support
        self.filtered = filtered
        if filtered:
            if not (isinstance(group, FreeAbelian) and group.rank == 1):
                raise SpecMismatchError("filtered mode requires the rank-1 lattice")
            if support.functionals != ((1,),):
                raise SpecMismatchError("filtered mode requires the standard ray")
        if not support.contains(group.identity()):
            raise SupportViolationError("support must contain the identity degree")
        self.kind = kind or ("filtered_monoid_ring" if filtered else "monoid_ring")

    def __repr__(self):
        return f"<{self.kind} over {self.base.name}, group={self.group!r}>"

    def make(self, pairs: Iterable[tuple]) -> RingElem:
        acc: dict = {}
        for g, c in pairs:
            c = self.base.canonical(c)
            if g in acc:
                acc[g] = self.base.add(acc[g], c)
            else:
                acc[g] = c
        items = []
        for g in sorted(acc, key=element_sort_key):
            if acc[g] == self.base.zero():
                continue
            self.group.require(g)
            if not self.support.contains(g):
                raise SupportViolationError(f"degree {g!r} outside declared support")
            items.append((g, acc[g]))
        return RingElem(self, tuple(items))

    def zero(self):
        return RingElem(self, ())

    def one(self):
        return self.monomial(self.group.identity())

    def monomial(self, g, coeff=None):
        coeff = self.base.one() if coeff is None else coeff
        return self.make([(g, coeff)])

    def add(self, x, y):
        self._check(x), self._check(y)
        return self.make(list(x.data) + list(y.data))

    def neg(self, x):
        self._check(x)
        return self.make([(g, self.base.neg(c)) for g, c in x.data])

    def mul(self, x, y):
        self._check(x), self._check(y)
        pairs = []
        for g1, c1 in x.data:
            for g2, c2 in y.data:
                pairs.append((self.group.compose(g1, g2), self.base.mul(c1, c2)))
        return self.make(pairs)

    def int_scale(self, x, k):
        self._check(x)
        c = self.base.from_int(k)
        return self.make([(g, self.base.mul(c, a)) for g, a in x.data])

    def is_zero(self, x):
        return not x.data

    def is_unit(self, x):
        if len(x.data) != 1:
            return False
        g, c = x.data[0]
        return (
            self.base.is_unit(c)
            and self.support.contains(g)
            and self.support.contains(self.group.invert(g))
        )

    def degrees(self, x):
        return [g for g, _ in x.data]

    def member(self, x, g):
        self._check(x)
        if not x.data:
            return True
        if not self.support.contains(g):
            return False
        if not self.filtered:
            return all(d == g for d, _ in x.data)
        return all(
            self.support.contains(self.group.compose(g, self.group.invert(d)))
            for d, _ in x.data
        )

    def _filtered_degrees(self, g):
        top = g[0]
        return [(j,) for j in range(0, top + 1)]

    def gens(self, g):
        if not self.support.contains(g):
            return []
        if not self.filtered:
            return [self.monomial(g, b) for b in self.base.additive_gens()]
        return [
            self.monomial(d, b)
            for d in self._filtered_degrees(g)
            for b in self.base.additive_gens()
        ]

    def support_contains(self, g):
        return self.support.contains(g)

    def decompose(self, x):
        self._check(x)
        if self.filtered:
            if not x.data:
                return []
            top = max(d[0] for d, _ in x.data)
            return [((top,), x)]
        return [(g, self.monomial(g, c)) for g, c in x.data]

    def sample_degree(self, rng, bound=2):
        for _ in range(40):
            g = self.group.sample(rng, bound)
            if self.support.contains(g):
                return g
        return self.group.identity()

    def sample_element(self, rng, terms=3, bound=2):
        pairs = []
        for _ in range(rng.randint(0, terms)):
            pairs.append((self.sample_degree(rng, bound),
                          self.base.random_scalar(rng, bound + 1)))
        return self.make(pairs)

    # identity-component scalars (used to trivialise K0 slots)
    def to_base_scalar(self, x):
        self._check(x)
        if not x.data:
            return self.base.zero()
        if len(x.data) != 1 or x.data[0][0] != self.group.identity():
            raise SpecMismatchError("element is not in the identity component")
        return x.data[0][1]

    def from_base_scalar(self, c):
        return self.monomial(self.group.identity(), c)


class PowerLocalization(SystematicRing):
    """Z[1/s] with components R_k = s^k Z (mode "valuation"), or the
    positively filtered variant R_k = s^{-k} Z for k >= 0 (mode
    "positive_filtration")."""

    def __init__(self, s: int, positive: bool = False):
        if s < 2:
            raise ValueError("inverted integer must be at least 2")
        self.s = s
        self.positive = positive
        self.base = ZZ
        self.group = FreeAbelian(1)
        self.kind = "power_localization"

    def __repr__(self):
        mode = "positive" if self.positive else "valuation"
        return f"<Z[1/{self.s}] ({mode})>"

    def make(self, value) -> RingElem:
        v = Fraction(value)
        den = v.denominator
        while den % self.s == 0:
            den //= self.s
        if den != 1:
            raise SpecMismatchError(f"{v} is not an element of Z[1/{self.s}]")
        return RingElem(self, v)

    def zero(self):
        return RingElem(self, Fraction(0))

    def one(self):
        return RingElem(self, Fraction(1))

    def from_fraction(self, num, den=1):
        return self.make(Fraction(num, den))

    def add(self, x, y):
        self._check(x), self._check(y)
        return RingElem(self, x.data + y.data)

    def neg(self, x):
        self._check(x)
        return RingElem(self, -x.data)

    def mul(self, x, y):
        self._check(x), self._check(y)
        return RingElem(self, x.data * y.data)

    def int_scale(self, x, k):
        self._check(x)
        return RingElem(self, x.data * k)

    def is_zero(self, x):
        return x.data == 0

    def is_unit(self, x):
        num = abs(x.data.numerator)
        if num == 0:
            return False
        while num % self.s == 0:
            num //= self.s
        return num == 1

    def valuation(self, x) -> int:
        """Largest k with x in s^k Z (x nonzero)."""
        v = x.data
        if v == 0:
            raise ValueError("zero has no valuation")
        k = 0
        while (v / Fraction(self.s) ** k).denominator != 1:
            k -= 1
        while (v / Fraction(self.s) ** (k + 1)).denominator == 1:
            k += 1
        return k

    def member(self, x, g):
        self._check(x)
        k = g[0]
        if x.data == 0:
            return True
        if self.positive:
            return k >= 0 and self.valuation(x) >= -k
        return self.valuation(x) >= k

    def gens(self, g):
        k = g[0]
        if self.positive:
            if k < 0:
                return []
            return [self.make(Fraction(1, self.s ** k) if k else 1)]
        return [self.make(Fraction(self.s) ** k)]

    def support_contains(self, g):
        return g[0] >= 0 if self.positive else True

    def decompose(self, x):
        self._check(x)
        if x.data == 0:
            return []
        v = self.valuation(x)
        k = max(0, -v) if self.positive else v
        return [((k,), x)]

    def sample_element(self, rng, terms=3, bound=2):
        num = rng.randint(-8 * bound, 8 * bound)
        k = rng.randint(0, bound)
        return self.make(Fraction(num, self.s ** k))

    def to_base_scalar(self, x):
        self._check(x)
        if x.data.denominator != 1:
            raise SpecMismatchError("element is not in the identity component")
        return int(x.data)

    def from_base_scalar(self, c):
        return self.make(Fraction(c))


# ---------------------------------------------------------------------------
# convenience constructors

def monoid_ring(base: BaseRing, group: Group, functionals=None) -> MonoidRing:
    support = full_support() if functionals is None else cone_support(functionals)
    return MonoidRing(base, group, support)


def laurent_group_ring(base: BaseRing, group: Group) -> MonoidRing:
    return MonoidRing(base, group, full_support(), kind="laurent_group_ring")


def group_ring(base: BaseRing, group: FiniteTable) -> MonoidRing:
    return MonoidRing(base, group, full_support(), kind="laurent_group_ring")


def skew_group_ring(base: BaseRing, n_group: Group, h_group: Group,
                    action: Action, n_functionals=None) -> MonoidRing:
    """Monoid ring over N x| H; the action twist [h] x = [h(x)] [h] is
    exactly the semidirect multiplication law."""
    sd = Semidirect(n_group, h_group, action)
    support = (full_support() if n_functionals is None
               else cone_support(n_functionals, part="n_part"))
    return MonoidRing(base, sd, support, kind="skew_group_ring")


def polynomial_ring(base: BaseRing) -> MonoidRing:
    """base[t], graded by Z with support N."""
    return MonoidRing(base, FreeAbelian(1), cone_support([(1,)]))


def filtered_polynomial_ring(base: BaseRing) -> MonoidRing:
    """base[t] with the filtration F^k = polynomials of degree <= k."""
    return MonoidRing(base, FreeAbelian(1), cone_support([(1,)]), filtered=True)


def power_localization(s: int, positive: bool = False) -> PowerLocalization:
    return PowerLocalization(s, positive)


# ---------------------------------------------------------------------------
# additive spans and strong systematicity

def _span_vectors(ring: SystematicRing, elems):
    """Integer coordinate vectors of elements, plus the working modulus."""
    if isinstance(ring, PowerLocalization):
        values = [x.data for x in elems]
        den = lcm(*(v.denominator for v in values)) if values else 1
        return [(int(v * den),) for v in values], None
    degrees = sorted({g for x in elems for g, _ in x.data}, key=element_sort_key)
    index = {g: i for i, g in enumerate(degrees)}
    dim = max(len(degrees), 1)
    base = ring.base
    if isinstance(base, RationalBase):
        den = 1
        for x in elems:
            for _, c in x.data:
                den = lcm(den, Fraction(c).denominator)
        rows = []
        for x in elems:
            vec = [0] * dim
            for g, c in x.data:
                vec[index[g]] = int(Fraction(c) * den)
            rows.append(tuple(vec))
        return rows, None
    modulus = base.n if isinstance(base, ModularBase) else None
    rows = []
    for x in elems:
        vec = [0] * dim
        for g, c in x.data:
            vec[index[g]] = int(c)
        rows.append(tuple(vec))
    return rows, modulus


def additive_combination(ring: SystematicRing, elems, target):
    """Integer coefficients with sum_i c_i elems_i == target, or None."""
    vectors, modulus = _span_vectors(ring, list(elems) + [target])
    return zspan_combination(vectors[:-1], vectors[-1], modulus)


def additive_span_contains(ring: SystematicRing, elems, target) -> bool:
    return additive_combination(ring, elems, target) is not None


def is_strongly_systematic_at(ring: SystematicRing, g) -> bool:
    """Does 1 lie in the additive span of R_{g^-1} R_g products?"""
    ginv = ring.group.invert(g)
    products = [u * v for u in ring.gens(ginv) for v in ring.gens(g)]
    if not products:
        return False
    return additive_span_contains(ring, products, ring.one())


@dataclass(frozen=True)
class DualBasis:
    """Pairs (alpha_j, beta_j) with alpha_j in R_a, beta_j in R_{a^-1} and
    sum_j alpha_j beta_j = 1; witnesses that R_a is projective over the
    identity component."""

    ring: SystematicRing = field(compare=False)
    degree: tuple
    pairs: tuple

    def reconstruct(self, r: RingElem) -> RingElem:
        acc = self.ring.zero()
        for alpha, beta in self.pairs:
            acc = acc + alpha * (beta * r)
        return acc

    def check_identity(self, r: RingElem) -> bool:
        return self.reconstruct(r) == r


def dual_basis(ring: SystematicRing, a) -> DualBasis:
    """Solve 1 = sum alpha_j beta_j with alpha_j in R_a, beta_j in R_{a^-1}.

    Raises NotStronglySystematicError when no integer combination of the
    cross products of component generators reaches 1.
    """
    ainv = ring.group.invert(a)
    gens_a = ring.gens(a)
    gens_ainv = ring.gens(ainv)
    triples = [(u * v, u, v) for u in gens_a for v in gens_ainv]
    coeffs = additive_combination(ring, [t[0] for t in triples], ring.one()) \
        if triples else None
    if coeffs is None:
        raise NotStronglySystematicError(
            f"1 is not in R_a R_a^-1 for a = {a!r}")
    pairs = []
    for c, (_, u, v) in zip(coeffs, triples):
        if c:
            pairs.append((ring.int_scale(u, c), v))
    total = ring.zero()
    for alpha, beta in pairs:
        total = total + alpha * beta
    if total != ring.one():
        raise NotStronglySystematicError("dual basis reconstruction failed")
    for alpha, beta in pairs:
        if not (ring.member(alpha, a) and ring.member(beta, ainv)):
            raise NotStronglySystematicError("dual basis left its components")
    return DualBasis(ring, a, tuple(pairs))


def random_component_element(ring: SystematicRing, g, rng, bound: int = 2,
                             nonzero: bool = False) -> RingElem:
    """Random integer combination of the component generators of R_g."""
    gens = ring.gens(g)
    for _ in range(20):
        acc = ring.zero()
        for x in gens:
            acc = acc + ring.int_scale(x, rng.randint(-bound, bound))
        if acc or not nonzero or not gens:
            return acc
    return gens[0] if gens and nonzero else ring.zero()


# ---------------------------------------------------------------------------
# subrings determined by subgroups

@dataclass(frozen=True)
class SubringMap:
    """A subring R_N of degrees in a subgroup, with degree transports."""

    parent: SystematicRing = field(compare=False)
    sub: SystematicRing = field(compare=False)
    label: str = "subring"

    def embed_degree(self, n):
        raise NotImplementedError

    def restrict_degree(self, g):
        raise NotImplementedError

    def restrict_elem(self, x: RingElem) -> RingElem:
        if isinstance(self.parent, PowerLocalization):
            return self.sub.from_base_scalar(self.parent.to_base_scalar(x))
        return self.sub.make([(self.restrict_degree(g), c) for g, c in x.data])

    def embed_elem(self, x: RingElem) -> RingElem:
        if isinstance(self.parent, PowerLocalization):
            return self.parent.from_base_scalar(self.sub.to_base_scalar(x))
        return self.parent.make([(self.embed_degree(g), c) for g, c in x.data])


@dataclass(frozen=True)
class LatticeSubring(SubringMap):
    basis: tuple[tuple[int, ...], ...] = ()

    def embed_degree(self, n):
        vec = [0] * self.parent.group.rank
        for c, row in zip(n, self.basis):
            vec = [v + c * r for v, r in zip(vec, row)]
        return tuple(vec)

    def restrict_degree(self, g):
        from .exactla import solve_integer

        if not self.basis:
            if any(g):
                raise SpecMismatchError(f"{g!r} is outside the trivial sublattice")
            return ()
        matrix = [[self.basis[j][i] for j in range(len(self.basis))]
                  for i in range(len(g))]
        sol = solve_integer(matrix, list(g))
        if sol is None:
            raise SpecMismatchError(f"{g!r} is outside the sublattice")
        return sol


@dataclass(frozen=True)
class HPartSubring(SubringMap):
    def embed_degree(self, h):
        return (self.parent.group.n_group.identity(), h)

    def restrict_degree(self, g):
        n, h = g
        if n != self.parent.group.n_group.identity():
            raise SpecMismatchError(f"{g!r} has a nontrivial N part")
        return h


def lattice_subring(ring: MonoidRing, basis) -> LatticeSubring:
    """Restrict a lattice-graded monoid ring to a sublattice of degrees."""
    if not isinstance(ring, MonoidRing) or not isinstance(ring.group, FreeAbelian):
        raise SpecMismatchError("lattice subrings need a lattice-graded monoid ring")
    if ring.filtered:
        raise SpecMismatchError("filtered rings do not restrict along sublattices")
    basis = tuple(tuple(row) for row in basis)
    sub_group = FreeAbelian(len(basis))
    if ring.support.kind == "all":
        support = full_support()
    else:
        pulled = tuple(
            tuple(sum(f[i] * row[i] for i in range(len(row))) for row in basis)
            for f in ring.support.functionals
        )
        support = cone_support(pulled) if basis else full_support()
    sub = MonoidRing(ring.base, sub_group, support)
    return LatticeSubring(ring, sub, "lattice", basis)


def h_part_subring(ring: MonoidRing) -> HPartSubring:
    """Components at degrees (1, h) of a semidirect-graded monoid ring."""
    if not isinstance(ring, MonoidRing) or not isinstance(ring.group, Semidirect):
        raise SpecMismatchError("the H part needs a semidirect grading group")
    sub = MonoidRing(ring.base, ring.group.h_group, full_support(),
                     kind="laurent_group_ring")
    return HPartSubring(ring, sub, "h_part")


@dataclass(frozen=True)
class IdentitySubring(SubringMap):
    def embed_degree(self, n):
        return self.parent.group.identity()

    def restrict_degree(self, g):
        if g != self.parent.group.identity():
            raise SpecMismatchError("degree is not the identity")
        return ()


def identity_subring(ring: SystematicRing) -> IdentitySubring:
    """The identity-degree component as a ring over the rank-0 lattice."""
    sub = MonoidRing(ring.base, FreeAbelian(0), full_support())
    return IdentitySubring(ring, sub, "identity")


def subring_over_subgroup(ring: SystematicRing, descriptor) -> SubringMap:
    """Dispatcher used by the CLI: ("lattice", basis) | ("h_part",) |
    ("identity",)."""
    kind = descriptor[0]
    if kind == "lattice":
        return lattice_subring(ring, descriptor[1])
    if kind == "h_part":
        return h_part_subring(ring)
    if kind == "identity":
        return identity_subring(ring)
    raise SpecMismatchError(f"unknown subgroup descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# axiom checks

def sr_axiom_failures(ring: SystematicRing, rng, samples: int = 20):
    """Sampled checks of the covering, closure, and unit axioms."""
    failures = []
    if not ring.member(ring.one(), ring.group.identity()):
        failures.append(("unit", "1 is not in the identity component"))
    degs = []
    for _ in range(samples):
        if isinstance(ring, MonoidRing):
            degs.append(ring.sample_degree(rng))
        else:
            degs.append(ring.group.sample(rng))
    for g in degs:
        for h in degs:
            gh = ring.group.compose(g, h)
            try:
                for x in ring.gens(g):
                    for y in ring.gens(h):
                        if not ring.member(x * y, gh):
                            failures.append(("closure", g, h, x, y))
            except WindowTooSmallError:
                continue
    for _ in range(samples):
        x = ring.sample_element(rng)
        parts = ring.decompose(x)
        acc = ring.zero()
        for g, piece in parts:
            if not ring.member(piece, g):
                failures.append(("covering", x, g))
            acc = acc + piece
        if acc != x:
            failures.append(("covering-sum", x))
    return failures
