"""The acceptance suite: nine exact criteria, each with a wall-clock
budget.  Used both by the test suite and by ``systematic-k selftest``.

Every check is exact; a criterion fails on the first wrong equality.
The ``scale`` argument shrinks instance counts for smoke runs and is
never used by the shipped selftest.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .exactla import rank_mod_p
from .groups import ConeOrder, FiniteTable, FreeAbelian, lineality_extension, named_action
from .kzero import (
    K0Element,
    degree_window,
    filtered_graded_agreement,
    k0_bruteforce,
    matrix_rank_over_base,
    quotient_k0_iso,
    semidirect_k0_iso,
    strong_reduction_k0,
)
from .modcat import (
    IdemObject,
    block_matrix,
    check_split_naturality,
    free_object,
    hom_component_basis,
    left_mult_surjective_on_component,
    presented_module,
    presented_is_zero,
    random_idem_morphism,
    random_lt_idempotent,
    shift_tensor_maps,
    split_lt_idempotent,
    tensor_extend,
)
from .rings import (
    ModularBase,
    dual_basis,
    is_strongly_systematic_at,
    laurent_group_ring,
    monoid_ring,
    filtered_polynomial_ring,
    polynomial_ring,
    power_localization,
    random_component_element,
    skew_group_ring,
)

F2 = ModularBase(2)
Z4 = ModularBase(4)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    budget: float
    details: dict = field(default_factory=dict)

    @property
    def within_budget(self) -> bool:
        return self.elapsed < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed and self.within_budget else "FAIL"
        return (f"{status} criterion {self.number}: {self.title} "
                f"[{self.elapsed:.1f}s < {self.budget:.0f}s]")


def _timed(number, title, budget, fn) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, details = fn()
    except Exception as exc:  # a crashed criterion is a failed criterion
        passed, details = False, {"error": f"{type(exc).__name__}: {exc}"}
    elapsed = time.perf_counter() - start
    return CriterionResult(number, title, passed, elapsed, budget, details)


def _random_two_blocks(rng, low, high):
    top = tuple((rng.choice(high),) for _ in range(rng.randint(1, 2)))
    bottom = tuple((rng.choice(low),) for _ in range(rng.randint(1, 2)))
    return (top, bottom)


def criterion_1(scale: float = 1.0, seed: int = 101) -> CriterionResult:
    """Identity suite for 2-block lower triangular idempotents."""

    def run():
        instances = max(1, int(500 * scale))
        morphisms = max(1, int(200 * scale))
        details = {}
        for base in (F2, Z4):
            ring = polynomial_ring(base)
            rng = random.Random(seed + base.n)
            verified = 0
            for _ in range(instances):
                blocks = _random_two_blocks(rng, low=[0, 1], high=[1, 2, 3])
                X, lt = random_lt_idempotent(ring, blocks, rng)
                data = split_lt_idempotent(X, lt)
                p11 = block_matrix(X.p, lt, lt, 0, 0)
                p21 = block_matrix(X.p, lt, lt, 1, 0)
                p22 = block_matrix(X.p, lt, lt, 1, 1)
                assert p11 @ p11 == p11
                assert p22 @ p22 == p22
                assert p21 @ p11 + p22 @ p21 == p21
                assert (p22 @ p21 @ p11).is_zero()
                assert data.mixer.f @ data.to_diag.f == X.p
                assert data.to_diag.f @ data.mixer.f == data.diagonal.p
                assert (data.pi.f @ data.sigma.f).is_zero()
                verified += 1
            natural = 0
            for _ in range(morphisms):
                blocks = _random_two_blocks(rng, low=[0, 1], high=[1, 2])
                X, lt = random_lt_idempotent(ring, blocks, rng)
                Y, _ = random_lt_idempotent(ring, blocks, rng)
                fm = random_idem_morphism(X, lt, Y, lt, rng)
                if not check_split_naturality(fm, lt, lt):
                    return False, {"failed_naturality": base.name}
                natural += 1
            details[base.name] = {"idempotents": verified, "naturality": natural}
        return True, details

    return _timed(1, "2-block splitting identities", 30.0, run)


def criterion_2(scale: float = 1.0, seed: int = 102) -> CriterionResult:
    """Window K0 over F2[t] is free on the window, matching the oracle."""

    def run():
        ring = polynomial_ring(F2)
        order = ConeOrder(FreeAbelian(1), ((1,),))
        details = {}
        for k in range(1, 5):
            degrees = [(j,) for j in range(k + 1)]
            window = degree_window(ring, degrees, order)
            if not window.group.is_free_of_rank(len(degrees)):
                return False, {"window": k, "summary": window.group.summary()}
            if set(window.group.labels) != set(degrees):
                return False, {"window": k, "labels": window.group.labels}
            for s in degrees:
                if window.free_class(s) != K0Element.basis(s):
                    return False, {"bad_free_class": s}
            details[f"window_0..{k}"] = window.group.summary()["free_rank"]
        window = degree_window(ring, [(j,) for j in range(5)], order)
        oracle = k0_bruteforce(F2, 2)
        rng = random.Random(seed)
        agreements = 0
        for _ in range(max(1, int(100 * scale))):
            X, lt = window.random_object(rng, max_per_slot=2)
            cls = window.classify(X)
            oracle_cls = K0Element.zero()
            for j, slot in enumerate(window.slots):
                blk = lt.blocks[j]
                if not blk:
                    continue
                entries = [[X.p.entries[a][b] for b in blk] for a in blk]
                degrees_blk = [X.module.degrees[i] for i in blk]
                rows = window._trivialise(slot, degrees_blk, entries)
                cls_idx = oracle.table.class_index(rows)
                oracle_cls = oracle_cls + K0Element.basis(slot).scale(
                    oracle.class_integer(cls_idx))
            if cls != oracle_cls:
                return False, {"mismatch_at": agreements}
            agreements += 1
        details["oracle_agreements"] = agreements
        return True, details

    return _timed(2, "window K0 of F2[t] vs brute-force oracle", 60.0, run)


def criterion_3(scale: float = 1.0, seed: int = 103) -> CriterionResult:
    """Strong systematicity of Z[1/2]; dual bases; shift-tensor roundtrips."""

    def run():
        rng = random.Random(seed)
        loc = power_localization(2)
        for k in range(-4, 5):
            if not is_strongly_systematic_at(loc, (k,)):
                return False, {"not_strong_at": k}
        checked = 0
        for a in (-2, -1, 0, 1, 2):
            db = dual_basis(loc, (a,))
            for _ in range(max(1, int(20 * scale))):
                r = random_component_element(loc, (a,), rng, bound=6)
                if not db.check_identity(r):
                    return False, {"dual_basis_failed_at": a}
                checked += 1
        laurent = laurent_group_ring(F2, FreeAbelian(1))
        roundtrips = 0
        for ring, degrees in ((loc, (-2, 1, 3)), (laurent, (1, 3, -2))):
            per = max(1, int(200 * scale)) // (2 * len(degrees)) + 1
            for a in degrees:
                maps = shift_tensor_maps(ring, (a,))
                ainv = ring.group.invert((a,))
                for _ in range(per):
                    x = ring.sample_element(rng)
                    if not maps.roundtrip_module(x):
                        return False, {"module_roundtrip": a}
                    s = random_component_element(ring, ainv, rng, bound=4)
                    if not maps.roundtrip_tensor(s):
                        return False, {"tensor_roundtrip": a}
                    roundtrips += 2
        return True, {"dual_basis_samples": checked, "roundtrips": roundtrips}

    return _timed(3, "strongly systematic suite over Z[1/2] and F2 Laurent",
                  30.0, run)


def criterion_4(scale: float = 1.0, seed: int = 104) -> CriterionResult:
    """The Z/2 counterexample over Z[1/2]."""

    def run():
        loc = power_localization(2)
        two_torsion = presented_module(loc, [[2]])
        if presented_is_zero(two_torsion):
            return False, {"z2_collapsed_over_z": True}
        extended = tensor_extend(two_torsion)
        if not presented_is_zero(extended):
            return False, {"tensor_extension_not_zero": True}
        two = loc.from_fraction(2)
        if not loc.is_unit(two):
            return False, {"two_not_invertible": True}
        if left_mult_surjective_on_component(loc, two, (0,)):
            return False, {"doubling_claims_onto_degree_zero": True}
        return True, {
            "tensor_extension_zero": True,
            "doubling_bijective_on_ring": True,
            "doubling_not_onto_identity_component": True,
        }

    return _timed(4, "scalar-extension counterexample regression", 5.0, run)


def criterion_5(scale: float = 1.0, seed: int = 105) -> CriterionResult:
    """Component vanishing outside the first quadrant of F2[x, y]."""

    def run():
        ring = monoid_ring(F2, FreeAbelian(2), [(1, 0), (0, 1)])
        rng = random.Random(seed)
        count = max(1, int(100 * scale))
        outside = inside = 0
        while outside < count:
            diff = (rng.randint(-4, 4), rng.randint(-4, 4))
            if diff[0] >= 0 and diff[1] >= 0:
                continue
            tgt = (rng.randint(-3, 3), rng.randint(-3, 3))
            src = (tgt[0] + diff[0], tgt[1] + diff[1])
            if hom_component_basis(ring, src, tgt):
                return False, {"nonzero_outside": (src, tgt)}
            outside += 1
        while inside < count:
            diff = (rng.randint(0, 4), rng.randint(0, 4))
            tgt = (rng.randint(-3, 3), rng.randint(-3, 3))
            src = (tgt[0] + diff[0], tgt[1] + diff[1])
            if not hom_component_basis(ring, src, tgt):
                return False, {"empty_inside": (src, tgt)}
            inside += 1
        return True, {"outside": outside, "inside": inside}

    return _timed(5, "component vanishing against the quadrant order", 10.0, run)


def criterion_6(scale: float = 1.0, seed: int = 106) -> CriterionResult:
    """Semidirect window decompositions: direct product and swap action."""

    def run():
        c2 = FiniteTable.cyclic(2)
        z1 = FreeAbelian(1)
        details = {}
        ra = skew_group_ring(F2, z1, c2, named_action("trivial", z1, c2),
                             n_functionals=[(1,)])
        order_a = ConeOrder(z1, ((1,),))
        rep_a = semidirect_k0_iso(ra, [(j,) for j in range(4)], order_a,
                                  random.Random(seed), samples=max(4, int(20 * scale)))
        details["direct_product"] = {
            "rank": (rep_a.rank_lhs, rep_a.rank_rhs),
            "checks": list(rep_a.checks),
        }
        if not rep_a.passed:
            return False, details

        z2 = FreeAbelian(2)
        rb = skew_group_ring(F2, z2, c2, named_action("swap", z2, c2),
                             n_functionals=[(1, 0), (0, 1)])
        order_b = ConeOrder(z2, ((1, 0), (0, 1)))
        window_b = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]
        rep_b = semidirect_k0_iso(rb, window_b, order_b, random.Random(seed + 1),
                                  samples=max(4, int(20 * scale)))
        details["swap"] = {
            "rank": (rep_b.rank_lhs, rep_b.rank_rhs),
            "checks": list(rep_b.checks),
        }
        return rep_b.passed, details

    return _timed(6, "semidirect decomposition at K0", 60.0, run)


def criterion_7(scale: float = 1.0, seed: int = 107) -> CriterionResult:
    """Toric windows: the full quadrant and the half-open band."""

    def run():
        z2 = FreeAbelian(2)
        details = {}
        # A = N^2: the invertible degrees are trivial, every slot is a point
        quad = [(1, 0), (0, 1)]
        ring_q = monoid_ring(F2, z2, quad)
        ext_q = lineality_extension(2, quad)
        order_q = ConeOrder(ext_q.quotient, tuple(map(tuple, quad)))
        window_q = [(0, 0), (1, 0), (0, 1), (1, 1)]
        rep_q = quotient_k0_iso(ring_q, ext_q, window_q, order_q,
                                random.Random(seed), samples=max(4, int(15 * scale)))
        details["quadrant"] = {"rank": (rep_q.rank_lhs, rep_q.rank_rhs),
                               "checks": list(rep_q.checks)}
        if not (rep_q.passed and rep_q.rank_rhs == len(window_q)):
            return False, details
        # the same window through the plain degree decomposition
        order_g = ConeOrder(z2, tuple(map(tuple, quad)))
        win_direct = degree_window(ring_q, window_q, order_g)
        if not win_direct.group.is_free_of_rank(len(window_q)):
            return False, {"direct_window": win_direct.group.summary()}

        # A = N x Z: invertible degrees {0} x Z, slots are cosets
        band = [(1, 0)]
        ring_b = monoid_ring(F2, z2, band)
        ext_b = lineality_extension(2, band)
        order_b = ConeOrder(ext_b.quotient, ((1, 0),))
        window_b = [(0, 0), (1, 0), (2, 0)]
        rep_b = quotient_k0_iso(ring_b, ext_b, window_b, order_b,
                                random.Random(seed + 1),
                                samples=max(4, int(15 * scale)))
        details["band"] = {"rank": (rep_b.rank_lhs, rep_b.rank_rhs),
                           "checks": list(rep_b.checks)}
        if not rep_b.passed:
            return False, details
        group_b, rep_sr = strong_reduction_k0(ring_b, ext_b, window_b, order_b,
                                              random.Random(seed + 2),
                                              samples=max(3, int(12 * scale)))
        details["band_strong_reduction"] = {"checks": list(rep_sr.checks),
                                            "summary": group_b.summary()}
        if not (rep_sr.passed and group_b.is_free_of_rank(len(window_b))):
            return False, details
        return True, details

    return _timed(7, "toric windows at K0", 60.0, run)


def criterion_8(scale: float = 1.0, seed: int = 108) -> CriterionResult:
    """A positively filtered toy ring agrees with its associated graded."""

    def run():
        filtered = filtered_polynomial_ring(F2)
        graded = polynomial_ring(F2)
        order = ConeOrder(FreeAbelian(1), ((1,),))
        degrees = [(j,) for j in range(4)]
        report = filtered_graded_agreement(filtered, graded, degrees, order,
                                           random.Random(seed),
                                           samples=max(3, int(15 * scale)))
        return report.passed, {"checks": list(report.checks),
                               "labels": report.details["labels"]}

    return _timed(8, "filtered against associated graded windows", 30.0, run)


def criterion_9(scale: float = 1.0, seed: int = 109) -> CriterionResult:
    """Brute-force oracle self-consistency over F2 and Z/4."""

    def run():
        details = {}
        for base in (F2, Z4):
            result = k0_bruteforce(base, 2)
            if not result.group.is_free_of_rank(1):
                return False, {base.name: result.group.summary()}
            p = base.prime_power[0]
            ranks = {}
            for idx, rep in enumerate(result.table.reps):
                expected = rank_mod_p([list(r) for r in rep], p) if rep else 0
                got = result.class_integer(idx)
                if got != expected:
                    return False, {base.name: {"class": idx, "expected": expected,
                                               "got": got}}
                ranks[idx] = got
            if sorted(ranks.values()) != [0, 1, 2]:
                return False, {base.name: {"ranks": ranks}}
            details[base.name] = {"classes": len(result.table.reps),
                                  "ranks": sorted(ranks.values())}
        return True, details

    return _timed(9, "oracle Grothendieck group is Z with class = rank",
                  60.0, run)


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
)


def run_all(scale: float = 1.0, echo=print) -> list[CriterionResult]:
    results = []
    for fn in ALL_CRITERIA:
        result = fn(scale=scale)
        results.append(result)
        if echo is not None:
            echo(result.line())
    return results
