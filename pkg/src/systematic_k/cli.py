"""Batch experiment runner.

``systematic-k run config.json [--seed N] [--out report.json]`` loads a
JSON description of a group, order, ring and window, runs one command,
and emits a JSON report.  Exit status: 0 when all checks pass, 1 on a
failed check, 2 on a configuration error.  Reports are byte-identical
for identical config and seed, timings excluded.

``systematic-k selftest`` runs the full acceptance suite.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import acceptance
from .errors import SystematicKError
from .groups import (
    ConeOrder,
    Extension,
    FiniteTable,
    FreeAbelian,
    LatticeQuotient,
    Semidirect,
    group_axiom_failures,
    lineality_extension,
    named_action,
)
from .kzero import (
    K0Element,
    degree_window,
    k0_bruteforce,
    matrix_rank_over_base,
    quotient_k0_iso,
    semidirect_k0_iso,
    strong_reduction_k0,
)
from .modcat import (
    check_split_naturality,
    left_mult_surjective_on_component,
    presented_is_zero,
    presented_module,
    random_idem_morphism,
    random_lt_idempotent,
    rho_naturality_counterexample,
    split_lt_idempotent,
    tensor_extend,
)
from .rings import (
    ModularBase,
    MonoidRing,
    PowerLocalization,
    base_from_name,
    dual_basis,
    is_strongly_systematic_at,
    monoid_ring,
    filtered_polynomial_ring,
    laurent_group_ring,
    polynomial_ring,
    power_localization,
    random_component_element,
    skew_group_ring,
    sr_axiom_failures,
)


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# JSON codecs

def encode_value(v):
    if isinstance(v, tuple):
        return [encode_value(x) for x in v]
    if isinstance(v, Fraction):
        return [v.numerator, v.denominator]
    if isinstance(v, dict):
        return {str(k): encode_value(x) for k, x in v.items()}
    if isinstance(v, list):
        return [encode_value(x) for x in v]
    return v


def encode_ring_elem(x):
    if isinstance(x.data, Fraction):
        return [x.data.numerator, x.data.denominator]
    return [[encode_value(c), encode_value(g)] for g, c in x.data]


def encode_matrix(f):
    return [[encode_ring_elem(x) for x in row] for row in f.entries]


def encode_k0(x: K0Element):
    return [[encode_value(label), c] for label, c in x.items]


def decode_element(group, data):
    if isinstance(group, (FreeAbelian, LatticeQuotient)):
        if isinstance(data, int):
            if group.rank != 1:
                raise ConfigError(f"scalar degree for rank {group.rank}")
            data = [data]
        el = tuple(int(x) for x in data)
        if isinstance(group, LatticeQuotient):
            el = group.reduce(el)
        return group.require(el)
    if isinstance(group, FiniteTable):
        return group.require(int(data))
    if isinstance(group, Semidirect):
        if not (isinstance(data, list) and len(data) == 2):
            raise ConfigError(f"semidirect element must be a pair: {data!r}")
        return (
            decode_element(group.n_group, data[0]),
            decode_element(group.h_group, data[1]),
        )
    if isinstance(group, Extension):
        return decode_element(group.ambient, data)
    raise ConfigError(f"cannot decode elements of {group!r}")


def parse_group(cfg):
    kind = cfg.get("kind")
    if kind == "free_abelian":
        return FreeAbelian(int(cfg["rank"]))
    if kind == "cyclic":
        return FiniteTable.cyclic(int(cfg["order"]))
    if kind == "finite_table":
        return FiniteTable(tuple(tuple(row) for row in cfg["table"]))
    if kind == "semidirect":
        n = parse_group(cfg["n"])
        h = parse_group(cfg["h"])
        return Semidirect(n, h, named_action(cfg.get("action", "trivial"), n, h))
    if kind == "extension":
        g = parse_group(cfg["g"])
        return Extension(g, tuple(tuple(row) for row in cfg.get("n_basis", [])))
    raise ConfigError(f"unknown group kind {kind!r}")


def parse_order(cfg, owner) -> ConeOrder:
    return ConeOrder(owner, tuple(tuple(f) for f in cfg.get("functionals", [])))


def parse_ring(cfg):
    kind = cfg.get("kind")
    if kind == "monoid_ring":
        base = base_from_name(cfg["base"])
        group = parse_group(cfg["group"])
        cone = cfg.get("support_cone")
        functionals = cone["functionals"] if cone else None
        return monoid_ring(base, group, functionals)
    if kind == "laurent_group_ring":
        return laurent_group_ring(base_from_name(cfg["base"]), parse_group(cfg["group"]))
    if kind == "skew_group_ring":
        base = base_from_name(cfg["base"])
        n = parse_group(cfg["n"])
        h = parse_group(cfg["h"])
        cone = cfg.get("support_cone")
        return skew_group_ring(base, n, h,
                               named_action(cfg.get("action", "trivial"), n, h),
                               cone["functionals"] if cone else None)
    if kind == "power_localization":
        return power_localization(int(cfg["s"]), bool(cfg.get("positive", False)))
    if kind == "filtered_monoid_ring":
        return filtered_polynomial_ring(base_from_name(cfg["base"]))
    raise ConfigError(f"unknown ring kind {kind!r}")


def parse_window(group, items):
    return [decode_element(group, x) for x in items]


# ---------------------------------------------------------------------------
# commands

def _check(name, passed, **details):
    return {"name": name, "passed": bool(passed), "details": encode_value(details)}


def cmd_verify_identities(config, rng):
    ring = parse_ring(config["ring"])
    budget = config.get("budget", {})
    instances = int(budget.get("instances", 50))
    morphisms = int(budget.get("morphisms", 20))
    checks = []
    group_fails = group_axiom_failures(ring.group, rng)
    checks.append(_check("group_axioms", not group_fails, failures=len(group_fails)))
    ring_fails = sr_axiom_failures(ring, rng)
    checks.append(_check("ring_axioms", not ring_fails, failures=len(ring_fails)))
    blocks_cfg = config.get("blocks", [[1, 2], [0, 1]])
    ok = 0
    for _ in range(instances):
        blocks = tuple(
            tuple(decode_element(ring.group, rng.choice(blk))
                  for _ in range(rng.randint(1, 2)))
            for blk in blocks_cfg
        )
        X, lt = random_lt_idempotent(ring, blocks, rng)
        split_lt_idempotent(X, lt)
        ok += 1
    checks.append(_check("split_identities", ok == instances, verified=ok))
    natural = 0
    for _ in range(morphisms):
        blocks = tuple(
            tuple(decode_element(ring.group, rng.choice(blk))
                  for _ in range(rng.randint(1, 2)))
            for blk in blocks_cfg
        )
        X, lt = random_lt_idempotent(ring, blocks, rng)
        Y, _ = random_lt_idempotent(ring, blocks, rng)
        if check_split_naturality(random_idem_morphism(X, lt, Y, lt, rng), lt, lt):
            natural += 1
    checks.append(_check("split_naturality", natural == morphisms, verified=natural))
    return checks, {}


def cmd_check_strong(config, rng):
    ring = parse_ring(config["ring"])
    window = parse_window(ring.group, config["window"])
    expect = bool(config.get("expect_strong", True))
    samples = int(config.get("budget", {}).get("samples", 20))
    checks = []
    results = {}
    for g in window:
        results[str(encode_value(g))] = is_strongly_systematic_at(ring, g)
    all_strong = all(results.values())
    checks.append(_check("strongly_systematic", all_strong == expect, results=results))
    if all_strong:
        verified = 0
        for g in window:
            db = dual_basis(ring, g)
            for _ in range(samples):
                r = random_component_element(ring, g, rng, bound=4)
                if not db.check_identity(r):
                    checks.append(_check("dual_basis_identity", False, degree=g))
                    return checks, {}
                verified += 1
        checks.append(_check("dual_basis_identity", True, samples=verified))
    return checks, {}


def cmd_split_demo(config, rng):
    ring = parse_ring(config["ring"])
    blocks_cfg = config.get("blocks", [[1, 2], [0]])
    blocks = tuple(
        tuple(decode_element(ring.group, d) for d in blk) for blk in blocks_cfg
    )
    X, lt = random_lt_idempotent(ring, blocks, rng)
    data = split_lt_idempotent(X, lt)
    checks = [_check("split_identities", True, rank=X.rank)]
    extra = {
        "object": {
            "degrees": encode_value(X.module.degrees),
            "p": encode_matrix(X.p),
        },
        "sigma": encode_matrix(data.sigma.f),
        "pi": encode_matrix(data.pi.f),
        "rho": encode_matrix(data.rho.f),
        "mixer": encode_matrix(data.mixer.f),
    }
    return checks, extra


def cmd_kzero_window(config, rng):
    ring = parse_ring(config["ring"])
    order = parse_order(config.get("order", {}), ring.group)
    window = parse_window(ring.group, config["window"])
    win = degree_window(ring, window, order)
    checks = [_check("window_construction", True)]
    checks.append(_check(
        "free_on_window",
        win.group.is_free_of_rank(len(window) * win.classifier.rank),
        summary=win.group.summary(),
    ))
    samples = int(config.get("budget", {}).get("samples", 25))
    class_counts = []
    oracle = None
    if isinstance(ring.base, ModularBase) and ring.base.n ** 4 <= 4096:
        oracle = k0_bruteforce(ring.base, 2)
    agree = True
    for _ in range(samples):
        X, lt = win.random_object(rng, max_per_slot=2)
        cls = win.classify(X)
        class_counts.append(encode_k0(cls))
        if oracle is not None:
            total = sum(c for _, c in cls.items)
            via_oracle = 0
            for k, slot in enumerate(win.slots):
                blk = lt.blocks[k]
                if not blk:
                    continue
                rows = win._trivialise(
                    slot,
                    [X.module.degrees[i] for i in blk],
                    [[X.p.entries[a][b] for b in blk] for a in blk],
                )
                via_oracle += oracle.class_integer(oracle.table.class_index(rows))
            if via_oracle != total:
                agree = False
    checks.append(_check("oracle_agreement" if oracle else "sampled_classification",
                         agree, samples=samples))
    return checks, {"k0": win.group.summary(), "classes": class_counts}


def _report_checks(report):
    return [_check(f"{report.name}:{name}", ok) for name, ok in report.checks] + [
        _check(f"{report.name}:rank_equality_total",
               report.rank_lhs == report.rank_rhs,
               lhs=report.rank_lhs, rhs=report.rank_rhs)
    ]


def cmd_thm_semidirect(config, rng):
    ring = parse_ring(config["ring"])
    if not isinstance(ring, MonoidRing) or not isinstance(ring.group, Semidirect):
        raise ConfigError("thm-semidirect needs a semidirect-graded ring")
    order = parse_order(config.get("order", {}), ring.group.n_group)
    window = parse_window(ring.group.n_group, config["window"])
    report = semidirect_k0_iso(ring, window, order, rng)
    return _report_checks(report), {"details": encode_value(report.details)}


def _parse_extension(config, ring):
    ext_cfg = config.get("extension", {})
    basis = tuple(tuple(row) for row in ext_cfg.get("n_basis", []))
    return Extension(ring.group, basis)


def cmd_thm_quotient(config, rng):
    ring = parse_ring(config["ring"])
    ext = _parse_extension(config, ring)
    order = parse_order(config.get("order", {}), ext.quotient)
    window = parse_window(ext.quotient, config["window"])
    report = quotient_k0_iso(ring, ext, window, order, rng)
    return _report_checks(report), {"details": encode_value(report.details)}


def cmd_corollary_strong(config, rng):
    ring = parse_ring(config["ring"])
    ext = _parse_extension(config, ring)
    order = parse_order(config.get("order", {}), ext.quotient)
    window = parse_window(ext.quotient, config["window"])
    q_report = quotient_k0_iso(ring, ext, window, order, rng)
    group, sr_report = strong_reduction_k0(ring, ext, window, order, rng)
    checks = _report_checks(q_report) + _report_checks(sr_report)
    return checks, {"k0": group.summary()}


def cmd_toric(config, rng):
    base = base_from_name(config.get("base", "F2"))
    functionals = [tuple(f) for f in config["cone"]["functionals"]]
    rank = len(functionals[0])
    ring = monoid_ring(base, FreeAbelian(rank), functionals)
    ext = lineality_extension(rank, functionals)
    order = parse_order({"functionals": functionals}, ext.quotient)
    window = parse_window(ext.quotient, config["window"])
    q_report = quotient_k0_iso(ring, ext, window, order, rng)
    checks = _report_checks(q_report)
    extra = {"n_basis": encode_value(ext.n_basis),
             "details": encode_value(q_report.details)}
    if ext.n_basis:
        group, sr_report = strong_reduction_k0(ring, ext, window, order, rng)
        checks += _report_checks(sr_report)
        extra["k0"] = group.summary()
    else:
        win = degree_window(ring, window, parse_order(
            {"functionals": functionals}, ring.group))
        checks.append(_check("template_cross_check",
                             win.group.is_free_of_rank(len(window)),
                             summary=win.group.summary()))
        extra["k0"] = win.group.summary()
    return checks, extra


def cmd_counterexamples(config, rng):
    s = int(config.get("s", 2))
    loc = power_localization(s)
    checks = []
    torsion = presented_module(loc, [[s]])
    checks.append(_check("torsion_module_nonzero_downstairs",
                         not presented_is_zero(torsion)))
    checks.append(_check("tensor_extension_vanishes",
                         presented_is_zero(tensor_extend(torsion))))
    mult = loc.from_fraction(s)
    checks.append(_check("multiplication_invertible_upstairs", loc.is_unit(mult)))
    checks.append(_check(
        "multiplication_not_onto_identity_component",
        not left_mult_surjective_on_component(loc, mult, (0,)),
    ))
    ring = parse_ring(config["ring"]) if "ring" in config else polynomial_ring(
        base_from_name(config.get("base", "F2")))
    budget = int(config.get("budget", {}).get("search", 400))
    blocks = tuple(
        tuple(decode_element(ring.group, d) for d in blk)
        for blk in config.get("blocks", [[1], [0]])
    )
    witness = rho_naturality_counterexample(ring, blocks, rng, budget=budget)
    checks.append(_check("splitting_retraction_not_natural", witness.found,
                         tried=witness.tried))
    extra = {}
    if witness.found:
        extra["witness"] = {
            "p": encode_matrix(witness.source.p),
            "q": encode_matrix(witness.target.p),
            "f": encode_matrix(witness.morphism.f),
            "lhs": encode_matrix(witness.lhs),
            "rhs": encode_matrix(witness.rhs),
        }
    return checks, extra


COMMANDS = {
    "verify-identities": cmd_verify_identities,
    "check-strong": cmd_check_strong,
    "split-demo": cmd_split_demo,
    "kzero-window": cmd_kzero_window,
    "thm-semidirect": cmd_thm_semidirect,
    "thm-quotient": cmd_thm_quotient,
    "corollary-strong": cmd_corollary_strong,
    "toric": cmd_toric,
    "counterexamples": cmd_counterexamples,
}


# ---------------------------------------------------------------------------
# driver

def run(config: dict) -> dict:
    """Execute one experiment; deterministic given config and seed."""
    import random as _random

    command = config.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    seed = int(config.get("seed", 0))
    rng = _random.Random(seed)
    start = time.perf_counter()
    try:
        checks, extra = COMMANDS[command](config, rng)
    except (SystematicKError, ConfigError) as exc:
        if isinstance(exc, ConfigError):
            raise
        checks = [_check("execution", False, error=f"{type(exc).__name__}: {exc}",
                         seed=seed)]
        extra = {}
    report = {
        "command": command,
        "seed": seed,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
    report.update(extra)
    for check in checks:
        if not check["passed"]:
            check["details"]["seed"] = seed
    report["timings"] = {"wall_s": round(time.perf_counter() - start, 6)}
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="systematic-k",
                                     description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    runp = sub.add_parser("run", help="run one experiment from a JSON config")
    runp.add_argument("config")
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--out", default=None)
    sub.add_parser("selftest", help="run the full acceptance suite")
    args = parser.parse_args(argv)

    if args.mode == "selftest":
        results = acceptance.run_all()
        return 0 if all(r.passed and r.within_budget for r in results) else 1

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        if args.seed is not None:
            config["seed"] = args.seed
        report = run(config)
    except (json.JSONDecodeError, OSError, KeyError, ValueError, TypeError,
            ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = report_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
