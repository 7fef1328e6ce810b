"""
Command-line entry point for the heptagon invariant toolkit.
Builds and validates triangulated manifolds, enumerates cohomology classes,
computes invariant tables and runs the verification suites.

JSON goes to stdout; progress lines go to stderr.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

import argparse
import json
import sys
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from services.algebra.field import get_field, parse_field
from services.algebra.linalg import NotASubspaceError
from services.cohomology.basis import ClassCapExceeded, LiftError, betti_numbers, cohomology_basis, enumerate_classes
from services.coloring.local import ColoringNotPermitted, OnvViolation
from services.coloring.spaces import check_full_polygon, random_simplex_cocycle
from services.config import get_settings
from services.heptagon.cocycles import DoubleColoring, c_evaluator, heptagon_coboundary, q_evaluator, q_value
from services.invariant.tables import class_table
from services.manifolds.catalog import resolve_manifold
from services.pachner.moves import MoveNotApplicable, invariance_harness, parse_script
from services.pentagon.matrix import (
    PentagonData,
    cross_ratio_identity,
    framework_pentagon_matrix,
    normalized_pentagon_matrix,
    pentagon_matrix,
    pentagon_relation_check,
)
from services.simplicial.complex import validate_closed_pseudomanifold
from services.simplicial.io import ComplexFormatError, write_complex

APP_NAME = "heptagon"
APP_VERSION = "0.1.0"

USAGE_ERRORS = (
    ValueError,
    FileNotFoundError,
    ComplexFormatError,
    ClassCapExceeded,
    MoveNotApplicable,
    NotASubspaceError,
    OnvViolation,
    ColoringNotPermitted,
    LiftError,
)


class RunConfig(BaseModel):
    """Parsed command line."""

    command: str
    manifold: Optional[str] = None
    field_p: int = 2
    field_k: int = 15
    seed: int = 0
    classes: Optional[List[str]] = None
    output_format: str = Field(default="json", pattern="^(json|table)$")
    threads: int = 1
    trials: int = 100
    script: Optional[str] = None
    z: Optional[List[int]] = None
    out: Optional[str] = None
    degree: Optional[int] = None
    dimension: int = 5
    quiet: bool = False

    @property
    def verbose(self) -> bool:
        return not self.quiet


def log(config: RunConfig, message: str):
    if config.verbose:
        print(message, file=sys.stderr)


def emit(payload: dict):
    print(json.dumps(payload, indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    default_field = f"{settings.field_p},{settings.field_k}"

    parser = argparse.ArgumentParser(prog=APP_NAME, description="Heptagon state-sum invariants of 5-manifolds")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifold=False, field=True, seed=True):
        if manifold:
            p.add_argument("--manifold", required=True, help="Catalog name, product like RP2xS3, or complex file")
        if field:
            p.add_argument("--field", default=default_field, help="p,k for GF(p^k) (default %(default)s)")
        if seed:
            p.add_argument("--seed", type=int, default=settings.seed)
        p.add_argument("--quiet", action="store_true", help="No progress output on stderr")

    p = sub.add_parser("build", help="Write the complex of a manifold spec")
    common(p, manifold=True, field=False, seed=False)
    p.add_argument("--out", help="Output file (default stdout)")

    p = sub.add_parser("validate", help="Closed pseudomanifold report")
    common(p, manifold=True, field=False, seed=False)

    p = sub.add_parser("cohomology", help="Betti numbers and class enumeration over F_p")
    common(p, manifold=True, seed=False)
    p.add_argument("--degree", type=int, default=None, help="Degree to enumerate (default 3)")

    p = sub.add_parser("invariant", help="Class table of (dim V_p/V_g, rank A)")
    common(p, manifold=True)
    p.add_argument("--class", dest="classes", action="append", help="Class bits, repeatable (default all)")
    p.add_argument("--format", dest="output_format", choices=["json", "table"], default="json")
    p.add_argument("--threads", type=int, default=settings.threads)

    p = sub.add_parser("verify-heptagon", help="Full polygon check on random ω")
    common(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dimension", type=int, default=5, help="3 pentagon, 4 hexagon, 5 heptagon")

    p = sub.add_parser("verify-cocycle", help="δQ = 0, δc = 0 and representative independence")
    common(p)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("pachner-test", help="Invariant along a move script")
    common(p, manifold=True)
    p.add_argument("--class", dest="classes", action="append", help="Class bits (default zero class)")
    p.add_argument("--script", required=True, help="kind@v0:v1:...,kind@auto,...")

    p = sub.add_parser("pentagon-demo", help="Pentagon matrix and relation check")
    common(p, seed=False)
    p.add_argument("--z", required=True, help="Comma-separated vertex values")
    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    if "field" in values:
        field = parse_field(values.pop("field"))
        values["field_p"], values["field_k"] = field.p, field.k
    if "z" in values:
        try:
            values["z"] = [int(v) for v in values["z"].split(",")]
        except ValueError:
            raise ValueError(f"--z must be comma-separated integers, got '{values['z']}'")
    return RunConfig(**values)


# Subcommands


def run_build(config: RunConfig) -> int:
    c = resolve_manifold(config.manifold)
    comment = f"{config.manifold}: {len(c.facets)} facets"
    if config.out:
        write_complex(c, config.out, comment=comment)
        log(config, f"✅ Wrote {config.out} ({len(c.facets)} facets)")
    else:
        write_complex(c, sys.stdout, comment=comment)
    return 0


def run_validate(config: RunConfig) -> int:
    c = resolve_manifold(config.manifold)
    report = validate_closed_pseudomanifold(c)
    emit({"manifold": config.manifold, **report.model_dump()})
    log(config, f"{'✅' if report.passed else '❌'} {config.manifold}: {c}")
    return 0 if report.passed else 1


def run_cohomology(config: RunConfig) -> int:
    c = resolve_manifold(config.manifold)
    field = get_field(config.field_p, 1)
    degree = 3 if config.degree is None else config.degree
    basis = cohomology_basis(c, degree, field)
    classes = enumerate_classes(basis) if field.p == 2 else []
    emit(
        {
            "manifold": config.manifold,
            "field": {"p": field.p, "k": 1},
            "betti": betti_numbers(c, field),
            "degree": degree,
            "classes": [cls.class_id for cls in classes],
        }
    )
    return 0


def run_invariant(config: RunConfig) -> int:
    c = resolve_manifold(config.manifold)
    field = get_field(config.field_p, config.field_k)
    table = class_table(
        c,
        field=field,
        seed=config.seed,
        name=config.manifold,
        threads=config.threads,
        classes=config.classes,
        verbose=config.verbose,
    )
    if config.output_format == "table":
        print(table.format_table())
    else:
        emit(table.to_payload())
    if not table.certificates_passed():
        log(config, "⚠️ Structure certificate failed for some class; see the certificate fields")
    return 0


def run_verify_heptagon(config: RunConfig) -> int:
    field = get_field(config.field_p, config.field_k)
    d = config.dimension
    if d not in (3, 4, 5):
        raise ValueError(f"--dimension must be 3, 4 or 5, got {d}")
    rng = np.random.default_rng(config.seed)
    failures = {m: 0 for m in range(1, d + 2)}
    for trial in range(config.trials):
        omega = random_simplex_cocycle(d + 1, d - 2, field, rng)
        for m in failures:
            if not check_full_polygon(d, omega, m=m):
                failures[m] += 1
        if config.verbose and (trial + 1) % 10 == 0:
            log(config, f"🧮 {trial + 1}/{config.trials} trials")
    total = sum(failures.values())
    emit(
        {
            "dimension": d,
            "field": {"p": field.p, "k": field.k},
            "seed": config.seed,
            "trials": config.trials,
            "failures": {f"{m}|{d + 2 - m}": n for m, n in failures.items()},
        }
    )
    log(config, f"{'✅' if total == 0 else '❌'} full {d + 2}-gon: {total} failures")
    return 0 if total == 0 else 1


def run_verify_cocycle(config: RunConfig) -> int:
    field = get_field(config.field_p, config.field_k)
    if field.p not in (2, 3):
        raise ValueError(f"Closed-form 5-cocycles exist in characteristic 2 and 3, got {field}")
    rng = np.random.default_rng(config.seed)
    c_eval = c_evaluator(field.p)
    failures = {"delta_Q": 0, "delta_c": 0, "representative": 0}
    for _ in range(config.trials):
        five = DoubleColoring.random(5, field, rng)
        if heptagon_coboundary(q_evaluator, five.simplex, five):
            failures["delta_Q"] += 1
        six = DoubleColoring.random(6, field, rng)
        if heptagon_coboundary(c_eval, six.simplex, six):
            failures["delta_c"] += 1

        face = five.restrict(0).lift()
        shift = field.random(rng, 1, nonzero=True)[0]
        moved = face.nu + shift * face.omega
        before = q_value(face.simplex, face.omega, face.nu, face.eta, field=field)
        after = q_value(face.simplex, face.omega, moved, face.eta, field=field)
        if before != after:
            failures["representative"] += 1
    total = sum(failures.values())
    emit(
        {
            "field": {"p": field.p, "k": field.k},
            "seed": config.seed,
            "trials": config.trials,
            "failures": failures,
        }
    )
    log(config, f"{'✅' if total == 0 else '❌'} cocycle checks: {total} failures")
    return 0 if total == 0 else 1


def run_pachner_test(config: RunConfig) -> int:
    c = resolve_manifold(config.manifold)
    field = get_field(config.field_p, config.field_k)
    script = parse_script(config.script)
    basis = cohomology_basis(c, 3, get_field(field.p, 1))
    by_id = {cls.class_id: cls for cls in enumerate_classes(basis)}
    wanted = config.classes or ["0" * basis.dim]
    reports = []
    for class_id in wanted:
        if class_id not in by_id:
            raise ValueError(f"Unknown class '{class_id}'; dim H^3 = {basis.dim}")
        report = invariance_harness(
            c,
            by_id[class_id].representative,
            field,
            config.seed,
            script,
            name=config.manifold,
            class_id=class_id,
            verbose=config.verbose,
        )
        reports.append(report)
    emit(
        {
            "manifold": config.manifold,
            "field": {"p": field.p, "k": field.k},
            "seed": config.seed,
            "reports": [r.model_dump() for r in reports],
        }
    )
    ok = all(r.constant and r.values_preserved for r in reports)
    log(config, f"{'✅' if ok else '❌'} invariants {'constant' if ok else 'changed'} along the script")
    return 0 if ok else 1


def run_pentagon_demo(config: RunConfig) -> int:
    field = get_field(config.field_p, config.field_k)
    data = PentagonData(p=field.p, k=field.k, z=config.z)
    matrix = pentagon_matrix(data)
    framework = framework_pentagon_matrix(data)
    payload = {
        "field": {"p": field.p, "k": field.k},
        "z": data.z,
        "matrix": matrix,
        "framework_matrix": framework,
        "normalized_matrix": normalized_pentagon_matrix(data),
        "cross_ratio_identity": cross_ratio_identity(),
    }
    ok = matrix == framework and payload["cross_ratio_identity"]
    if len(data.z) == 5:
        payload["pentagon_relation"] = pentagon_relation_check(data.z, field)
        ok = ok and payload["pentagon_relation"]
    emit(payload)
    return 0 if ok else 1


COMMANDS = {
    "build": run_build,
    "validate": run_validate,
    "cohomology": run_cohomology,
    "invariant": run_invariant,
    "verify-heptagon": run_verify_heptagon,
    "verify-cocycle": run_verify_cocycle,
    "pachner-test": run_pachner_test,
    "pentagon-demo": run_pentagon_demo,
}


def run(config: RunConfig) -> int:
    """Dispatch one subcommand; returns the exit code."""
    return COMMANDS[config.command](config)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except USAGE_ERRORS as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 2

    try:
        return run(config)
    except USAGE_ERRORS as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
