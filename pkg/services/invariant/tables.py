"""
Invariant Tables
Per-class invariant computation, full class tables and their JSON / text output.
"""

import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from services.algebra.field import Field, get_field
from services.cohomology.basis import cohomology_basis, enumerate_classes, lift_omega_nonzero
from services.coloring.spaces import ColoringFramework
from services.config import get_settings
from services.invariant.state_sum import InvariantResult, StructureCertificate, extract_matrix
from services.simplicial.complex import Cochain, Complex, build_complex

Pair = Tuple[int, int]


def is_zero_class(class_id: str) -> bool:
    """Class ids are coefficient bits; the zero class is all zeros ("" when H^3 = 0)."""
    return set(class_id) <= {"0"}


class ClassTable(BaseModel):
    """Invariant results for every class of H^3(M; F_2)."""

    manifold: str
    field_p: int
    field_k: int
    seed: int
    results: List[InvariantResult]

    @property
    def zero_class(self) -> Optional[InvariantResult]:
        """The all-zero class, or None when a class subset left it out."""
        return next((r for r in self.results if is_zero_class(r.class_id)), None)

    def nonzero_multiset(self) -> Dict[Pair, int]:
        return dict(Counter(r.pair for r in self.results if not is_zero_class(r.class_id)))

    def multiset(self) -> Dict[Pair, int]:
        return dict(Counter(r.pair for r in self.results))

    def certificates_passed(self) -> bool:
        return all(r.certificate.passed for r in self.results)

    def to_payload(self) -> dict:
        """JSON document: {manifold, field: {p, k}, seed, classes: [...]}."""
        return {
            "manifold": self.manifold,
            "field": {"p": self.field_p, "k": self.field_k},
            "seed": self.seed,
            "classes": [
                {
                    "class_id": r.class_id,
                    "dim": r.quotient_dim,
                    "rank": r.rank_A,
                    "A": r.A,
                    "certificate": r.certificate.model_dump(),
                }
                for r in self.results
            ],
        }

    def format_table(self) -> str:
        """Aligned text table: the zero class, then nonzero (dim, rank) counts."""
        zero = self.zero_class
        lines = [
            f"{self.manifold} over GF({self.field_p}^{self.field_k}), seed {self.seed}",
            f"{'class':<10}{'dim V_p/V_g':>14}{'rank A':>9}{'count':>8}",
        ]
        if zero is not None:
            lines.append(f"{'zero':<10}{zero.quotient_dim:>14}{zero.rank_A:>9}{1:>8}")
        for (dim, rank), count in sorted(self.nonzero_multiset().items()):
            lines.append(f"{'nonzero':<10}{dim:>14}{rank:>9}{count:>8}")
        return "\n".join(lines)


def class_seed(seed: int, index: int) -> int:
    """Seed for class ``index``, derived with numpy's SeedSequence."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def compute_class(
    M: Complex,
    representative: Cochain,
    field: Field,
    seed: int,
    class_id: str = "",
    verbose: bool = False,
) -> InvariantResult:
    """
    Lift the class to an ω nonzero everywhere, build V_p / V_g and extract A.

    Deterministic for a given seed.
    """
    omega = lift_omega_nonzero(M, representative, field, seed, class_id=class_id)
    if verbose:
        print(f"🧮 Class {class_id or '0'}: ω lifted after {omega.attempts} attempt(s)", file=sys.stderr)
    framework = ColoringFramework(M, omega.cochain)
    spaces = framework.global_spaces(verbose=verbose)
    return extract_matrix(M, omega.cochain, spaces, class_id=class_id, seed=seed, verbose=verbose)


def _class_worker(job) -> dict:
    n_vertices, facets, values, p, k, seed, class_id = job
    M = build_complex(n_vertices, facets)
    representative = Cochain(M, 3, get_field(p, 1), values)
    return compute_class(M, representative, get_field(p, k), seed, class_id=class_id).model_dump()


def class_table(
    M: Complex,
    field: Optional[Field] = None,
    seed: Optional[int] = None,
    name: str = "M",
    threads: Optional[int] = None,
    cap: Optional[int] = None,
    classes: Optional[List[str]] = None,
    verbose: bool = False,
) -> ClassTable:
    """
    Invariants of every class of H^3(M; F_2), zero class first.

    Args:
        M: Closed 5-dimensional complex
        field: Field of ω (default from settings)
        seed: Master seed; class i uses class_seed(seed, i)
        name: Manifold label for the output
        threads: Worker processes (1 runs inline)
        cap: Largest allowed dim H^3
        classes: Optional subset of class ids to compute
        verbose: Progress on stderr
    """
    settings = get_settings()
    field = field or get_field(settings.field_p, settings.field_k)
    seed = settings.seed if seed is None else seed
    threads = settings.threads if threads is None else threads

    basis = cohomology_basis(M, 3, get_field(field.p, 1))
    enumerated = enumerate_classes(basis, cap=cap)
    if classes is not None:
        known = {c.class_id for c in enumerated}
        unknown = [c for c in classes if c not in known]
        if unknown:
            raise ValueError(f"Unknown class ids {unknown}; dim H^3 = {basis.dim}, ids have {basis.dim} bits")
    if verbose:
        print(f"🧮 {name}: {len(M.facets)} facets, dim H^3 = {basis.dim}, {len(enumerated)} classes", file=sys.stderr)

    jobs = [
        (index, cls)
        for index, cls in enumerate(enumerated)
        if classes is None or cls.class_id in classes
    ]

    if threads > 1 and len(jobs) > 1:
        payload = [
            (M.n_vertices, list(M.facets), cls.representative.field.to_ints(cls.representative.values),
             field.p, field.k, class_seed(seed, index), cls.class_id)
            for index, cls in jobs
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [InvariantResult(**r) for r in pool.map(_class_worker, payload)]
    else:
        results = [
            compute_class(M, cls.representative, field, class_seed(seed, index), class_id=cls.class_id, verbose=verbose)
            for index, cls in jobs
        ]

    return ClassTable(manifold=name, field_p=field.p, field_k=field.k, seed=seed, results=results)


__all__ = [
    "ClassTable",
    "InvariantResult",
    "StructureCertificate",
    "class_seed",
    "class_table",
    "compute_class",
]
