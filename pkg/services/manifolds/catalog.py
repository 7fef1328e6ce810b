"""
Manifold Catalog
Small triangulated building blocks and product expressions such as "RP2xS3".
"""

import sys
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.config import get_settings
from services.manifolds.products import antipodal_quotient_rp, product_of
from services.simplicial.complex import Complex, build_complex, validate_closed_pseudomanifold
from services.simplicial.io import read_complex


class CatalogEntry(BaseModel):
    """A validated building-block complex with its cohomology fingerprint."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    complex: Complex
    betti: Tuple[int, ...]
    orientable: bool
    provenance: str


# name -> (F2-Betti numbers, orientable, data file stem or None)
_CATALOG = {
    "S1": ((1, 1), True, None),
    "S2": ((1, 0, 1), True, None),
    "S3": ((1, 0, 0, 1), True, None),
    "RP2": ((1, 1, 1), False, "rp2_6"),
    "RP3": ((1, 1, 1, 1), True, "rp3"),
    "RP4": ((1, 1, 1, 1, 1), False, "rp4"),
    "Klein": ((1, 2, 1), False, "klein_9"),
}

_ALIASES = {"K": "Klein", "KLEIN": "Klein"}

CATALOG_NAMES = tuple(_CATALOG)


def _sphere(n: int) -> Tuple[Complex, str]:
    if n == 1:
        return build_complex(3, [(0, 1), (0, 2), (1, 2)]), "3-cycle"
    return build_complex(n + 2, list(combinations(range(n + 2), n + 1))), f"boundary of the {n + 1}-simplex"


def catalog_entry_spec(name: str) -> Tuple[Tuple[int, ...], bool, Optional[str]]:
    """(F2-Betti numbers, orientable, data file stem) for a catalog name."""
    return _CATALOG[canonical_name(name)]


def _load(name: str, stem: str, data_dir: Path) -> Tuple[Complex, str]:
    path = data_dir / f"{stem}.txt"
    if path.exists():
        return read_complex(path), f"data file {path.name}"
    if name in ("RP3", "RP4"):
        print(
            f"⚠️ {path} not found; generating {name} as an antipodal quotient. "
            f"Run scripts/build_catalog.py for a much smaller triangulation",
            file=sys.stderr,
        )
        return antipodal_quotient_rp(int(name[2])), "antipodal quotient of the subdivided cross-polytope boundary"
    raise FileNotFoundError(f"Missing data file for {name}: {path}")


def canonical_name(name: str) -> str:
    key = _ALIASES.get(name.upper(), name)
    for known in _CATALOG:
        if known.upper() == key.upper():
            return known
    raise ValueError(f"Unknown manifold '{name}'; expected one of {', '.join(_CATALOG)} (or K)")


@lru_cache(maxsize=None)
def _catalog_get(name: str, data_dir: str) -> CatalogEntry:
    betti, orientable, stem = _CATALOG[name]
    if stem is None:
        c, provenance = _sphere(int(name[1]))
    else:
        c, provenance = _load(name, stem, Path(data_dir))

    report = validate_closed_pseudomanifold(c)
    if not report.passed:
        raise ValueError(f"Catalog complex {name} failed validation: {report.bad_ridges[:3]}")
    return CatalogEntry(name=name, complex=c, betti=betti, orientable=orientable, provenance=provenance)


def catalog_get(name: str) -> CatalogEntry:
    """
    Look up a building block by name (S1, S2, S3, RP2, RP3, RP4, Klein).

    Args:
        name: Catalog name; "K" is accepted for the Klein bottle

    Returns:
        Validated CatalogEntry
    """
    return _catalog_get(canonical_name(name), str(get_settings().data_dir))


def parse_product(expression: str) -> List[str]:
    """Split an x-separated product expression into canonical factor names."""
    parts = [p for p in expression.strip().split("x")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"Malformed product expression '{expression}'")
    return [canonical_name(p) for p in parts]


def resolve_manifold(spec: str) -> Complex:
    """
    Resolve a manifold spec: a complex file path, a catalog name, or a
    left-associated product such as "S1xKxRP2".
    """
    path = Path(spec)
    if path.suffix == ".txt" or path.exists():
        if not path.exists():
            raise FileNotFoundError(f"No complex file at {path}")
        return read_complex(path)
    return product_of([catalog_get(name).complex for name in parse_product(spec)])
