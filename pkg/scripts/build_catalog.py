"""
Build Catalog
Generate RP^3 and RP^4, shrink them with bistellar moves and write the
catalog data files data/rp3.txt and data/rp4.txt.
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

import argparse
import time

from services.cohomology.basis import betti_numbers
from services.config import get_settings
from services.manifolds.catalog import canonical_name, catalog_entry_spec
from services.manifolds.products import antipodal_quotient_rp
from services.pachner.moves import simplify_complex
from services.simplicial.complex import validate_closed_pseudomanifold
from services.simplicial.io import write_complex


def build(name: str, seed: int, patience: int, data_dir: Path) -> bool:
    betti, orientable, stem = catalog_entry_spec(name)
    n = int(name[2])
    started = time.monotonic()
    raw = antipodal_quotient_rp(n)
    print(f"🧮 {name}: generated {raw.n_vertices} vertices, {len(raw.facets)} facets")

    small = simplify_complex(raw, seed=seed, patience=patience, verbose=True)
    report = validate_closed_pseudomanifold(small)
    found = tuple(betti_numbers(small))
    if not report.passed or found != betti or report.orientable != orientable:
        print(f"❌ {name}: reduced complex failed its fingerprint (Betti {found}, orientable {report.orientable})")
        return False

    path = data_dir / f"{stem}.txt"
    comment = (
        f"{name}: antipodal quotient of the barycentric subdivision of the cross-polytope boundary,\n"
        f"reduced by bistellar moves (seed {seed}, patience {patience}).\n"
        f"{small.n_vertices} vertices, {len(small.facets)} facets, F2-Betti {list(found)}"
    )
    write_complex(small, path, comment=comment)
    elapsed = time.monotonic() - started
    print(f"✅ {name}: {small.n_vertices} vertices, {len(small.facets)} facets -> {path} ({elapsed:.0f}s)")
    return True


if __name__ == "__main__":
    settings = get_settings()
    parser = argparse.ArgumentParser(description="Write the RP^3 and RP^4 catalog files")
    parser.add_argument("names", nargs="*", default=["RP3", "RP4"], help="RP3 and/or RP4")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--patience", type=int, default=400, help="Rounds without progress before stopping")

    args = parser.parse_args()
    names = [canonical_name(name) for name in args.names]
    unsupported = [name for name in names if name not in ("RP3", "RP4")]
    if unsupported:
        parser.error(f"only RP3 and RP4 are generated, got {unsupported}")
    ok = all(build(name, args.seed, args.patience, settings.data_dir) for name in names)
    sys.exit(0 if ok else 1)
