"""
Reproduce Tables
Compute class tables and compare them with data/reference_tables.json.
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

import argparse
import json
import time
from typing import Dict, List, Tuple

from services.algebra.field import parse_field
from services.config import get_settings
from services.invariant.tables import ClassTable, class_table
from services.manifolds.catalog import resolve_manifold


def load_expected(path: Path = None) -> dict:
    path = path or get_settings().data_dir / "reference_tables.json"
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def expected_multisets(entry: dict) -> Tuple[Tuple[int, int], Dict[Tuple[int, int], int]]:
    zero = tuple(entry["zero"])
    nonzero = {(d, r): n for d, r, n in entry["nonzero"]}
    return zero, nonzero


def compare(table: ClassTable, entry: dict) -> List[str]:
    """Differences between a computed table and the expected one (empty when equal)."""
    zero, nonzero = expected_multisets(entry)
    problems = []
    computed = table.zero_class
    if computed is None:
        problems.append("zero class was not computed")
    elif computed.pair != zero:
        problems.append(f"zero class {computed.pair}, expected {zero}")
    got = table.nonzero_multiset()
    if got != nonzero:
        problems.append(f"nonzero classes {sorted(got.items())}, expected {sorted(nonzero.items())}")
    return problems


def reproduce(names: List[str], field_spec: str, seed: int, threads: int, max_tier: int) -> bool:
    expected = load_expected()["manifolds"]
    field = parse_field(field_spec)
    all_ok = True

    print("\n" + "=" * 60)
    print(f"  TABLE REPRODUCTION - GF({field.p}^{field.k}), seed {seed}")
    print("=" * 60 + "\n")

    for name in names or list(expected):
        entry = expected.get(name)
        if entry is None:
            print(f"⚠️  {name}: no expected table, skipped")
            continue
        if entry["tier"] > max_tier:
            print(f"⏭️  {name}: tier {entry['tier']} above --max-tier {max_tier}")
            continue

        started = time.monotonic()
        M = resolve_manifold(name)
        table = class_table(M, field=field, seed=seed, name=name, threads=threads)
        elapsed = time.monotonic() - started
        problems = compare(table, entry)
        if problems:
            all_ok = False
            print(f"❌ {name} ({elapsed:.0f}s)")
            for problem in problems:
                print(f"   • {problem}")
        else:
            print(f"✅ {name} ({elapsed:.0f}s)")
        print(table.format_table())
        print()

    print("=" * 60 + "\n")
    return all_ok


if __name__ == "__main__":
    settings = get_settings()
    parser = argparse.ArgumentParser(description="Reproduce the invariant tables")
    parser.add_argument("names", nargs="*", help="Manifolds to run (default all)")
    parser.add_argument("--field", default=f"{settings.field_p},{settings.field_k}")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--threads", type=int, default=settings.threads)
    parser.add_argument("--max-tier", type=int, default=3, help="Skip manifolds above this tier")

    args = parser.parse_args()
    ok = reproduce(args.names, args.field, args.seed, args.threads, args.max_tier)
    sys.exit(0 if ok else 1)
