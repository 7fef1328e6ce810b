"""Initialize invariant package."""
