"""Initialize simplicial complex package."""
