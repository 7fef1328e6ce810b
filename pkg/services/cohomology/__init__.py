"""Initialize cohomology package."""
