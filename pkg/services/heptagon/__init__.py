"""Initialize heptagon cocycle package."""
