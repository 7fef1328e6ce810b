"""Initialize manifold catalog package."""
