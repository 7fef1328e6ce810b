"""Initialize coloring package."""
