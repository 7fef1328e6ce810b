"""Initialize pentagon package."""
