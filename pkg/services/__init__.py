"""Initialize services package."""
