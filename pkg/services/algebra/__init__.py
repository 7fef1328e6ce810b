"""Initialize algebra package."""
