"""Initialize Pachner move package."""
