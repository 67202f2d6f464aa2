"""Van Kampen diagrams, icicles, tree-respecting combings and the taming pipeline."""

__version__ = "0.1.0"
