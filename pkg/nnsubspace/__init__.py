"""Input uncertainty propagation through networks via active subspaces."""

__version__ = '1.0.0'
