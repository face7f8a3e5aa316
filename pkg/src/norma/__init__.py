"""Exact computations with the norm functor for finite étale extensions."""

__version__ = "0.1.0"
