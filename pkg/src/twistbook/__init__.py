"""Mapping class group computations on surfaces with boundary, aimed at
verifying positive factorizations of open book monodromies."""

__version__ = "0.1.0"
