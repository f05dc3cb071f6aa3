"""Counting statistics on random clique complexes: critical simplices of the
lexicographical Morse matching, link simplex counts, total clique counts,
their exact moments, explicit normal-approximation error bounds, and Monte
Carlo verification tooling."""

__version__ = "0.1.0"
