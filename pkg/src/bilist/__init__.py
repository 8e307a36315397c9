"""Exact search and certificates for list colouring of bipartite graphs."""

__version__ = "0.1.0"
