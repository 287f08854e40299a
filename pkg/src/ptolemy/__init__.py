"""Fatgraphs, Whitehead moves and groupoid lifts of mapping class group representations."""

__version__ = "0.1.0"
