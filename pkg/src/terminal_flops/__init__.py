"""Terminal threefold singularities, weighted blowups and flop diagrams."""

__version__ = "0.1.0"
