"""Quivers, dg presentations, representation varieties and commuting-variety experiments."""

__version__ = "0.1.0"
