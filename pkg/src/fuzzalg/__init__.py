"""Fuzzy algebras over finite frames, their equational logic and its proof checker."""

__version__ = "0.1.0"
