"""Graded feasibility for arithmetic: fuzzy initial segments of the naturals,
credibility-eroding proofs, and many-valued models, all in exact arithmetic."""

__version__ = "0.1.0"
