"""Satisfiability and entailment reasoning for standpoint-enriched EL+."""

__version__ = "0.1.0"
