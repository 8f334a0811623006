"""Exact finite models for paracanonical systems: transversality, Pfaffian strata, Hodge ledgers, deformation lifting."""

__version__ = "0.1.0"
