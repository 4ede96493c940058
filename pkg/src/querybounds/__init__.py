"""Quantum query complexity lower bounds."""
