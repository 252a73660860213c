"""Discrete multitime multiple recurrences on the integer lattice Z^m."""
