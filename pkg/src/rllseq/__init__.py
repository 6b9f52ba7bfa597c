"""Counting, capacities and code bounds for runlength-limited sequences."""
