"""Quantified residual finiteness for finitely generated solvable groups.

Word metrics and cyclic-subgroup distortion for a few concrete solvable
families, a brute-force finite group engine, and certified bounds on the
depth function and residual finiteness growth.
"""

__version__ = "0.1.0"
