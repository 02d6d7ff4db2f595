"""Numerical toolkit for functional inequalities of one-dimensional
Boltzmann measures: Orlicz gauge norms, Muckenhoupt-type criteria,
hypercontractivity schedules, Langevin Monte Carlo checks, concentration
envelopes, isoperimetric profiles, and exact finite-space oracles.
"""

__version__ = "0.1.0"
