"""Invariants, action-phase variables and phase operators of time-dependent quadratic oscillators."""

__version__ = "0.1.0"
