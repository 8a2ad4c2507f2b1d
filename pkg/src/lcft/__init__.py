"""Exact computations for geometric local class field theory at finite precision."""

__version__ = "0.1.0"
