"""Weakly holomorphic modular forms for the moonshine groups Gamma_0(N)+."""

__version__ = "0.1.0"
