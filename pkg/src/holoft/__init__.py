"""Simulation and compilation toolkit for boundary-addressed, semi-global
fault-tolerant quantum computing."""

__version__ = "0.1.0"
