"""Governance-coverage audit engine for internet-wide agent ecosystems."""

__version__ = "0.1.0"
