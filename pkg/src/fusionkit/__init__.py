"""Exact combinatorics of fusion rings and fusion modules at index 3+sqrt5."""
from __future__ import annotations
__version__ = "0.1.0"
