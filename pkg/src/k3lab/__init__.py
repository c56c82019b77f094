"""Exact computations on Büchi's K3 surface and the Kummer family it belongs to."""

from __future__ import annotations

__version__ = "0.1.0"
