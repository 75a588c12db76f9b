"""Rotation-system embeddings and constructive 5-list-coloring tools."""

from __future__ import annotations

__version__ = "0.1.0"
