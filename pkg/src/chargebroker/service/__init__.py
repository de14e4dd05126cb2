"""HTTP service exposing the composition engine."""

from .app import create_app

__all__ = ["create_app"]
