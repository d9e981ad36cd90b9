"""Command-line interface package for ``py-regraph``."""

from .app import app, dispatch, main

__all__ = ["app", "dispatch", "main"]
