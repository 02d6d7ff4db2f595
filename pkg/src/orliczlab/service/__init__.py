"""FastAPI service exposing the numerical core over HTTP."""

from .app import app

__all__ = ["app"]
