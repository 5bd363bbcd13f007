"""HTTP service wrapping the library; see :mod:`outcodes.service.app`."""

from .app import app, create_app

__all__ = ["app", "create_app"]
