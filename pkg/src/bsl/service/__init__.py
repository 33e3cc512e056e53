"""HTTP service wrapping the laboratory: request/response schemas and the
FastAPI application."""

from .app import app

__all__ = ["app"]
