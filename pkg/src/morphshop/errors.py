"""Shared exception root so the CLI and service can map engine errors uniformly."""


class MorphshopError(Exception):
    """Base class for every error raised by the engine modules."""
