"""Allow running as `python -m hilbertgeom`."""

from .cli import cli

cli()
