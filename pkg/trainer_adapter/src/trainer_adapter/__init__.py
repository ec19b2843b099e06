"""Trainer side of the evaluator line protocol.

Reads one JSON request per stdin line, builds a randomly wired net from
the request's stage DAGs, trains it from a seeded initialization, and
answers with confusion counts plus per-image scores on stdout. Runs
until EOF; malformed requests get an error line and the process keeps
serving.
"""

from .config import AdapterConfig
from .serve import main, serve

__all__ = ["AdapterConfig", "main", "serve"]
