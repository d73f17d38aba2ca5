"""
Shared utilities
Logging setup and chunked evaluation helpers
"""

from .log_setup import LOG_FORMAT, setup_logging
from .parallel import chunk_slices, concatenate_chunks, map_chunks

__all__ = ["LOG_FORMAT", "setup_logging", "chunk_slices", "concatenate_chunks", "map_chunks"]
