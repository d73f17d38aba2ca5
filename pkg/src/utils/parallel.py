"""
Chunked Parallel Evaluation
Thread-pool map over independent chunks with an order-preserving serial fallback
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def chunk_slices(count: int, chunk_size: int) -> List[slice]:
    """Contiguous slices covering range(count)"""
    chunk_size = max(1, int(chunk_size))
    return [slice(start, min(start + chunk_size, count)) for start in range(0, count, chunk_size)]


def map_chunks(
    func: Callable[[T], R],
    items: Sequence[T],
    serial: bool = True,
    max_workers: Optional[int] = None,
) -> List[R]:
    """Apply func to each item, returning results in input order

    Chunks must be independent: no reduction crosses a chunk boundary, so the
    parallel and serial paths give bit-identical results.
    """
    if serial or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(func, items))


def concatenate_chunks(parts: Sequence[np.ndarray]) -> np.ndarray:
    return np.concatenate(list(parts), axis=0)
