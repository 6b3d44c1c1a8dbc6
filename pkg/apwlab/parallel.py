"""Deterministic parallel map: results land in indexed slots, never in completion order."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from . import settings

T = TypeVar("T")
R = TypeVar("R")


def chunk_ranges(total: int, parts: int) -> List[range]:
    """Split ``range(total)`` into at most ``parts`` contiguous, ordered chunks."""
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    out: List[range] = []
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        if stop > start:
            out.append(range(start, stop))
        start = stop
    return out


def indexed_map(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    workers = min(threads or settings.threads(), max(1, len(items)))
    slots: List[Optional[R]] = [None] * len(items)
    if workers <= 1:
        for i, item in enumerate(items):
            slots[i] = fn(item)
        return slots  # type: ignore[return-value]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {i: pool.submit(fn, item) for i, item in enumerate(items)}
        for i in range(len(items)):
            slots[i] = futures[i].result()
    return slots  # type: ignore[return-value]
