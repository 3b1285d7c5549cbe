"""Layer-parallel execution helpers shared by the DP solvers.

Every DP here fills one table layer at a time; all cells of a layer depend
only on the completed previous layer, so a layer can be split into chunks
and evaluated concurrently with a join (barrier) before the next layer.
Each cell is written by exactly one worker from the same inputs with the
same expressions, so chunked parallel runs are bitwise identical to
sequential runs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

__all__ = ["CellTracker", "resolve_threads", "chunk_ranges", "run_layer_chunks"]


class CellTracker:
    """Counts live DP table cells to check solver space contracts."""

    __slots__ = ("live", "peak")

    def __init__(self) -> None:
        self.live = 0
        self.peak = 0

    def alloc(self, cells: int) -> None:
        self.live += cells
        if self.live > self.peak:
            self.peak = self.live

    def free(self, cells: int) -> None:
        self.live -= cells

    def reset(self) -> None:
        self.live = 0
        self.peak = 0


def resolve_threads(threads: Optional[int]) -> int:
    """Map a thread request to a worker count (0 or None means all cores)."""
    if threads is None or threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    return threads


def chunk_ranges(lo: int, hi: int, size: int, descending: bool = False) -> List[Tuple[int, int]]:
    """Split [lo, hi) into consecutive half-open chunks of at most ``size``."""
    chunks = [(a, min(a + size, hi)) for a in range(lo, hi, size)]
    if descending:
        chunks.reverse()
    return chunks


def run_layer_chunks(
    fn: Callable[[int, int], None],
    chunks: Sequence[Tuple[int, int]],
    threads: int,
) -> None:
    """Run ``fn(lo, hi)`` over all chunks, joining before returning.

    Chunks are submitted in the given order (callers pass widest-first for
    load balance); the join is the inter-layer barrier.
    """
    if threads <= 1 or len(chunks) <= 1:
        for lo, hi in chunks:
            fn(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=min(threads, len(chunks))) as pool:
        futures = [pool.submit(fn, lo, hi) for lo, hi in chunks]
        for fut in futures:
            fut.result()
