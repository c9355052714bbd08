# grid.py
from __future__ import annotations

import concurrent.futures
import logging
import math
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

log = logging.getLogger(__name__)


def parse_grid(text: str, *, integer: bool = False) -> list:
    """
    'start:stop:step' (stop inclusive), 'a,b,c', a single value, or '' for an
    empty grid. start > stop gives an empty grid. Raises ValueError on junk.
    """
    text = (text or "").strip()
    if not text:
        return []
    cast = int if integer else float
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if not step > 0:
            raise ValueError(f"grid step must be positive, got {step}")
        if start > stop:
            return []
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        # round away accumulated float drift so 0.07 prints as 0.07
        values = [round(start + i * step, 12) for i in range(n)]
        if integer:
            if any(not float(v).is_integer() for v in values):
                raise ValueError(f"integer grid has fractional points: {text!r}")
            return [int(v) for v in values]
        return values
    return [cast(p.strip()) for p in text.split(",") if p.strip()]


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    *,
    max_workers: int = 4,
) -> list[R]:
    """
    Evaluate `fn` over `items` on a thread pool; results come back in input
    order no matter which point finishes first.
    """
    items = list(items)
    log.debug("[grid] %d points on %d workers", len(items), max_workers)
    if max_workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as ex:
        futures = [ex.submit(fn, it) for it in items]
        return [f.result() for f in futures]
