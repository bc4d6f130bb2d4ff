"""Ordered parallel map capped by the DELTATRAP_THREADS environment variable."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(requested=None):
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("DELTATRAP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def ordered_map(fn, items, workers=None):
    """``list(map(fn, items))``, run on a thread pool when more than one worker is allowed."""
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
