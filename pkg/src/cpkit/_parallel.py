import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    """Worker pool size, capped by the ``CPKIT_THREADS`` environment variable."""
    raw = os.environ.get("CPKIT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def ordered_map(fn, items, workers=None):
    """``list(map(fn, items))`` on a thread pool; result order is input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
