import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    """Thread cap from ``SPECFS_THREADS`` (0 or unset = one per CPU)."""
    raw = os.environ.get("SPECFS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def pmap(fn, items):
    """Ordered map; runs on a thread pool when more than one worker is allowed."""
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
