import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "EIGENEXPR_THREADS"


def thread_count():
    """Worker count from EIGENEXPR_THREADS; 0, unset or invalid means auto."""
    try:
        n = int(os.environ.get(THREADS_ENV, "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = min(8, os.cpu_count() or 1)
    return n


def ordered_map(fn, items):
    """Map fn over items, possibly concurrently; results keep input order."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
