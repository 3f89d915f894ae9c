"""Collects one pass/fail line per acceptance criterion for the terminal summary."""
import time
from contextlib import contextmanager

LINES = []


@contextmanager
def criterion(name, limit=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        ok = limit is None or elapsed < limit
        if not ok:
            raise AssertionError(f"criterion {name} took {elapsed:.1f} s, limit {limit} s")
    finally:
        elapsed = time.perf_counter() - start
        line = f"CRITERION {name}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f} s)"
        LINES.append(line)
        print(line)
