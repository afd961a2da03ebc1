"""Collects one pass/fail record per acceptance criterion."""

import time
from contextlib import contextmanager

RESULTS: dict[int, tuple[bool, str, float, float]] = {}


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        RESULTS[number] = (ok and elapsed < budget, title, elapsed, budget)
        print(line(number))
    assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s (budget {budget}s)"


def line(number: int) -> str:
    ok, title, elapsed, budget = RESULTS[number]
    return f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s / {budget:g}s)"


def lines() -> list[str]:
    return [line(n) for n in sorted(RESULTS)]
