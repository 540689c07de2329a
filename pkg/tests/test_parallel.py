"""
Unit tests for the ordered worker pool.
"""

import time

from app.core import config
from app.core.parallel import ordered_map, resolve_threads


def _slow_square(x):
    # later items finish first
    time.sleep(0.001 * (10 - x))
    return x * x


def test_results_keep_input_order_on_a_pool():
    assert ordered_map(_slow_square, range(10), threads=4) == [x * x for x in range(10)]


def test_inline_and_pooled_runs_agree():
    assert ordered_map(_slow_square, range(6), threads=1) == ordered_map(_slow_square, range(6), threads=3)
    assert ordered_map(_slow_square, [], threads=3) == []


def test_thread_resolution(monkeypatch):
    assert resolve_threads(5) == 5
    monkeypatch.setattr(config, "STRATA_THREADS", 3)
    assert resolve_threads(None) == 3
    assert resolve_threads(0) == 3
    monkeypatch.setattr(config, "STRATA_THREADS", 0)
    assert resolve_threads(None) == 1
