import logging

from LatticeAvoid.utils.memory_manager import MemoryManager
from LatticeAvoid.utils.smart_logger import SmartRateLimitedLogger


def test_rate_limited_logger_suppresses_repeats(caplog):
    progress = SmartRateLimitedLogger(logging.getLogger("test.progress"), rate_limit_seconds=60)
    with caplog.at_level(logging.INFO, logger="test.progress"):
        assert progress.log("info", "row 1", key="walk")
        assert not progress.log("info", "row 2", key="walk")
        assert progress.log("info", "other walk", key="other")
    assert [r.getMessage() for r in caplog.records] == ["row 1", "other walk"]
    assert progress.get_cache_stats()["suppressed"] == 1


def test_rate_limited_logger_cache_is_bounded():
    progress = SmartRateLimitedLogger(logging.getLogger("test.progress"), rate_limit_seconds=60, max_cache_size=3)
    for i in range(10):
        progress.log("debug", f"event {i}", key=i)
    assert progress.get_cache_stats()["cache_size"] <= 4


def test_memory_usage_tracks_the_peak():
    manager = MemoryManager()
    usage = manager.get_memory_usage()
    assert usage["rss_mb"] > 0
    assert usage["peak_rss_mb"] >= usage["rss_mb"]
    assert manager.peak_rss_mb > 0


def test_checkpoint_logs_rows(caplog):
    with caplog.at_level(logging.INFO, logger="LatticeAvoid.utils.memory_manager"):
        MemoryManager(cleanup_interval_seconds=3600).checkpoint("sweep", rows=200)
    assert "sweep after 200 rows" in caplog.text


def test_collection_waits_for_the_interval():
    manager = MemoryManager(cleanup_interval_seconds=3600)
    assert manager.maybe_collect() == 0
    manager.cleanup_interval = -1
    assert manager.maybe_collect() >= 0
