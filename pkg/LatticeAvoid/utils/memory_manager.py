import gc
import logging
import os
import time
from typing import Dict, Any, Optional

import psutil

logger = logging.getLogger(__name__)


class MemoryManager:
    """Tracks resident memory across a run and collects garbage between sweep rows.

    Enumeration candidates and certified intervals are short-lived but numerous;
    sweeps call :meth:`checkpoint` every few hundred rows so the peak stays visible
    in the log and cyclic garbage is released on a fixed interval.
    """

    def __init__(self, cleanup_interval_seconds: float = 60.0):
        self.process = psutil.Process(os.getpid())
        self.cleanup_interval = cleanup_interval_seconds
        self.last_cleanup = time.monotonic()
        self.peak_rss_mb = 0.0

    def get_memory_usage(self) -> Dict[str, Any]:
        try:
            rss = self.process.memory_info().rss / 1024 / 1024
        except (psutil.Error, OSError) as e:
            logger.error(f"Could not read process memory: {e}")
            return {"error": str(e)}
        self.peak_rss_mb = max(self.peak_rss_mb, rss)
        return {"rss_mb": round(rss, 2), "peak_rss_mb": round(self.peak_rss_mb, 2)}

    def maybe_collect(self) -> int:
        """Run ``gc.collect()`` once the interval has elapsed; returns objects collected."""
        if time.monotonic() - self.last_cleanup <= self.cleanup_interval:
            return 0
        collected = gc.collect()
        self.last_cleanup = time.monotonic()
        logger.debug(f"gc released {collected} objects")
        return collected

    def checkpoint(self, label: str, rows: Optional[int] = None):
        usage = self.get_memory_usage()
        self.maybe_collect()
        if "error" in usage:
            return
        where = f"{label} after {rows} rows" if rows is not None else label
        logger.info(f"Memory at {where}: {usage['rss_mb']} MB RSS (peak {usage['peak_rss_mb']} MB)")


memory_manager = MemoryManager()
