import logging
import time
from typing import Dict, Hashable, Optional, Any


class SmartRateLimitedLogger:
    """Rate-limited logger for progress messages emitted from hot loops."""

    def __init__(self, logger: logging.Logger, rate_limit_seconds: float = 5, max_cache_size: int = 1000):
        self.logger = logger
        self.rate_limit_seconds = rate_limit_seconds
        self.max_cache_size = max_cache_size
        # Last-log timestamps keyed by a stable event key (preferred) or the message itself.
        self.last_logged: Dict[Hashable, float] = {}
        self.suppressed = 0
        self.last_cleanup = time.monotonic()
        self.cleanup_interval = 600.0

    def _cleanup_cache(self, now: float):
        """Drop stale keys so long sweeps do not grow the cache without bound."""
        if now - self.last_cleanup < self.cleanup_interval and len(self.last_logged) <= self.max_cache_size:
            return

        cutoff_time = now - (self.rate_limit_seconds * 2)
        old_keys = [key for key, timestamp in self.last_logged.items() if timestamp < cutoff_time]
        for key in old_keys:
            del self.last_logged[key]

        if len(self.last_logged) > self.max_cache_size:
            sorted_items = sorted(self.last_logged.items(), key=lambda x: x[1], reverse=True)
            self.last_logged = dict(sorted_items[:self.max_cache_size])

        self.last_cleanup = now
        if old_keys:
            self.logger.debug(f"Cleaned {len(old_keys)} old log cache entries")

    def log(self, level: str, message: str, *, key: Optional[Hashable] = None, **kwargs: Any) -> bool:
        """Log a message unless the same key was logged within the rate limit. Returns True if emitted."""
        now = time.monotonic()
        self._cleanup_cache(now)

        cache_key: Hashable = key if key is not None else message
        last = self.last_logged.get(cache_key)
        if last is not None and now - last < self.rate_limit_seconds:
            self.suppressed += 1
            return False

        self.last_logged[cache_key] = now
        self.logger.log(getattr(logging, level.upper(), logging.INFO), message, **kwargs)
        return True

    def get_cache_stats(self) -> Dict[str, int]:
        """Get current cache statistics."""
        return {
            "cache_size": len(self.last_logged),
            "max_cache_size": self.max_cache_size,
            "suppressed": self.suppressed,
        }
