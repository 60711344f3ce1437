# LatticeAvoid utils module
from .memory_manager import MemoryManager, memory_manager
from .smart_logger import SmartRateLimitedLogger

__all__ = [
    "MemoryManager",
    "memory_manager",
    "SmartRateLimitedLogger"
]
