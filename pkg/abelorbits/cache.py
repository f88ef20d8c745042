"""
In-process caching layer for abelorbits

Root tables, Borel bases, Weyl groups and posets are rebuilt from scratch by
every caller otherwise; this memoizes them per (type, nilradical) across the
CLI and the verify workers.
"""
import json
import hashlib
import logging
import threading
from typing import Optional, Any, Callable
from functools import wraps

from .config import settings

logger = logging.getLogger(__name__)


class CacheService:
    """
    Thread-safe in-memory cache keyed by prefix and call arguments.

    Values are stored as-is (not serialized), so cached functions must return
    immutable objects.
    """

    def __init__(self, enabled: Optional[bool] = None):
        self.enabled = settings.cache_enabled if enabled is None else enabled
        self.in_memory_cache: dict = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

        if not self.enabled:
            logger.warning("Caching disabled via config; tables are rebuilt on every call")

    def _generate_cache_key(self, prefix: str, **kwargs) -> str:
        """
        Generate a deterministic cache key from prefix and kwargs.

        Args:
            prefix: Cache key prefix (e.g., 'roots', 'poset')
            **kwargs: Key-value pairs to include in cache key

        Returns:
            Cache key string
        """
        sorted_items = sorted(kwargs.items())
        key_data = json.dumps(sorted_items, sort_keys=True, default=str)
        key_hash = hashlib.md5(key_data.encode()).hexdigest()[:12]
        return f"abelorbits:{prefix}:{key_hash}"

    def get(self, key: str) -> Optional[Any]:
        if not self.enabled:
            return None

        with self._lock:
            if key in self.in_memory_cache:
                self.hits += 1
                logger.debug(f"Memory cache hit: {key}")
                return self.in_memory_cache[key]
            self.misses += 1
        return None

    def set(self, key: str, value: Any) -> bool:
        if not self.enabled:
            return False

        with self._lock:
            self.in_memory_cache[key] = value
        logger.debug(f"Memory cache set: {key}")
        return True

    def delete(self, key: str) -> bool:
        if not self.enabled:
            return False

        with self._lock:
            if key in self.in_memory_cache:
                del self.in_memory_cache[key]
                logger.info(f"Memory cache delete: {key}")
                return True
        return False

    def invalidate_all(self) -> bool:
        with self._lock:
            self.in_memory_cache.clear()
            self.hits = 0
            self.misses = 0
        logger.info("Memory cache cleared")
        return True

    def warm_cache(self, key: str, value_fn: Callable[[], Any]) -> Any:
        """
        Return the cached value for key, computing and storing it on a miss.

        Args:
            key: Cache key
            value_fn: Function to call if cache miss

        Returns:
            Cached or computed value
        """
        cached_value = self.get(key)
        if cached_value is not None:
            return cached_value

        logger.debug(f"Cache warming: {key}")
        value = value_fn()
        self.set(key, value)
        return value

    def health_check(self) -> dict:
        if not self.enabled:
            return {"status": "disabled", "backend": "none"}

        with self._lock:
            return {
                "status": "healthy",
                "backend": "memory",
                "keys": len(self.in_memory_cache),
                "hits": self.hits,
                "misses": self.misses,
            }


# Global cache instance
cache = CacheService()


def cached(prefix: str):
    """
    Decorator for caching function results.

    Usage:
        @cached("positive_roots")
        def positive_roots(t: RootSystemType):
            ...

    Arguments are keyed through their str() form, so every argument type must
    have a str() that identifies it.
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            cache_key = cache._generate_cache_key(prefix, args=args, kwargs=kwargs)
            return cache.warm_cache(cache_key, lambda: func(*args, **kwargs))

        return wrapper
    return decorator
