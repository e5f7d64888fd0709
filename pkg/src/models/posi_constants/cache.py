import logging
import threading
import joblib

from src.config import CONSTANTS_CACHE_PATH
from src.data.encoder import load_constant_cache, sync_constant_cache
from src.models.posi_constants.quantiles import PosiConstant

_MEMORY = {}
_KEY_LOCKS = {}
_GUARD = threading.Lock()


def _lock_for(key):
    with _GUARD:
        return _KEY_LOCKS.setdefault(key, threading.Lock())


def cache_key(*parts):
    return joblib.hash(parts)


def cached_constant(key, compute, persist=False, cache_path=CONSTANTS_CACHE_PATH):
    """
    Returns the constant stored under `key`, computing it at most once per process.
    With `persist`, the JSON cache on disk is consulted and updated as well.
    """
    if key in _MEMORY:
        return _MEMORY[key]

    with _lock_for(key):
        if key in _MEMORY:
            return _MEMORY[key]

        if persist:
            stored = load_constant_cache(cache_path).get(key)
            if stored is not None:
                logging.info(f"Constant {key[:8]} loaded from {cache_path}")
                _MEMORY[key] = PosiConstant(**stored)
                return _MEMORY[key]

        constant = compute()
        _MEMORY[key] = constant
        if persist:
            sync_constant_cache(key, constant.to_dict(), cache_path)
        return constant


def clear_memory_cache():
    with _GUARD:
        _MEMORY.clear()
        _KEY_LOCKS.clear()
