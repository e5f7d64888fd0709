import json
import os
import sys
import dataclasses
import numpy as np

from src.config import CONSTANTS_CACHE_PATH


def to_jsonable(obj):
    """Recursively converts dataclasses and numpy values into JSON-serializable Python objects."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, 'to_dict'):
            return to_jsonable(obj.to_dict())
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(payload, path=None):
    """Writes payload as JSON to `path`, or to stdout when no path is given."""
    data = to_jsonable(payload)
    if path is None:
        json.dump(data, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return None

    out_dir = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    with open(path, 'w') as f:
        json.dump(data, f, indent=4)
    return path


def load_constant_cache(cache_path=CONSTANTS_CACHE_PATH):
    if os.path.exists(cache_path):
        with open(cache_path, 'r') as f:
            return json.load(f)
    return {}


def sync_constant_cache(key, entry, cache_path=CONSTANTS_CACHE_PATH):
    """
    Persists a computed constant under its content hash.
    Existing keys are never overwritten so the first stored value stays authoritative.
    """
    # 1. Path setup
    cache_dir = os.path.dirname(os.path.abspath(cache_path))
    if not os.path.exists(cache_dir):
        os.makedirs(cache_dir)

    # 2. Load existing mapping
    mapping = load_constant_cache(cache_path)

    # 3. Update and save if new
    if key not in mapping:
        mapping[key] = to_jsonable(entry)
        with open(cache_path, 'w') as f:
            json.dump(mapping, f, indent=4, sort_keys=True)

    return mapping[key]
