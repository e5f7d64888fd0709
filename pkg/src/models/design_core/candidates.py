import numpy as np

from src.config import MAX_ENUMERATION_P, MAX_ENUMERATED_MODELS
from src.exceptions import ConfigError, IndexOutOfRange, TooLarge
from src.models.design_core.design import CandidateModel, CandidateSet


def _mask_bits(masks):
    """(N, 32) 0/1 matrix, column j holding bit j of each mask."""
    as_bytes = masks.astype('<u4').view(np.uint8).reshape(-1, 4)
    return np.unpackbits(as_bytes, axis=1, bitorder='little')


def enumerate_subsets(p, min_size=1, max_size=None, forced=(), links=None, cap=MAX_ENUMERATED_MODELS):
    """
    All subsets of {1..p} with size in [min_size, max_size] that contain `forced`,
    in ascending bitmask order (bit j-1 <-> index j). With `links`, every subset
    is paired with each link in the given order.
    """
    max_size = p if max_size is None else max_size
    if not (1 <= min_size <= max_size <= p):
        raise ConfigError(f"Need 1 <= min_size <= max_size <= p, got {min_size}, {max_size}, p={p}")
    forced = sorted(set(int(j) for j in forced))
    if any(j < 1 or j > p for j in forced):
        raise IndexOutOfRange(f"Forced indices {forced} outside 1..{p}")

    n_links = len(links) if links else 1
    if p > MAX_ENUMERATION_P or (2 ** p - 1) * n_links > cap:
        raise TooLarge(f"Enumerating 2^{p} subsets x {n_links} link(s) exceeds the cap of {cap} models")

    # 1. Filter masks by size and forced membership
    masks = np.arange(1, 2 ** p, dtype=np.uint32)
    bits = _mask_bits(masks)[:, :p]
    sizes = bits.sum(axis=1)
    forced_mask = np.uint32(sum(1 << (j - 1) for j in forced))
    keep = (sizes >= min_size) & (sizes <= max_size) & ((masks & forced_mask) == forced_mask)

    # 2. Build models
    models = []
    for row in bits[keep]:
        indices = tuple(int(j) + 1 for j in np.flatnonzero(row))
        if links:
            models.extend(CandidateModel(indices, link) for link in links)
        else:
            models.append(CandidateModel(indices))
    return CandidateSet(tuple(models))
