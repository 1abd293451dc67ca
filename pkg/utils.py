"""Utility Functions for algmat"""
import json
import hashlib
import logging
from typing import Any, Iterable, List, Sequence

logger = logging.getLogger(__name__)


def hash_string(text: str) -> str:
    """SHA-256 hex digest of a string (input digests in run reports)"""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(data: Any) -> str:
    """Deterministic JSON encoding"""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def split_list(text: str) -> List[str]:
    """Split a comma or whitespace separated list, dropping empty items"""
    return [item for item in text.replace(",", " ").split() if item]


def parse_naturals(text: str, length: int = 0) -> List[int]:
    """Parse a comma vector of naturals like '0,0,2'. A single value is broadcast to `length`"""
    values = [int(item) for item in split_list(text)]
    if any(v < 0 for v in values):
        raise ValueError(f"expected naturals, got '{text}'")
    if length and len(values) == 1:
        values = values * length
    return values


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices_of(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def names_of(mask: int, labels: Sequence[str]) -> List[str]:
    return [labels[i] for i in indices_of(mask)]
