"""Fast relabeling of integer rows by their distinct values."""
from __future__ import annotations

import numpy as np


def rerank_rows(keys: np.ndarray) -> tuple[np.ndarray, list[bytes]]:
    """Label each row by the rank of its bytes among the distinct rows.

    The order is a fixed function of row contents, so relabelings commute with
    any permutation of the rows.
    """
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    rows = [r.tobytes() for r in keys]
    uniq = sorted(set(rows))
    index = {r: i for i, r in enumerate(uniq)}
    return np.fromiter((index[r] for r in rows), dtype=np.int64, count=len(rows)), uniq
