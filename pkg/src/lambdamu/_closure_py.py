"""Pure-Python transitive closure over Python-int bitsets (fallback kernel)."""

import numpy as np


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-free Warshall closure of a square boolean matrix."""
    n = rel.shape[0]
    rows = [int.from_bytes(np.packbits(r, bitorder="little").tobytes(), "little") for r in rel]
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    out = np.zeros((n, n), dtype=bool)
    width = (n + 7) // 8
    for i, r in enumerate(rows):
        packed = np.frombuffer(r.to_bytes(width, "little"), dtype=np.uint8)
        out[i] = np.unpackbits(packed, bitorder="little")[:n].astype(bool)
    return out
