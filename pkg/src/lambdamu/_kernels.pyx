# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled transitive closure over packed uint64 row bitsets."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()


def transitive_closure(rel):
    """Reflexive-free Warshall closure of a square boolean matrix."""
    cdef Py_ssize_t n = rel.shape[0]
    cdef Py_ssize_t words = (n + 63) // 64
    packed = np.zeros((n, words * 8), dtype=np.uint8)
    packed[:, :(n + 7) // 8] = np.packbits(np.asarray(rel, dtype=bool), axis=1, bitorder="little")
    cdef uint64_t[:, ::1] rows = packed.view(np.uint64)
    cdef Py_ssize_t i, k, w, kw
    cdef uint64_t kbit
    for k in range(n):
        kw = k >> 6
        kbit = (<uint64_t>1) << (k & 63)
        for i in range(n):
            if rows[i, kw] & kbit:
                for w in range(words):
                    rows[i, w] |= rows[k, w]
    bits = np.unpackbits(packed, axis=1, bitorder="little")[:, :n]
    return bits.astype(bool)
