# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bitmask kernels for exhaustive stable-model search.

A ground rule is three masks over atom indices: head, positive body and
negative body.  Interpretations are masks too, so rule checks are a few
word operations.
"""
from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc


cdef inline bint _satisfies(uint64_t *h, uint64_t *p, int *kept, int nkept, uint64_t n) nogil:
    cdef int j, r
    for j in range(nkept):
        r = kept[j]
        if (p[r] & ~n) == 0 and (h[r] & n) == 0:
            return False
    return True


cdef inline bint _has_smaller(uint64_t *h, uint64_t *p, int *kept, int nkept, uint64_t m) nogil:
    """True when some proper subset of m is a model of the kept (reduct) rules."""
    cdef uint64_t n
    if m == 0:
        return False
    n = (m - 1) & m
    while True:
        if _satisfies(h, p, kept, nkept, n):
            return True
        if n == 0:
            return False
        n = (n - 1) & m


cdef int _load(list heads, list pos, list neg, uint64_t **h, uint64_t **p, uint64_t **g, int **kept) except -1:
    cdef Py_ssize_t k = len(heads), i
    h[0] = <uint64_t *> malloc((k + 1) * sizeof(uint64_t))
    p[0] = <uint64_t *> malloc((k + 1) * sizeof(uint64_t))
    g[0] = <uint64_t *> malloc((k + 1) * sizeof(uint64_t))
    kept[0] = <int *> malloc((k + 1) * sizeof(int))
    if not h[0] or not p[0] or not g[0] or not kept[0]:
        raise MemoryError()
    for i in range(k):
        h[0][i] = heads[i]
        p[0][i] = pos[i]
        g[0][i] = neg[i]
    return 0


def brute_force_stable_masks(list heads, list pos, list neg, int n):
    """Masks of all stable models of the encoded program over ``n`` atoms.

    Every one of the 2**n interpretations is tested: it must be a model of
    its own reduct and no proper subset may be.
    """
    if n < 0 or n > 63:
        raise ValueError("atom count must be between 0 and 63")
    cdef int k = len(heads), r, nkept
    cdef uint64_t m, top = (<uint64_t> 1) << n
    cdef uint64_t *h = NULL
    cdef uint64_t *p = NULL
    cdef uint64_t *g = NULL
    cdef int *kept = NULL
    out = []
    try:
        _load(heads, pos, neg, &h, &p, &g, &kept)
        m = 0
        while m < top:
            nkept = 0
            for r in range(k):
                if (g[r] & m) == 0:
                    kept[nkept] = r
                    nkept += 1
            if _satisfies(h, p, kept, nkept, m) and not _has_smaller(h, p, kept, nkept, m):
                out.append(m)
            m += 1
    finally:
        free(h)
        free(p)
        free(g)
        free(kept)
    return out


def is_minimal_model_of_reduct(list heads, list pos, list neg, unsigned long long m):
    """True iff ``m`` models its reduct and no proper subset of ``m`` does."""
    cdef int k = len(heads), r, nkept = 0
    cdef uint64_t *h = NULL
    cdef uint64_t *p = NULL
    cdef uint64_t *g = NULL
    cdef int *kept = NULL
    try:
        _load(heads, pos, neg, &h, &p, &g, &kept)
        for r in range(k):
            if (g[r] & m) == 0:
                kept[nkept] = r
                nkept += 1
        return _satisfies(h, p, kept, nkept, m) and not _has_smaller(h, p, kept, nkept, m)
    finally:
        free(h)
        free(p)
        free(g)
        free(kept)
