"""Pure-Python twin of the compiled bitmask kernels (same API and results)."""


def _satisfies(kept, n):
    for h, p in kept:
        if not (p & ~n) and not (h & n):
            return False
    return True


def _has_smaller(kept, m):
    if m == 0:
        return False
    n = (m - 1) & m
    while True:
        if _satisfies(kept, n):
            return True
        if n == 0:
            return False
        n = (n - 1) & m


def brute_force_stable_masks(heads, pos, neg, n):
    if n < 0 or n > 63:
        raise ValueError("atom count must be between 0 and 63")
    rules = list(zip(heads, pos, neg))
    out = []
    for m in range(1 << n):
        kept = [(h, p) for h, p, g in rules if not (g & m)]
        if _satisfies(kept, m) and not _has_smaller(kept, m):
            out.append(m)
    return out


def is_minimal_model_of_reduct(heads, pos, neg, m):
    kept = [(h, p) for h, p, g in zip(heads, pos, neg) if not (g & m)]
    return _satisfies(kept, m) and not _has_smaller(kept, m)
