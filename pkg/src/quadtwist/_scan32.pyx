# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the mod-32 residue enumeration behind the
Tamagawa-at-2 dichotomy for eightfold twists.

Enumerates every residue class X = (x1, x2, x3, x4, x6, y) in (Z/32Z)^6
belonging to either valuation-constraint set (A1: x1, x6, y odd, 4 | x3,
2 | x4; A2: x1, x4, y odd, 4 | x3, 2 | x6) and accumulates a mod-32 key
invariant together with the (discriminant mod 8, odd-part mod 4) profile
of each key fiber.  The pure-Python sibling in profile_scan.py computes
the same sets at the effective moduli; the two are cross-checked in the
test suite.
"""


def enumerate_profiles():
    """Return (by_key, visited) where by_key maps each key value to the
    set of (disc mod 8, odd-part mod 4) pairs on its fiber."""
    cdef int x1, x2, x3, x4, x6, y
    cdef int key, dres, mres
    cdef long visited = 0
    # bitmask accumulators: profile[key] has bit (dres * 4 + mres) set
    cdef long profile[32]
    cdef int i
    for i in range(32):
        profile[i] = 0

    # A1: v2(x1) = v2(x6) = v2(y) = 0, v2(x3) >= 2, v2(x4) >= 1
    for x1 in range(1, 32, 2):
        for x2 in range(32):
            for x3 in range(0, 32, 4):
                for x4 in range(0, 32, 2):
                    for x6 in range(1, 32, 2):
                        for y in range(1, 32, 2):
                            key = (4 + 16 * x2 + 8 * x4 + 4 * x6
                                   - 2 * y - 2 * y * x6 * x6 - 4 * y * x6) % 32
                            if key < 0:
                                key += 32
                            dres = (x4 * x4 + 4 * x2 - x6) % 8
                            if dres < 0:
                                dres += 8
                            mres = y & 3
                            profile[key] |= 1 << (dres * 4 + mres)
                            visited += 1

    # A2: v2(x1) = v2(x4) = v2(y) = 0, v2(x3) >= 2, v2(x6) >= 1
    for x1 in range(1, 32, 2):
        for x2 in range(32):
            for x3 in range(0, 32, 4):
                for x4 in range(1, 32, 2):
                    for x6 in range(0, 32, 2):
                        for y in range(1, 32, 2):
                            key = (x3 * x3 - 2 * y * x6 * x6 + 4 * x6) % 32
                            if key < 0:
                                key += 32
                            dres = (x3 - x6 + 1) % 8
                            if dres < 0:
                                dres += 8
                            mres = y & 3
                            profile[key] |= 1 << (dres * 4 + mres)
                            visited += 1

    out = {}
    for i in range(32):
        if profile[i]:
            pairs = set()
            for dres in range(8):
                for mres in range(4):
                    if profile[i] & (1 << (dres * 4 + mres)):
                        pairs.add((dres, mres))
            out[i] = frozenset(pairs)
    return out, visited
