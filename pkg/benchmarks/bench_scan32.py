#!/usr/bin/env python3
"""Benchmark the residue-scan backends.

The compiled kernel walks all 33.5M admissible mod-32 classes literally;
the pure-Python production path reduces to the 192 effective classes.
`--pure-full` additionally times a literal pure-Python walk (tens of
seconds) for a like-for-like kernel comparison.
"""

import argparse
import statistics
import time

from quadtwist.profile_scan import (
    FULL_CLASS_COUNT,
    HAVE_COMPILED,
    ProfileScanResult,
    scan_profiles,
)


def _pure_full() -> dict[int, frozenset[tuple[int, int]]]:
    profile: dict[int, set[tuple[int, int]]] = {}
    for x1 in range(1, 32, 2):
        for x2 in range(32):
            for x3 in range(0, 32, 4):
                for x4 in range(0, 32, 2):
                    for x6 in range(1, 32, 2):
                        base = (4 + 16 * x2 + 8 * x4 + 4 * x6) % 32
                        dres = (x4 * x4 + 4 * x2 - x6) % 8
                        for y in range(1, 32, 2):
                            key = (base - 2 * y * (1 + x6) * (1 + x6)) % 32
                            profile.setdefault(key, set()).add((dres, y & 3))
    for x1 in range(1, 32, 2):
        for x2 in range(32):
            for x3 in range(0, 32, 4):
                for x4 in range(1, 32, 2):
                    for x6 in range(0, 32, 2):
                        base = (x3 * x3 + 4 * x6) % 32
                        dres = (x3 - x6 + 1) % 8
                        for y in range(1, 32, 2):
                            key = (base - 2 * y * x6 * x6) % 32
                            profile.setdefault(key, set()).add((dres, y & 3))
    return {k: frozenset(v) for k, v in profile.items()}


def timed(fn, repeats):
    times = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times), statistics.median(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--pure-full", action="store_true", help="also time the literal pure walk")
    args = ap.parse_args()

    print(f"admissible classes: {FULL_CLASS_COUNT:,}")
    pure, tmin, tmed = timed(lambda: scan_profiles("pure"), args.repeats)
    print(f"pure (effective moduli, 192 classes):  min {tmin*1e3:9.3f} ms  median {tmed*1e3:9.3f} ms")

    if HAVE_COMPILED:
        fast, fmin, fmed = timed(lambda: scan_profiles("compiled"), args.repeats)
        print(f"compiled (full walk, {FULL_CLASS_COUNT:,} classes): min {fmin*1e3:9.3f} ms  median {fmed*1e3:9.3f} ms")
        agree = (
            fast.key_range == pure.key_range
            and fast.tamagawa2_profile == pure.tamagawa2_profile
            and fast.tamagawa4_profile == pure.tamagawa4_profile
        )
        print(f"backends agree: {agree}")
        print(f"classes/second (compiled): {FULL_CLASS_COUNT / fmin:,.0f}")
    else:
        print("compiled kernel not built; only the pure backend was timed")

    if args.pure_full:
        t0 = time.perf_counter()
        by_key = _pure_full()
        dt = time.perf_counter() - t0
        print(f"pure (literal full walk): {dt:9.3f} s  ({FULL_CLASS_COUNT / dt:,.0f} classes/s)")
        res = ProfileScanResult(
            frozenset(by_key),
            by_key.get(16, frozenset()),
            by_key.get(0, frozenset()),
            FULL_CLASS_COUNT,
            "pure-full",
        )
        print(f"pure-full matches expected: {res.matches_expected()}")
        if HAVE_COMPILED:
            print(f"compiled speedup over pure-full: {dt / fmin:,.0f}x")


if __name__ == "__main__":
    main()
