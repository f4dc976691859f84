"""Residue enumeration behind the Tamagawa-at-2 dichotomy for eightfold
twists.

Two interchangeable backends compute, over the mod-32 residue classes of
curve coefficients satisfying the two admissible valuation patterns, a
mod-32 key invariant together with the profile of (discriminant mod 8,
odd-twist-part mod 4) pairs on each key fiber:

* a compiled kernel (quadtwist._scan32, Cython) that walks all
  33,554,432 admissible classes of (Z/32Z)^6 literally;
* a pure-Python reduction to the effective moduli of the three
  invariants (192 classes), used when the extension is not built.

Both report the same sets; the expected outcome is that the key only
takes the values 0 (Tamagawa 4) and 16 (Tamagawa 2), each with a
specific 4-element profile.
"""

from __future__ import annotations

from typing import NamedTuple

try:
    from ._scan32 import enumerate_profiles as _fast_profiles

    HAVE_COMPILED = True
except ImportError:  # extension not built
    _fast_profiles = None
    HAVE_COMPILED = False

# Number of admissible residue classes in (Z/32Z)^6 (both patterns).
FULL_CLASS_COUNT = 2 * (16 * 32 * 8 * 16 * 16 * 16)

EXPECTED_KEY_RANGE = frozenset({0, 16})
EXPECTED_TAMAGAWA2_PROFILE = frozenset({(3, 1), (5, 1), (5, 3), (7, 3)})
EXPECTED_TAMAGAWA4_PROFILE = frozenset({(1, 1), (1, 3), (3, 3), (7, 1)})


class ProfileScanResult(NamedTuple):
    key_range: frozenset[int]
    tamagawa2_profile: frozenset[tuple[int, int]]
    tamagawa4_profile: frozenset[tuple[int, int]]
    class_count: int
    backend: str

    def matches_expected(self) -> bool:
        return (
            self.key_range == EXPECTED_KEY_RANGE
            and self.tamagawa2_profile == EXPECTED_TAMAGAWA2_PROFILE
            and self.tamagawa4_profile == EXPECTED_TAMAGAWA4_PROFILE
        )


def _profiles_pure() -> dict[int, frozenset[tuple[int, int]]]:
    """Effective-moduli enumeration.

    The key and the profile coordinates only depend on: pattern 1 --
    x2 mod 2, x4 mod 4, x6 mod 8, y mod 16; pattern 2 -- x3 mod 8,
    x6 mod 8, y mod 16.  The constrained-but-absent variables (x1; x3
    resp. x4) range over nonempty residue sets, so dropping them does not
    change the image.
    """
    profile: dict[int, set[tuple[int, int]]] = {}

    def add(key, dres, mres):
        profile.setdefault(key % 32, set()).add((dres % 8, mres % 4))

    # pattern 1: a1, a6, y odd; 4 | a3; 2 | a4
    for x2 in range(2):
        for x4 in range(0, 4, 2):
            for x6 in range(1, 8, 2):
                for y in range(1, 16, 2):
                    key = 4 + 16 * x2 + 8 * x4 + 4 * x6 - 2 * y - 2 * y * x6 * x6 - 4 * y * x6
                    add(key, x4 * x4 + 4 * x2 - x6, y)
    # pattern 2: a1, a4, y odd; 4 | a3; 2 | a6
    for x3 in range(0, 8, 4):
        for x6 in range(0, 8, 2):
            for y in range(1, 16, 2):
                key = x3 * x3 - 2 * y * x6 * x6 + 4 * x6
                add(key, x3 - x6 + 1, y)
    return {t: frozenset(s) for t, s in profile.items()}


def scan_profiles(backend: str = "auto") -> ProfileScanResult:
    """Run the enumeration and split the profile by key = 16 (local index
    2 at the prime 2) versus key = 0 (local index 4)."""
    if backend not in ("auto", "compiled", "pure"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernel is not available")
    use_compiled = HAVE_COMPILED if backend == "auto" else backend == "compiled"
    if use_compiled:
        by_key, visited = _fast_profiles()
        assert visited == FULL_CLASS_COUNT
        name = "compiled"
    else:
        by_key = _profiles_pure()
        name = "pure"
    return ProfileScanResult(
        key_range=frozenset(by_key),
        tamagawa2_profile=by_key.get(16, frozenset()),
        tamagawa4_profile=by_key.get(0, frozenset()),
        class_count=FULL_CLASS_COUNT,
        backend=name,
    )
