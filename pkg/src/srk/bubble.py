"""Bubble function spaces: the weight monomials behind face moments.

For a face of codimension s in ambient dimension d, a derivative order n and
a degree k, the admissible weight exponents sigma (one slot per face vertex)
are the compositions of k - n whose partial sums over every proper nonempty
subset of slots exceed the continuity order attached to the subset's size.
A vertex face always admits exactly one weight, the constant 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bernstein import compositions


class ContinuityVector:
    """Non-decreasing smoothness orders r_1 <= ... <= r_d (and r_0 = 0)."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[int]):
        vals = tuple(int(v) for v in values)
        if not vals:
            raise ValueError("continuity vector must have at least one entry")
        if any(v < 0 for v in vals):
            raise ValueError("continuity orders must be non-negative")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError("continuity orders must be non-decreasing")
        self.values = vals

    @classmethod
    def parse(cls, text: str) -> "ContinuityVector":
        return cls(int(part) for part in text.split(","))

    @property
    def d(self) -> int:
        return len(self.values)

    def order(self, s: int) -> int:
        """r_s for 0 <= s <= d, with r_0 = 0."""
        if not 0 <= s <= self.d:
            raise ValueError(f"codimension {s} out of range for d={self.d}")
        return 0 if s == 0 else self.values[s - 1]

    def __eq__(self, other):
        return isinstance(other, ContinuityVector) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"ContinuityVector{self.values}"


def as_continuity(r) -> ContinuityVector:
    return r if isinstance(r, ContinuityVector) else ContinuityVector(r)


@dataclass(frozen=True)
class BubbleSpace:
    d: int
    s: int
    n: int
    k: int
    r: ContinuityVector
    indices: tuple

    @property
    def dim(self) -> int:
        return len(self.indices)


def satisfies_bubble_conditions(sigma: Sequence[int], d: int, s: int,
                                r: ContinuityVector, k: int, n: int) -> bool:
    """Direct check of the degree-sum and subset-sum conditions for sigma."""
    slots = d - s + 1
    if len(sigma) != slots or any(v < 0 for v in sigma):
        return False
    if sum(sigma) != k - n:
        return False
    for size in range(1, slots):
        for subset in itertools.combinations(range(slots), size):
            if sum(sigma[i] for i in subset) <= r.order(size + s) - n:
                return False
    return True


def _admissible_exponents(d: int, s: int, r: ContinuityVector, k: int, n: int) -> tuple:
    """The raw filtered enumeration, with no range validation."""
    slots = d - s + 1
    found = []
    if k - n >= 0:
        for sigma in compositions(k - n, slots):
            ok = True
            for size in range(1, slots):
                bound = r.order(size + s) - n
                for subset in itertools.combinations(range(slots), size):
                    if sum(sigma[i] for i in subset) <= bound:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append(sigma)
    return tuple(found)


def enumerate_bubble(d: int, s: int, r, k: int, n: int) -> BubbleSpace:
    """All admissible weight exponents, in lexicographic order."""
    r = as_continuity(r)
    if r.d != d:
        raise ValueError("continuity vector length must equal the dimension")
    if not 0 <= s <= d:
        raise ValueError(f"codimension {s} out of range")
    if n < 0 or n > r.order(s):
        raise ValueError(f"derivative order {n} exceeds r_{s}={r.order(s)}")
    return BubbleSpace(d=d, s=s, n=n, k=k, r=r,
                       indices=_admissible_exponents(d, s, r, k, n))


def shift_continuity_vector(r, s: int, n: int) -> ContinuityVector:
    """The lowered vector (r_{s+1} - n, ..., r_d - n) for the quotient setting."""
    r = as_continuity(r)
    if not 0 <= s < r.d:
        raise ValueError("codimension must satisfy 0 <= s < d")
    if n > r.order(s + 1):
        raise ValueError("derivative order exceeds r_{s+1}")
    return ContinuityVector(r.order(t) - n for t in range(s + 1, r.d + 1))


def check_bubble_shift(d: int, s: int, t: int, r, k: int, n: int, n2: int) -> bool:
    """Whether the order-(n2+n) bubble set equals its shifted counterpart.

    The left side lives on a codimension-t face in ambient dimension d with
    vector r and degree k; the right side is the codimension-(t-s) face in
    ambient dimension d-s with the shifted vector and degree k-n.
    """
    r = as_continuity(r)
    if not 0 <= s <= t <= d or s >= d:
        raise ValueError("need 0 <= s <= t <= d with s < d")
    if not 0 <= n <= r.order(s):
        raise ValueError("derivative order n out of range")
    if not 0 <= n2 <= r.order(t) - n:
        raise ValueError("derivative order n'' out of range")
    if k - n - n2 < 0:
        raise ValueError("degree too small for the requested orders")
    # The identity is a statement about the raw filtered enumerations; for
    # t == s the shifted side sits at codimension 0 where orders above 0
    # would be rejected by the public constructor's range check.
    left = _admissible_exponents(d, t, r, k, n2 + n)
    q = shift_continuity_vector(r, s, n)
    right = _admissible_exponents(d - s, t - s, q, k - n, n2)
    return set(left) == set(right)
