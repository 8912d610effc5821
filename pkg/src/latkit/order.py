"""Finite posets and purely order-theoretic queries.

Elements are string labels.  The order of the input label list is
preserved and fixes iteration and output order everywhere else in the
library, so results are deterministic.

Internally a subset of a poset is a bitmask over element indices.  All
the exhaustive machinery (directed subsets, way-below, ceilings,
enabledness) works on masks; the public classes translate to and from
labels at the boundary.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    CapExceeded,
    CycleDetected,
    DuplicateLabel,
    MixedPosets,
    UnknownLabel,
)

# Default ceilings for the two exponential enumerations.  Every operation
# that walks 2^n subsets, or quantifies over directed subsets, checks one
# of these first and raises CapExceeded instead of running hot.
SUBSET_CAP = 14
DIRECTED_CAP = 12


def check_cap(operation: str, size: int, cap: Optional[int], default: int) -> None:
    limit = default if cap is None else cap
    if size > limit:
        raise CapExceeded(operation, size, limit)


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class FinitePoset:
    """A finite partial order on distinct string labels.

    le holds one bitmask per element: bit j of le[i] is set iff element
    i <= element j, so le[i] is the principal upper set of i.  The
    constructor validates reflexivity, antisymmetry and transitivity;
    use build_poset to construct from generating pairs.
    """

    elements: tuple[str, ...]
    le: tuple[int, ...]
    down: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            seen = set()
            for lab in self.elements:
                if lab in seen:
                    raise DuplicateLabel(f"duplicate element label {lab!r}")
                seen.add(lab)
        if len(self.le) != n:
            raise ValueError("le must have one row mask per element")
        full = (1 << n) - 1
        for i, row in enumerate(self.le):
            if row & ~full:
                raise ValueError("le row refers to elements outside the poset")
            if not row >> i & 1:
                raise ValueError(
                    f"order must be reflexive; missing {self.elements[i]!r}"
                )
        for i in range(n):
            for j in bits(self.le[i]):
                if j != i and self.le[j] >> i & 1:
                    raise ValueError(
                        f"order not antisymmetric between "
                        f"{self.elements[i]!r} and {self.elements[j]!r}"
                    )
                if self.le[j] & ~self.le[i]:
                    raise ValueError(
                        f"order not transitive at "
                        f"{self.elements[i]!r} <= {self.elements[j]!r}"
                    )
        down = [0] * n
        for i in range(n):
            for j in bits(self.le[i]):
                down[j] |= 1 << i
        object.__setattr__(self, "down", tuple(down))
        object.__setattr__(
            self, "_pos", {lab: i for i, lab in enumerate(self.elements)}
        )

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise UnknownLabel(f"unknown element label {label!r}") from None

    def label(self, i: int) -> str:
        return self.elements[i]

    def leq(self, i: int, j: int) -> bool:
        """i <= j by index."""
        return bool(self.le[i] >> j & 1)

    def leq_labels(self, a: str, b: str) -> bool:
        return self.leq(self.index(a), self.index(b))

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in bits(mask))

    def __repr__(self):
        return f"FinitePoset({list(self.elements)!r})"


@dataclass(frozen=True)
class Subset:
    """A subset of one poset's elements, stored as a bitmask."""

    poset: FinitePoset
    mask: int

    def __post_init__(self):
        if self.mask & ~self.poset.full_mask:
            raise ValueError("subset mask outside the poset")

    @classmethod
    def of(cls, poset: FinitePoset, labels: Iterable[str]) -> "Subset":
        return cls(poset, poset.mask_of(labels))

    @classmethod
    def from_indices(cls, poset: FinitePoset, indices: Iterable[int]) -> "Subset":
        m = 0
        for i in indices:
            if not 0 <= i < poset.n:
                raise ValueError(f"element index {i} out of range")
            m |= 1 << i
        return cls(poset, m)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(bits(self.mask))

    @property
    def labels(self) -> tuple[str, ...]:
        return self.poset.labels_of(self.mask)

    def complement(self) -> "Subset":
        return Subset(self.poset, self.poset.full_mask & ~self.mask)

    def contains(self, label: str) -> bool:
        return bool(self.mask >> self.poset.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __le__(self, other: "Subset") -> bool:
        same_poset(self.poset, other.poset)
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"Subset({{{', '.join(self.labels)}}})"


def same_poset(*posets) -> FinitePoset:
    """All arguments must be the identical poset; returns it."""
    first = posets[0]
    for p in posets[1:]:
        if p != first:
            raise MixedPosets("operands belong to different posets")
    return first


def build_poset(labels: Sequence[str], pairs: Iterable[Sequence[str]]) -> FinitePoset:
    """Construct a poset from labels and generating <= assertions.

    The reflexive transitive closure of the pairs is taken; a cycle
    through distinct elements raises CycleDetected.
    """
    labels = tuple(labels)
    seen = set()
    for lab in labels:
        if lab in seen:
            raise DuplicateLabel(f"duplicate element label {lab!r}")
        seen.add(lab)
    pos = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    rows = [1 << i for i in range(n)]
    for pair in pairs:
        a, b = pair
        if a not in pos:
            raise UnknownLabel(f"unknown element label {a!r} in order pair")
        if b not in pos:
            raise UnknownLabel(f"unknown element label {b!r} in order pair")
        rows[pos[a]] |= 1 << pos[b]
    # Warshall closure on row masks
    for k in range(n):
        rk = rows[k]
        for i in range(n):
            if rows[i] >> k & 1:
                rows[i] |= rk
    for i in range(n):
        for j in bits(rows[i]):
            if j != i and rows[j] >> i & 1:
                raise CycleDetected(
                    f"cycle through {labels[i]!r} and {labels[j]!r}"
                )
    return FinitePoset(labels, tuple(rows))


# ---------------------------------------------------------------------------
# mask-level helpers


def upper_bounds_mask(P: FinitePoset, mask: int) -> int:
    out = P.full_mask
    for i in bits(mask):
        out &= P.le[i]
    return out


def lower_bounds_mask(P: FinitePoset, mask: int) -> int:
    out = P.full_mask
    for i in bits(mask):
        out &= P.down[i]
    return out


def least_of(P: FinitePoset, mask: int) -> Optional[int]:
    """The least element of the subset, or None."""
    for i in bits(mask):
        if P.le[i] & mask == mask:
            return i
    return None


def greatest_of(P: FinitePoset, mask: int) -> Optional[int]:
    for i in bits(mask):
        if P.down[i] & mask == mask:
            return i
    return None


def join_of(P: FinitePoset, mask: int) -> Optional[int]:
    """Least upper bound, or None if it does not exist.

    join_of(empty) is the bottom element when the poset has one.
    """
    return least_of(P, upper_bounds_mask(P, mask))


def meet_of(P: FinitePoset, mask: int) -> Optional[int]:
    """Greatest lower bound; meet_of(empty) is the top when present."""
    return greatest_of(P, lower_bounds_mask(P, mask))


def maximal_mask(P: FinitePoset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        if P.le[i] & mask == 1 << i:
            out |= 1 << i
    return out


def minimal_mask(P: FinitePoset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        if P.down[i] & mask == 1 << i:
            out |= 1 << i
    return out


def lower_closure_mask(P: FinitePoset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= P.down[i]
    return out


def upper_closure_mask(P: FinitePoset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= P.le[i]
    return out


def is_directed_mask(P: FinitePoset, mask: int) -> bool:
    """Nonempty, and every pair has an upper bound inside the subset."""
    if mask == 0:
        return False
    idx = list(bits(mask))
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if not P.le[idx[a]] & P.le[idx[b]] & mask:
                return False
    return True


def bottom_index(P: FinitePoset) -> Optional[int]:
    return least_of(P, P.full_mask)


def top_index(P: FinitePoset) -> Optional[int]:
    return greatest_of(P, P.full_mask)


def covers(P: FinitePoset) -> list[tuple[int, int]]:
    """Pairs (i, j) where j covers i: i < j with nothing strictly between."""
    out = []
    for i in range(P.n):
        for j in bits(P.le[i] & ~(1 << i)):
            between = P.le[i] & P.down[j] & ~(1 << i) & ~(1 << j)
            if not between:
                out.append((i, j))
    return out


# ---------------------------------------------------------------------------
# public order queries


def order_queries(P: FinitePoset, X: Subset) -> dict:
    """Bounds, extrema and closures of one subset, all in one report."""
    same_poset(P, X.poset)
    m = X.mask
    maxm = maximal_mask(P, m)
    least = least_of(P, m)
    greatest = greatest_of(P, m)
    lc = lower_closure_mask(P, m)
    uc = upper_closure_mask(P, m)
    return {
        "upper_bounds": Subset(P, upper_bounds_mask(P, m)),
        "lower_bounds": Subset(P, lower_bounds_mask(P, m)),
        "maximal_elements": Subset(P, maxm),
        "minimal_elements": Subset(P, minimal_mask(P, m)),
        "least_element": None if least is None else P.label(least),
        "greatest_element": None if greatest is None else P.label(greatest),
        "lower_closure": Subset(P, lc),
        "upper_closure": Subset(P, uc),
        "is_lower_set": lc == m,
        "is_upper_set": uc == m,
    }


def lattice_queries(P: FinitePoset, X: Subset) -> dict:
    """Join, meet and directedness of one subset.

    Joins and meets are None when absent, never approximated.  The empty
    subset is not directed; its join is the bottom element when one
    exists, and dually for the meet.
    """
    same_poset(P, X.poset)
    j = join_of(P, X.mask)
    m = meet_of(P, X.mask)
    return {
        "join": None if j is None else P.label(j),
        "meet": None if m is None else P.label(m),
        "is_directed": is_directed_mask(P, X.mask),
    }


@functools.lru_cache(maxsize=None)
def _directed_subsets(P: FinitePoset) -> tuple[tuple[int, int], ...]:
    out = []
    for mask in range(1, P.full_mask + 1):
        if is_directed_mask(P, mask):
            g = greatest_of(P, mask)
            # a finite directed set has a maximum, which is its join
            assert g is not None
            out.append((mask, g))
    return tuple(out)


def directed_subsets(P: FinitePoset, cap: Optional[int] = None) -> tuple[tuple[int, int], ...]:
    """All directed subsets as (mask, join index) pairs, mask ascending."""
    check_cap("directed-subset enumeration", P.n, cap, DIRECTED_CAP)
    return _directed_subsets(P)


@functools.lru_cache(maxsize=None)
def _way_below(P: FinitePoset) -> tuple[int, ...]:
    """wb[x] = mask of all y with x way below y."""
    n = P.n
    wb = list(P.le)  # x way below y forces x <= y (take D = {y})
    for dmask, top in _directed_subsets(P):
        ys = P.down[top]
        for x in range(n):
            if not P.le[x] & dmask:
                wb[x] &= ~ys
    return tuple(wb)


def way_below_relation(P: FinitePoset, cap: Optional[int] = None) -> tuple[int, ...]:
    check_cap("way-below relation", P.n, cap, DIRECTED_CAP)
    return _way_below(P)


def way_below(P: FinitePoset, a: str, b: str, cap: Optional[int] = None) -> bool:
    """a is way below b: every directed set with join at or above b
    already contains a member at or above a."""
    wb = way_below_relation(P, cap)
    return bool(wb[P.index(a)] >> P.index(b) & 1)


def way_below_set(P: FinitePoset, b: str, cap: Optional[int] = None) -> Subset:
    """All elements way below b."""
    wb = way_below_relation(P, cap)
    j = P.index(b)
    m = 0
    for i in range(P.n):
        if wb[i] >> j & 1:
            m |= 1 << i
    return Subset(P, m)


def is_continuous_poset(P: FinitePoset, cap: Optional[int] = None) -> bool:
    """Every element is the directed join of the elements way below it."""
    wb = way_below_relation(P, cap)
    for x in range(P.n):
        dd = 0
        for y in range(P.n):
            if wb[y] >> x & 1:
                dd |= 1 << y
        if not is_directed_mask(P, dd):
            return False
        if join_of(P, dd) != x:
            return False
    return True


def interpolation_check(P: FinitePoset, cap: Optional[int] = None) -> bool:
    """Whenever x is way below z, some y has x way below y way below z."""
    wb = way_below_relation(P, cap)
    for x in range(P.n):
        for z in bits(wb[x]):
            if not any(wb[y] >> z & 1 for y in bits(wb[x])):
                return False
    return True


# ---------------------------------------------------------------------------
# ceilings and enabledness


def has_ceiling_mask(P: FinitePoset, mask: int) -> bool:
    """Every element of the subset lies below a maximal element of it.

    A property of the induced subposet alone.  The empty subset has a
    ceiling vacuously.
    """
    mm = maximal_mask(P, mask)
    covered = 0
    for i in bits(mm):
        covered |= P.down[i]
    return mask & ~covered == 0


def has_ceiling(P: FinitePoset, X: Subset) -> bool:
    same_poset(P, X.poset)
    return has_ceiling_mask(P, X.mask)


def is_default_enabled(P: FinitePoset, cap: Optional[int] = None) -> bool:
    """Every set of lower bounds has a ceiling.

    True for every finite poset; the check is definitional so the claim
    is verified rather than assumed.
    """
    check_cap("default-enabledness", P.n, cap, SUBSET_CAP)
    for mask in range(P.full_mask + 1):
        if not has_ceiling_mask(P, lower_bounds_mask(P, mask)):
            return False
    return True


def is_default_enabled_within(
    P: FinitePoset, A: Subset, cap: Optional[int] = None
) -> bool:
    """The subposet A supports default reasoning relative to P.

    Two conditions: (i) within A, every set of lower bounds taken in A
    has a ceiling; (ii) for every x in P the part of A at or below x has
    a ceiling.
    """
    same_poset(P, A.poset)
    check_cap("relative default-enabledness", popcount(A.mask), cap, SUBSET_CAP)
    amask = A.mask
    sub = list(bits(amask))
    for k in range(1 << len(sub)):
        lb = amask
        for pos, i in enumerate(sub):
            if k >> pos & 1:
                lb &= P.down[i]
        if not has_ceiling_mask(P, lb):
            return False
    for x in range(P.n):
        if not has_ceiling_mask(P, P.down[x] & amask):
            return False
    return True


def enabledness(P: FinitePoset, X: Optional[Subset] = None, cap: Optional[int] = None) -> dict:
    """Ceiling and enabledness report for a poset and optional subset."""
    out = {"is_default_enabled": is_default_enabled(P, cap)}
    if X is not None:
        out["has_ceiling"] = has_ceiling(P, X)
        out["is_default_enabled_within"] = is_default_enabled_within(P, X, cap)
    return out


# ---------------------------------------------------------------------------
# structure predicates and subposets


@functools.lru_cache(maxsize=None)
def meet_table(P: FinitePoset) -> Optional[tuple[tuple[int, ...], ...]]:
    """Pairwise meet table, or None when some pair has no meet."""
    n = P.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            m = greatest_of(P, P.down[i] & P.down[j])
            if m is None:
                return None
            row.append(m)
        rows.append(tuple(row))
    return tuple(rows)


def is_meet_semilattice(P: FinitePoset) -> bool:
    return meet_table(P) is not None


def subposet(P: FinitePoset, X: Subset) -> tuple[FinitePoset, tuple[int, ...]]:
    """Induced subposet on X, plus the new-index -> old-index table.

    Labels are kept, so elements can be matched up by name as well.
    """
    same_poset(P, X.poset)
    old = tuple(bits(X.mask))
    labels = tuple(P.elements[i] for i in old)
    back = {o: k for k, o in enumerate(old)}
    rows = []
    for o in old:
        row = 0
        for j in bits(P.le[o] & X.mask):
            row |= 1 << back[j]
        rows.append(row)
    return FinitePoset(labels, tuple(rows)), old
