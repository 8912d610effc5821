"""Endomaps of a finite poset: classification, algebra, fixpoint sets.

A map is a total table from element indices to element indices.  The
classification predicates are definitional; where a finite shortcut is
known to coincide with a definitional property (Scott continuity versus
increasing), both are computed and compared, and disagreement is an
internal error rather than a judgement call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ParseError, TheoremBreach
from .order import (
    FinitePoset,
    Subset,
    bits,
    directed_subsets,
    join_of,
    meet_table,
    same_poset,
)


@dataclass(frozen=True)
class EndoMap:
    """A total map from a poset's elements to themselves."""

    poset: FinitePoset
    table: tuple[int, ...]

    def __post_init__(self):
        n = self.poset.n
        if len(self.table) != n:
            raise ValueError("map table must cover every element")
        for v in self.table:
            if not 0 <= v < n:
                raise ValueError(f"map table value {v} out of range")

    @classmethod
    def from_labels(cls, poset: FinitePoset, mapping: dict) -> "EndoMap":
        missing = [lab for lab in poset.elements if lab not in mapping]
        if missing:
            raise ParseError(f"table not total: missing {missing[0]!r}")
        for key in mapping:
            poset.index(key)  # UnknownLabel on stray keys
        table = tuple(poset.index(mapping[lab]) for lab in poset.elements)
        return cls(poset, table)

    def __call__(self, i: int) -> int:
        return self.table[i]

    def apply_label(self, label: str) -> str:
        return self.poset.label(self.table[self.poset.index(label)])

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.table[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.table):
            if mask >> v & 1:
                out |= 1 << i
        return out

    @property
    def fix_mask(self) -> int:
        out = 0
        for i, v in enumerate(self.table):
            if i == v:
                out |= 1 << i
        return out

    def as_labels(self) -> dict:
        els = self.poset.elements
        return {els[i]: els[v] for i, v in enumerate(self.table)}

    def __repr__(self):
        pairs = ", ".join(f"{a}->{b}" for a, b in self.as_labels().items())
        return f"EndoMap({pairs})"


def identity_map(P: FinitePoset) -> EndoMap:
    return EndoMap(P, tuple(range(P.n)))


def constant_map(P: FinitePoset, label: str) -> EndoMap:
    return EndoMap(P, (P.index(label),) * P.n)


# ---------------------------------------------------------------------------
# classification


def is_ascending(f: EndoMap) -> bool:
    """x <= f(x) everywhere."""
    le = f.poset.le
    return all(le[i] >> v & 1 for i, v in enumerate(f.table))


def is_descending(f: EndoMap) -> bool:
    return all(f.poset.le[v] >> i & 1 for i, v in enumerate(f.table))


def is_increasing(f: EndoMap) -> bool:
    """x <= y implies f(x) <= f(y)."""
    P = f.poset
    t = f.table
    for i in range(P.n):
        fi = t[i]
        for j in bits(P.le[i]):
            if not P.le[fi] >> t[j] & 1:
                return False
    return True


def is_idempotent(f: EndoMap) -> bool:
    t = f.table
    return all(t[v] == v for v in t)


def is_preclosure(f: EndoMap) -> bool:
    return is_ascending(f) and is_increasing(f)


def is_closure_map(f: EndoMap) -> bool:
    return is_preclosure(f) and is_idempotent(f)


def scott_continuous_definitional(f: EndoMap, cap: Optional[int] = None) -> bool:
    """f preserves every existing directed join.

    For each directed D the image f(D) must have a join and it must be
    f(join D).  On a finite poset every directed set has a join, namely
    its maximum, so the quantification runs over all directed subsets.
    """
    P = f.poset
    for dmask, top in directed_subsets(P, cap):
        img = f.image_mask(dmask)
        if join_of(P, img) != f.table[top]:
            return False
    return True


def is_scott_continuous(f: EndoMap, cap: Optional[int] = None) -> bool:
    """Definitional Scott continuity, cross-checked against the finite
    shortcut (continuity coincides with being increasing)."""
    definitional = scott_continuous_definitional(f, cap)
    shortcut = is_increasing(f)
    if definitional != shortcut:
        raise TheoremBreach(
            "Scott continuity disagrees with the increasing shortcut "
            f"for {f!r}: definitional={definitional} shortcut={shortcut}"
        )
    return definitional


def preserves_binary_meets(f: EndoMap) -> Optional[bool]:
    """f(x meet y) == f(x) meet f(y); None when meets are unavailable."""
    mt = meet_table(f.poset)
    if mt is None:
        return None
    t = f.table
    n = f.poset.n
    for i in range(n):
        for j in range(i, n):
            if t[mt[i][j]] != mt[t[i]][t[j]]:
                return False
    return True


def classify(f: EndoMap, cap: Optional[int] = None) -> dict:
    """Full classification report for one endomap."""
    asc = is_ascending(f)
    inc = is_increasing(f)
    idem = is_idempotent(f)
    desc = is_descending(f)
    return {
        "ascending": asc,
        "descending": desc,
        "increasing": inc,
        "idempotent": idem,
        "preclosure": asc and inc,
        "closure_operator": asc and inc and idem,
        "interior_operator": desc and inc and idem,
        "scott_continuous": is_scott_continuous(f, cap),
        "preserves_binary_meets": preserves_binary_meets(f),
    }


# ---------------------------------------------------------------------------
# algebra


def compose(g: EndoMap, f: EndoMap) -> EndoMap:
    """g after f."""
    same_poset(g.poset, f.poset)
    return EndoMap(f.poset, tuple(g.table[v] for v in f.table))


def pointwise_leq(f: EndoMap, g: EndoMap) -> bool:
    same_poset(f.poset, g.poset)
    le = f.poset.le
    return all(le[a] >> b & 1 for a, b in zip(f.table, g.table))


def pointwise_join(
    maps: Sequence[EndoMap],
    poset: Optional[FinitePoset] = None,
    empty_is_identity: bool = False,
) -> Optional[EndoMap]:
    """Pointwise join of a family, or None where some value join is missing.

    The empty family has no pointwise join in general; in contexts where
    the family ranges over ascending maps the identity is the unit, and
    passing empty_is_identity=True opts into that reading (poset then
    required).
    """
    if not maps:
        if empty_is_identity:
            if poset is None:
                raise ValueError("empty family needs an explicit poset")
            return identity_map(poset)
        return None
    P = same_poset(*(m.poset for m in maps))
    out = []
    for i in range(P.n):
        j = join_of(P, _mask_of_values(maps, i, P))
        if j is None:
            return None
        out.append(j)
    return EndoMap(P, tuple(out))


def _mask_of_values(maps: Sequence[EndoMap], i: int, P: FinitePoset) -> int:
    m = 0
    for f in maps:
        m |= 1 << f.table[i]
    return m


def pointwise_meet(
    maps: Sequence[EndoMap], poset: Optional[FinitePoset] = None
) -> Optional[EndoMap]:
    """Pointwise meet of a nonempty family, or None where a meet is missing."""
    if not maps:
        return None
    from .order import meet_of

    P = same_poset(*(m.poset for m in maps))
    out = []
    for i in range(P.n):
        v = meet_of(P, _mask_of_values(maps, i, P))
        if v is None:
            return None
        out.append(v)
    return EndoMap(P, tuple(out))


# ---------------------------------------------------------------------------
# fixpoints and closedness


def fix(maps: Iterable[EndoMap], poset: Optional[FinitePoset] = None) -> Subset:
    """Common fixpoints of a family; the empty family fixes everything."""
    maps = list(maps)
    if not maps:
        if poset is None:
            raise ValueError("empty family needs an explicit poset")
        return Subset(poset, poset.full_mask)
    P = same_poset(*(m.poset for m in maps))
    if poset is not None:
        same_poset(P, poset)
    out = P.full_mask
    for m in maps:
        out &= m.fix_mask
    return Subset(P, out)


def closed_under(A: Subset, maps: Iterable[EndoMap]) -> bool:
    """Every map sends A into A."""
    for m in maps:
        same_poset(A.poset, m.poset)
        if m.image_mask(A.mask) & ~A.mask:
            return False
    return True


def inversely_closed_under(A: Subset, maps: Iterable[EndoMap]) -> bool:
    """Every map pulls A back into A: f(x) in A implies x in A."""
    for m in maps:
        same_poset(A.poset, m.poset)
        if m.preimage_mask(A.mask) & ~A.mask:
            return False
    return True


def directed_closed(A: Subset, cap: Optional[int] = None) -> bool:
    """A contains the join of each of its directed subsets."""
    P = A.poset
    for dmask, top in directed_subsets(P, cap):
        if dmask & ~A.mask == 0 and not A.mask >> top & 1:
            return False
    return True


def inaccessible_by_directed_joins(A: Subset, cap: Optional[int] = None) -> bool:
    """No directed set outside A has its join inside A."""
    P = A.poset
    for dmask, top in directed_subsets(P, cap):
        if A.mask >> top & 1 and not dmask & A.mask:
            return False
    return True
