"""Open nuclei, fitted nuclei, filters, and the duality between them.

The open nucleus at a sends x to a => x.  A nucleus is fitted when it
is a join of opens.  The kernel at the top, oneker, turns a nucleus
into a filter; fitnuc turns any subset into the join of its opens.
These two form a Galois connection whose closure on the nucleus side is
the fitting operation and whose closure on the subset side lands on
nuclear filters.  The correspondence report walks the resulting
bijection between Scott-open filters and compact fitted quotients and
verifies every promised identity; a single failure raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InputError, TheoremBreach
from .closure import ClosureOperator
from .heyting import (
    Frameish,
    Nucleus,
    _imp_table,
    _poset_of,
    enumerate_nuclei,
    nucleus_join,
    require_frame,
)
from .maps import EndoMap, pointwise_leq
from .order import (
    SUBSET_CAP,
    FinitePoset,
    Subset,
    bits,
    check_cap,
    directed_subsets,
    join_of,
    meet_table,
    same_poset,
    top_index,
    upper_closure_mask,
)


def is_filter(L: Frameish, X: Subset) -> bool:
    """Upper set containing the top and closed under binary meets."""
    P = require_frame(L)
    same_poset(P, X.poset)
    t = top_index(P)
    if not X.mask >> t & 1:
        return False
    if upper_closure_mask(P, X.mask) != X.mask:
        return False
    mt = meet_table(P)
    for a in bits(X.mask):
        for b in bits(X.mask):
            if not X.mask >> mt[a][b] & 1:
                return False
    return True


@dataclass(frozen=True)
class FilterSet:
    """A subset of a frame validated to be a filter."""

    subset: Subset

    def __post_init__(self):
        if not is_filter(self.subset.poset, self.subset):
            raise InputError(
                f"{{{', '.join(self.subset.labels)}}} is not a filter"
            )

    @property
    def poset(self) -> FinitePoset:
        return self.subset.poset

    @property
    def mask(self) -> int:
        return self.subset.mask

    @property
    def labels(self) -> tuple[str, ...]:
        return self.subset.labels

    def __repr__(self):
        return f"FilterSet({{{', '.join(self.labels)}}})"


def enumerate_filters(L: Frameish, cap: Optional[int] = None) -> list[FilterSet]:
    P = require_frame(L, cap)
    check_cap("filter enumeration", P.n, cap, SUBSET_CAP)
    return [
        FilterSet(Subset(P, m))
        for m in range(P.full_mask + 1)
        if is_filter(P, Subset(P, m))
    ]


def modus_ponens_check(L: Frameish, F: FilterSet) -> bool:
    """Filters absorb implications: a and a => b in F force b in F."""
    P = require_frame(L)
    imp = _imp_table(P)
    for a in bits(F.mask):
        for b in range(P.n):
            if F.mask >> imp[a][b] & 1 and not F.mask >> b & 1:
                return False
    return True


# ---------------------------------------------------------------------------
# open and fitted nuclei


def open_nucleus(L: Frameish, a: str, cap: Optional[int] = None) -> Nucleus:
    """x -> (a => x).  Fixpoints are the implications out of a."""
    P = require_frame(L, cap)
    imp = _imp_table(P)
    ai = P.index(a)
    try:
        nu = Nucleus(ClosureOperator(EndoMap(P, imp[ai])))
    except InputError as e:
        raise TheoremBreach(f"open map at {a!r} is not a nucleus: {e}") from e
    want = 0
    for x in range(P.n):
        want |= 1 << imp[ai][x]
    if nu.fix_mask != want:
        raise TheoremBreach(
            f"fixpoints of the open nucleus at {a!r} are not its "
            "implication image"
        )
    return nu


def oneker(nu: Nucleus) -> FilterSet:
    """The elements a nucleus sends to the top."""
    P = nu.poset
    t = top_index(P)
    if t is None:
        raise InputError("kernel at the top needs a top element")
    mask = 0
    for i, v in enumerate(nu.table):
        if v == t:
            mask |= 1 << i
    return FilterSet(Subset(P, mask))


def fitnuc(L: Frameish, S: Subset, cap: Optional[int] = None) -> Nucleus:
    """Join of the open nuclei at the members of S."""
    P = require_frame(L, cap)
    same_poset(P, S.poset)
    opens = [open_nucleus(L, P.label(i), cap) for i in bits(S.mask)]
    return nucleus_join(opens, P, cap)


def fitting(L: Frameish, nu: Nucleus, cap: Optional[int] = None) -> Nucleus:
    """Greatest fitted nucleus below nu: the join of the opens at the
    kernel of nu.  The membership lemma (open at a sits below nu exactly
    when nu sends a to the top) is re-verified on each call."""
    P = require_frame(L, cap)
    same_poset(P, nu.poset)
    t = top_index(P)
    for a in range(P.n):
        o = open_nucleus(L, P.label(a), cap)
        if pointwise_leq(o.op.map, nu.op.map) != (nu.table[a] == t):
            raise TheoremBreach(
                "an open nucleus sits below a nucleus without sending "
                f"{P.label(a)!r} to the top, or vice versa"
            )
    result = fitnuc(L, oneker(nu).subset, cap)
    if not pointwise_leq(result.op.map, nu.op.map):
        raise TheoremBreach("fitting escaped above its nucleus")
    return result


def is_fitted(L: Frameish, nu: Nucleus, cap: Optional[int] = None) -> bool:
    return fitting(L, nu, cap).table == nu.table


def nucfilt(L: Frameish, S: Subset, cap: Optional[int] = None) -> FilterSet:
    """Least nuclear filter containing S."""
    return oneker(fitnuc(L, S, cap))


# ---------------------------------------------------------------------------
# Scott-open and nuclear filters


def is_scott_open(L: Frameish, X: Subset, cap: Optional[int] = None) -> bool:
    """Upper set inaccessible by directed joins, both definitional."""
    P = _poset_of(L)
    same_poset(P, X.poset)
    if upper_closure_mask(P, X.mask) != X.mask:
        return False
    for dmask, top in directed_subsets(P, cap):
        if X.mask >> top & 1 and not dmask & X.mask:
            return False
    return True


def is_nuclear_filter(L: Frameish, X: Subset, cap: Optional[int] = None) -> bool:
    """X is the kernel of some nucleus.

    Two independent routes: scan the kernels of all nuclei, and test
    whether X is a filter fixed by the kernel-of-join closure.  They
    must agree.
    """
    P = require_frame(L, cap)
    same_poset(P, X.poset)
    by_scan = any(
        oneker(nu).mask == X.mask for nu in enumerate_nuclei(L, cap)
    )
    by_galois = is_filter(L, X) and nucfilt(L, X, cap).mask == X.mask
    if by_scan != by_galois:
        raise TheoremBreach(
            "kernel scan and Galois closure disagree on nuclear-filter "
            f"status of {{{', '.join(X.labels)}}}"
        )
    return by_scan


def filters_report(L: Frameish, X: Subset, cap: Optional[int] = None) -> dict:
    return {
        "is_filter": is_filter(L, X),
        "is_scott_open": is_scott_open(L, X, cap),
        "is_nuclear_filter": is_nuclear_filter(L, X, cap),
        "modus_ponens": (
            modus_ponens_check(L, FilterSet(X)) if is_filter(L, X) else None
        ),
    }


# ---------------------------------------------------------------------------
# quotients and compactness


def is_compact_quotient(
    L: Frameish, nu: Nucleus, cap: Optional[int] = None
) -> bool:
    """The quotient frame of nu is compact: a directed family of
    fixpoints whose quotient join is the top must contain the top."""
    P = require_frame(L, cap)
    same_poset(P, nu.poset)
    t = top_index(P)
    fm = nu.fix_mask
    for dmask, dtop in directed_subsets(P, cap):
        if dmask & ~fm:
            continue
        if nu.table[dtop] == t and not dmask >> t & 1:
            return False
    return True


def quotient_frame_check(
    L: Frameish, nu: Nucleus, cap: Optional[int] = None
) -> dict:
    """The fixpoint set of a nucleus is a frame under inherited meets
    and reflected joins, and the corestricted nucleus is a surjective
    frame morphism onto it.  Checked subset by subset."""
    P = require_frame(L, cap)
    same_poset(P, nu.poset)
    check_cap("quotient frame check", P.n, cap, SUBSET_CAP)
    mt = meet_table(P)
    fm = nu.fix_mask

    def qjoin(mask: int) -> int:
        j = join_of(P, mask)
        return nu.table[j]

    # meets of fixpoints are fixpoints (inherited from L)
    for x in bits(fm):
        for y in bits(fm):
            if not fm >> mt[x][y] & 1:
                raise TheoremBreach(
                    "fixpoints of a nucleus are not closed under meets"
                )
    # frame distributivity inside the quotient
    fixed = list(bits(fm))
    for sub in range(1 << len(fixed)):
        smask = 0
        for pos, i in enumerate(fixed):
            if sub >> pos & 1:
                smask |= 1 << i
        j = qjoin(smask)
        for x in fixed:
            img = 0
            for y in bits(smask):
                img |= 1 << mt[x][y]
            if qjoin(img) != mt[x][j]:
                raise TheoremBreach(
                    "quotient frame distributivity failed"
                )
    # the corestriction preserves finite meets and all joins
    for x in range(P.n):
        for y in range(P.n):
            if nu.table[mt[x][y]] != mt[nu.table[x]][nu.table[y]]:
                raise TheoremBreach(
                    "corestriction does not preserve binary meets"
                )
    for mask in range(P.full_mask + 1):
        img = nu.op.map.image_mask(mask)
        if nu.table[join_of(P, mask)] != qjoin(img):
            raise TheoremBreach("corestriction does not preserve joins")
    return {
        "fixpoints": Subset(P, fm).labels,
        "is_frame": True,
        "corestriction_is_frame_morphism": True,
        "is_compact": is_compact_quotient(L, nu, cap),
    }


# ---------------------------------------------------------------------------
# the Galois connection and the correspondence


def galois_identities_check(L: Frameish, cap: Optional[int] = None) -> dict:
    """fitnuc and oneker form a Galois connection, and the promised
    identities hold: each side composed around the other reproduces
    itself, and the round trip on nuclei is the fitting."""
    P = require_frame(L, cap)
    check_cap("Galois identity check", P.n, cap, SUBSET_CAP)
    nucs = enumerate_nuclei(L, cap)
    for smask in range(P.full_mask + 1):
        S = Subset(P, smask)
        fS = fitnuc(L, S, cap)
        for nu in nucs:
            lhs = pointwise_leq(fS.op.map, nu.op.map)
            rhs = smask & ~oneker(nu).mask == 0
            if lhs != rhs:
                raise TheoremBreach(
                    "Galois adjunction between fitnuc and oneker failed at "
                    f"S={{{', '.join(S.labels)}}}"
                )
        if nucfilt(L, nucfilt(L, S, cap).subset, cap).mask != nucfilt(
            L, S, cap
        ).mask:
            raise TheoremBreach("nuclear-filter closure is not idempotent")
        if fitnuc(L, oneker(fS).subset, cap).table != fS.table:
            raise TheoremBreach(
                "fitnuc of oneker of fitnuc did not reproduce fitnuc"
            )
    for nu in nucs:
        V = oneker(nu)
        if oneker(fitnuc(L, V.subset, cap)).mask != V.mask:
            raise TheoremBreach(
                "oneker of fitnuc of oneker did not reproduce oneker"
            )
        if fitnuc(L, V.subset, cap).table != fitting(L, nu, cap).table:
            raise TheoremBreach(
                "the Galois round trip on a nucleus is not its fitting"
            )
    return {"adjunction": True, "identities": True}


def scott_open_filter_is_nuclear_check(
    L: Frameish, cap: Optional[int] = None
) -> bool:
    """Every Scott-open filter is a nuclear filter."""
    for F in enumerate_filters(L, cap):
        if is_scott_open(L, F.subset, cap):
            if not is_nuclear_filter(L, F.subset, cap):
                raise TheoremBreach(
                    f"Scott-open filter {{{', '.join(F.labels)}}} is not nuclear"
                )
    return True


def hmj_correspondence(L: Frameish, cap: Optional[int] = None) -> dict:
    """The bijection between Scott-open filters and compact fitted
    quotients, exhibited pair by pair and verified in both directions,
    including order reversal into the quotient frames."""
    P = require_frame(L, cap)
    filters = [
        F
        for F in enumerate_filters(L, cap)
        if is_scott_open(L, F.subset, cap)
    ]
    nucs = enumerate_nuclei(L, cap)
    compact_fitted = [
        nu
        for nu in nucs
        if is_fitted(L, nu, cap) and is_compact_quotient(L, nu, cap)
    ]
    pairs = []
    seen_tables = set()
    for F in filters:
        nu = fitnuc(L, F.subset, cap)
        if not is_fitted(L, nu, cap):
            raise TheoremBreach("fitnuc of a filter is not fitted")
        if not is_compact_quotient(L, nu, cap):
            raise TheoremBreach(
                "fitnuc of a Scott-open filter has a non-compact quotient"
            )
        if oneker(nu).mask != F.mask:
            raise TheoremBreach(
                "oneker does not invert fitnuc on a Scott-open filter"
            )
        pairs.append((F, nu))
        seen_tables.add(nu.table)
    for nu in compact_fitted:
        V = oneker(nu)
        if not is_scott_open(L, V.subset, cap):
            raise TheoremBreach(
                "kernel of a compact fitted nucleus is not Scott-open"
            )
        if fitnuc(L, V.subset, cap).table != nu.table:
            raise TheoremBreach(
                "fitnuc does not invert oneker on a compact fitted nucleus"
            )
        if nu.table not in seen_tables:
            raise TheoremBreach(
                "a compact fitted nucleus is missed by the filter side"
            )
    if len(filters) != len(compact_fitted):
        raise TheoremBreach(
            "Scott-open filters and compact fitted nuclei do not biject"
        )
    # monotone between filters and nuclei, hence order-reversing into
    # the quotient frames, whose order is reverse fixpoint inclusion
    for F1, n1 in pairs:
        for F2, n2 in pairs:
            incl = F1.mask & ~F2.mask == 0
            if incl != pointwise_leq(n1.op.map, n2.op.map):
                raise TheoremBreach(
                    "filter inclusion does not match the nucleus order"
                )
            if incl != (n2.fix_mask & ~n1.fix_mask == 0):
                raise TheoremBreach(
                    "filter inclusion does not reverse into quotient "
                    "fixpoint inclusion"
                )
    return {
        "scott_open_filters": [F.labels for F in filters],
        "compact_fitted_quotients": [nu.fix.labels for nu in compact_fitted],
        "pairs": pairs,
        "count": len(pairs),
        "antiisomorphism_verified": True,
    }
