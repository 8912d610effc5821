"""Closure operators, closure systems, generation, fixpoints.

The two sides of the subject are kept as distinct types.  A
ClosureOperator is an ascending increasing idempotent endomap; a
ClosureSystem is a subset in which every principal upper set has a
least member.  duality and duality_inv translate between them and are
mutually inverse.

Generation from a family of preclosure maps is implemented twice, on
purpose: once through intersection of fixpoint sets, once as iterated
application.  The two routes are never merged; tests compare them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    InputError,
    NoLeastElement,
    NotAClosureSystem,
    NotAscendingAt,
    NotIncreasing,
    NotPreclosure,
    TheoremBreach,
)
from .maps import (
    EndoMap,
    directed_closed,
    inaccessible_by_directed_joins,
    inversely_closed_under,
    is_idempotent,
    is_increasing,
    is_preclosure,
    is_scott_continuous,
    closed_under,
    pointwise_leq,
    pointwise_meet,
)
from .order import (
    SUBSET_CAP,
    FinitePoset,
    Subset,
    bottom_index,
    check_cap,
    directed_subsets,
    join_of,
    least_of,
    same_poset,
    subposet,
    way_below_relation,
)
from . import rules as _rules


@dataclass(frozen=True)
class ClosureOperator:
    """An ascending, increasing, idempotent endomap."""

    map: EndoMap

    def __post_init__(self):
        if not is_preclosure(self.map):
            raise NotPreclosure(
                f"{self.map!r} is not a preclosure map (ascending and increasing)"
            )
        if not is_idempotent(self.map):
            raise InputError(f"{self.map!r} is not idempotent")

    @property
    def poset(self) -> FinitePoset:
        return self.map.poset

    @property
    def table(self) -> tuple[int, ...]:
        return self.map.table

    def __call__(self, i: int) -> int:
        return self.map.table[i]

    def apply_label(self, label: str) -> str:
        return self.map.apply_label(label)

    @property
    def fix_mask(self) -> int:
        return self.map.fix_mask

    @property
    def fix(self) -> Subset:
        return Subset(self.poset, self.map.fix_mask)

    def leq(self, other: "ClosureOperator") -> bool:
        return pointwise_leq(self.map, other.map)

    def __repr__(self):
        return f"ClosureOperator({self.map.as_labels()!r})"


def is_closure_system_mask(P: FinitePoset, mask: int) -> bool:
    for x in range(P.n):
        if least_of(P, mask & P.le[x]) is None:
            return False
    return True


def is_closure_system(X: Subset) -> bool:
    """Every principal upper set meets X in a set with a least element."""
    return is_closure_system_mask(X.poset, X.mask)


@dataclass(frozen=True)
class ClosureSystem:
    """A subset validated to be a closure system."""

    subset: Subset

    def __post_init__(self):
        if not is_closure_system(self.subset):
            raise NotAClosureSystem(
                f"{{{', '.join(self.subset.labels)}}} is not a closure system"
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
        return f"ClosureSystem({{{', '.join(self.labels)}}})"


def duality(C) -> ClosureOperator:
    """The closure operator whose fixpoints are exactly C.

    Sends x to the least element of C at or above x.
    """
    if isinstance(C, Subset):
        C = ClosureSystem(C)
    P = C.poset
    table = []
    for x in range(P.n):
        v = least_of(P, C.mask & P.le[x])
        assert v is not None  # guaranteed by ClosureSystem validation
        table.append(v)
    return ClosureOperator(EndoMap(P, tuple(table)))


def duality_inv(gamma: ClosureOperator) -> ClosureSystem:
    """The fixpoint set of a closure operator, as a validated system."""
    return ClosureSystem(gamma.fix)


@functools.lru_cache(maxsize=None)
def _closure_system_masks(P: FinitePoset) -> tuple[int, ...]:
    return tuple(
        m for m in range(P.full_mask + 1) if is_closure_system_mask(P, m)
    )


def closure_system_masks(P: FinitePoset, cap: Optional[int] = None) -> tuple[int, ...]:
    check_cap("closure-system enumeration", P.n, cap, SUBSET_CAP)
    return _closure_system_masks(P)


def enumerate_cl_lattice(P: FinitePoset, cap: Optional[int] = None) -> dict:
    """Every closure system and its operator, in mask order.

    The two lists are aligned: operators[i] has fixpoint set systems[i].
    """
    systems = [
        ClosureSystem(Subset(P, m)) for m in closure_system_masks(P, cap)
    ]
    return {
        "closure_systems": systems,
        "closure_operators": [duality(c) for c in systems],
    }


# ---------------------------------------------------------------------------
# generation


def _check_generators(
    G: Sequence[EndoMap], poset: Optional[FinitePoset]
) -> FinitePoset:
    for g in G:
        if not is_preclosure(g):
            raise NotPreclosure(
                f"generator {g!r} is not a preclosure map"
            )
    if G:
        P = same_poset(*(g.poset for g in G))
        if poset is not None:
            same_poset(P, poset)
        return P
    if poset is None:
        raise ValueError("an empty family of generators needs an explicit poset")
    return poset


def generate_closure(
    G: Sequence[EndoMap], poset: Optional[FinitePoset] = None
) -> ClosureOperator:
    """Least closure operator above every map in G.

    Computed through the fixpoint route: the common fixpoints of G form
    a closure system, and its operator is the answer.  The empty family
    generates the identity.
    """
    G = list(G)
    P = _check_generators(G, poset)
    fixes = P.full_mask
    for g in G:
        fixes &= g.fix_mask
    if not is_closure_system_mask(P, fixes):
        raise TheoremBreach(
            "common fixpoints of a preclosure family failed to form a "
            f"closure system on {P!r}"
        )
    result = duality(ClosureSystem(Subset(P, fixes)))
    for g in G:
        if not pointwise_leq(g, result.map):
            raise TheoremBreach(
                "generated closure operator is not above a generator"
            )
    return result


def kleene_generate(
    G: Sequence[EndoMap], poset: Optional[FinitePoset] = None
) -> ClosureOperator:
    """Least closure operator above G, by round-robin iteration.

    Applies the generators in their listed order, over and over, until a
    whole pass moves nothing.  Ascent makes termination immediate on a
    finite poset.  Independent of generate_closure by construction; the
    equality of the two is a theorem, tested rather than assumed here.
    """
    G = list(G)
    P = _check_generators(G, poset)
    table = []
    for x in range(P.n):
        v = x
        changed = True
        while changed:
            changed = False
            for g in G:
                nv = g.table[v]
                if nv != v:
                    v = nv
                    changed = True
        table.append(v)
    try:
        return ClosureOperator(EndoMap(P, tuple(table)))
    except InputError as e:
        raise TheoremBreach(
            f"round-robin iteration of preclosures did not yield a closure operator: {e}"
        ) from e


def induction_check(
    A: Subset,
    G: Sequence[EndoMap],
    poset: Optional[FinitePoset] = None,
    cap: Optional[int] = None,
) -> dict:
    """Induction principle for generated closure operators.

    If A is directed-closed and closed under every generator, then A is
    closed under the generated operator.  The premises and conclusion
    are all evaluated; a true premise pair with a false conclusion is an
    internal error, not a report entry.
    """
    G = list(G)
    P = _check_generators(G, poset)
    same_poset(P, A.poset)
    dc = directed_closed(A, cap)
    cu = closed_under(A, G)
    gen = generate_closure(G, P)
    concl = closed_under(A, [gen.map])
    if dc and cu and not concl:
        raise TheoremBreach(
            f"induction principle failed on {A!r} with generators {G!r}"
        )
    return {
        "directed_closed": dc,
        "closed_under_generators": cu,
        "premises_hold": dc and cu,
        "closed_under_generated": concl,
    }


def obverse_induction_check(
    A: Subset,
    G: Sequence[EndoMap],
    poset: Optional[FinitePoset] = None,
    cap: Optional[int] = None,
) -> dict:
    """Contrapositive companion of the induction principle.

    If A is inaccessible by directed joins and inversely closed under
    every generator, it is inversely closed under the generated
    operator.
    """
    G = list(G)
    P = _check_generators(G, poset)
    same_poset(P, A.poset)
    inac = inaccessible_by_directed_joins(A, cap)
    icu = inversely_closed_under(A, G)
    gen = generate_closure(G, P)
    concl = inversely_closed_under(A, [gen.map])
    if inac and icu and not concl:
        raise TheoremBreach(
            f"obverse induction failed on {A!r} with generators {G!r}"
        )
    return {
        "inaccessible_by_directed_joins": inac,
        "inversely_closed_under_generators": icu,
        "premises_hold": inac and icu,
        "inversely_closed_under_generated": concl,
    }


def default_induction_check(
    A: Subset,
    G: Sequence[EndoMap],
    poset: Optional[FinitePoset] = None,
    cap: Optional[int] = None,
) -> dict:
    """Induction principle in its default-reasoning form.

    On a default-enabled poset, a subset that is default-enabled within
    the ambient poset and closed under the generators is closed under
    the generated operator.
    """
    from .order import is_default_enabled, is_default_enabled_within

    G = list(G)
    P = _check_generators(G, poset)
    same_poset(P, A.poset)
    ambient = is_default_enabled(P, cap)
    within = is_default_enabled_within(P, A, cap)
    cu = closed_under(A, G)
    gen = generate_closure(G, P)
    concl = closed_under(A, [gen.map])
    if ambient and within and cu and not concl:
        raise TheoremBreach(
            f"default induction failed on {A!r} with generators {G!r}"
        )
    return {
        "ambient_default_enabled": ambient,
        "default_enabled_within": within,
        "closed_under_generators": cu,
        "premises_hold": ambient and within and cu,
        "closed_under_generated": concl,
    }


# ---------------------------------------------------------------------------
# the lattice of closure operators


def cl_join(
    ops: Sequence[ClosureOperator], poset: Optional[FinitePoset] = None
) -> ClosureOperator:
    """Join in the lattice of closure operators.

    Closure operators are preclosure maps, so the join is generation.
    """
    return generate_closure([o.map for o in ops], poset)


def cl_meet(
    ops: Sequence[ClosureOperator],
    poset: Optional[FinitePoset] = None,
    cap: Optional[int] = None,
) -> ClosureOperator:
    """Meet in the lattice of closure operators.

    Fixpoint sets join: the meet is the operator of the least closure
    system containing every operator's fixpoints.  When the pointwise
    meet of the maps happens to exist it must agree, and that is
    checked.
    """
    ops = list(ops)
    if ops:
        P = same_poset(*(o.poset for o in ops))
        if poset is not None:
            same_poset(P, poset)
    elif poset is None:
        raise ValueError("an empty family needs an explicit poset")
    else:
        P = poset
    union = 0
    for o in ops:
        union |= o.fix_mask
    result = duality(clsys(Subset(P, union), cap))
    if ops:
        pw = pointwise_meet([o.map for o in ops])
        if pw is not None and pw.table != result.table:
            raise TheoremBreach(
                "pointwise meet of closure operators exists but is not "
                "their meet in the operator lattice"
            )
    return result


# ---------------------------------------------------------------------------
# system generation, directed closure, Scott cores


def clsys(
    X: Subset, cap: Optional[int] = None, method: str = "enumerate"
) -> ClosureSystem:
    """Least closure system containing X.

    method 'enumerate' intersects all systems containing X; 'rules'
    closes X under the poset's default rules; 'both' runs the two and
    insists they agree.
    """
    P = X.poset
    if method not in ("enumerate", "rules", "both"):
        raise ValueError(f"unknown method {method!r}")
    by_enum = by_rules = None
    if method in ("enumerate", "both"):
        inter = P.full_mask
        for m in closure_system_masks(P, cap):
            if X.mask & ~m == 0:
                inter &= m
        if not is_closure_system_mask(P, inter):
            raise TheoremBreach(
                "intersection of closure systems is not a closure system"
            )
        by_enum = inter
    if method in ("rules", "both"):
        closed = _rules.rule_closure(_rules.default_rules(P, cap), X)
        by_rules = closed.mask
    if method == "both" and by_enum != by_rules:
        raise TheoremBreach(
            "system-intersection and default-rule closure disagree on "
            f"clsys of {{{', '.join(X.labels)}}}"
        )
    mask = by_enum if by_enum is not None else by_rules
    return ClosureSystem(Subset(P, mask))


def dcclsys(X: Subset, cap: Optional[int] = None) -> ClosureSystem:
    """Least directed-closed closure system containing X."""
    P = X.poset
    dc = [
        m
        for m in closure_system_masks(P, cap)
        if directed_closed(Subset(P, m), cap)
    ]
    inter = P.full_mask
    for m in dc:
        if X.mask & ~m == 0:
            inter &= m
    if inter not in dc:
        raise TheoremBreach(
            "no least directed-closed closure system contains "
            f"{{{', '.join(X.labels)}}}"
        )
    return ClosureSystem(Subset(P, inter))


def dj(X: Subset, cap: Optional[int] = None) -> Subset:
    """Joins of the directed subsets of X."""
    P = X.poset
    out = 0
    for dmask, top in directed_subsets(P, cap):
        if dmask & ~X.mask == 0:
            out |= 1 << top
    return Subset(P, out)


def sccore(gamma: ClosureOperator, cap: Optional[int] = None) -> ClosureOperator:
    """Greatest Scott-continuous closure operator below gamma, by formula.

    Sends x to the join of the gamma-image of the set of elements way
    below x.
    """
    P = gamma.poset
    wb = way_below_relation(P, cap)
    table = []
    for x in range(P.n):
        dd = 0
        for y in range(P.n):
            if wb[y] >> x & 1:
                dd |= 1 << y
        v = join_of(P, gamma.map.image_mask(dd))
        if v is None:
            raise TheoremBreach(
                "image of a way-below set under a closure operator "
                "has no join; the Scott core formula broke down"
            )
        table.append(v)
    try:
        return ClosureOperator(EndoMap(P, tuple(table)))
    except InputError as e:
        raise TheoremBreach(f"Scott core formula left the operator class: {e}") from e


def sccore_bruteforce(
    gamma: ClosureOperator, cap: Optional[int] = None
) -> ClosureOperator:
    """Greatest Scott-continuous closure operator below gamma, found by
    scanning every closure operator on the poset."""
    P = gamma.poset
    candidates = []
    for m in closure_system_masks(P, cap):
        op = duality(ClosureSystem(Subset(P, m)))
        if pointwise_leq(op.map, gamma.map) and is_scott_continuous(op.map, cap):
            candidates.append(op)
    for op in candidates:
        if all(pointwise_leq(other.map, op.map) for other in candidates):
            return op
    raise TheoremBreach(
        "the Scott-continuous closure operators below the given one "
        "have no greatest member"
    )


# ---------------------------------------------------------------------------
# least fixpoints


def tarski(f: EndoMap, x: Optional[str] = None) -> str:
    """Least fixpoint of an increasing map at or above x.

    Restricts f to the subposet of elements below their image, where it
    is a preclosure map, and applies the generated closure operator to
    x.  When x is omitted the poset's bottom is used.  The answer is
    independently cross-checked against a scan of all fixpoints.
    """
    P = f.poset
    if not is_increasing(f):
        raise NotIncreasing(f"{f!r} is not increasing")
    if x is None:
        b = bottom_index(P)
        if b is None:
            raise NoLeastElement(
                "poset has no least element; supply a start point"
            )
        xi = b
    else:
        xi = P.index(x)
    amask = 0
    for i, v in enumerate(f.table):
        if P.le[i] >> v & 1:
            amask |= 1 << i
    if not amask >> xi & 1:
        raise NotAscendingAt(
            P.label(xi),
            f"start point {P.label(xi)!r} is not below its image "
            f"{P.label(f.table[xi])!r}",
        )
    Q, old = subposet(P, Subset(P, amask))
    back = {o: k for k, o in enumerate(old)}
    ftable = tuple(back[f.table[o]] for o in old)
    cl = generate_closure([EndoMap(Q, ftable)], Q)
    result = old[cl(back[xi])]
    scan = least_of(P, f.fix_mask & P.le[xi])
    if scan != result:
        raise TheoremBreach(
            f"least fixpoint via restriction ({P.label(result)!r}) does "
            f"not match the fixpoint scan "
            f"({None if scan is None else P.label(scan)!r})"
        )
    return P.label(result)
