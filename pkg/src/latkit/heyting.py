"""Meet structure, implication, nuclei, and the lattice they form.

validate_structure grades a poset: meet semilattice, preframe (directed
joins exist and binary meets distribute over them), frame (all joins and
meets exist and binary meets distribute over arbitrary joins).  Nothing
is inferred from finiteness; each level is checked definitionally, so
the standard collapses for finite posets show up as results, not
assumptions.

Implication a => b is the largest x with x meet a <= b.  The table is
built once per frame and the adjunction law is verified at build time.

A nucleus is a closure operator preserving binary meets.  The formulas
here (nucsys, the double-implication nucleus, regular nuclei, core and
least nucleus above) are each paired with an independent brute-force
route over the full enumeration of nuclei; disagreement raises, loudly.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import (
    NotAFrame,
    NotANucleus,
    NotMeetSemilattice,
    NotPreframe,
    NotPrenucleus,
    TheoremBreach,
)
from .closure import (
    ClosureOperator,
    ClosureSystem,
    clsys,
    duality,
    generate_closure,
    is_closure_system,
)
from .maps import (
    EndoMap,
    identity_map,
    is_ascending,
    is_idempotent,
    is_increasing,
    is_scott_continuous,
    pointwise_leq,
    preserves_binary_meets,
)
from .order import (
    SUBSET_CAP,
    FinitePoset,
    Subset,
    bits,
    check_cap,
    directed_subsets,
    join_of,
    least_of,
    meet_of,
    meet_table,
    popcount,
    same_poset,
)


@dataclass(frozen=True)
class FrameView:
    """Validation verdict for one poset's meet and join structure."""

    poset: FinitePoset
    level: Optional[str]  # None | "meet_semilattice" | "preframe" | "frame"
    witness: Optional[str]

    def at_least(self, level: str) -> bool:
        ladder = [None, "meet_semilattice", "preframe", "frame"]
        return (
            self.level is not None
            and ladder.index(self.level) >= ladder.index(level)
        )


Frameish = Union[FinitePoset, FrameView]


def _poset_of(L: Frameish) -> FinitePoset:
    return L.poset if isinstance(L, FrameView) else L


@functools.lru_cache(maxsize=None)
def _validate_structure(P: FinitePoset) -> FrameView:
    mt = meet_table(P)
    if mt is None:
        return FrameView(P, None, "some pair of elements has no meet")
    # preframe: every directed join exists (it does, definitionally
    # confirmed) and binary meets distribute over directed joins
    for dmask, dtop in directed_subsets(P, P.n):
        for x in range(P.n):
            img = 0
            for d in bits(dmask):
                img |= 1 << mt[x][d]
            if join_of(P, img) != mt[x][dtop]:
                return FrameView(
                    P,
                    "meet_semilattice",
                    f"meet with {P.label(x)!r} does not distribute over "
                    f"the directed join of {{{', '.join(P.labels_of(dmask))}}}",
                )
    # frame: complete lattice plus full distributivity
    for m in range(P.full_mask + 1):
        if join_of(P, m) is None or meet_of(P, m) is None:
            return FrameView(
                P,
                "preframe",
                f"{{{', '.join(P.labels_of(m))}}} lacks a join or meet",
            )
    for x in range(P.n):
        row = mt[x]
        for m in range(P.full_mask + 1):
            img = 0
            for y in bits(m):
                img |= 1 << row[y]
            if join_of(P, img) != row[join_of(P, m)]:
                return FrameView(
                    P,
                    "preframe",
                    f"meet with {P.label(x)!r} does not distribute over "
                    f"the join of {{{', '.join(P.labels_of(m))}}}",
                )
    return FrameView(P, "frame", None)


def validate_structure(P: FinitePoset, cap: Optional[int] = None) -> FrameView:
    check_cap("structure validation", P.n, cap, SUBSET_CAP)
    return _validate_structure(P)


def require_frame(L: Frameish, cap: Optional[int] = None) -> FinitePoset:
    P = _poset_of(L)
    fv = validate_structure(P, cap)
    if fv.level != "frame":
        raise NotAFrame(f"not a frame: {fv.witness or 'no meets'}")
    return P


def require_preframe(L: Frameish, cap: Optional[int] = None) -> FinitePoset:
    P = _poset_of(L)
    fv = validate_structure(P, cap)
    if fv.level not in ("preframe", "frame"):
        raise NotPreframe(f"not a preframe: {fv.witness or 'no meets'}")
    return P


# ---------------------------------------------------------------------------
# implication


@functools.lru_cache(maxsize=None)
def _imp_table(P: FinitePoset) -> tuple[tuple[int, ...], ...]:
    """imp[a][b] = largest x with x meet a <= b.  Frame assumed; the
    adjunction law is verified here once and breaches are fatal."""
    mt = meet_table(P)
    assert mt is not None
    n = P.n
    imp = []
    for a in range(n):
        row = []
        for b in range(n):
            cand = 0
            for x in range(n):
                if P.le[mt[x][a]] >> b & 1:
                    cand |= 1 << x
            r = join_of(P, cand)
            if r is None or not cand >> r & 1:
                raise TheoremBreach(
                    "join of the implication solution set escaped the set; "
                    f"a={P.label(a)!r} b={P.label(b)!r}"
                )
            row.append(r)
        imp.append(tuple(row))
    for x in range(n):
        for a in range(n):
            for b in range(n):
                if (P.le[x] >> imp[a][b] & 1) != (P.le[mt[x][a]] >> b & 1):
                    raise TheoremBreach(
                        "implication adjunction failed at "
                        f"x={P.label(x)!r} a={P.label(a)!r} b={P.label(b)!r}"
                    )
    return tuple(imp)


def implication_table(L: Frameish, cap: Optional[int] = None) -> tuple[tuple[int, ...], ...]:
    P = require_frame(L, cap)
    return _imp_table(P)


def heyting_implication(L: Frameish, a: str, b: str, cap: Optional[int] = None) -> str:
    P = require_frame(L, cap)
    imp = _imp_table(P)
    return P.label(imp[P.index(a)][P.index(b)])


def adjunction_check(L: Frameish, cap: Optional[int] = None) -> bool:
    """x <= (a => b) iff x meet a <= b, for all triples."""
    P = require_frame(L, cap)
    imp = _imp_table(P)
    mt = meet_table(P)
    for x in range(P.n):
        for a in range(P.n):
            for b in range(P.n):
                if (P.le[x] >> imp[a][b] & 1) != (P.le[mt[x][a]] >> b & 1):
                    return False
    return True


def impl_image_mask(P: FinitePoset, amask: int, bmask: int) -> int:
    """Mask of all (a => b) with a in amask, b in bmask."""
    imp = _imp_table(P)
    out = 0
    for a in bits(amask):
        for b in bits(bmask):
            out |= 1 << imp[a][b]
    return out


# ---------------------------------------------------------------------------
# prenuclei and nuclei


def is_prenucleus(f: EndoMap) -> bool:
    """Ascending and binary-meet-preserving.

    Such a map is automatically increasing; that implication is
    re-derived here and its failure is an internal error.
    """
    if meet_table(f.poset) is None:
        raise NotMeetSemilattice("prenuclei need pairwise meets")
    ok = is_ascending(f) and bool(preserves_binary_meets(f))
    if ok and not is_increasing(f):
        raise TheoremBreach(
            f"meet-preserving ascending map {f!r} is not increasing"
        )
    return ok


def is_nucleus_map(f: EndoMap) -> bool:
    return is_prenucleus(f) and is_idempotent(f)


@dataclass(frozen=True)
class Nucleus:
    """A closure operator preserving binary meets."""

    op: ClosureOperator

    def __post_init__(self):
        if meet_table(self.op.poset) is None:
            raise NotMeetSemilattice("nuclei need pairwise meets")
        if not preserves_binary_meets(self.op.map):
            raise NotANucleus(
                f"{self.op.map!r} does not preserve binary meets"
            )

    @property
    def poset(self) -> FinitePoset:
        return self.op.poset

    @property
    def table(self) -> tuple[int, ...]:
        return self.op.table

    def __call__(self, i: int) -> int:
        return self.op.table[i]

    def apply_label(self, label: str) -> str:
        return self.op.apply_label(label)

    @property
    def fix_mask(self) -> int:
        return self.op.fix_mask

    @property
    def fix(self) -> Subset:
        return self.op.fix

    def leq(self, other: "Nucleus") -> bool:
        return pointwise_leq(self.op.map, other.op.map)

    def __repr__(self):
        return f"Nucleus({self.op.map.as_labels()!r})"


def identity_nucleus(P: FinitePoset) -> Nucleus:
    return Nucleus(ClosureOperator(identity_map(P)))


def nucleus_meet(a: Nucleus, b: Nucleus) -> Nucleus:
    """Pointwise meet; a nucleus again, by theorem rather than by luck."""
    P = same_poset(a.poset, b.poset)
    mt = meet_table(P)
    if mt is None:
        raise NotMeetSemilattice("nucleus meet needs pairwise meets")
    table = tuple(mt[x][y] for x, y in zip(a.table, b.table))
    try:
        return Nucleus(ClosureOperator(EndoMap(P, table)))
    except Exception as e:
        raise TheoremBreach(
            f"pointwise meet of two nuclei is not a nucleus: {e}"
        ) from e


def fix_of_meet_check(a: Nucleus, b: Nucleus) -> bool:
    """Fixpoints of the meet are exactly pairwise meets of fixpoints."""
    P = same_poset(a.poset, b.poset)
    mt = meet_table(P)
    got = nucleus_meet(a, b).fix_mask
    want = 0
    for x in bits(a.fix_mask):
        for y in bits(b.fix_mask):
            want |= 1 << mt[x][y]
    if got != want:
        raise TheoremBreach(
            "fixpoints of a nucleus meet are not the meets of fixpoints"
        )
    return True


def nucleus_join(
    Gamma: Sequence[EndoMap],
    poset: Optional[FinitePoset] = None,
    cap: Optional[int] = None,
) -> Nucleus:
    """Join of a family of prenuclei on a preframe: the generated
    closure operator, which the generation theorem promises is a
    nucleus.  The empty family yields the identity."""
    maps = [g.op.map if isinstance(g, Nucleus) else g for g in Gamma]
    if maps:
        P = same_poset(*(m.poset for m in maps))
        if poset is not None:
            same_poset(P, poset)
    elif poset is None:
        raise ValueError("an empty family needs an explicit poset")
    else:
        P = poset
    require_preframe(P, cap)
    for m in maps:
        if not is_prenucleus(m):
            raise NotPrenucleus(f"{m!r} is not a prenucleus")
    gen = generate_closure(maps, P)
    try:
        return Nucleus(gen)
    except NotANucleus as e:
        raise TheoremBreach(
            f"generated join of prenuclei failed to preserve meets: {e}"
        ) from e


@functools.lru_cache(maxsize=None)
def _nuclei_masks(P: FinitePoset) -> tuple[int, ...]:
    out = []
    for m in _closure_masks_for(P):
        if preserves_binary_meets(duality(ClosureSystem(Subset(P, m))).map):
            out.append(m)
    return tuple(out)


def _closure_masks_for(P: FinitePoset) -> tuple[int, ...]:
    # module-local alias so the cache above stays cap-free; callers have
    # already passed the cap gate
    from .closure import _closure_system_masks

    return _closure_system_masks(P)


def enumerate_nuclei(L: Frameish, cap: Optional[int] = None) -> list[Nucleus]:
    """All nuclei, listed along a linear extension of the pointwise
    order: larger fixpoint sets (smaller nuclei) first."""
    P = _poset_of(L)
    if meet_table(P) is None:
        raise NotMeetSemilattice("nuclei need pairwise meets")
    check_cap("nucleus enumeration", P.n, cap, SUBSET_CAP)
    masks = sorted(_nuclei_masks(P), key=lambda m: (-popcount(m), m))
    return [Nucleus(duality(ClosureSystem(Subset(P, m)))) for m in masks]


# ---------------------------------------------------------------------------
# nuclear systems


def is_nuclear_system(L: Frameish, X: Subset, cap: Optional[int] = None) -> bool:
    """X is the fixpoint set of some nucleus.

    Decided two ways: by membership in the enumerated fixpoint sets, and
    by the implication characterization (a closure system that absorbs
    a => x for every a and every x in it).  The two must agree.
    """
    P = require_frame(L, cap)
    same_poset(P, X.poset)
    by_enum = X.mask in _nuclei_masks(P)
    by_impl = is_closure_system(X) and (
        impl_image_mask(P, P.full_mask, X.mask) & ~X.mask == 0
    )
    if by_enum != by_impl:
        raise TheoremBreach(
            "nuclear-system characterization through implication "
            f"disagrees with enumeration on {{{', '.join(X.labels)}}}"
        )
    return by_enum


def nucsys(
    L: Frameish, X: Subset, cap: Optional[int] = None, method: str = "both"
) -> Subset:
    """Least nuclear system containing X.

    'definitional' intersects the nuclear systems containing X;
    'formula' closes the implication image L => X under clsys; 'both'
    compares them.
    """
    P = require_frame(L, cap)
    same_poset(P, X.poset)
    if method not in ("definitional", "formula", "both"):
        raise ValueError(f"unknown method {method!r}")
    by_def = by_formula = None
    if method in ("definitional", "both"):
        inter = P.full_mask
        for m in _nuclei_masks(P):
            if X.mask & ~m == 0:
                inter &= m
        if inter not in _nuclei_masks(P):
            raise TheoremBreach(
                "intersection of nuclear systems is not a nuclear system"
            )
        by_def = inter
    if method in ("formula", "both"):
        by_formula = clsys(
            Subset(P, impl_image_mask(P, P.full_mask, X.mask)), cap
        ).mask
    if method == "both" and by_def != by_formula:
        raise TheoremBreach(
            "least nuclear system by intersection and by the implication "
            f"formula disagree on {{{', '.join(X.labels)}}}"
        )
    return Subset(P, by_def if by_def is not None else by_formula)


def nuc_map(L: Frameish, X: Subset, cap: Optional[int] = None) -> Nucleus:
    """The nucleus y -> meet over x in X of ((y => x) => x).

    Its fixpoints are the least nuclear system containing X; that
    equality is checked on every call.
    """
    P = require_frame(L, cap)
    same_poset(P, X.poset)
    imp = _imp_table(P)
    table = []
    for y in range(P.n):
        vals = 0
        for x in bits(X.mask):
            vals |= 1 << imp[imp[y][x]][x]
        v = meet_of(P, vals)  # empty meet is the top, which a frame has
        if v is None:
            raise TheoremBreach("double-implication meet does not exist")
        table.append(v)
    try:
        nu = Nucleus(ClosureOperator(EndoMap(P, tuple(table))))
    except Exception as e:
        raise TheoremBreach(
            f"double-implication formula did not produce a nucleus: {e}"
        ) from e
    want = nucsys(L, X, cap, method="both").mask
    if nu.fix_mask != want:
        raise TheoremBreach(
            "fixpoints of the double-implication nucleus differ from the "
            f"least nuclear system around {{{', '.join(X.labels)}}}"
        )
    return nu


def regular_nucleus(L: Frameish, x: str, cap: Optional[int] = None) -> Nucleus:
    """The nucleus y -> ((y => x) => x); fixpoints are L => x."""
    P = require_frame(L, cap)
    nu = nuc_map(L, Subset.of(P, [x]), cap)
    want = impl_image_mask(P, P.full_mask, 1 << P.index(x))
    if nu.fix_mask != want:
        raise TheoremBreach(
            f"fixpoints of the regular nucleus at {x!r} are not the "
            "implication image of the poset into it"
        )
    return nu


def least_nucleus_above(
    L: Frameish, gamma: ClosureOperator, cap: Optional[int] = None
) -> Nucleus:
    """Least nucleus above a closure operator on a frame.

    Formula route: the pointwise meet of the regular nuclei at those
    fixpoints x of gamma with gamma below the regular nucleus at x.
    Brute-force route: scan all nuclei above gamma for a least one.
    Both must agree, and the fixpoint set must match its two known
    descriptions.
    """
    P = require_frame(L, cap)
    same_poset(P, gamma.poset)
    imp = _imp_table(P)
    mt = meet_table(P)
    cmask = gamma.fix_mask

    def regular_table(x: int) -> tuple[int, ...]:
        return tuple(imp[imp[y][x]][x] for y in range(P.n))

    chosen = []
    for x in bits(cmask):
        rt = regular_table(x)
        if all(P.le[gamma.table[y]] >> rt[y] & 1 for y in range(P.n)):
            chosen.append(rt)
    table = []
    for y in range(P.n):
        vals = 0
        for rt in chosen:
            vals |= 1 << rt[y]
        v = meet_of(P, vals)
        if v is None:
            raise TheoremBreach("meet of regular nuclei does not exist")
        table.append(v)
    try:
        nu = Nucleus(ClosureOperator(EndoMap(P, tuple(table))))
    except Exception as e:
        raise TheoremBreach(
            f"meet of regular nuclei is not a nucleus: {e}"
        ) from e
    # fixpoint set, two descriptions
    want_in_c = 0
    for x in bits(cmask):
        if impl_image_mask(P, P.full_mask, 1 << x) & ~cmask == 0:
            want_in_c |= 1 << x
    want_in_l = 0
    for x in range(P.n):
        if impl_image_mask(P, P.full_mask, 1 << x) & ~cmask == 0:
            want_in_l |= 1 << x
    if not (nu.fix_mask == want_in_c == want_in_l):
        raise TheoremBreach(
            "fixpoint set of the least nucleus above an operator does not "
            "match its implication description"
        )
    # brute force
    above = [
        n2
        for n2 in enumerate_nuclei(L, cap)
        if pointwise_leq(gamma.map, n2.op.map)
    ]
    least = None
    for n2 in above:
        if all(pointwise_leq(n2.op.map, o.op.map) for o in above):
            least = n2
            break
    if least is None or least.table != nu.table:
        raise TheoremBreach(
            "formula and enumeration disagree on the least nucleus above "
            "a closure operator"
        )
    return nu


def nuclear_core(
    L: Frameish, gamma: ClosureOperator, cap: Optional[int] = None
) -> Nucleus:
    """Greatest nucleus below a closure operator on a frame.

    Formula route: the double-implication nucleus of gamma's image.
    Brute-force route: scan all nuclei below gamma for a greatest one.
    """
    P = require_frame(L, cap)
    same_poset(P, gamma.poset)
    image = 0
    for v in gamma.table:
        image |= 1 << v
    nu = nuc_map(L, Subset(P, image), cap)
    below = [
        n2
        for n2 in enumerate_nuclei(L, cap)
        if pointwise_leq(n2.op.map, gamma.map)
    ]
    greatest = None
    for n2 in below:
        if all(pointwise_leq(o.op.map, n2.op.map) for o in below):
            greatest = n2
            break
    if greatest is None or greatest.table != nu.table:
        raise TheoremBreach(
            "formula and enumeration disagree on the greatest nucleus "
            "below a closure operator"
        )
    if not pointwise_leq(nu.op.map, gamma.map):
        raise TheoremBreach("nuclear core sits above its operator")
    return nu


# ---------------------------------------------------------------------------
# the lattice of nuclei


def frame_of_nuclei_check(
    L: Frameish,
    cap: Optional[int] = None,
    exhaustive_limit: int = 8,
    sample_count: int = 40,
) -> dict:
    """Structure report for the poset of all nuclei on a preframe.

    Verifies: complete lattice; joins agree with fixpoint-set
    intersection (the generation route); nonempty family meets are
    pointwise; binary meets distribute over joins of families; every
    nucleus is Scott continuous.  Families
    are quantified exhaustively when at most exhaustive_limit nuclei
    exist, else over all pairs (or a pair sample when even pairs blow
    up) plus a fixed-seed sample of larger families.  Any law failure
    raises; the returned report is for humans.

    Law comparisons run on raw tables.  The theorem that a generated
    join is itself a nucleus is probed through the validating
    constructor on a bounded slice of the families.
    """
    P = require_preframe(L, cap)
    nucs = enumerate_nuclei(L, cap)
    k = len(nucs)
    mt = meet_table(P)
    tables = [nu.table for nu in nucs]
    fixes = [nu.fix_mask for nu in nucs]
    le = P.le
    leq = [
        [
            all(le[a[y]] >> b[y] & 1 for y in range(P.n))
            for b in tables
        ]
        for a in tables
    ]
    order_pairs = [
        (i, j) for i in range(k) for j in range(k) if i != j and leq[i][j]
    ]

    def glb(idxs) -> Optional[int]:
        cand = [m for m in range(k) if all(leq[m][i] for i in idxs)]
        for c in cand:
            if all(leq[o][c] for o in cand):
                return c
        return None

    def lub(idxs) -> Optional[int]:
        cand = [m for m in range(k) if all(leq[i][m] for i in idxs)]
        for c in cand:
            if all(leq[c][o] for o in cand):
                return c
        return None

    def join_table(idxs) -> tuple[int, ...]:
        # the generation route: intersect fixpoint sets, read the
        # operator back off the intersection
        fm = P.full_mask
        for i in idxs:
            fm &= fixes[i]
        out = []
        for x in range(P.n):
            v = least_of(P, fm & le[x])
            if v is None:
                raise TheoremBreach(
                    "intersection of nuclear fixpoint sets is not a "
                    "closure system"
                )
            out.append(v)
        return tuple(out)

    def meet_table_of(idxs) -> tuple[int, ...]:
        out = []
        for y in range(P.n):
            v = None
            for i in idxs:
                v = tables[i][y] if v is None else mt[v][tables[i][y]]
            out.append(v)
        return tuple(out)

    exhaustive = k <= exhaustive_limit
    rng = random.Random(97)
    families: list[tuple[int, ...]] = []
    if exhaustive:
        for m in range(1 << k):
            families.append(tuple(bits(m)))
    else:
        families.append(())
        families.append(tuple(range(k)))
        if k * k <= 4096:
            for i in range(k):
                for j in range(i, k):
                    families.append((i, j))
        else:
            for _ in range(sample_count):
                families.append((rng.randrange(k), rng.randrange(k)))
        for _ in range(sample_count):
            size = rng.randrange(1, min(k, 6) + 1)
            families.append(tuple(sorted(rng.sample(range(k), size))))

    by_table = {t: i for i, t in enumerate(tables)}

    for fam in families:
        g, l = glb(fam), lub(fam)
        if g is None or l is None:
            raise TheoremBreach(
                f"nuclei do not form a complete lattice: {fam!r} lacks a bound"
            )
        jt = join_table(fam)
        if jt not in by_table or by_table[jt] != l:
            raise TheoremBreach(
                "join of nuclei by fixpoint intersection is not their "
                "least upper bound"
            )
        if fam:
            # nonempty pointwise meets always exist here, and the meet
            # of nuclei must be pointwise; frames get no special case
            if meet_table_of(fam) != tables[g]:
                raise TheoremBreach(
                    "meet of a nonempty nucleus family is not pointwise"
                )

    # frame law: binary meets distribute over family joins
    for b in range(k):
        tb = tables[b]
        for fam in families:
            jt = join_table(fam)
            lhs = tuple(mt[x][y] for x, y in zip(tb, jt))
            met_fixes = []
            for i in fam:
                t = tuple(mt[x][y] for x, y in zip(tb, tables[i]))
                fmask = 0
                for z, v in enumerate(t):
                    if z == v:
                        fmask |= 1 << z
                met_fixes.append(fmask)
            fm = P.full_mask
            for f in met_fixes:
                fm &= f
            rhs = tuple(least_of(P, fm & le[x]) for x in range(P.n))
            if lhs != rhs:
                raise TheoremBreach(
                    "binary meet fails to distribute over a join of nuclei"
                )

    # theorem probe with full validation on a bounded slice
    probe = families if exhaustive else families[:18]
    for fam in probe:
        gen = nucleus_join([nucs[i] for i in fam], P, cap)
        if gen.table != join_table(fam):
            raise TheoremBreach(
                "validated generation disagrees with fixpoint intersection"
            )

    for nu in nucs:
        if not is_scott_continuous(nu.op.map, cap):
            raise TheoremBreach("a nucleus failed Scott continuity")

    bot = glb(tuple(range(k)))
    top = lub(tuple(range(k)))
    return {
        "nucleus_count": k,
        "nuclei": [nu.fix.labels for nu in nucs],
        "order_pairs": order_pairs,
        "is_complete_lattice": True,
        "exhaustive": exhaustive,
        "bottom_is_identity": tables[bot] == tuple(range(P.n)),
        "top_fix": nucs[top].fix.labels,
        "meets_pointwise": True,
        "all_scott_continuous": True,
    }
