"""Small named posets used throughout the tests and documentation."""

from .order import FinitePoset, build_poset


def point() -> FinitePoset:
    return build_poset(["*"], [])


def c2() -> FinitePoset:
    """Two-element chain 0 < 1."""
    return build_poset(["0", "1"], [("0", "1")])


def c3() -> FinitePoset:
    """Three-element chain 0 < 1 < 2."""
    return build_poset(["0", "1", "2"], [("0", "1"), ("1", "2")])


def v4() -> FinitePoset:
    """Two incomparable lower elements c, d under two incomparable
    upper elements a, b.  Not a meet semilattice."""
    return build_poset(
        ["a", "b", "c", "d"],
        [("c", "a"), ("c", "b"), ("d", "a"), ("d", "b")],
    )


def b2() -> FinitePoset:
    """The four-element Boolean lattice 0 < a, b < 1."""
    return build_poset(
        ["0", "a", "b", "1"],
        [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )


def topfree() -> FinitePoset:
    """A meet semilattice with two maximal elements and no top.

    0 < a < u, 0 < b < u, 0 < v.  Useful because the lattice of closure
    operators and the lattice of nuclei genuinely differ on it.
    """
    return build_poset(
        ["0", "a", "b", "u", "v"],
        [("0", "a"), ("0", "b"), ("a", "u"), ("b", "u"), ("0", "v")],
    )


def chain(k: int) -> FinitePoset:
    labels = [str(i) for i in range(k)]
    return build_poset(labels, [(str(i), str(i + 1)) for i in range(k - 1)])


def antichain(k: int) -> FinitePoset:
    return build_poset([str(i) for i in range(k)], [])


def diamond() -> FinitePoset:
    """0 < a, b, c < 1: a modular, non-distributive lattice."""
    return build_poset(
        ["0", "a", "b", "c", "1"],
        [
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
    )
