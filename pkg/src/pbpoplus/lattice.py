"""Finite complete lattices of labels.

A :class:`LabelLattice` is given explicitly by its element set and order
relation; the constructor closes the relation reflexively and transitively.
Joins and meets are computed by scanning candidate bounds, so no
distributivity or modularity is assumed.  All lattices used for rewriting
are finite, which keeps exhaustive axiom checking feasible
(:func:`validate_lattice`).

Two ready-made lattices are provided: the one-point lattice used for
plain (unlabeled) graph rewriting, and the BDD label lattice over a set of
decision variables, truth values 0/1, one class label above each of the two
families, and global top/bottom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .errors import LatticeError, Report, UnknownLabelError

# Canonical label names used by the BDD lattice.
TOP = "top"
BOTTOM = "bot"
VAR_CLASS = "Var"
BOOL_CLASS = "Bool"
FALSE = "0"
TRUE = "1"

UNIT_ELEMENT = "*"


def _transitive_closure(elements: frozenset[str],
                        pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    above: dict[str, set[str]] = {e: {e} for e in elements}
    for a, b in pairs:
        if a in above:
            above[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elements:
            new = set()
            for b in above[a]:
                new |= above.get(b, {b})
            if not new <= above[a]:
                above[a] |= new
                changed = True
    return frozenset((a, b) for a in elements for b in above[a])


@dataclass(frozen=True)
class LabelLattice:
    """A finite poset with designated top and bottom.

    ``order`` always stores the reflexive-transitive closure of the relation
    given at construction time.  ``top``/``bottom`` may be ``None`` for
    deliberately broken fixtures; :func:`validate_lattice` reports on them.
    """

    elements: frozenset[str]
    order: frozenset[tuple[str, str]]
    top: Optional[str] = None
    bottom: Optional[str] = None

    @staticmethod
    def from_order(elements: Iterable[str],
                   pairs: Iterable[tuple[str, str]],
                   top: Optional[str] = None,
                   bottom: Optional[str] = None) -> "LabelLattice":
        elems = frozenset(elements)
        closed = _transitive_closure(elems, pairs)
        return LabelLattice(elems, closed, top, bottom)

    @cached_property
    def _above(self) -> dict[str, frozenset[str]]:
        up: dict[str, set[str]] = {e: set() for e in self.elements}
        for a, b in self.order:
            up[a].add(b)
        return {e: frozenset(s) for e, s in up.items()}

    def _check_member(self, label: str) -> None:
        if label not in self.elements:
            raise UnknownLabelError(f"label {label!r} is not in the lattice")

    def leq(self, a: str, b: str) -> bool:
        """True iff ``a`` is below or equal to ``b``."""
        self._check_member(a)
        self._check_member(b)
        return b in self._above[a]

    def join(self, labels: Iterable[str]) -> str:
        """Least upper bound of ``labels``; the bottom element for no labels."""
        items = list(labels)
        for x in items:
            self._check_member(x)
        if not items:
            if self.bottom is None:
                raise LatticeError("join of no labels needs a bottom element")
            return self.bottom
        uppers = [u for u in self.elements
                  if all(u in self._above[x] for x in items)]
        least = [u for u in uppers if all(v in self._above[u] for v in uppers)]
        if len(least) != 1:
            raise LatticeError(f"no unique supremum for {sorted(items)}")
        return least[0]

    def meet(self, labels: Iterable[str]) -> str:
        """Greatest lower bound of ``labels``; the top element for no labels."""
        items = list(labels)
        for x in items:
            self._check_member(x)
        if not items:
            if self.top is None:
                raise LatticeError("meet of no labels needs a top element")
            return self.top
        lowers = [l for l in self.elements
                  if all(x in self._above[l] for x in items)]
        greatest = [l for l in lowers if all(l in self._above[v] for v in lowers)]
        if len(greatest) != 1:
            raise LatticeError(f"no unique infimum for {sorted(items)}")
        return greatest[0]

    def sorted_elements(self) -> list[str]:
        return sorted(self.elements)


def unit_lattice() -> LabelLattice:
    """The one-point lattice; labels carry no information over it."""
    return LabelLattice.from_order([UNIT_ELEMENT], [], top=UNIT_ELEMENT,
                                   bottom=UNIT_ELEMENT)


def bdd_lattice(variables: Iterable[str]) -> LabelLattice:
    """The BDD label lattice over the given decision variables.

    Elements are the variables, the truth values ``0`` and ``1``, the class
    labels ``Var`` (above every variable) and ``Bool`` (above both truth
    values), and global ``top``/``bot``.  The variable family and the
    boolean family are incomparable except through top and bottom.
    """
    names = list(variables)
    seen = set()
    for v in names:
        if v in seen:
            raise LatticeError(f"duplicate-variable: {v!r}")
        seen.add(v)
    reserved = {TOP, BOTTOM, VAR_CLASS, BOOL_CLASS, FALSE, TRUE}
    clash = seen & reserved
    if clash:
        raise LatticeError(f"variable names collide with reserved labels: {sorted(clash)}")
    elements = names + [FALSE, TRUE, VAR_CLASS, BOOL_CLASS, TOP, BOTTOM]
    pairs: list[tuple[str, str]] = [(BOTTOM, TOP)]
    for v in names:
        pairs.append((v, VAR_CLASS))
        pairs.append((BOTTOM, v))
    for b in (FALSE, TRUE):
        pairs.append((b, BOOL_CLASS))
        pairs.append((BOTTOM, b))
    pairs.append((VAR_CLASS, TOP))
    pairs.append((BOOL_CLASS, TOP))
    return LabelLattice.from_order(elements, pairs, top=TOP, bottom=BOTTOM)


def validate_lattice(lat: LabelLattice, subset_cap: int = 2) -> Report:
    """Brute-force check of the complete-lattice axioms.

    Reflexivity, antisymmetry and transitivity are checked by enumeration.
    Existence and uniqueness of suprema and infima are checked for every
    subset when the lattice has at most 12 elements, otherwise for all
    subsets up to ``subset_cap`` plus the empty set.
    """
    report = Report()
    elems = sorted(lat.elements)
    above = lat._above
    for a in elems:
        if a not in above[a]:
            report.add("reflexivity", f"{a!r} is not related to itself")
    for a in elems:
        for b in above[a]:
            if b != a and a in above[b]:
                report.add("antisymmetry", f"{a!r} and {b!r} are mutually related")
    for a in elems:
        for b in above[a]:
            for c in above[b]:
                if c not in above[a]:
                    report.add("transitivity", f"{a!r} <= {b!r} <= {c!r} but not {a!r} <= {c!r}")

    if len(elems) <= 12:
        subsets: Iterable[tuple[str, ...]] = itertools.chain.from_iterable(
            itertools.combinations(elems, k) for k in range(len(elems) + 1))
    else:
        subsets = itertools.chain.from_iterable(
            itertools.combinations(elems, k) for k in range(subset_cap + 1))
    for subset in subsets:
        uppers = [u for u in elems if all(u in above[x] for x in subset)]
        least = [u for u in uppers if all(v in above[u] for v in uppers)]
        if len(least) != 1:
            report.add("missing-supremum", f"subset {list(subset)} has no unique join")
        lowers = [l for l in elems if all(x in above[l] for x in subset)]
        greatest = [l for l in lowers if all(l in above[v] for v in lowers)]
        if len(greatest) != 1:
            report.add("missing-infimum", f"subset {list(subset)} has no unique meet")

    if lat.top is not None:
        if lat.top not in lat.elements:
            report.add("bad-top", f"top {lat.top!r} is not an element")
        elif any(lat.top not in above[x] for x in elems):
            report.add("bad-top", f"{lat.top!r} is not above every element")
    elif elems:
        report.add("bad-top", "no top element designated")
    if lat.bottom is not None:
        if lat.bottom not in lat.elements:
            report.add("bad-bottom", f"bottom {lat.bottom!r} is not an element")
        elif any(x not in above[lat.bottom] for x in elems):
            report.add("bad-bottom", f"{lat.bottom!r} is not below every element")
    elif elems:
        report.add("bad-bottom", "no bottom element designated")
    return report
