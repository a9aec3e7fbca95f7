"""Built-in small monoids, groups and internal categories used by the suites.

Multiplication tables are row-major and diagrammatic: ``table[i][j]`` is
"i then j", matching the composition convention of the engine.  Every
table is re-verified at construction, so the catalog is self-certifying.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedTables, NotAGroup
from .finset import FinMap, FinSet, identity
from .internal import InternalCategory, InternalGroupoid


@dataclass(frozen=True)
class MonoidTable:
    """A monoid given by its Cayley table, with the unit made explicit."""

    name: str
    size: int
    table: tuple[int, ...]  # row-major: table[i * size + j] = "i then j"
    unit: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(self.table))
        n = self.size
        if len(self.table) != n * n:
            raise MalformedTables(f"Cayley table for {self.name} must have {n * n} entries")
        if any(not 0 <= v < n for v in self.table):
            raise MalformedTables(f"Cayley table for {self.name} has out-of-range entries")
        if not 0 <= self.unit < n:
            raise MalformedTables(f"unit of {self.name} out of range")
        for i in range(n):
            if self.mult(self.unit, i) != i or self.mult(i, self.unit) != i:
                raise MalformedTables(f"{self.name}: {self.unit} is not a two-sided unit")
        for a in range(n):
            for b in range(n):
                ab = self.mult(a, b)
                for c in range(n):
                    if self.mult(ab, c) != self.mult(a, self.mult(b, c)):
                        raise MalformedTables(f"{self.name}: associativity fails at ({a},{b},{c})")

    def mult(self, i: int, j: int) -> int:
        return self.table[i * self.size + j]

    def inverse_table(self) -> tuple[int, ...]:
        """Two-sided inverses for every element; NotAGroup if any is missing."""
        inv = []
        for a in range(self.size):
            found = None
            for b in range(self.size):
                if self.mult(a, b) == self.unit and self.mult(b, a) == self.unit:
                    found = b
                    break
            if found is None:
                raise NotAGroup(f"{self.name}: element {a} has no two-sided inverse")
            inv.append(found)
        return tuple(inv)

    def is_group(self) -> bool:
        try:
            self.inverse_table()
        except NotAGroup:
            return False
        return True


def monoid_from_rows(name: str, rows) -> MonoidTable:
    n = len(rows)
    flat = tuple(v for row in rows for v in row)
    unit = None
    for e in range(n):
        if all(flat[e * n + i] == i and flat[i * n + e] == i for i in range(n)):
            unit = e
            break
    if unit is None:
        raise MalformedTables(f"{name}: no two-sided unit")
    return MonoidTable(name, n, flat, unit)


def monoid_from_flat(name: str, size: int, flat) -> MonoidTable:
    if len(flat) != size * size:
        raise MalformedTables(f"{name}: flat Cayley table must have {size * size} entries")
    return monoid_from_rows(name, [list(flat[i * size : (i + 1) * size]) for i in range(size)])


def cyclic_group(n: int) -> MonoidTable:
    return monoid_from_rows(f"z{n}", [[(i + j) % n for j in range(n)] for i in range(n)])


def klein_four() -> MonoidTable:
    return monoid_from_rows("klein4", [[i ^ j for j in range(4)] for i in range(4)])


def xor_group(bits: int) -> MonoidTable:
    n = 1 << bits
    return monoid_from_rows(f"xor{bits}", [[i ^ j for j in range(n)] for i in range(n)])


def meet_semilattice() -> MonoidTable:
    # {0, 1} under minimum; the unit is the top element 1.
    return monoid_from_rows("and2", [[0, 0], [0, 1]])


def left_zero_adjoined() -> MonoidTable:
    # Two-element left-zero semigroup {1, 2} with adjoined unit 0:
    # away from the unit, "x then y" keeps x.  Non-commutative.
    return monoid_from_rows("leftzero3", [[0, 1, 2], [1, 1, 1], [2, 2, 2]])


def trivial_monoid() -> MonoidTable:
    return monoid_from_rows("trivial", [[0]])


MONOIDS: dict[str, MonoidTable] = {
    m.name: m
    for m in (
        trivial_monoid(),
        cyclic_group(2),
        meet_semilattice(),
        cyclic_group(3),
        left_zero_adjoined(),
        cyclic_group(4),
        klein_four(),
    )
}

GROUPS: dict[str, MonoidTable] = {name: m for name, m in MONOIDS.items() if m.is_group()}


def one_object_category(monoid: MonoidTable) -> InternalCategory:
    """A monoid presented as an internal category on one object.

    Over one object every pair of arrows is composable, so the composition
    table is the Cayley table flattened in lexicographic pair order.
    """
    o = FinSet(1)
    m = FinSet(monoid.size)
    to_o = FinMap(m, o, (0,) * monoid.size)
    eta = FinMap(o, m, (monoid.unit,))
    apex = FinSet(monoid.size * monoid.size)
    mu = FinMap(apex, m, monoid.table)
    return InternalCategory(o, m, to_o, to_o, eta, mu)


def one_object_groupoid(group: MonoidTable) -> InternalGroupoid:
    cat = one_object_category(group)
    iota = FinMap(cat.m, cat.m, group.inverse_table())
    return InternalGroupoid(cat, iota)


def discrete_category(n: int, labels: tuple[str, ...] | None = None) -> InternalGroupoid:
    """Only identity arrows: M = O, all structure maps identities."""
    o = FinSet(n, labels)
    ident = identity(o)
    composable_count = n  # only (x, x) pairs
    mu = FinMap(FinSet(composable_count), o, tuple(range(n)))
    cat = InternalCategory(o, o, ident, ident, ident, mu)
    return InternalGroupoid(cat, ident)


def pair_groupoid(n: int) -> InternalGroupoid:
    """Arrows are ordered pairs (a, b): one arrow from a to b for all a, b.

    Arrow (a, b) is the element a * n + b; composition is
    (a, b) then (b, c) = (a, c), units are the diagonal pairs and the
    inverse of (a, b) is (b, a).
    """
    o = FinSet(n)
    m = FinSet(n * n)
    d = FinMap(m, o, tuple(x // n for x in range(n * n)))
    c = FinMap(m, o, tuple(x % n for x in range(n * n)))
    eta = FinMap(o, m, tuple(a * n + a for a in range(n)))
    pairs = [
        (x, y) for x in range(n * n) for y in range(n * n) if c.table[x] == d.table[y]
    ]
    mu = FinMap(FinSet(len(pairs)), m, tuple((x // n) * n + (y % n) for x, y in pairs))
    iota = FinMap(m, m, tuple((x % n) * n + (x // n) for x in range(n * n)))
    return InternalGroupoid(InternalCategory(o, m, d, c, eta, mu), iota)


def action_groupoid_z2() -> InternalGroupoid:
    """The group of order two acting on a two-point set by the swap.

    Objects are the two points; arrows are pairs (point, group element)
    encoded as point * 2 + g, running from the point to its image.
    """
    o = FinSet(2)
    m = FinSet(4)
    d = FinMap(m, o, tuple(x // 2 for x in range(4)))
    c = FinMap(m, o, tuple((x // 2) ^ (x % 2) for x in range(4)))
    eta = FinMap(o, m, (0, 2))
    pairs = [(x, y) for x in range(4) for y in range(4) if c.table[x] == d.table[y]]
    mu_table = []
    for x, y in pairs:
        point, g = x // 2, x % 2
        h = y % 2
        mu_table.append(point * 2 + (g ^ h))
    mu = FinMap(FinSet(len(pairs)), m, tuple(mu_table))
    iota = FinMap(m, m, tuple(((x // 2) ^ (x % 2)) * 2 + (x % 2) for x in range(4)))
    return InternalGroupoid(InternalCategory(o, m, d, c, eta, mu), iota)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    category: InternalCategory
    iota: FinMap | None = None

    @property
    def groupoid(self) -> InternalGroupoid | None:
        if self.iota is None:
            return None
        return InternalGroupoid(self.category, self.iota)


def _entries() -> dict[str, CatalogEntry]:
    discrete = discrete_category(2)
    z2 = one_object_groupoid(MONOIDS["z2"])
    klein = one_object_groupoid(MONOIDS["klein4"])
    and2 = one_object_category(MONOIDS["and2"])
    pair2 = pair_groupoid(2)
    action = action_groupoid_z2()
    return {
        "discrete2": CatalogEntry("discrete2", discrete.cat, discrete.iota),
        "z2": CatalogEntry("z2", z2.cat, z2.iota),
        "klein4": CatalogEntry("klein4", klein.cat, klein.iota),
        "and2": CatalogEntry("and2", and2),
        "pair2": CatalogEntry("pair2", pair2.cat, pair2.iota),
        "action2": CatalogEntry("action2", action.cat, action.iota),
    }


CATALOG: dict[str, CatalogEntry] = _entries()
