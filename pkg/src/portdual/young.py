"""Young diagrams, the box-adding lattice, standard tableaux, and the two
dimension formulas (hook length and hook content).

Everything in this module is exact: multiplicities and dimensions are Python
big integers, and diagrams/tableaux are immutable tuples.  The canonical
diagram order is descending lexicographic on the row vectors, e.g. (3) comes
before (2,1); the canonical tableau order is ascending lexicographic on the
row-reading word.  Every matrix and vector in the rest of the package inherits
these orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterator

Tableau = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class YoungDiagram:
    """A partition of n, drawn as non-increasing rows of boxes.

    The empty diagram ``YoungDiagram(())`` is valid and has zero boxes.
    """

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(r <= 0 for r in rows):
            raise ValueError(f"row lengths must be positive: {rows}")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ValueError(f"row lengths must be non-increasing: {rows}")
        object.__setattr__(self, "_boxes", sum(rows))

    @property
    def boxes(self) -> int:
        return self._boxes  # type: ignore[attr-defined]

    @property
    def depth(self) -> int:
        return len(self.rows)

    def cells(self) -> Iterator[tuple[int, int]]:
        """All (row, col) cells, 0-based."""
        for i, r in enumerate(self.rows):
            for j in range(r):
                yield i, j

    def conjugate(self) -> "YoungDiagram":
        if not self.rows:
            return self
        cols = tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0]))
        return YoungDiagram(cols)

    def hook(self, i: int, j: int) -> int:
        """Hook length of cell (i, j), 0-based: arm + leg + 1."""
        arm = self.rows[i] - j - 1
        leg = sum(1 for r in self.rows[i + 1:] if r > j)
        return arm + leg + 1

    def to_list(self) -> list[int]:
        return list(self.rows)

    def label(self) -> str:
        """Compact serialized form, e.g. ``[2,1]``; the empty diagram is ``[]``."""
        return "[" + ",".join(str(r) for r in self.rows) + "]"

    @classmethod
    def from_rows(cls, rows) -> "YoungDiagram":
        return cls(tuple(rows))

    def __repr__(self) -> str:
        return f"YoungDiagram({self.label()})"


EMPTY = YoungDiagram(())


@dataclass(frozen=True)
class DiagramIndex:
    """The ordered set of diagrams with ``n`` boxes and depth at most ``d``.

    The order is canonical (descending lexicographic) and identical across
    runs, so it fixes row/column order of every derived matrix and vector.
    """

    n: int
    d: int
    diagrams: tuple[YoungDiagram, ...]

    @cached_property
    def _positions(self) -> dict[YoungDiagram, int]:
        return {a: i for i, a in enumerate(self.diagrams)}

    def position(self, diagram: YoungDiagram) -> int:
        try:
            return self._positions[diagram]
        except KeyError:
            raise KeyError(f"{diagram} is not in the index for (n={self.n}, d={self.d})")

    def __contains__(self, diagram: YoungDiagram) -> bool:
        return diagram in self._positions

    def __len__(self) -> int:
        return len(self.diagrams)

    def __iter__(self) -> Iterator[YoungDiagram]:
        return iter(self.diagrams)

    def __getitem__(self, i: int) -> YoungDiagram:
        return self.diagrams[i]

    def labels(self) -> list[str]:
        return [a.label() for a in self.diagrams]


def _partitions_desc(n: int, max_part: int, max_parts: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if max_parts == 0 or max_part == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_desc(n - first, first, max_parts - 1):
            yield (first, *rest)


@lru_cache(maxsize=None)
def enumerate_diagrams(n: int, d: int) -> DiagramIndex:
    """All partitions of ``n`` into at most ``d`` parts, canonically ordered."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if d < 1:
        raise ValueError("d must be >= 1")
    diagrams = tuple(YoungDiagram(p) for p in _partitions_desc(n, n, d))
    return DiagramIndex(n, d, diagrams)


def add_box(alpha: YoungDiagram, d: int | None = None) -> set[YoungDiagram]:
    """Diagrams obtained by adding one box, optionally depth-bounded by ``d``."""
    rows = alpha.rows
    out = set()
    for i in range(len(rows)):
        if i == 0 or rows[i - 1] >= rows[i] + 1:
            out.add(YoungDiagram(rows[:i] + (rows[i] + 1,) + rows[i + 1:]))
    if d is None or len(rows) + 1 <= d:
        out.add(YoungDiagram(rows + (1,)))
    return out


def remove_box(alpha: YoungDiagram) -> set[YoungDiagram]:
    """Diagrams obtained by removing one box.  Removal never increases depth."""
    rows = alpha.rows
    if not rows:
        raise ValueError("cannot remove a box from the empty diagram")
    out = set()
    for i in range(len(rows)):
        below = rows[i + 1] if i + 1 < len(rows) else 0
        if rows[i] - 1 >= below:
            if rows[i] == 1:
                out.add(YoungDiagram(rows[:i]))
            else:
                out.add(YoungDiagram(rows[:i] + (rows[i] - 1,) + rows[i + 1:]))
    return out


def mult(alpha: YoungDiagram) -> int:
    """Number of standard tableaux of the frame (hook-length formula), exact."""
    num = factorial(alpha.boxes)
    prod = 1
    for i, j in alpha.cells():
        prod *= alpha.hook(i, j)
    assert num % prod == 0
    return num // prod


def dim_u(alpha: YoungDiagram, d: int) -> int:
    """Dimension of the depth-``d`` unitary irrep (hook-content formula), exact."""
    if alpha.depth > d:
        raise ValueError(f"diagram depth {alpha.depth} exceeds dimension bound {d}")
    num = 1
    den = 1
    for i, j in alpha.cells():
        num *= d + j - i
        den *= alpha.hook(i, j)
    assert num % den == 0
    return num // den


def check_branching(alpha: YoungDiagram) -> bool:
    """Exact check that the tableau counts over ``alpha`` plus one box sum to
    (n+1) times the count of ``alpha``."""
    n = alpha.boxes
    total = sum(mult(mu) for mu in add_box(alpha))
    return total == (n + 1) * mult(alpha)


def _reading_word(tableau: Tableau) -> tuple[int, ...]:
    return tuple(v for row in tableau for v in row)


def _place(tableau: Tableau, r: int, c: int, value: int) -> Tableau:
    if r == len(tableau):
        return tableau + ((value,),)
    row = tableau[r]
    assert c == len(row)
    return tableau[:r] + (row + (value,),) + tableau[r + 1:]


def _added_cell(small: YoungDiagram, large: YoungDiagram) -> tuple[int, int]:
    """The (row, col) of the unique box of ``large`` missing from ``small``."""
    for i in range(len(large.rows)):
        small_r = small.rows[i] if i < len(small.rows) else 0
        if large.rows[i] != small_r:
            return i, large.rows[i] - 1
    raise ValueError(f"{large} does not cover {small}")


@dataclass(frozen=True)
class StandardTableauFamily:
    """All standard fillings of a frame, in canonical order, with the index
    maps that track adding or removing the largest label."""

    frame: YoungDiagram
    tableaux: tuple[Tableau, ...]

    def __len__(self) -> int:
        return len(self.tableaux)

    @cached_property
    def _index_by_word(self) -> dict[tuple[int, ...], int]:
        return {_reading_word(t): i for i, t in enumerate(self.tableaux)}

    @cached_property
    def addbox_map(self) -> dict[YoungDiagram, tuple[int, ...]]:
        """For each frame mu covering this frame, entry ``a-1`` gives the
        1-based index in STab(mu) of tableau ``a`` extended by box n+1."""
        n = self.frame.boxes
        out = {}
        for mu in sorted(add_box(self.frame), key=lambda x: x.rows, reverse=True):
            r, c = _added_cell(self.frame, mu)
            fam = standard_tableaux(mu)
            out[mu] = tuple(
                fam._index_by_word[_reading_word(_place(t, r, c, n + 1))] + 1
                for t in self.tableaux
            )
        return out

    @cached_property
    def parents(self) -> tuple[tuple[YoungDiagram, int], ...]:
        """Per tableau: the (frame, 1-based index) left after removing the box
        that holds the largest label."""
        n = self.frame.boxes
        if n == 0:
            raise ValueError("the empty tableau has no box to remove")
        out = []
        for t in self.tableaux:
            rows = []
            for row in t:
                if row[-1] == n:
                    rows.append(row[:-1])
                else:
                    rows.append(row)
            stripped = tuple(row for row in rows if row)
            parent = YoungDiagram(tuple(len(r) for r in stripped))
            fam = standard_tableaux(parent)
            out.append((parent, fam._index_by_word[_reading_word(stripped)] + 1))
        return tuple(out)


@lru_cache(maxsize=None)
def standard_tableaux(alpha: YoungDiagram) -> StandardTableauFamily:
    """All standard tableaux of the frame, ordered by row-reading word."""
    n = alpha.boxes
    if n == 0:
        return StandardTableauFamily(alpha, ((),))
    tabs = []
    for lam in remove_box(alpha):
        r, c = _added_cell(lam, alpha)
        for t in standard_tableaux(lam).tableaux:
            tabs.append(_place(t, r, c, n))
    tabs.sort(key=_reading_word)
    return StandardTableauFamily(alpha, tuple(tabs))


def tableau_cell(tableau: Tableau, value: int) -> tuple[int, int]:
    """The (row, col) cell of a label, 0-based."""
    for i, row in enumerate(tableau):
        for j, v in enumerate(row):
            if v == value:
                return i, j
    raise ValueError(f"label {value} not in tableau {tableau}")
