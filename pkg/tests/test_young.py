import itertools
from collections import Counter
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from portdual.young import (
    EMPTY,
    YoungDiagram,
    add_box,
    check_branching,
    dim_u,
    enumerate_diagrams,
    mult,
    remove_box,
    standard_tableaux,
)


@st.composite
def diagrams(draw, max_n=8):
    n = draw(st.integers(min_value=0, max_value=max_n))
    if n == 0:
        return EMPTY
    k = draw(st.integers(min_value=1, max_value=n))
    bins = draw(st.lists(st.integers(min_value=0, max_value=k - 1), min_size=n, max_size=n))
    rows = tuple(sorted(Counter(bins).values(), reverse=True))
    return YoungDiagram(rows)


def labels(diagram_set):
    return sorted(x.label() for x in diagram_set)


def test_diagram_validation():
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))
    with pytest.raises(ValueError):
        YoungDiagram((2, 0))
    assert EMPTY.boxes == 0
    assert EMPTY.label() == "[]"
    assert YoungDiagram((2, 1)).boxes == 3


def test_enumerate_examples():
    assert [a.label() for a in enumerate_diagrams(0, 3)] == ["[]"]
    assert [a.label() for a in enumerate_diagrams(2, 2)] == ["[2]", "[1,1]"]
    assert [a.label() for a in enumerate_diagrams(3, 2)] == ["[3]", "[2,1]"]
    assert YoungDiagram((1, 1, 1)) not in enumerate_diagrams(3, 2)


def test_enumerate_preconditions():
    with pytest.raises(ValueError):
        enumerate_diagrams(-1, 2)
    with pytest.raises(ValueError):
        enumerate_diagrams(2, 0)


def test_add_box_examples():
    assert labels(add_box(YoungDiagram((2, 1)), 3)) == ["[2,1,1]", "[2,2]", "[3,1]"]
    assert labels(add_box(EMPTY, 4)) == ["[1]"]
    assert labels(add_box(YoungDiagram((1, 1)), 2)) == ["[2,1]"]
    assert labels(add_box(YoungDiagram((2, 1)))) == ["[2,1,1]", "[2,2]", "[3,1]"]


def test_remove_box_examples():
    assert labels(remove_box(YoungDiagram((2, 1)))) == ["[1,1]", "[2]"]
    assert labels(remove_box(YoungDiagram((1,)))) == ["[]"]
    assert labels(remove_box(YoungDiagram((2, 2)))) == ["[2,1]"]
    with pytest.raises(ValueError):
        remove_box(EMPTY)


@pytest.mark.parametrize("rows,expected", [
    ((5,), 1), ((2, 1), 2), ((3, 1), 3), ((2, 2), 2), ((2, 1, 1), 3),
])
def test_mult_examples(rows, expected):
    assert mult(YoungDiagram(rows)) == expected


@pytest.mark.parametrize("rows,d,expected", [
    ((1,), 2, 2), ((1,), 5, 5), ((2,), 2, 3), ((1, 1), 2, 1), ((2, 1), 3, 8),
])
def test_dim_u_examples(rows, d, expected):
    assert dim_u(YoungDiagram(rows), d) == expected


def test_dim_u_depth_error():
    with pytest.raises(ValueError):
        dim_u(YoungDiagram((1, 1, 1)), 2)


def test_standard_tableaux_examples():
    fam = standard_tableaux(YoungDiagram((2, 1)))
    assert fam.tableaux == (((1, 2), (3,)), ((1, 3), (2,)))
    assert len(standard_tableaux(YoungDiagram((4,)))) == 1
    assert standard_tableaux(EMPTY).tableaux == ((),)


def test_addbox_map_example():
    fam = standard_tableaux(YoungDiagram((2, 1)))
    mu = YoungDiagram((3, 1))
    target = standard_tableaux(mu)
    idx = fam.addbox_map[mu][0]
    assert target.tableaux[idx - 1] == ((1, 2, 4), (3,))


def test_addbox_map_injective_and_consistent():
    for n in range(0, 7):
        for alpha in enumerate_diagrams(n, n if n else 1):
            fam = standard_tableaux(alpha)
            for mu, mapped in fam.addbox_map.items():
                assert len(set(mapped)) == len(mapped)
                target = standard_tableaux(mu)
                for a, i in enumerate(mapped, start=1):
                    assert target.parents[i - 1] == (alpha, a)


def test_tableaux_strictly_increase():
    for alpha in enumerate_diagrams(6, 6):
        for t in standard_tableaux(alpha).tableaux:
            for row in t:
                assert all(row[i] < row[i + 1] for i in range(len(row) - 1))
            cols = max(len(r) for r in t)
            for j in range(cols):
                col = [row[j] for row in t if len(row) > j]
                assert all(col[i] < col[i + 1] for i in range(len(col) - 1))


def test_check_branching_examples():
    assert check_branching(YoungDiagram((2, 1)))
    assert check_branching(EMPTY)
    assert all(check_branching(a) for a in enumerate_diagrams(6, 5))


@given(diagrams())
@settings(max_examples=60, deadline=None)
def test_mult_matches_tableau_count(alpha):
    assert mult(alpha) == len(standard_tableaux(alpha))


@given(diagrams())
@settings(max_examples=60, deadline=None)
def test_lattice_duality(alpha):
    for mu in add_box(alpha):
        assert alpha in remove_box(mu)
    if alpha.boxes:
        for lam in remove_box(alpha):
            assert alpha in add_box(lam)


@given(diagrams())
@settings(max_examples=60, deadline=None)
def test_branching_property(alpha):
    assert check_branching(alpha)


@given(diagrams())
@settings(max_examples=60, deadline=None)
def test_conjugate_involution(alpha):
    assert alpha.conjugate().conjugate() == alpha
    assert mult(alpha.conjugate()) == mult(alpha)


def test_regular_representation_identity():
    for n in range(0, 9):
        total = sum(mult(a) ** 2 for a in enumerate_diagrams(n, max(n, 1)))
        assert total == factorial(n)


def test_enumeration_counts_against_brute_force():
    # multisets of d nonnegative parts summing to n == partitions into <= d parts
    for n, d in itertools.product(range(0, 9), range(1, 6)):
        brute = sum(
            1 for p in itertools.combinations_with_replacement(range(0, n + 1), d)
            if sum(p) == n
        )
        assert len(enumerate_diagrams(n, d)) == brute
