"""Rule-system parsing, validation, genus and finite-type detection."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from endkit import (
    INFINITE,
    BlockKind,
    DanglingRuleError,
    FiniteType,
    PresentationSyntaxError,
    SurfacePresentation,
    UnreachableRuleError,
    canonical_finite_type,
    cyclic_states,
    ends_count,
    first_occurrences,
    genus,
    is_finite_type,
    parse_presentation,
    pretty_print,
    regularize,
    splice_annulus,
    standard_presentation,
    states_after_cycles,
)
from endkit.ends import Cardinality

from conftest import presentations

LOCH = "surface loch_ness { root = H(root) }"
FLUTE = "surface flute { root = P(root, punc); punc = A(punc) }"
CANTOR = "surface cantor { root = P(root, root) }"


def test_parse_roundtrip_examples():
    for text in (LOCH, FLUTE, CANTOR):
        p = parse_presentation(text)
        again = parse_presentation(pretty_print(p))
        assert again.rules == p.rules and again.root == p.root


def test_parse_finite_type_forms():
    p = parse_presentation("surface torus1p finite S(g=1, b=0, p=1)")
    assert p.finite_type == FiniteType(1, 0, 1)
    q = parse_presentation("surface finite S(g=2, b=1, p=0)")
    assert q.finite_type == FiniteType(2, 1, 0)


@pytest.mark.parametrize(
    "text",
    [
        "surface x { root = Q(root) }",
        "surface x { root = P(root) }",
        "surface x { root = A(root, root) }",
        "surface x { root = A(root); root = A(root) }",
        "surface x { root = A(root)",
        "surface x finite S(g=1, b=0)",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(PresentationSyntaxError):
        parse_presentation(text)


def test_dangling_and_unreachable():
    with pytest.raises(DanglingRuleError):
        parse_presentation("surface x { root = A(ghost) }")
    with pytest.raises(DanglingRuleError):
        SurfacePresentation(name="x", rules={"a": (BlockKind.ANNULUS, ("b",))})
    with pytest.raises(UnreachableRuleError):
        SurfacePresentation(
            name="x",
            rules={
                "a": (BlockKind.ANNULUS, ("a",)),
                "b": (BlockKind.ANNULUS, ("b",)),
            },
            root="a",
        )


def test_closed_surface_rejected():
    with pytest.raises(PresentationSyntaxError):
        SurfacePresentation(name="x", finite_type=FiniteType(2, 0, 0))


def test_genus_examples():
    assert genus(parse_presentation(LOCH)) == INFINITE
    assert genus(parse_presentation(FLUTE)) == 0
    assert genus(parse_presentation(CANTOR)) == 0
    assert genus(standard_presentation(3, 1)) == 3


def _unfold_handle_depths(pres, max_depth):
    """Test-local enumeration of handle occurrences by walking the tree."""
    depths = []
    todo = [(pres.root, 0)]
    while todo:
        state, depth = todo.pop()
        if depth > max_depth:
            continue
        if pres.kind(state) is BlockKind.HANDLE:
            depths.append(depth)
        for child in pres.children(state):
            todo.append((child, depth + 1))
    return depths


@settings(max_examples=150)
@given(presentations())
def test_genus_against_unfolding_oracle(pres):
    # Finite genus paths never revisit a state, so they end below depth n;
    # an infinite genus pumps some cycle, landing handles at depth >= n.
    n = len(pres.rules)
    depths = _unfold_handle_depths(pres, 3 * n)
    g = genus(pres)
    if any(d >= n for d in depths):
        assert g == INFINITE
    else:
        assert g == len(depths)


def test_finite_type_detection():
    assert is_finite_type(standard_presentation(2, 3))
    assert not is_finite_type(parse_presentation(LOCH))
    assert not is_finite_type(parse_presentation(FLUTE))
    assert not is_finite_type(parse_presentation(CANTOR))


@settings(max_examples=150)
@given(presentations())
def test_finite_type_iff_finite_genus_and_ends(pres):
    expected = (
        genus(pres) != INFINITE
        and ends_count(pres).cardinality is Cardinality.FINITE
    )
    assert is_finite_type(pres) == expected


def test_canonical_finite_type():
    assert canonical_finite_type(standard_presentation(2, 3)) == (2, 0, 3)
    ft = parse_presentation("surface x finite S(g=1, b=2, p=1)")
    assert canonical_finite_type(ft) == (1, 0, 3)
    two_tails = parse_presentation("surface x { root = P(a, a); a = A(a) }")
    assert canonical_finite_type(two_tails) == (0, 0, 2)


@settings(max_examples=100)
@given(presentations())
def test_pretty_print_roundtrip(pres):
    again = parse_presentation(pretty_print(pres))
    assert again.rules == pres.rules and again.root == pres.root


@settings(max_examples=100)
@given(presentations())
def test_splice_annulus_preserves_invariants(pres):
    state = sorted(pres.rules)[0]
    spliced = splice_annulus(pres, state, 0)
    assert genus(spliced) == genus(pres)
    assert ends_count(spliced) == ends_count(pres)


def test_standard_presentation_shapes():
    sphere2 = standard_presentation(0, 2)
    assert canonical_finite_type(sphere2) == (0, 0, 2)
    with pytest.raises(ValueError):
        standard_presentation(1, 0)


def test_regularize_identity_on_rules():
    p = parse_presentation(FLUTE)
    assert regularize(p) is p
    ft = parse_presentation("surface x finite S(g=1, b=0, p=2)")
    r = regularize(ft)
    assert r.rules is not None and canonical_finite_type(r) == (1, 0, 2)


def test_cycle_bookkeeping_on_flute():
    p = parse_presentation(FLUTE)
    assert cyclic_states(p) == {"root", "punc"}
    assert states_after_cycles(p) == {"root", "punc"}


def test_first_occurrences_paths():
    p = parse_presentation(FLUTE)
    assert first_occurrences(p, BlockKind.PANTS, 2) == [(), (0,)]
    assert first_occurrences(p, BlockKind.ANNULUS, 1) == [(1,)]
    with pytest.raises(ValueError):
        first_occurrences(p, BlockKind.HANDLE, 1, max_nodes=64)
