"""Ends spaces: counting, derivative analysis, and the expression algebra."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from endkit import (
    INFINITE,
    Cantor,
    Cardinality,
    EndsCount,
    InvalidEndExprError,
    NotConvertibleError,
    Pt,
    Seq,
    Union,
    Verdict,
    cb_report,
    ends_automaton,
    ends_count,
    expr_cb_report,
    find_isolated_planar_end,
    format_end_expr,
    normalize_end_expr,
    pair_homeomorphic,
    parse_end_expr,
    parse_presentation,
    realize,
    standard_presentation,
    to_end_expr,
    validate_end_expr,
)
from endkit.ends import _has_nonplanar

from conftest import end_exprs, presentations

LOCH = parse_presentation("surface loch_ness { root = H(root) }")
FLUTE = parse_presentation("surface flute { root = P(root, punc); punc = A(punc) }")
CANTOR = parse_presentation("surface cantor { root = P(root, root) }")
BLOOM = parse_presentation("surface bloom { root = P(h, root); h = H(h) }")
MIXED = parse_presentation(
    "surface mixed { a = P(a, b); b = P(a, c); c = A(c) }"
)


def test_ends_count_examples():
    assert ends_count(LOCH) == EndsCount(Cardinality.FINITE, 1)
    assert ends_count(FLUTE).cardinality is Cardinality.COUNTABLY_INFINITE
    assert ends_count(CANTOR).cardinality is Cardinality.UNCOUNTABLE
    assert ends_count(standard_presentation(2, 5)) == EndsCount(Cardinality.FINITE, 5)


def test_nonplanar_subspace_counts():
    assert ends_count(LOCH, marked="nonplanar_only") == EndsCount(Cardinality.FINITE, 1)
    assert ends_count(CANTOR, marked="nonplanar_only") == EndsCount(Cardinality.FINITE, 0)
    assert ends_count(FLUTE, marked="nonplanar_only") == EndsCount(Cardinality.FINITE, 0)
    # every suffix of every end keeps a handle in reach, so all ends count
    full = ends_count(BLOOM)
    assert full.cardinality is Cardinality.COUNTABLY_INFINITE
    assert ends_count(BLOOM, marked="nonplanar_only") == full


def _count_ends_by_walking(automaton):
    """Test-local route: DFS over choice paths; a repeated non-forced state
    means infinitely many ends, a fully forced subtree means exactly one."""
    forced: dict[str, bool] = {}

    def is_forced(state, trail):
        if state in forced:
            return forced[state]
        if state in trail:
            return True
        trail.add(state)
        result = len(automaton.transitions[state]) == 1 and all(
            is_forced(c, trail) for c in automaton.transitions[state]
        )
        trail.discard(state)
        forced[state] = result
        return result

    def walk(state, path):
        if is_forced(state, set()):
            return 1
        if state in path:
            return None
        total = 0
        for child in automaton.transitions[state]:
            sub = walk(child, path | {state})
            if sub is None:
                return None
            total += sub
        return total

    return walk(automaton.root, frozenset())


@settings(max_examples=200)
@given(presentations())
def test_finite_counts_against_walking_oracle(pres):
    auto = ends_automaton(pres)
    walked = _count_ends_by_walking(auto)
    counted = ends_count(auto)
    if walked is None:
        assert counted.cardinality is not Cardinality.FINITE
    else:
        assert counted == EndsCount(Cardinality.FINITE, walked)


def test_cb_examples():
    loch = cb_report(ends_automaton(LOCH))
    assert (loch.rank, loch.degree, loch.has_perfect_kernel) == (1, 1, False)
    assert loch.profile == (1,)

    cantor = cb_report(ends_automaton(CANTOR))
    assert (cantor.rank, cantor.degree, cantor.has_perfect_kernel) == (0, 0, True)
    assert cantor.profile == ()
    assert cb_report(ends_automaton(CANTOR), marked="nonplanar_only").cardinality == EndsCount(
        Cardinality.FINITE, 0
    )

    flute = cb_report(ends_automaton(FLUTE))
    assert (flute.rank, flute.degree) == (2, 1)
    assert flute.profile == (None, 1)
    assert not flute.has_perfect_kernel

    # same end space as the flute, marked non-planar throughout
    bloom = cb_report(ends_automaton(BLOOM))
    assert (bloom.rank, bloom.degree) == (2, 1)
    assert bloom.invariant_key() == flute.invariant_key()


def test_rank_cutoff_flag():
    tower = Pt(False)
    for _ in range(20):
        tower = Seq(tower, False)
    surf = realize(0, tower)
    low = cb_report(ends_automaton(surf), rank_cutoff=8)
    assert low.rank == 8 and low.rank_exceeded
    exact = cb_report(ends_automaton(surf), rank_cutoff=64)
    assert exact.rank == expr_cb_report(tower).rank and not exact.rank_exceeded


def test_normalize_flatten_and_sort():
    e = Union((Union((Pt(True), Cantor(False))), Pt(False)))
    n = normalize_end_expr(e)
    assert n == Union((Pt(False), Pt(True), Cantor(False)))


def test_normalize_cantor_dedupe_and_seq_collapse():
    assert normalize_end_expr(Union((Cantor(False), Cantor(False)))) == Cantor(False)
    assert normalize_end_expr(Seq(Cantor(True), True)) == Cantor(True)
    # distinct marks survive
    both = normalize_end_expr(Union((Cantor(False), Cantor(True))))
    assert both == Union((Cantor(False), Cantor(True)))


def test_normalize_absorption():
    # a lone copy next to the sequence of copies shifts into the sequence
    assert normalize_end_expr(
        Union((Pt(False), Seq(Pt(False), False)))
    ) == Seq(Pt(False), False)
    # transitively: the piece appears inside the sequence element
    nested = Union((Pt(False), Seq(Union((Pt(False), Pt(True))), True)))
    assert normalize_end_expr(nested) == Seq(Union((Pt(False), Pt(True))), True)
    # no absorption across different pieces
    kept = normalize_end_expr(Union((Pt(True), Seq(Pt(False), False))))
    assert kept == Union((Pt(True), Seq(Pt(False), False)))


def test_seq_element_dedupe():
    e = Seq(Union((Pt(False), Pt(False))), False)
    assert normalize_end_expr(e) == Seq(Pt(False), False)


def test_validate_rejects_open_marked_set():
    with pytest.raises(InvalidEndExprError):
        validate_end_expr(Seq(Pt(True), False))
    with pytest.raises(InvalidEndExprError):
        validate_end_expr(Seq(Union((Pt(False), Cantor(True))), False))
    validate_end_expr(Seq(Pt(True), True))


@settings(max_examples=200)
@given(end_exprs())
def test_normalize_idempotent(e):
    n = normalize_end_expr(e)
    assert normalize_end_expr(n) == n
    validate_end_expr(n)


@settings(max_examples=200)
@given(end_exprs())
def test_format_parse_roundtrip(e):
    assert parse_end_expr(format_end_expr(e)) == e


@settings(max_examples=150, deadline=None)
@given(end_exprs())
def test_expression_route_agrees_with_automaton_route(e):
    surface = realize(INFINITE if _has_nonplanar(e) else 0, e)
    auto = ends_automaton(surface)
    from_automaton = cb_report(auto, rank_cutoff=64)
    from_expr = expr_cb_report(normalize_end_expr(e))
    assert from_automaton.rank == from_expr.rank
    assert from_automaton.degree == from_expr.degree
    assert from_automaton.has_perfect_kernel == from_expr.has_perfect_kernel
    assert from_automaton.cardinality == from_expr.cardinality


def test_to_end_expr_examples():
    assert to_end_expr(ends_automaton(LOCH)) == Pt(True)
    assert to_end_expr(ends_automaton(CANTOR)) == Cantor(False)
    assert to_end_expr(ends_automaton(FLUTE)) == Seq(Pt(False), False)
    assert to_end_expr(ends_automaton(standard_presentation(0, 3))) == Union(
        (Pt(False), Pt(False), Pt(False))
    )
    with pytest.raises(NotConvertibleError):
        to_end_expr(ends_automaton(MIXED))


@settings(max_examples=150, deadline=None)
@given(end_exprs())
def test_realize_recovers_normal_form(e):
    surface = realize(INFINITE if _has_nonplanar(e) else 0, e)
    assert to_end_expr(ends_automaton(surface)) == normalize_end_expr(e)


def test_pair_verdicts():
    assert pair_homeomorphic(ends_automaton(FLUTE), ends_automaton(FLUTE)) is Verdict.YES
    assert pair_homeomorphic(ends_automaton(LOCH), ends_automaton(FLUTE)) is Verdict.NO

    # same normal form through different presentations
    padded = parse_presentation(
        "surface padded { root = P(root, x); x = A(y); y = A(y) }"
    )
    assert pair_homeomorphic(ends_automaton(FLUTE), ends_automaton(padded)) is Verdict.YES

    # convertible, same coarse invariants at the cutoff, different normal forms
    t17, t18 = Pt(False), Pt(False)
    for _ in range(17):
        t17 = Seq(t17, False)
    for _ in range(18):
        t18 = Seq(t18, False)
    a17 = ends_automaton(realize(0, t17))
    a18 = ends_automaton(realize(0, t18))
    assert cb_report(a17).invariant_key() == cb_report(a18).invariant_key()
    assert pair_homeomorphic(a17, a18) is Verdict.NO

    mixed_swapped = parse_presentation(
        "surface mixed2 { a = P(b, a); b = P(a, c); c = A(c) }"
    )
    assert (
        pair_homeomorphic(ends_automaton(MIXED), ends_automaton(mixed_swapped))
        is Verdict.UNKNOWN
    )


def test_find_isolated_planar_end():
    assert find_isolated_planar_end(FLUTE) == "punc"
    assert find_isolated_planar_end(CANTOR) is None
    assert find_isolated_planar_end(LOCH) is None
