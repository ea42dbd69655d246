"""Pants decompositions, interchange moves, spines, and essential pants."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from endkit import (
    INFINITE,
    BlockKind,
    ClassVerdict,
    ComplexityTooLowError,
    OccurrenceInsideCycleError,
    PieceKind,
    PlaneExcludedError,
    PuncturedTorusExcludedInStrictError,
    Verdict,
    decompose,
    find_essential_pants,
    first_occurrences,
    genus,
    graph_phe_equal,
    interchange_normalize,
    kerekjarto,
    parse_presentation,
    spine,
    standard_presentation,
)

from conftest import finite_type_pairs, presentations

LOCH = parse_presentation("surface loch_ness { root = H(root) }")
FLUTE = parse_presentation("surface flute { root = P(root, punc); punc = A(punc) }")
CANTOR = parse_presentation("surface cantor { root = P(root, root) }")


def _slot_usage(g):
    used: list[tuple[int, int]] = []
    for a, sa, b, sb in g.edges:
        used.append((a, sa))
        used.append((b, sb))
    used.extend(g.open_slots)
    return used


def _check_graph(g):
    capacity = {p.id: p.kind.slots for p in g.pieces}
    usage = _slot_usage(g)
    assert len(usage) == len(set(usage)), "a slot was glued twice"
    per_piece: dict[int, int] = {p.id: 0 for p in g.pieces}
    for pid, slot in usage:
        assert 0 <= slot < capacity[pid]
        per_piece[pid] += 1
    if g.complete:
        assert not g.open_slots
        assert all(per_piece[p] == capacity[p] for p in per_piece)


def test_strict_examples():
    g = decompose(parse_presentation("surface s finite S(g=3, b=0, p=1)"), "strict")
    assert g.census() == {"pants": 5, "punctured_disks": 1}
    assert g.complete
    _check_graph(g)

    g = decompose(parse_presentation("surface s finite S(g=0, b=0, p=2)"), "strict")
    assert g.census() == {"pants": 0, "punctured_disks": 2}

    g = decompose(parse_presentation("surface s finite S(g=0, b=0, p=3)"), "strict")
    assert g.census() == {"pants": 1, "punctured_disks": 3}


def test_one_holed_torus_family():
    for g in range(2, 7):
        pres = parse_presentation(f"surface s finite S(g={g}, b=0, p=1)")
        assert decompose(pres, "strict", depth=2 * g + 2).census() == {
            "pants": 2 * g - 1,
            "punctured_disks": 1,
        }


def test_mode_exclusions():
    plane = parse_presentation("surface s finite S(g=0, b=0, p=1)")
    for mode in ("strict", "lenient"):
        with pytest.raises(PlaneExcludedError):
            decompose(plane, mode)

    torus1p = parse_presentation("surface s finite S(g=1, b=0, p=1)")
    with pytest.raises(PuncturedTorusExcludedInStrictError):
        decompose(torus1p, "strict")
    g = decompose(torus1p, "lenient")
    assert g.census() == {"pants": 0, "punctured_disks": 1, "one_holed_tori": 1}
    assert g.complete
    _check_graph(g)


def test_lenient_agrees_with_strict_elsewhere():
    for pres in (LOCH, FLUTE, standard_presentation(2, 3)):
        a = decompose(pres, "strict", depth=6)
        b = decompose(pres, "lenient", depth=6)
        assert a.pieces == b.pieces and a.edges == b.edges


def test_loch_ness_window():
    for depth in (1, 4, 8):
        g = decompose(LOCH, "strict", depth=depth)
        assert g.census() == {"pants": depth, "punctured_disks": 0}
        assert not g.complete
        _check_graph(g)


def test_window_is_a_prefix_of_the_deeper_window():
    for pres in (LOCH, FLUTE, CANTOR):
        small = decompose(pres, "strict", depth=5)
        big = decompose(pres, "strict", depth=9)
        assert big.pieces[: len(small.pieces)] == small.pieces
        assert set(small.edges) <= set(big.edges)


@settings(max_examples=60, deadline=None)
@given(finite_type_pairs())
def test_census_matches_euler_characteristic(gp):
    g, p = gp
    if (g, p) in ((0, 1), (1, 1)):
        return
    graph = decompose(standard_presentation(g, p), "strict", depth=4 * (g + p))
    census = graph.census()
    assert graph.complete
    assert census == {"pants": 2 * g + p - 2, "punctured_disks": p}
    # each pants carries Euler characteristic -1, each punctured disk 0
    assert -census["pants"] == 2 - 2 * g - p
    _check_graph(graph)


@settings(max_examples=80, deadline=None)
@given(presentations(), st.data())
def test_interchange_preserves_the_surface(pres, data):
    paths = [p for p, _ in pres.unfold(max_nodes=40)]
    front = data.draw(
        st.lists(st.sampled_from(paths), max_size=3, unique=True)
        if paths else st.just([])
    )
    moved = interchange_normalize(pres, front)
    assert genus(moved) == genus(pres)
    # the classifier may fail to decide, but must never separate the two
    assert kerekjarto(moved, pres).verdict is not ClassVerdict.NOT_HOMEOMORPHIC


def test_interchange_by_state_name_needs_an_acyclic_state():
    pres = parse_presentation(
        "surface s { root = P(mid, punc); mid = H(core); core = H(core); punc = A(punc) }"
    )
    moved = interchange_normalize(pres, ["mid"])
    assert kerekjarto(moved, pres).verdict is ClassVerdict.HOMEOMORPHIC
    with pytest.raises(OccurrenceInsideCycleError):
        interchange_normalize(FLUTE, ["punc"])


def test_spine_rank_examples():
    assert spine(LOCH).rank == INFINITE
    assert spine(FLUTE).rank == INFINITE
    assert spine(parse_presentation("surface s finite S(g=0, b=0, p=3)")).rank == 2


@settings(max_examples=60, deadline=None)
@given(finite_type_pairs())
def test_spine_rank_is_one_minus_euler_characteristic(gp):
    g, p = gp
    chi = 2 - 2 * g - p
    assert spine(standard_presentation(g, p)).rank == 1 - chi


def test_spine_core_states():
    s = spine(FLUTE)
    assert "root" in s.core_states and "punc" not in s.core_states


def test_graph_phe_verdicts():
    assert graph_phe_equal(spine(LOCH), spine(LOCH)) is Verdict.YES
    # equal infinite rank, but the ends differ
    assert graph_phe_equal(spine(LOCH), spine(FLUTE)) is Verdict.NO
    # rank mismatch decides before any ends comparison
    s3 = spine(standard_presentation(0, 3))
    s4 = spine(standard_presentation(0, 4))
    assert graph_phe_equal(s3, s4) is Verdict.NO


def test_essential_pants_on_infinite_type():
    for pres in (CANTOR, LOCH):
        found = find_essential_pants(pres)
        assert len(found.components) >= 2
        for comp in found.components:
            assert comp.rank_lower_bound >= 2
        payload = found.to_json()
        assert set(payload) == {"pants_id", "components", "census"}


def test_essential_pants_complexity_gate():
    for g, p in ((1, 1), (0, 4), (0, 5), (1, 2)):
        with pytest.raises(ComplexityTooLowError):
            find_essential_pants(standard_presentation(g, p))
    for g, p in ((0, 6), (2, 2), (1, 3)):
        found = find_essential_pants(standard_presentation(g, p))
        assert len(found.components) >= 2
        assert all(c.rank_lower_bound >= 2 for c in found.components)


def test_first_occurrences_orders_by_generation():
    paths = first_occurrences(CANTOR, BlockKind.PANTS, 3)
    assert paths == [(), (0,), (1,)]
