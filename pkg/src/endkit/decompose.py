"""Cutting a presented surface into standard compact pieces.

Every admissible surface decomposes along circles into pairs of pants,
punctured disks, and (for the punctured torus only) a one-holed torus.
The dual picture is what this module computes: pieces are vertices, each
decomposition circle is an edge joining two boundary slots.  The rewrite
follows the presentation's unfolding: annulus runs dissolve, a pure
annulus lasso closes off a punctured disk, every Handle visit splits into
two pants glued along two circles, and the initial disk is absorbed into
the first block (with a Handle-run first, the disk and two Handles fuse
into three pants).

Also here: interchange normalization (pull chosen block occurrences to
the front of the unfolding, preserving the homeomorphism type), spine
graphs with their rank and core, the graph-level proper-homotopy
comparison, and the essential-pants search.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    ComplexityTooLowError,
    DecomposeError,
    OccurrenceInsideCycleError,
    PlaneExcludedError,
    PuncturedTorusExcludedInStrictError,
)
from .presentation import (
    INFINITE,
    BlockKind,
    Rule,
    SurfacePresentation,
    canonical_finite_type,
    first_occurrences,
    genus,
    is_finite_type,
    regularize,
    states_after_cycles,
    _occurrence_counts,
)
from .ends import Verdict, _pair_verdict, _space_of, ends_automaton

Path = tuple[int, ...]


class PieceKind(Enum):
    PANTS = "Pants"
    PUNCTURED_DISK = "PuncturedDisk"
    ONE_HOLED_TORUS = "OneHoledTorus"

    @property
    def slots(self) -> int:
        return 3 if self is PieceKind.PANTS else 1


@dataclass(frozen=True)
class Piece:
    id: int
    kind: PieceKind


# an edge is one decomposition circle: (piece, slot, piece, slot)
Edge = tuple[int, int, int, int]


@dataclass(frozen=True)
class DecompositionGraph:
    mode: str
    depth: int
    pieces: tuple[Piece, ...]
    edges: tuple[Edge, ...]
    open_slots: tuple[tuple[int, int], ...]  # awaiting pieces beyond the window
    complete: bool

    def census(self) -> dict[str, int]:
        counts = {PieceKind.PANTS: 0, PieceKind.PUNCTURED_DISK: 0,
                  PieceKind.ONE_HOLED_TORUS: 0}
        for p in self.pieces:
            counts[p.kind] += 1
        out = {
            "pants": counts[PieceKind.PANTS],
            "punctured_disks": counts[PieceKind.PUNCTURED_DISK],
        }
        if counts[PieceKind.ONE_HOLED_TORUS]:
            out["one_holed_tori"] = counts[PieceKind.ONE_HOLED_TORUS]
        return out

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "depth": self.depth,
            "complete": self.complete,
            "pieces": [{"id": p.id, "kind": p.kind.value} for p in self.pieces],
            "edges": [list(e) for e in self.edges],
            "open_slots": [list(s) for s in self.open_slots],
            "census": self.census(),
        }


def decomposition_to_dot(g: DecompositionGraph) -> str:
    lines = ["graph decomposition {"]
    for p in g.pieces:
        lines.append(f'  p{p.id} [label="{p.kind.value} {p.id}"];')
    for a, sa, b, sb in g.edges:
        lines.append(f'  p{a} -- p{b} [taillabel="{sa}", headlabel="{sb}"];')
    for pid, slot in g.open_slots:
        lines.append(f'  // open: p{pid} slot {slot}')
    lines.append("}")
    return "\n".join(lines)


def decompose(
    pres: SurfacePresentation, mode: str = "lenient", depth: int = 8
) -> DecompositionGraph:
    """Depth-n window of the decomposition (first n pieces in generation
    order, with the edges and dangling slots among them).

    The plane has no decomposition in either mode; the punctured torus
    decomposes only leniently, as one-holed torus plus punctured disk.
    """
    if mode not in ("lenient", "strict"):
        raise DecomposeError(f"mode must be 'lenient' or 'strict', got {mode!r}")
    if depth < 0:
        raise DecomposeError(f"depth must be non-negative, got {depth}")
    ft = canonical_finite_type(pres) if is_finite_type(pres) else None
    if ft == (0, 0, 1):
        raise PlaneExcludedError("the plane admits no decomposition")
    if ft == (1, 0, 1):
        if mode == "strict":
            raise PuncturedTorusExcludedInStrictError(
                "the punctured torus needs a one-holed torus piece"
            )
        pieces = (Piece(0, PieceKind.ONE_HOLED_TORUS),
                  Piece(1, PieceKind.PUNCTURED_DISK))
        edges: tuple[Edge, ...] = ((0, 0, 1, 0),)
        return _truncate(mode, depth, pieces, edges, [], True)
    pres = regularize(pres)
    pieces_l, edges_l, open_l, complete = _strict_window(pres, depth)
    return _truncate(mode, depth, tuple(pieces_l), tuple(edges_l), open_l, complete)


def _truncate(
    mode: str,
    depth: int,
    pieces: tuple[Piece, ...],
    edges: tuple[Edge, ...],
    pending: Iterable[tuple[int, int]],
    complete: bool,
) -> DecompositionGraph:
    kept = pieces[:depth]
    n = len(kept)
    kept_edges = tuple(e for e in edges if e[0] < n and e[2] < n)
    opened: list[tuple[int, int]] = []
    for a, sa, b, sb in edges:
        if a < n and b >= n:
            opened.append((a, sa))
        elif b < n and a >= n:
            opened.append((b, sb))
    opened.extend((pid, slot) for pid, slot in pending if pid < n)
    return DecompositionGraph(
        mode=mode,
        depth=depth,
        pieces=kept,
        edges=kept_edges,
        open_slots=tuple(opened),
        complete=complete and n == len(pieces),
    )


def _strict_window(
    pres: SurfacePresentation, depth: int
) -> tuple[list[Piece], list[Edge], list[tuple[int, int]], bool]:
    """Generate pieces in BFS order until the piece budget is spent.

    Only called for surfaces that are neither the plane nor the punctured
    torus, so a root Handle-run is either followed by a second Handle (the
    three-pants fusion applies) or a Pants is reachable and gets pulled to
    the front first.
    """
    assert pres.root is not None
    pieces: list[Piece] = []
    edges: list[Edge] = []
    queue: deque[tuple[int, int, str]] = deque()

    def new_piece(kind: PieceKind) -> int:
        pieces.append(Piece(len(pieces), kind))
        return len(pieces) - 1

    def skip_annuli(state: str) -> str | None:
        # None means the run closes a pure-annulus lasso
        seen = set()
        while pres.kind(state) is BlockKind.ANNULUS:
            if state in seen:
                return None
            seen.add(state)
            state = pres.children(state)[0]
        return state

    def resolve(state: str) -> tuple[int, int]:
        s = skip_annuli(state)
        if s is None:
            return new_piece(PieceKind.PUNCTURED_DISK), 0
        if pres.kind(s) is BlockKind.PANTS:
            pid = new_piece(PieceKind.PANTS)
            c1, c2 = pres.children(s)
            queue.append((pid, 1, c1))
            queue.append((pid, 2, c2))
            return pid, 0
        pa = new_piece(PieceKind.PANTS)
        pb = new_piece(PieceKind.PANTS)
        edges.append((pa, 1, pb, 0))
        edges.append((pa, 2, pb, 1))
        queue.append((pb, 2, pres.children(s)[0]))
        return pa, 0

    root = skip_annuli(pres.root)
    assert root is not None, "pure-annulus surface is the plane"
    if pres.kind(root) is BlockKind.PANTS:
        c1, c2 = pres.children(root)
        left = resolve(c1)
        right = resolve(c2)
        edges.append((left[0], left[1], right[0], right[1]))
    else:
        nxt = skip_annuli(pres.children(root)[0])
        if nxt is None or pres.kind(nxt) is not BlockKind.HANDLE:
            pants_path = first_occurrences(pres, BlockKind.PANTS, 1)
            assert pants_path, "lone Handle over annuli is the punctured torus"
            pulled = _rebuild(pres, pants_path, "chain")
            return _strict_window(pulled, depth)
        p1 = new_piece(PieceKind.PANTS)
        p2 = new_piece(PieceKind.PANTS)
        p3 = new_piece(PieceKind.PANTS)
        edges.extend([(p1, 0, p2, 0), (p1, 1, p2, 1), (p1, 2, p3, 0), (p2, 2, p3, 1)])
        queue.append((p3, 2, pres.children(nxt)[0]))
    while queue and len(pieces) < depth:
        pid, slot, state = queue.popleft()
        tgt = resolve(state)
        edges.append((pid, slot, tgt[0], tgt[1]))
    pending = [(pid, slot) for pid, slot, _ in queue]
    return pieces, edges, pending, not queue


# -- interchange -----------------------------------------------------------

def _path_kind(pres: SurfacePresentation, path: Path) -> BlockKind:
    return pres.kind(_state_at(pres, path))


def _state_at(pres: SurfacePresentation, path: Path) -> str:
    assert pres.root is not None
    state = pres.root
    for i in path:
        children = pres.children(state)
        if not 0 <= i < len(children):
            raise DecomposeError(f"invalid unfolding path {path!r} at step {i}")
        state = children[i]
    return state


def _first_path_of(pres: SurfacePresentation, name: str) -> Path:
    if name not in pres.reachable():
        raise DecomposeError(f"unknown or unreachable state {name!r}")
    if name in states_after_cycles(pres):
        raise OccurrenceInsideCycleError(
            f"state {name!r} recurs inside a cycle; address one occurrence by path"
        )
    for path, state in pres.unfold(max_nodes=1_000_000):
        if state == name:
            return path
    raise AssertionError(f"state {name!r} not found in unfolding")


def _rebuild(
    pres: SurfacePresentation,
    paths: Sequence[Path],
    wiring: str,
) -> SurfacePresentation:
    """Pull the block occurrences at ``paths`` out of the unfolding and
    re-attach them as a fresh front ('chain' in order, or the fixed five
    pants 'tree5').  A pulled Pants keeps its first child spliced in place
    and hands its second child's subtree to the front."""
    assert pres.root is not None
    if len(set(paths)) != len(paths):
        raise DecomposeError("duplicate occurrence in front list")
    prefix: set[Path] = set()
    for p in paths:
        for i in range(len(p) + 1):
            prefix.add(p[:i])
    ordered = sorted(prefix, key=lambda t: (len(t), t))
    taken = set(pres.rules or {})
    node_of = {}
    for i, t in enumerate(ordered):
        name = f"u{i}"
        while name in taken:
            name += "_"
        taken.add(name)
        node_of[t] = name
    unrolled: dict[str, tuple[BlockKind, list[str]]] = {}
    for t in ordered:
        state = _state_at(pres, t)
        ptrs = []
        for i, child in enumerate(pres.children(state)):
            tc = t + (i,)
            ptrs.append(node_of[tc] if tc in prefix else child)
        unrolled[node_of[t]] = (pres.kind(state), ptrs)
    pulled = {node_of[p] for p in paths}

    def spliced(ptr: str) -> str:
        while ptr in pulled:
            ptr = unrolled[ptr][1][0]
        return ptr

    sides: list[str] = []
    for p in paths:
        kind, ptrs = unrolled[node_of[p]]
        if kind is BlockKind.PANTS:
            sides.append(spliced(ptrs[1]))
    remainder = spliced(node_of[()])

    def fresh(base: str) -> str:
        name = base
        while name in taken:
            name += "_"
        taken.add(name)
        return name

    rules: dict[str, Rule] = dict(pres.rules or {})
    for name, (kind, ptrs) in unrolled.items():
        if name not in pulled:
            rules[name] = (kind, tuple(spliced(q) for q in ptrs))
    if wiring == "chain":
        fronts = [fresh(f"f{i + 1}") for i in range(len(paths))]
        side_iter = iter(sides)
        for i, p in enumerate(paths):
            kind = _path_kind(pres, p)
            nxt = fronts[i + 1] if i + 1 < len(fronts) else remainder
            if kind is BlockKind.PANTS:
                rules[fronts[i]] = (BlockKind.PANTS, (next(side_iter), nxt))
            else:
                rules[fronts[i]] = (kind, (nxt,))
        root = fronts[0] if fronts else remainder
    elif wiring == "tree5":
        assert len(paths) == 5 and len(sides) == 5, "tree5 pulls five pants"
        f = [fresh(f"f{i + 1}") for i in range(5)]
        rules[f[0]] = (BlockKind.PANTS, (f[1], f[2]))
        rules[f[1]] = (BlockKind.PANTS, (f[3], f[4]))
        rules[f[2]] = (BlockKind.PANTS, (sides[0], sides[1]))
        rules[f[3]] = (BlockKind.PANTS, (sides[2], sides[3]))
        rules[f[4]] = (BlockKind.PANTS, (sides[4], remainder))
        root = f[0]
    else:
        raise ValueError(f"unknown wiring {wiring!r}")
    reachable = {root}
    todo = deque([root])
    while todo:
        for child in rules[todo.popleft()][1]:
            if child not in reachable:
                reachable.add(child)
                todo.append(child)
    rules = {s: r for s, r in rules.items() if s in reachable}
    return SurfacePresentation(name=pres.name, rules=rules, root=root)


def interchange_normalize(
    pres: SurfacePresentation,
    front: Sequence[Path | str],
) -> SurfacePresentation:
    """Rearrange the unfolding so the listed occurrences come right after
    the initial disk, in order; the surface is unchanged up to
    homeomorphism.

    Occurrences are unfolding paths (tuples of child indices), or state
    names for states occurring only in the finite prefix before any cycle.
    """
    pres = regularize(pres)
    if not front:
        return pres
    paths: list[Path] = []
    for occ in front:
        if isinstance(occ, str):
            paths.append(_first_path_of(pres, occ))
        else:
            path = tuple(occ)
            _state_at(pres, path)
            paths.append(path)
    return _rebuild(pres, paths, "chain")


# -- spine graphs ----------------------------------------------------------

@dataclass(frozen=True)
class SpineGraph:
    """Deformation-retract graph of the surface: each Pants visit donates
    one independent loop, each Handle visit two.  core_states span the
    smallest subgraph carrying all loops (X_g)."""

    presentation: SurfacePresentation
    rank: int | float
    core_states: frozenset[str]


def spine(pres: SurfacePresentation) -> SpineGraph:
    pres = regularize(pres)
    loops = {
        s for s in pres.reachable()
        if pres.kind(s) in (BlockKind.PANTS, BlockKind.HANDLE)
    }
    if is_finite_type(pres):
        handles = {s for s in loops if pres.kind(s) is BlockKind.HANDLE}
        pants = loops - handles
        rank: int | float = (
            2 * _occurrence_counts(pres, handles) + _occurrence_counts(pres, pants)
        )
    else:
        rank = INFINITE
    core = set(loops)
    changed = True
    while changed:
        changed = False
        for s in pres.reachable():
            if s not in core and any(c in core for c in pres.children(s)):
                core.add(s)
                changed = True
    return SpineGraph(presentation=pres, rank=rank, core_states=frozenset(core))


def spine_to_dot(g: SpineGraph) -> str:
    pres = g.presentation
    lines = ["digraph spine {"]
    for s in sorted(pres.reachable()):
        shape = "doublecircle" if s in g.core_states else "circle"
        lines.append(f'  "{s}" [label="{s}:{pres.kind(s).value}", shape={shape}];')
    for s in sorted(pres.reachable()):
        for c in pres.children(s):
            lines.append(f'  "{s}" -> "{c}";')
    lines.append("}")
    return "\n".join(lines)


def graph_phe_equal(g1: SpineGraph, g2: SpineGraph) -> Verdict:
    """Proper-homotopy comparison: equal rank plus a homeomorphism of ends
    spaces carrying core ends to core ends."""
    if g1.rank != g2.rank:
        return Verdict.NO
    a1 = ends_automaton(g1.presentation)
    a2 = ends_automaton(g2.presentation)
    verdict, _ = _pair_verdict(
        _space_of(a1), g1.core_states, _space_of(a2), g2.core_states
    )
    return verdict


# -- essential pants -------------------------------------------------------

@dataclass(frozen=True)
class ComponentCensus:
    pants: int
    punctured_disks: int
    one_holed_tori: int
    rank_lower_bound: int
    exact: bool

    def to_json(self) -> dict:
        return {
            "pants": self.pants,
            "punctured_disks": self.punctured_disks,
            "one_holed_tori": self.one_holed_tori,
            "rank_at_least": self.rank_lower_bound,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class EssentialPants:
    pants_id: int
    components: tuple[ComponentCensus, ...]
    window: DecompositionGraph

    def to_json(self) -> dict:
        return {
            "pants_id": self.pants_id,
            "components": [c.to_json() for c in self.components],
            "census": self.window.census(),
        }


def _complement_census(
    g: DecompositionGraph, removed: int
) -> list[ComponentCensus]:
    open_pids = {pid for pid, _ in g.open_slots}
    adjacency: dict[int, set[int]] = {
        p.id: set() for p in g.pieces if p.id != removed
    }
    for a, _, b, _ in g.edges:
        if a != removed and b != removed and a != b:
            adjacency[a].add(b)
            adjacency[b].add(a)
    kind_of = {p.id: p.kind for p in g.pieces}
    seen: set[int] = set()
    out: list[ComponentCensus] = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        todo = deque([start])
        while todo:
            for n in adjacency[todo.popleft()]:
                if n not in comp:
                    comp.add(n)
                    seen.add(n)
                    todo.append(n)
        pants = sum(1 for pid in comp if kind_of[pid] is PieceKind.PANTS)
        tori = sum(1 for pid in comp if kind_of[pid] is PieceKind.ONE_HOLED_TORUS)
        pds = len(comp) - pants - tori
        out.append(ComponentCensus(
            pants=pants,
            punctured_disks=pds,
            one_holed_tori=tori,
            rank_lower_bound=1 + pants + tori,
            exact=not (comp & open_pids),
        ))
    return out


def find_essential_pants(pres: SurfacePresentation) -> EssentialPants:
    """A pants piece whose removal leaves at least two components, all of
    non-abelian fundamental group (spine rank at least 2); verified by
    census, never trusted from the construction.

    Needs high complexity: infinite type, or finite type (g,0,p) with
    g+p >= 4 or p >= 6; genus-0 surfaces additionally need p >= 6.
    """
    pres = regularize(pres)
    ft = canonical_finite_type(pres) if is_finite_type(pres) else None
    if ft is not None:
        g, _, p = ft
        if not (g + p >= 4 or p >= 6):
            raise ComplexityTooLowError(
                f"complexity too low: g+p = {g + p} < 4 and p = {p} < 6"
            )
        if g == 0 and p < 6:
            raise ComplexityTooLowError(
                f"genus 0 needs at least six ends: p = {p} < 6 "
                "(every pants leaves a component of abelian fundamental group)"
            )
    total_genus = genus(pres)
    if total_genus >= 2:
        prepped = _rebuild(
            pres, first_occurrences(pres, BlockKind.HANDLE, 2), "chain"
        )
    elif ft is not None and ft[0] == 1 and ft[2] < 6:
        prepped = pres
    else:
        prepped = _rebuild(
            pres, first_occurrences(pres, BlockKind.PANTS, 5), "tree5"
        )
    window = decompose(prepped, "strict", depth=64)
    for piece in window.pieces:
        if piece.kind is not PieceKind.PANTS:
            continue
        comps = _complement_census(window, piece.id)
        if len(comps) >= 2 and all(c.rank_lower_bound >= 2 for c in comps):
            return EssentialPants(piece.id, tuple(comps), window)
    raise AssertionError("no essential pants found despite complexity bounds")
