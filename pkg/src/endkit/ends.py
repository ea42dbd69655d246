"""The space of ends of a presented surface, and decisions about it.

An end is an infinite choice path of the rule system: starting at the root,
repeatedly pick one output of the current block.  A Pants state offers two
choices (`P(x, x)` still branches in two), Annulus and Handle states offer
one.  The set of such paths with the cylinder topology (two ends are close
when they agree on a long prefix) is a non-empty compact, metrizable,
totally disconnected space.

An end is non-planar when genus keeps accumulating toward it: every suffix
of the path must still be able to reach a Handle state.  Equivalently, the
non-planar ends are the infinite paths through W = (states from which a
Handle is reachable), which makes the non-planar set closed: as soon as a
path steps outside W, its entire cylinder neighborhood is planar.

Three decision layers are built on top:

* cardinality of the ends space (exact finite count, countably infinite,
  or uncountable);
* symbolic Cantor-Bendixson analysis (derivatives computed by restricting
  the automaton to states that can still reach a branching state);
* a normal-form expression algebra (`Pt`, `Cantor`, `Seq`, `Union`) for
  sound homeomorphism verdicts on pairs (ends, non-planar ends).
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union as TUnion

from .errors import InvalidEndExprError, NotConvertibleError
from .presentation import BlockKind, SurfacePresentation, regularize

DEFAULT_RANK_CUTOFF = 16


class Verdict(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


class Cardinality(Enum):
    FINITE = "finite"
    COUNTABLY_INFINITE = "countably-infinite"
    UNCOUNTABLE = "uncountable"


@dataclass(frozen=True)
class EndsCount:
    cardinality: Cardinality
    count: int | None = None  # set exactly when cardinality is FINITE

    def __str__(self) -> str:
        if self.cardinality is Cardinality.FINITE:
            return f"finite({self.count})"
        return self.cardinality.value


@dataclass(frozen=True)
class EndsAutomaton:
    """Reachable rule states with their successor choices.

    ``transitions[s]`` keeps child order and multiplicity; ``nonplanar_states``
    holds the Handle-labeled states (the raw genus data from which the
    non-planar subspace is derived).
    """

    states: tuple[str, ...]
    transitions: dict[str, tuple[str, ...]]
    root: str
    nonplanar_states: frozenset[str]


def ends_automaton(pres: SurfacePresentation) -> EndsAutomaton:
    pres = regularize(pres)
    assert pres.root is not None
    reach = pres.reachable()
    transitions = {s: pres.children(s) for s in sorted(reach)}
    handles = frozenset(
        s for s in reach if pres.kind(s) is BlockKind.HANDLE
    )
    return EndsAutomaton(
        states=tuple(sorted(reach)),
        transitions=transitions,
        root=pres.root,
        nonplanar_states=handles,
    )


# -- choice spaces ---------------------------------------------------------
#
# A _Space is the working form shared by every ends computation: a set of
# states with ordered successor choices and a root, always pruned so that
# every state is reachable from the root and has at least one choice.  Its
# infinite paths are the subspace of ends under study.  root=None encodes
# the empty space.

@dataclass(frozen=True)
class _Space:
    choices: dict[str, tuple[str, ...]]
    root: str | None

    @property
    def empty(self) -> bool:
        return self.root is None

    @property
    def states(self) -> set[str]:
        return set(self.choices)


_EMPTY_SPACE = _Space(choices={}, root=None)


def _space_of(automaton: EndsAutomaton) -> _Space:
    return _Space(choices=dict(automaton.transitions), root=automaton.root)


def _restrict(space: _Space, keep: Iterable[str]) -> _Space:
    """The subspace of paths staying inside ``keep`` forever."""
    if space.empty:
        return _EMPTY_SPACE
    alive = set(keep) & space.states
    while True:
        dead = {
            s for s in alive
            if not any(c in alive for c in space.choices[s])
        }
        if not dead:
            break
        alive -= dead
    if space.root not in alive:
        return _EMPTY_SPACE
    seen = {space.root}
    todo = deque([space.root])
    choices: dict[str, tuple[str, ...]] = {}
    while todo:
        s = todo.popleft()
        kept = tuple(c for c in space.choices[s] if c in alive)
        choices[s] = kept
        for c in kept:
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return _Space(choices=choices, root=space.root)


def _subspace_at(space: _Space, state: str) -> _Space:
    """Paths of ``space`` starting from ``state`` instead of the root."""
    rerooted = _Space(choices=space.choices, root=state)
    return _restrict(rerooted, rerooted.states)


def _reaching(space: _Space, targets: Iterable[str]) -> set[str]:
    """States from which some target is reachable (targets included)."""
    hit = set(targets) & space.states
    changed = True
    while changed:
        changed = False
        for s, cs in space.choices.items():
            if s not in hit and any(c in hit for c in cs):
                hit.add(s)
                changed = True
    return hit


def _scc_partition(space: _Space) -> list[list[str]]:
    """Strongly connected components, in reverse topological order
    (every component precedes the components that can reach it)."""
    order: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0
    for start in space.choices:
        if start in order:
            continue
        work: list[tuple[str, int]] = [(start, 0)]
        while work:
            state, idx = work[-1]
            if idx == 0:
                order[state] = low[state] = counter
                counter += 1
                stack.append(state)
                on_stack.add(state)
            succs = space.choices[state]
            if idx < len(succs):
                work[-1] = (state, idx + 1)
                child = succs[idx]
                if child not in order:
                    work.append((child, 0))
                elif child in on_stack:
                    low[state] = min(low[state], order[child])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[state])
                if low[state] == order[state]:
                    scc = []
                    while True:
                        s = stack.pop()
                        on_stack.discard(s)
                        scc.append(s)
                        if s == state:
                            break
                    out.append(scc)
    return out


def _cyclic_region(space: _Space) -> set[str]:
    """States on, or reachable from, a cycle."""
    cyclic: set[str] = set()
    for scc in _scc_partition(space):
        if len(scc) > 1 or scc[0] in space.choices[scc[0]]:
            cyclic.update(scc)
    seen = set(cyclic)
    todo = deque(cyclic)
    while todo:
        for c in space.choices[todo.popleft()]:
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return seen


def _ends_count_space(space: _Space) -> EndsCount:
    if space.empty:
        return EndsCount(Cardinality.FINITE, 0)
    scc_of: dict[str, int] = {}
    sccs = _scc_partition(space)
    for i, scc in enumerate(sccs):
        for s in scc:
            scc_of[s] = i
    for s, cs in space.choices.items():
        internal = sum(1 for c in cs if scc_of[c] == scc_of[s])
        in_cycle = len(sccs[scc_of[s]]) > 1 or s in cs
        if in_cycle and internal >= 2:
            return EndsCount(Cardinality.UNCOUNTABLE)
    after = _cyclic_region(space)
    if any(len(space.choices[s]) >= 2 for s in after):
        return EndsCount(Cardinality.COUNTABLY_INFINITE)
    cyclic = {
        s for scc in sccs for s in scc
        if len(scc) > 1 or s in space.choices[s]
    }
    memo: dict[str, int] = {}

    def count(s: str) -> int:
        # deterministic beyond the cyclic region, so each entry is one end
        if s in cyclic:
            return 1
        if s not in memo:
            memo[s] = sum(count(c) for c in space.choices[s])
        return memo[s]

    return EndsCount(Cardinality.FINITE, count(space.root))


def ends_count(
    source: SurfacePresentation | EndsAutomaton, marked: str = "all"
) -> EndsCount:
    """Cardinality of the ends space, with the exact count when finite.

    ``marked="nonplanar_only"`` counts only the non-planar subspace.
    """
    if isinstance(source, SurfacePresentation):
        source = ends_automaton(source)
    if marked not in ("all", "nonplanar_only"):
        raise ValueError(f"marked must be 'all' or 'nonplanar_only', got {marked!r}")
    space = _space_of(source) if marked == "all" else _nonplanar_space(source)
    return _ends_count_space(space)


# -- Cantor-Bendixson analysis ---------------------------------------------

@dataclass(frozen=True)
class CBReport:
    """Derivative analysis of an ends space.

    rank is the number of derivative steps until the chain stabilizes;
    degree counts the isolated points of the last non-empty space in the
    chain (0 exactly when a perfect kernel remains, or the space is empty).
    profile records how many ends each step removed, None for an infinite
    batch; it is omitted (None) for reports derived from expressions.
    """

    rank: int
    degree: int
    has_perfect_kernel: bool
    cardinality: EndsCount
    profile: tuple[int | None, ...] | None = None
    rank_exceeded: bool = False

    def invariant_key(self) -> tuple:
        return (
            self.rank,
            self.degree,
            self.has_perfect_kernel,
            self.cardinality,
            self.profile,
            self.rank_exceeded,
        )


def _derivative(space: _Space) -> _Space:
    """Subspace of non-isolated ends: paths that forever keep a branching
    state reachable."""
    if space.empty:
        return space
    branchy = {s for s, cs in space.choices.items() if len(cs) >= 2}
    return _restrict(space, _reaching(space, branchy))


def _finite_ends_below(space: _Space, state: str) -> int:
    sub = _subspace_at(space, state)
    c = _ends_count_space(sub)
    if c.cardinality is not Cardinality.FINITE:
        raise AssertionError("removed subspace must have finitely many ends")
    assert c.count is not None
    return c.count


def _batch_size(old: _Space, new: _Space) -> int | None:
    """Number of ends removed by one derivative step, None when infinite."""
    if new.empty:
        c = _ends_count_space(old)
        if c.cardinality is not Cardinality.FINITE:
            raise AssertionError("a fully isolated space must be finite")
        return c.count
    exits = [
        (s, child)
        for s in new.choices
        for child in old.choices[s]
        if child not in new.choices
    ]
    pumped = _cyclic_region(new)
    if any(s in pumped for s, _ in exits):
        return None
    # the ancestor region of the exit sources is acyclic; count paths to them
    sources = {s for s, _ in exits}
    region = _reaching(new, sources)
    paths: dict[str, int] = {new.root: 1} if new.root in region else {}
    ordered = _topo_order(new, region)
    for s in ordered:
        n = paths.get(s, 0)
        if n == 0:
            continue
        for c in new.choices[s]:
            if c in region:
                paths[c] = paths.get(c, 0) + n
    return sum(
        paths.get(s, 0) * _finite_ends_below(old, child)
        for s, child in exits
    )


def _topo_order(space: _Space, region: set[str]) -> list[str]:
    indeg = {s: 0 for s in region}
    for s in region:
        for c in space.choices[s]:
            if c in region:
                indeg[c] += 1
    todo = deque(sorted(s for s, d in indeg.items() if d == 0))
    out: list[str] = []
    while todo:
        s = todo.popleft()
        out.append(s)
        for c in space.choices[s]:
            if c in region:
                indeg[c] -= 1
                if indeg[c] == 0:
                    todo.append(c)
    if len(out) != len(region):
        raise AssertionError("exit-path region unexpectedly cyclic")
    return out


def _cb_space(space: _Space, rank_cutoff: int) -> CBReport:
    cardinality = _ends_count_space(space)
    chain = [space]
    profile: list[int | None] = []
    exceeded = False
    while True:
        cur = chain[-1]
        nxt = _derivative(cur)
        if nxt.states == cur.states:
            break
        if len(profile) >= rank_cutoff:
            exceeded = True
            break
        profile.append(_batch_size(cur, nxt))
        chain.append(nxt)
    final = chain[-1]
    stabilized = not exceeded
    has_kernel = stabilized and not final.empty
    if final.empty and profile:
        degree = profile[-1]
        assert degree is not None
    else:
        degree = 0
    return CBReport(
        rank=len(profile),
        degree=degree if stabilized else 0,
        has_perfect_kernel=has_kernel,
        cardinality=cardinality,
        profile=tuple(profile),
        rank_exceeded=exceeded,
    )


def _nonplanar_space(automaton: EndsAutomaton) -> _Space:
    space = _space_of(automaton)
    return _restrict(space, _reaching(space, automaton.nonplanar_states))


def cb_report(
    automaton: EndsAutomaton,
    marked: str = "all",
    rank_cutoff: int = DEFAULT_RANK_CUTOFF,
) -> CBReport:
    """Analyze the full ends space, or only its non-planar subspace
    (``marked="nonplanar_only"``)."""
    if marked not in ("all", "nonplanar_only"):
        raise ValueError(f"marked must be 'all' or 'nonplanar_only', got {marked!r}")
    if marked == "all":
        space = _space_of(automaton)
    else:
        space = _nonplanar_space(automaton)
    return _cb_space(space, rank_cutoff)


# -- the expression algebra ------------------------------------------------

@dataclass(frozen=True)
class Pt:
    nonplanar: bool = False


@dataclass(frozen=True)
class Cantor:
    nonplanar: bool = False


@dataclass(frozen=True)
class Seq:
    """Countably many copies of ``element`` converging to one limit point."""

    element: "EndExpr"
    limit_nonplanar: bool = False


@dataclass(frozen=True)
class Union:
    parts: tuple["EndExpr", ...]

    def __init__(self, *parts: "EndExpr"):
        flat: tuple[EndExpr, ...]
        if len(parts) == 1 and isinstance(parts[0], tuple):
            flat = parts[0]  # Union(tuple_of_parts) for programmatic use
        else:
            flat = tuple(parts)
        object.__setattr__(self, "parts", flat)


EndExpr = TUnion[Pt, Cantor, Seq, Union]


def _expr_key(e: EndExpr) -> tuple:
    if isinstance(e, Pt):
        return (0, e.nonplanar)
    if isinstance(e, Cantor):
        return (1, e.nonplanar)
    if isinstance(e, Seq):
        return (2, e.limit_nonplanar, _expr_key(e.element))
    return (3, len(e.parts), tuple(_expr_key(p) for p in e.parts))


def _has_nonplanar(e: EndExpr) -> bool:
    if isinstance(e, (Pt, Cantor)):
        return e.nonplanar
    if isinstance(e, Seq):
        return e.limit_nonplanar or _has_nonplanar(e.element)
    return any(_has_nonplanar(p) for p in e.parts)


def _repeated_pieces(e: EndExpr) -> set[EndExpr]:
    """Every expression occurring as an omega-repeated piece inside ``e``
    when ``e`` is the element of a Seq (transitively: pieces of pieces)."""
    out: set[EndExpr] = {e}
    if isinstance(e, Union):
        for p in e.parts:
            out |= _repeated_pieces(p)
    elif isinstance(e, Seq):
        out |= _repeated_pieces(e.element)
    return out


def normalize_end_expr(e: EndExpr) -> EndExpr:
    """Canonical form: equal results denote homeomorphic marked spaces.

    Unions are flattened and sorted; duplicate Cantor summands with the
    same mark merge; a summand appearing as a repeated piece of a sibling
    Seq is absorbed into that tower (one extra copy shifts away).  Under a
    Seq, duplicate summands of the element collapse (omega copies of x+x
    are omega copies of x), and omega Cantors converging to a same-marked
    limit are again a Cantor.
    """
    if isinstance(e, (Pt, Cantor)):
        return e
    if isinstance(e, Seq):
        element = normalize_end_expr(e.element)
        if isinstance(element, Union):
            parts = sorted(set(element.parts), key=_expr_key)
            element = parts[0] if len(parts) == 1 else Union(tuple(parts))
        if isinstance(element, Cantor) and element.nonplanar == e.limit_nonplanar:
            return element
        return Seq(element, e.limit_nonplanar)
    flat: list[EndExpr] = []
    for p in e.parts:
        q = normalize_end_expr(p)
        flat.extend(q.parts if isinstance(q, Union) else [q])
    towers = [
        _repeated_pieces(p.element) for p in flat if isinstance(p, Seq)
    ]
    kept: list[EndExpr] = []
    seqs = [p for p in flat if isinstance(p, Seq)]
    for i, p in enumerate(flat):
        absorbed = any(
            s is not p and p in pieces
            for s, pieces in zip(seqs, towers)
        )
        if not absorbed:
            kept.append(p)
    out: list[EndExpr] = []
    seen_cantor: set[bool] = set()
    for p in kept:
        if isinstance(p, Cantor):
            if p.nonplanar in seen_cantor:
                continue
            seen_cantor.add(p.nonplanar)
        out.append(p)
    out.sort(key=_expr_key)
    if not out:
        raise InvalidEndExprError("empty union denotes no space")
    if len(out) == 1:
        return out[0]
    return Union(tuple(out))


def validate_end_expr(e: EndExpr) -> None:
    """Reject expressions whose non-planar subset would not be closed."""
    if isinstance(e, (Pt, Cantor)):
        return
    if isinstance(e, Seq):
        if not e.limit_nonplanar and _has_nonplanar(e.element):
            raise InvalidEndExprError(
                "non-planar points accumulating at a planar limit"
            )
        validate_end_expr(e.element)
        return
    if not e.parts:
        raise InvalidEndExprError("empty union denotes no space")
    for p in e.parts:
        validate_end_expr(p)


def format_end_expr(e: EndExpr) -> str:
    def mark(np: bool) -> str:
        return "nonplanar" if np else "planar"

    if isinstance(e, Pt):
        return f"Pt({mark(e.nonplanar)})"
    if isinstance(e, Cantor):
        return f"Cantor({mark(e.nonplanar)})"
    if isinstance(e, Seq):
        return f"Seq({format_end_expr(e.element)}, {mark(e.limit_nonplanar)})"
    inner = ", ".join(format_end_expr(p) for p in e.parts)
    return f"Union({inner})"


def parse_end_expr(text: str) -> EndExpr:
    """Inverse of format_end_expr."""
    import re

    tokens = re.findall(r"[A-Za-z]+|[(),]", text)
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise InvalidEndExprError("unexpected end of expression")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise InvalidEndExprError(f"expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def parse_mark() -> bool:
        tok = take()
        if tok == "nonplanar":
            return True
        if tok == "planar":
            return False
        raise InvalidEndExprError(f"expected planar/nonplanar, got {tok!r}")

    def parse() -> EndExpr:
        head = take()
        take("(")
        if head in ("Pt", "Cantor"):
            np = parse_mark()
            take(")")
            return Pt(np) if head == "Pt" else Cantor(np)
        if head == "Seq":
            element = parse()
            take(",")
            np = parse_mark()
            take(")")
            return Seq(element, np)
        if head == "Union":
            parts = [parse()]
            while pos < len(tokens) and tokens[pos] == ",":
                take(",")
                parts.append(parse())
            take(")")
            return Union(tuple(parts))
        raise InvalidEndExprError(f"unknown constructor {head!r}")

    expr = parse()
    if pos != len(tokens):
        raise InvalidEndExprError(f"trailing input at {tokens[pos]!r}")
    return expr


def expr_cb_report(e: EndExpr) -> CBReport:
    """Cantor-Bendixson data computed recursively over the algebra;
    independent of the automaton route, used to cross-check it."""
    rank, degree, kernel, card = _expr_cb(e)
    return CBReport(
        rank=rank,
        degree=degree,
        has_perfect_kernel=kernel,
        cardinality=card,
        profile=None,
    )


def _expr_cb(e: EndExpr) -> tuple[int, int, bool, EndsCount]:
    if isinstance(e, Pt):
        return (1, 1, False, EndsCount(Cardinality.FINITE, 1))
    if isinstance(e, Cantor):
        return (0, 0, True, EndsCount(Cardinality.UNCOUNTABLE))
    if isinstance(e, Seq):
        rank, _, kernel, card = _expr_cb(e.element)
        if card.cardinality is Cardinality.UNCOUNTABLE:
            new_card = EndsCount(Cardinality.UNCOUNTABLE)
        else:
            new_card = EndsCount(Cardinality.COUNTABLY_INFINITE)
        if kernel:
            return (rank, 0, True, new_card)
        return (rank + 1, 1, False, new_card)
    datas = [_expr_cb(p) for p in e.parts]
    rank = max(d[0] for d in datas)
    kernel = any(d[2] for d in datas)
    degree = 0 if kernel else sum(d[1] for d in datas if d[0] == rank)
    cards = [d[3] for d in datas]
    if any(c.cardinality is Cardinality.UNCOUNTABLE for c in cards):
        card = EndsCount(Cardinality.UNCOUNTABLE)
    elif any(c.cardinality is Cardinality.COUNTABLY_INFINITE for c in cards):
        card = EndsCount(Cardinality.COUNTABLY_INFINITE)
    else:
        card = EndsCount(
            Cardinality.FINITE, sum(c.count or 0 for c in cards)
        )
    return (rank, degree, kernel, card)


# -- automaton to expression -----------------------------------------------

def _to_expr(space: _Space, mark_targets: Iterable[str]) -> EndExpr:
    """Expression for the marked path space, or NotConvertibleError when a
    component mixes internal branching with exits."""
    if space.empty:
        raise NotConvertibleError("empty path space has no expression")
    marked = _reaching(space, mark_targets)
    expr_of: dict[str, EndExpr] = {}
    for scc in _scc_partition(space):
        members = set(scc)
        internal = {
            s: sum(1 for c in space.choices[s] if c in members) for s in scc
        }
        exits = [
            (s, c)
            for s in sorted(scc)
            for c in space.choices[s]
            if c not in members
        ]
        cyclic = len(scc) > 1 or scc[0] in space.choices[scc[0]]
        if not cyclic:
            s = scc[0]
            children = space.choices[s]
            if len(children) == 1:
                expr = expr_of[children[0]]
            else:
                expr = normalize_end_expr(
                    Union(tuple(expr_of[c] for c in children))
                )
        else:
            branching = any(n >= 2 for n in internal.values())
            in_marked = members <= marked
            if not exits:
                expr = Cantor(in_marked) if branching else Pt(in_marked)
            elif branching:
                raise NotConvertibleError(
                    "component mixes internal branching with exits"
                )
            else:
                body = Union(tuple(expr_of[c] for _, c in exits))
                expr = normalize_end_expr(Seq(body, in_marked))
        for s in scc:
            expr_of[s] = expr
    assert space.root is not None
    return normalize_end_expr(expr_of[space.root])


def to_end_expr(automaton: EndsAutomaton) -> EndExpr:
    """Normal-form expression for (ends, non-planar ends)."""
    return _to_expr(_space_of(automaton), automaton.nonplanar_states)


# -- homeomorphism decision for pairs --------------------------------------

def _canonical_form(space: _Space, marked: set[str]) -> tuple:
    """Relabel states by BFS discovery order (child order preserved)."""
    if space.empty:
        return ()
    index = {space.root: 0}
    order = [space.root]
    todo = deque([space.root])
    while todo:
        s = todo.popleft()
        for c in space.choices[s]:
            if c not in index:
                index[c] = len(order)
                order.append(c)
                todo.append(c)
    return tuple(
        (tuple(index[c] for c in space.choices[s]), s in marked)
        for s in order
    )


def _pair_invariants(space: _Space, mark_targets: Iterable[str]) -> tuple:
    full = _cb_space(space, DEFAULT_RANK_CUTOFF)
    marked_space = _restrict(space, _reaching(space, mark_targets))
    sub = _cb_space(marked_space, DEFAULT_RANK_CUTOFF)
    return full.invariant_key() + sub.invariant_key()


def _pair_verdict(
    space_a: _Space,
    marks_a: Iterable[str],
    space_b: _Space,
    marks_b: Iterable[str],
) -> tuple[Verdict, str | None]:
    """Verdict plus what decided it: 'identical-presentation' or
    'end-expression-normal-form' for Yes, 'invariants' or 'normal-form'
    for No, None for Unknown."""
    marks_a = set(marks_a)
    marks_b = set(marks_b)
    if space_a.empty or space_b.empty:
        if space_a.empty == space_b.empty:
            return Verdict.YES, "identical-presentation"
        return Verdict.NO, "invariants"
    if _pair_invariants(space_a, marks_a) != _pair_invariants(space_b, marks_b):
        return Verdict.NO, "invariants"
    canon_a = _canonical_form(space_a, _reaching(space_a, marks_a))
    canon_b = _canonical_form(space_b, _reaching(space_b, marks_b))
    if canon_a == canon_b:
        return Verdict.YES, "identical-presentation"
    try:
        expr_a = _to_expr(space_a, marks_a)
        expr_b = _to_expr(space_b, marks_b)
    except NotConvertibleError:
        return Verdict.UNKNOWN, None
    if expr_a == expr_b:
        return Verdict.YES, "end-expression-normal-form"
    return Verdict.NO, "normal-form"


def pair_homeomorphic(a: EndsAutomaton, b: EndsAutomaton) -> Verdict:
    """Is there a homeomorphism of ends spaces matching the non-planar
    subsets?  Sound on Yes and No; Unknown outside the decided fragment."""
    verdict, _ = _pair_verdict(
        _space_of(a),
        a.nonplanar_states,
        _space_of(b),
        b.nonplanar_states,
    )
    return verdict


# -- isolated planar ends --------------------------------------------------

def find_isolated_planar_end(pres: SurfacePresentation) -> str | None:
    """A state whose whole future is annulus blocks (the end beyond it is
    an isolated puncture), or None."""
    pres = regularize(pres)
    assert pres.root is not None
    pure: dict[str, bool] = {}

    def all_annulus(state: str, trail: set[str]) -> bool:
        if state in pure:
            return pure[state]
        if state in trail:
            return True  # cycle of annuli closes the lasso
        if pres.kind(state) is not BlockKind.ANNULUS:
            pure[state] = False
            return False
        trail.add(state)
        result = all(all_annulus(c, trail) for c in pres.children(state))
        trail.discard(state)
        pure[state] = result
        return result

    todo = deque([pres.root])
    seen = {pres.root}
    while todo:
        s = todo.popleft()
        if all_annulus(s, set()):
            return s
        for c in pres.children(s):
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return None


# -- JSON ------------------------------------------------------------------

def automaton_to_json(a: EndsAutomaton) -> dict:
    return {
        "states": list(a.states),
        "edges": [
            [s, c] for s in a.states for c in a.transitions[s]
        ],
        "root": a.root,
        "nonplanar_states": sorted(a.nonplanar_states),
    }


def ends_count_to_json(c: EndsCount) -> dict:
    out: dict = {"class": c.cardinality.value}
    if c.cardinality is Cardinality.FINITE:
        out["count"] = c.count
    return out


def cb_report_to_json(r: CBReport) -> dict:
    return {
        "rank": r.rank,
        "degree": r.degree,
        "perfect_kernel": r.has_perfect_kernel,
        "cardinality": ends_count_to_json(r.cardinality),
        "profile": None if r.profile is None else list(r.profile),
        "rank_exceeded": r.rank_exceeded,
    }
