"""Finite presentations of non-compact orientable surfaces.

A surface is presented by a finite rule system over three building blocks,
each glued to one open boundary circle of the part built so far:

* ``A`` -- annulus, one input circle, one output circle;
* ``P`` -- pair of pants, one input, two outputs;
* ``H`` -- one-holed torus with an extra output (genus-adding block),
  one input, one output.

An implicit disk caps the root block's input, and the rule system is total:
every output is consumed by another rule, so unfolding the rules from the
root produces an infinite tree of blocks whose union is a boundaryless
non-compact surface.  A self-looping annulus rule ``a = A(a)`` is an
infinite annular tail, i.e. a puncture.

Finite-type surfaces S_{g,b,p} may also be given directly; their interiors
are what the invariant machinery sees, so ``b`` boundary circles count as
``b`` extra punctures.

Grammar::

    surface <name> { <rule> (";" <rule>)* }
    rule    := <id> "=" ("A" | "P" | "H") "(" <id> ("," <id>)? ")"
             | "root" "=" <id>
    surface <name>? finite S(g=<nat>, b=<nat>, p=<nat>)

The first rule's left-hand side is the root unless a ``root = <id>``
directive names another.
"""

import math
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .errors import (
    DanglingRuleError,
    NotFiniteTypeError,
    PresentationSyntaxError,
    UnreachableRuleError,
)

INFINITE = math.inf

Genus = int | float  # a natural number or INFINITE


class BlockKind(Enum):
    ANNULUS = "A"
    PANTS = "P"
    HANDLE = "H"

    @property
    def arity(self) -> int:
        return 2 if self is BlockKind.PANTS else 1


Rule = tuple[BlockKind, tuple[str, ...]]


@dataclass(frozen=True)
class FiniteType:
    genus: int
    boundary: int
    punctures: int


@dataclass
class SurfacePresentation:
    """Either a rule system with a root, or a finite-type triple."""

    name: str
    rules: dict[str, Rule] | None = None
    root: str | None = None
    finite_type: FiniteType | None = None

    def __post_init__(self) -> None:
        if (self.rules is None) == (self.finite_type is None):
            raise ValueError("exactly one of rules / finite_type required")
        if self.rules is not None:
            self._validate_rules()
        else:
            self._validate_finite()

    def _validate_rules(self) -> None:
        assert self.rules is not None
        if not self.rules:
            raise PresentationSyntaxError(f"{self.name}: empty rule system")
        if self.root is None:
            self.root = next(iter(self.rules))
        if self.root not in self.rules:
            raise DanglingRuleError(f"{self.name}: root {self.root!r} is not a rule")
        for lhs, (kind, children) in self.rules.items():
            if len(children) != kind.arity:
                raise PresentationSyntaxError(
                    f"{self.name}: {lhs} = {kind.value}(...) takes "
                    f"{kind.arity} child(ren), got {len(children)}"
                )
            for child in children:
                if child not in self.rules:
                    raise DanglingRuleError(
                        f"{self.name}: rule {lhs!r} references undefined {child!r}"
                    )
        unreachable = set(self.rules) - self.reachable()
        if unreachable:
            raise UnreachableRuleError(
                f"{self.name}: unreachable rule(s) {sorted(unreachable)}"
            )

    def _validate_finite(self) -> None:
        ft = self.finite_type
        assert ft is not None
        if min(ft.genus, ft.boundary, ft.punctures) < 0:
            raise PresentationSyntaxError(f"{self.name}: negative finite-type datum")
        if ft.boundary + ft.punctures == 0:
            raise PresentationSyntaxError(
                f"{self.name}: closed surface is compact; need b + p >= 1"
            )

    # -- structure helpers -------------------------------------------------

    @property
    def is_regular(self) -> bool:
        return self.rules is not None

    def kind(self, state: str) -> BlockKind:
        assert self.rules is not None
        return self.rules[state][0]

    def children(self, state: str) -> tuple[str, ...]:
        assert self.rules is not None
        return self.rules[state][1]

    def states(self) -> list[str]:
        assert self.rules is not None
        return sorted(self.rules)

    def reachable(self) -> set[str]:
        assert self.rules is not None and self.root is not None
        seen = {self.root}
        todo = deque([self.root])
        while todo:
            for child in self.children(todo.popleft()):
                if child not in seen:
                    seen.add(child)
                    todo.append(child)
        return seen

    def unfold(self, max_nodes: int) -> Iterator[tuple[tuple[int, ...], str]]:
        """Breadth-first occurrences of the unfolding tree, as (path, state)."""
        assert self.root is not None
        todo = deque([((), self.root)])
        count = 0
        while todo and count < max_nodes:
            path, state = todo.popleft()
            yield path, state
            count += 1
            for i, child in enumerate(self.children(state)):
                todo.append((path + (i,), child))


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|[{}();,=]|\S")


def _tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> str | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise PresentationSyntaxError("unexpected end of input")
        if expected is not None and tok != expected:
            raise PresentationSyntaxError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def take_ident(self) -> str:
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise PresentationSyntaxError(f"expected identifier, got {tok!r}")
        return tok

    def take_nat(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise PresentationSyntaxError(f"expected natural number, got {tok!r}")
        return int(tok)


def parse_presentation(text: str) -> SurfacePresentation:
    p = _Parser(_tokenize(text))
    p.take("surface")
    name = p.take_ident()
    if name == "finite" and p.peek() == "S":
        return _parse_finite(p, "surface")
    if p.peek() == "finite":
        p.take("finite")
        return _parse_finite(p, name)
    p.take("{")
    rules: dict[str, Rule] = {}
    root: str | None = None
    while True:
        lhs = p.take_ident()
        p.take("=")
        if lhs == "root" and p.peek(1) != "(":
            root = p.take_ident()
        else:
            letter = p.take()
            try:
                kind = BlockKind(letter)
            except ValueError:
                raise PresentationSyntaxError(f"unknown block kind {letter!r}") from None
            p.take("(")
            children = [p.take_ident()]
            if p.peek() == ",":
                p.take(",")
                children.append(p.take_ident())
            p.take(")")
            if lhs in rules:
                raise PresentationSyntaxError(f"duplicate rule for {lhs!r}")
            rules[lhs] = (kind, tuple(children))
        tok = p.take()
        if tok == "}":
            break
        if tok != ";":
            raise PresentationSyntaxError(f"expected ';' or '}}', got {tok!r}")
        if p.peek() == "}":  # tolerate a trailing semicolon
            p.take("}")
            break
    if p.peek() is not None:
        raise PresentationSyntaxError(f"trailing input at {p.peek()!r}")
    return SurfacePresentation(name=name, rules=rules, root=root)


def _parse_finite(p: _Parser, name: str) -> SurfacePresentation:
    p.take("S")
    p.take("(")
    values: dict[str, int] = {}
    for i, key in enumerate(("g", "b", "p")):
        if i:
            p.take(",")
        p.take(key)
        p.take("=")
        values[key] = p.take_nat()
    p.take(")")
    if p.peek() is not None:
        raise PresentationSyntaxError(f"trailing input at {p.peek()!r}")
    return SurfacePresentation(
        name=name,
        finite_type=FiniteType(values["g"], values["b"], values["p"]),
    )


def pretty_print(pres: SurfacePresentation) -> str:
    """Inverse of parse_presentation up to whitespace."""
    if pres.finite_type is not None:
        ft = pres.finite_type
        return f"surface {pres.name} finite S(g={ft.genus}, b={ft.boundary}, p={ft.punctures})"
    assert pres.rules is not None and pres.root is not None
    lines = []
    for lhs, (kind, children) in pres.rules.items():
        lines.append(f"  {lhs} = {kind.value}({', '.join(children)})")
    if pres.root != next(iter(pres.rules)):
        lines.append(f"  root = {pres.root}")
    body = ";\n".join(lines)
    return f"surface {pres.name} {{\n{body}\n}}"


# -- rule-graph analysis ---------------------------------------------------

def cyclic_states(pres: SurfacePresentation) -> set[str]:
    """States lying on some cycle of the rule graph."""
    assert pres.rules is not None
    order: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    result: set[str] = set()
    counter = 0

    for start in pres.reachable():
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
            kids = pres.children(state)
            if idx < len(kids):
                work[-1] = (state, idx + 1)
                child = kids[idx]
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
                    if len(scc) > 1 or state in pres.children(state):
                        result.update(scc)
    return result


def states_after_cycles(pres: SurfacePresentation) -> set[str]:
    """States on or reachable from a rule-graph cycle."""
    assert pres.rules is not None
    seen = set(cyclic_states(pres))
    todo = deque(seen)
    while todo:
        for child in pres.children(todo.popleft()):
            if child not in seen:
                seen.add(child)
                todo.append(child)
    return seen


def _occurrence_counts(pres: SurfacePresentation, targets: set[str]) -> int:
    """Number of unfolding-tree nodes labeled by ``targets``.

    Only valid when no target is on or after a cycle (counts are finite
    exactly then); counted with child multiplicity, so ``P(a, a)`` doubles.
    """
    assert pres.root is not None
    order = _topological_ancestors(pres, targets)
    region = set(order)
    counts: dict[str, int] = {pres.root: 1}
    for state in order:
        n = counts.get(state, 0)
        if n == 0:
            continue
        for child in pres.children(state):
            if child in region:
                counts[child] = counts.get(child, 0) + n
    return sum(counts.get(t, 0) for t in targets)


def _topological_ancestors(pres: SurfacePresentation, targets: set[str]) -> list[str]:
    """Topological order of states that can reach a target.

    Precondition: no target on/after a cycle, which makes this region acyclic.
    """
    assert pres.rules is not None
    reach = pres.reachable()
    can_reach: set[str] = set()
    changed = True
    while changed:
        changed = False
        for state in reach:
            if state in can_reach:
                continue
            if state in targets or any(c in can_reach for c in pres.children(state)):
                can_reach.add(state)
                changed = True
    # Kahn's algorithm on the induced subgraph.
    indeg: dict[str, int] = {s: 0 for s in can_reach}
    for state in can_reach:
        for child in pres.children(state):
            if child in can_reach:
                indeg[child] += 1
    todo = deque(sorted(s for s, d in indeg.items() if d == 0))
    order: list[str] = []
    while todo:
        state = todo.popleft()
        order.append(state)
        for child in pres.children(state):
            if child in can_reach:
                indeg[child] -= 1
                if indeg[child] == 0:
                    todo.append(child)
    if len(order) != len(can_reach):
        raise AssertionError("ancestor region unexpectedly cyclic")
    return order


# -- invariants ------------------------------------------------------------

def genus(pres: SurfacePresentation) -> Genus:
    """Number of genus-adding blocks in the unfolding; INFINITE when a
    Handle state lies on, or is reachable from, a rule-graph cycle."""
    if pres.finite_type is not None:
        return pres.finite_type.genus
    handles = {s for s in pres.reachable() if pres.kind(s) is BlockKind.HANDLE}
    if not handles:
        return 0
    if handles & states_after_cycles(pres):
        return INFINITE
    return _occurrence_counts(pres, handles)


def is_finite_type(pres: SurfacePresentation) -> bool:
    """True iff the unfolding contains finitely many non-annulus blocks."""
    if pres.finite_type is not None:
        return True
    after = states_after_cycles(pres)
    return all(pres.kind(s) is BlockKind.ANNULUS for s in after & pres.reachable())


def _finite_ends_count(pres: SurfacePresentation) -> int:
    """Number of ends of a finite-type rule presentation.

    Every infinite branch of the unfolding eventually enters a closed
    annulus cycle; branches are counted by the distinct routes into the
    cyclic region (pants double the count via both children).
    """
    assert pres.root is not None
    cyc = cyclic_states(pres)
    if pres.root in cyc:
        return 1
    memo: dict[str, int] = {}

    def count(state: str) -> int:
        if state in cyc:
            return 1
        if state not in memo:
            memo[state] = sum(count(c) for c in pres.children(state))
        return memo[state]

    return count(pres.root)


def canonical_finite_type(pres: SurfacePresentation) -> tuple[int, int, int]:
    """Canonical (g, 0, p) of a finite-type presentation.

    Boundary circles and punctures are interchangeable for the interior,
    so finite_type(g, b, p) maps to (g, 0, b + p).
    """
    if pres.finite_type is not None:
        ft = pres.finite_type
        return (ft.genus, 0, ft.boundary + ft.punctures)
    if not is_finite_type(pres):
        raise NotFiniteTypeError(f"{pres.name}: infinite type")
    g = genus(pres)
    assert g is not INFINITE
    return (int(g), 0, _finite_ends_count(pres))


# -- constructions ---------------------------------------------------------

def standard_presentation(g: int, n: int, name: str = "std") -> SurfacePresentation:
    """The reference presentation of S_{g,0,n}: a chain of g genus blocks,
    then a pants comb fanning out to n puncture tails (n >= 1)."""
    if n < 1:
        raise ValueError("need at least one end")
    rules: dict[str, Rule] = {}
    tails = [f"t{i}" for i in range(1, n + 1)]
    if n == 1:
        comb_entry = tails[0]
    else:
        for i in range(1, n):
            nxt = f"c{i + 1}" if i < n - 1 else tails[n - 1]
            rules[f"c{i}"] = (BlockKind.PANTS, (tails[i - 1], nxt))
        comb_entry = "c1"
    handle_rules: dict[str, Rule] = {}
    for i in range(1, g + 1):
        nxt = f"h{i + 1}" if i < g else comb_entry
        handle_rules[f"h{i}"] = (BlockKind.HANDLE, (nxt,))
    ordered: dict[str, Rule] = {}
    ordered.update(handle_rules)
    ordered.update(rules)
    for t in tails:
        ordered[t] = (BlockKind.ANNULUS, (t,))
    root = "h1" if g else comb_entry
    return SurfacePresentation(name=name, rules=ordered, root=root)


def regularize(pres: SurfacePresentation) -> SurfacePresentation:
    """A rule presentation of the same surface (identity on rule systems)."""
    if pres.rules is not None:
        return pres
    ft = pres.finite_type
    assert ft is not None
    return standard_presentation(ft.genus, ft.boundary + ft.punctures, pres.name)


def splice_annulus(
    pres: SurfacePresentation, state: str, slot: int, fresh: str | None = None
) -> SurfacePresentation:
    """Insert an annulus block on one child edge; the surface is unchanged."""
    assert pres.rules is not None
    kind, children = pres.rules[state]
    if not 0 <= slot < len(children):
        raise ValueError(f"slot {slot} out of range for {state}")
    if fresh is None:
        i = 0
        while f"sp{i}" in pres.rules:
            i += 1
        fresh = f"sp{i}"
    if fresh in pres.rules:
        raise ValueError(f"state {fresh!r} already present")
    rules = dict(pres.rules)
    new_children = list(children)
    new_children[slot] = fresh
    rules[state] = (kind, tuple(new_children))
    rules[fresh] = (BlockKind.ANNULUS, (children[slot],))
    return SurfacePresentation(name=pres.name, rules=rules, root=pres.root)


def first_occurrences(
    pres: SurfacePresentation, kind: BlockKind, count: int, max_nodes: int = 100_000
) -> list[tuple[int, ...]]:
    """Paths of the first ``count`` unfolding occurrences of ``kind``."""
    found: list[tuple[int, ...]] = []
    for path, state in regularize(pres).unfold(max_nodes):
        if regularize(pres).kind(state) is kind:
            found.append(path)
            if len(found) == count:
                return found
    raise ValueError(f"fewer than {count} occurrences of {kind.value} found")
