"""Reachability graphs and the analyses built on them.

Graph nodes pair a marking with the multiset of transitions fired to reach
it.  Keeping the fired multiset makes runs recoverable from paths and keeps
the graph finite exactly for occurrence nets; nets that can fire a transition
twice simply exhaust the exploration budget and report INCONCLUSIVE.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from .errors import FiringError, IncompleteExplorationError, NetStructureError
from .nets import (
    DEFAULT_BUDGET,
    Atom,
    LendingNet,
    Outcome,
    PlaceId,
    TransitionId,
    Verdict,
    enabled_transitions,
    fire,
)


@dataclass(frozen=True)
class Node:
    """Reachability graph node: sparse marking plus fired multiset."""

    marking: tuple[tuple[PlaceId, int], ...]
    fired: tuple[tuple[TransitionId, int], ...]

    def tokens(self, place: PlaceId) -> int:
        for p, n in self.marking:
            if p == place:
                return n
        return 0

    def marking_dict(self) -> dict[PlaceId, int]:
        return dict(self.marking)

    def fired_multiset(self) -> Counter:
        return Counter(dict(self.fired))

    def fired_set(self) -> frozenset[TransitionId]:
        return frozenset(t for t, _ in self.fired)

    @property
    def honored(self) -> bool:
        return all(n >= 0 for _, n in self.marking)

    def describe(self) -> str:
        marks = ", ".join(f"{p}={n}" for p, n in self.marking) or "empty"
        fires = ", ".join(t if n == 1 else f"{t}x{n}" for t, n in self.fired) or "none"
        return f"marking [{marks}] fired [{fires}]"


def _node(marking: Mapping[PlaceId, int], state: Counter) -> Node:
    return Node(
        marking=tuple(sorted((p, n) for p, n in marking.items() if n)),
        fired=tuple(sorted(state.items())),
    )


@dataclass(frozen=True, eq=False)
class ReachGraph:
    """Deterministic breadth-first reachability graph of a lending net."""

    net: LendingNet
    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, TransitionId, int], ...]
    complete: bool
    _index: dict = field(compare=False, repr=False, default=None)
    _out: dict = field(compare=False, repr=False, default=None)
    _in: dict = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        index = {node: i for i, node in enumerate(self.nodes)}
        out: dict[int, list] = {i: [] for i in range(len(self.nodes))}
        inc: dict[int, list] = {i: [] for i in range(len(self.nodes))}
        for src, t, dst in self.edges:
            out[src].append((t, dst))
            inc[dst].append((t, src))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inc)

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def index_of(self, node: Node | int) -> int:
        if isinstance(node, int):
            if not 0 <= node < len(self.nodes):
                raise NetStructureError(f"node index {node} out of range")
            return node
        try:
            return self._index[node]
        except KeyError:
            raise NetStructureError("node does not belong to this graph") from None

    def out_edges(self, node: Node | int) -> tuple[tuple[TransitionId, int], ...]:
        return tuple(self._out[self.index_of(node)])

    def in_edges(self, node: Node | int) -> tuple[tuple[TransitionId, int], ...]:
        return tuple(self._in[self.index_of(node)])


def explore(net: LendingNet, budget: int = DEFAULT_BUDGET) -> ReachGraph:
    """Breadth-first closure of single steps from the initial marking.

    Successors are expanded in sorted transition order, so repeated calls
    enumerate identical nodes and edges.  ``complete`` is False when the node
    budget ran out before the closure was reached.
    """
    start = _node(net.initial_marking(), Counter())
    nodes = [start]
    index = {start: 0}
    edges: list[tuple[int, TransitionId, int]] = []
    queue = deque([0])
    complete = True
    while queue:
        i = queue.popleft()
        node = nodes[i]
        marking = {p: node.tokens(p) for p in net.places}
        state = node.fired_multiset()
        for t in enabled_transitions(net, marking):
            nxt = fire(net, marking, t)
            for p, n in nxt.items():
                if n < 0 and p not in net.lending:
                    raise FiringError(t, p, f"place {p!r} went negative without lending")
            nstate = state.copy()
            nstate[t] += 1
            succ = _node(nxt, nstate)
            j = index.get(succ)
            if j is None:
                if len(nodes) >= budget:
                    complete = False
                    continue
                j = len(nodes)
                index[succ] = j
                nodes.append(succ)
                queue.append(j)
            edges.append((i, t, j))
    return ReachGraph(net=net, nodes=tuple(nodes), edges=tuple(edges), complete=complete)


@dataclass(frozen=True)
class MarkingPredicate:
    """Conjunction of token constraints a goal marking must satisfy."""

    zero: frozenset[PlaceId] = frozenset()
    positive: frozenset[PlaceId] = frozenset()
    nonneg: frozenset[PlaceId] = frozenset()
    honored: bool = False
    unsat: bool = False

    def holds_at(self, node: Node) -> bool:
        if self.unsat:
            return False
        if self.honored and not node.honored:
            return False
        return (
            all(node.tokens(p) == 0 for p in self.zero)
            and all(node.tokens(p) >= 1 for p in self.positive)
            and all(node.tokens(p) >= 0 for p in self.nonneg)
        )


GoalLike = Callable[[Node], bool] | MarkingPredicate | Iterable[MarkingPredicate]

HONORED_GOAL = MarkingPredicate(honored=True)


def as_goal_fn(goal: GoalLike) -> Callable[[Node], bool]:
    """Normalize a goal: a predicate, one conjunction, or a disjunction of them."""
    if callable(goal):
        return goal
    if isinstance(goal, MarkingPredicate):
        return goal.holds_at
    disjuncts = tuple(goal)
    for d in disjuncts:
        if not isinstance(d, MarkingPredicate):
            raise NetStructureError(f"not a marking predicate: {d!r}")
    return lambda node: any(d.holds_at(node) for d in disjuncts)


def backward_closure(graph: ReachGraph, targets: Iterable[int]) -> set[int]:
    """Indices of all nodes from which some target node is reachable."""
    reached = set()
    queue = deque()
    for i in targets:
        if i not in reached:
            reached.add(i)
            queue.append(i)
    while queue:
        j = queue.popleft()
        for _, src in graph.in_edges(j):
            if src not in reached:
                reached.add(src)
                queue.append(src)
    return reached


def weakly_terminates(
    net: LendingNet,
    goal: GoalLike,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> Verdict:
    """Every reachable node must be able to reach a goal node.

    FAILS returns the first explored node that cannot; an exhausted budget
    yields INCONCLUSIVE since unexplored continuations could still succeed.
    """
    if graph is None:
        graph = explore(net, budget)
    if not graph.complete:
        return Verdict.inconclusive(f"exploration budget {budget} exhausted")
    goal_fn = as_goal_fn(goal)
    targets = [i for i, node in enumerate(graph.nodes) if goal_fn(node)]
    good = backward_closure(graph, targets)
    for i, node in enumerate(graph.nodes):
        if i not in good:
            return Verdict.fails(witness=node, detail=f"no goal reachable from {node.describe()}")
    return Verdict.holds()


def honored_nodes(graph: ReachGraph) -> list[int]:
    return [i for i, node in enumerate(graph.nodes) if node.honored]


def urgent_at(graph: ReachGraph, node: Node | int) -> frozenset[Atom]:
    """Labels of first steps from ``node`` that can still end in an honored marking."""
    if not graph.complete:
        raise IncompleteExplorationError("urgency needs a complete reachability graph")
    i = graph.index_of(node)
    can_honor = backward_closure(graph, honored_nodes(graph))
    net = graph.net
    atoms = set()
    for t, j in graph.out_edges(i):
        label = net.transition_labels.get(t)
        if label is not None and j in can_honor:
            atoms.add(label)
    return frozenset(atoms)


def honored_always_reachable(graph: ReachGraph) -> Verdict:
    """Check that every explored node can still reach an honored marking."""
    if not graph.complete:
        return Verdict.inconclusive("exploration incomplete")
    good = backward_closure(graph, honored_nodes(graph))
    for i, node in enumerate(graph.nodes):
        if i not in good:
            return Verdict.fails(witness=node, detail=f"debt can never be repaid from {node.describe()}")
    return Verdict.holds()


def urgent_for_done_set(
    net: LendingNet,
    done: Iterable[Atom],
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> frozenset[Atom]:
    """Union of urgent_at over nodes whose fired labels equal ``done``."""
    if graph is None:
        graph = explore(net, budget)
    if not graph.complete:
        raise IncompleteExplorationError("urgency needs a complete reachability graph")
    wanted = frozenset(done)
    result: set[Atom] = set()
    for i, node in enumerate(graph.nodes):
        labels = frozenset(
            net.transition_labels[t]
            for t in node.fired_set()
            if t in net.transition_labels
        )
        if labels == wanted:
            result |= urgent_at(graph, i)
    return frozenset(result)


def trace_set(
    net: LendingNet,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> tuple[frozenset[tuple[Atom, ...]], bool]:
    """All observable words of runs from the initial marking.

    Returns the word set and a completeness flag; the flag drops when either
    the graph or the word enumeration hit the budget.
    """
    if graph is None:
        graph = explore(net, budget)
    complete = graph.complete
    words: set[tuple[Atom, ...]] = {()}
    seen = {(0, ())}
    queue = deque([(0, ())])
    while queue:
        i, word = queue.popleft()
        for t, j in graph.out_edges(i):
            label = graph.net.transition_labels.get(t)
            nxt = word + (label,) if label is not None else word
            key = (j, nxt)
            if key in seen:
                continue
            if len(seen) >= budget:
                complete = False
                continue
            seen.add(key)
            words.add(nxt)
            queue.append(key)
    return frozenset(words), complete
