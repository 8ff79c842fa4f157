"""Contract nets: occurrence lending nets wired to participants and goals.

A contract net adds to a lending net an ownership map from atoms to
participants, the set of participants actually bound by the net, and a
family of goal sets of atoms.  Its shape is constrained so that every node
of the reachability graph reads back as a pair (done atoms, atoms in debt):
the configuration of the node.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .analysis import Node, ReachGraph, explore, urgent_at
from .compose import oplus, widen_alphabet
from .errors import ContractError, IncompleteExplorationError
from .logic import Participant
from .nets import (
    DEFAULT_BUDGET,
    Atom,
    LendingNet,
    Outcome,
    Verdict,
    is_correctly_labeled,
    is_occurrence_net,
)


@dataclass(frozen=True)
class Configuration:
    """Atoms granted so far and atoms currently on credit."""

    done: frozenset[Atom]
    credits: frozenset[Atom]


@dataclass(frozen=True)
class Violation:
    """One failed well-formedness condition; validation returns these as data."""

    code: str
    subject: str
    message: str


@dataclass(frozen=True, eq=False)
class ContractNet:
    """A lending net plus participants, atom ownership, and goal sets."""

    net: LendingNet
    participants: frozenset[Participant]
    ownership: Mapping[Atom, Participant]
    goals: frozenset[frozenset[Atom]]
    _canon: tuple = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "participants", frozenset(self.participants))
        object.__setattr__(self, "ownership", dict(self.ownership))
        object.__setattr__(self, "goals", frozenset(frozenset(g) for g in self.goals))
        object.__setattr__(
            self,
            "_canon",
            (
                self.net,
                tuple(sorted(self.participants)),
                tuple(sorted(self.ownership.items())),
                tuple(sorted(tuple(sorted(g)) for g in self.goals)),
            ),
        )

    def __eq__(self, other):
        if not isinstance(other, ContractNet):
            return NotImplemented
        return self._canon == other._canon

    def __hash__(self):
        return hash(self._canon)


def validate(cn: ContractNet, budget: int = DEFAULT_BUDGET) -> list[Violation]:
    """Well-formedness violations of a contract net; empty means valid.

    Checks, in order: marked places have empty presets and no label; lending
    places are labeled; all output places of a transition carry its label and
    some input place is not lending; equally labeled transitions share an
    initially marked input place; labeled transitions have owned labels whose
    owners are bound participants; the net is an occurrence net and is
    correctly labeled.
    """
    net = cn.net
    out: list[Violation] = []

    for p in sorted(net.initial):
        if net.preset(p):
            out.append(Violation("a", p, f"marked place {p!r} has producers"))
        if p in net.place_labels:
            out.append(Violation("a", p, f"marked place {p!r} is labeled"))
    for p in sorted(net.lending):
        if p not in net.place_labels:
            out.append(Violation("a", p, f"lending place {p!r} is unlabeled"))

    for t in sorted(net.transitions):
        label = net.transition_labels.get(t)
        for p in sorted(net.postset(t)):
            if net.place_labels.get(p) != label:
                out.append(
                    Violation("b", t, f"output place {p!r} of {t!r} does not carry its label")
                )
        if not any(p not in net.lending for p in net.preset(t)):
            out.append(Violation("b", t, f"every input place of {t!r} lends"))

    labeled = [t for t in sorted(net.transitions) if t in net.transition_labels]
    for i, t in enumerate(labeled):
        for u in labeled[i:]:
            if net.transition_labels[t] != net.transition_labels[u]:
                continue
            shared = net.preset(t) & net.preset(u)
            if not any(net.initial.get(p, 0) >= 1 for p in shared):
                out.append(
                    Violation(
                        "c",
                        t,
                        f"{t!r} and {u!r} share the label {net.transition_labels[t]!r} "
                        "but no initially marked input place",
                    )
                )

    for t in labeled:
        atom = net.transition_labels[t]
        owner = cn.ownership.get(atom)
        if owner is None:
            out.append(Violation("ownership", atom, f"atom {atom!r} has no owner"))
        elif owner not in cn.participants:
            out.append(Violation("d", atom, f"owner {owner!r} of {atom!r} is not bound"))

    occurrence = is_occurrence_net(net, budget)
    if occurrence.outcome is Outcome.FAILS:
        out.append(Violation("occurrence", str(occurrence.witness), occurrence.detail))
    elif occurrence.outcome is Outcome.INCONCLUSIVE:
        out.append(Violation("occurrence", "", occurrence.detail))
    if not is_correctly_labeled(net):
        out.append(Violation("labeling", "", "some labeled place has a differently labeled producer"))

    return out


def configuration(cn: ContractNet, node: Node) -> Configuration:
    """Read a graph node as (atoms granted, atoms in debt)."""
    net = cn.net
    done = frozenset(
        net.transition_labels[t] for t in node.fired_set() if t in net.transition_labels
    )
    credits = frozenset(
        net.place_labels[p] for p, n in node.marking if n < 0 and p in net.place_labels
    )
    return Configuration(done=done, credits=credits)


def configuration_from_marking(cn: ContractNet, node: Node) -> frozenset[Atom]:
    """Recover the done set from token counts alone.

    For each atom with labeled transitions, their shared initially marked
    input place is spent exactly when the atom has been granted.
    """
    net = cn.net
    done: set[Atom] = set()
    atoms = sorted(set(net.transition_labels.values()))
    for atom in atoms:
        carriers = [t for t in net.transitions if net.transition_labels.get(t) == atom]
        shared = frozenset(net.places)
        for t in carriers:
            shared &= net.preset(t)
        markers = sorted(p for p in shared if net.initial.get(p, 0) >= 1)
        if markers and all(node.tokens(p) == 0 for p in markers):
            done.add(atom)
    return frozenset(done)


def compose_contract_nets(first: ContractNet, second: ContractNet) -> ContractNet:
    """Compose the nets and merge the contract data.

    Participant sets must be disjoint and ownership must agree; the alphabets
    are widened to their union before the nets are composed.
    """
    overlap = first.participants & second.participants
    if overlap:
        raise ContractError(f"participants bound twice: {sorted(overlap)}")
    merged = _merged_ownership_maps(first, second)
    left, right = widen_alphabet([first.net, second.net])
    return ContractNet(
        net=oplus(left, right),
        participants=first.participants | second.participants,
        ownership=merged,
        goals=frozenset(g1 | g2 for g1 in first.goals for g2 in second.goals),
    )


def _merged_ownership_maps(first: ContractNet, second: ContractNet) -> dict[Atom, Participant]:
    merged = dict(first.ownership)
    for atom, owner in second.ownership.items():
        if merged.get(atom, owner) != owner:
            raise ContractError(
                f"atom {atom!r} owned by {merged[atom]!r} on one side and {owner!r} on the other"
            )
        merged[atom] = owner
    return merged


def _complete_graph(cn: ContractNet, budget: int, graph: ReachGraph | None) -> ReachGraph:
    return graph if graph is not None else explore(cn.net, budget)


def goal_configurations(cn: ContractNet, budget: int = DEFAULT_BUDGET, graph: ReachGraph | None = None):
    """Indices of nodes whose configuration is honored and exactly a goal set."""
    graph = _complete_graph(cn, budget, graph)
    hits = []
    for i, node in enumerate(graph.nodes):
        cfg = configuration(cn, node)
        if not cfg.credits and cfg.done in cn.goals:
            hits.append(i)
    return graph, hits


def weakly_terminates_in(
    cn: ContractNet,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> Verdict:
    """Every node must be able to reach an honored node whose done set is a goal set."""
    graph, hits = goal_configurations(cn, budget, graph)
    return _all_can_reach(cn, graph, hits, budget)


def weakly_terminates_covering(
    cn: ContractNet,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> Verdict:
    """As weakly_terminates_in, but the done set may exceed the goal set."""
    graph = _complete_graph(cn, budget, graph)
    hits = [i for i, node in enumerate(graph.nodes) if _covers_goal(cn, node)]
    return _all_can_reach(cn, graph, hits, budget)


def _covers_goal(cn: ContractNet, node: Node) -> bool:
    cfg = configuration(cn, node)
    return not cfg.credits and any(goal <= cfg.done for goal in cn.goals)


def _all_can_reach(cn: ContractNet, graph: ReachGraph, hits: list[int], budget: int) -> Verdict:
    from .analysis import backward_closure

    if not graph.complete:
        return Verdict.inconclusive(f"exploration budget {budget} exhausted")
    good = backward_closure(graph, hits)
    for i, node in enumerate(graph.nodes):
        if i not in good:
            cfg = configuration(cn, node)
            return Verdict.fails(
                witness=node,
                detail=(
                    f"stuck at done={sorted(cfg.done)} credits={sorted(cfg.credits)}: "
                    f"{node.describe()}"
                ),
            )
    return Verdict.holds()


def agreement_reachable(
    cn: ContractNet,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> Verdict:
    """Can the net reach an honored node whose done set covers some goal set?

    This is the net-side agreement check: reachability of a covering honored
    configuration, with the node found as witness.
    """
    graph = _complete_graph(cn, budget, graph)
    for i, node in enumerate(graph.nodes):
        if _covers_goal(cn, node):
            return Verdict.holds(detail=node.describe())
    if graph.complete:
        return Verdict.fails(detail="no honored node covers a goal set")
    return Verdict.inconclusive(f"exploration budget {budget} exhausted")


def urgent(
    cn: ContractNet,
    done: Iterable[Atom],
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> frozenset[Atom]:
    """Atoms fireable next, toward an honored marking, at any node with this done set.

    The union over matching nodes of urgent_at; a done set no node realizes
    yields the empty set.
    """
    graph = _complete_graph(cn, budget, graph)
    if not graph.complete:
        raise IncompleteExplorationError("urgency needs a complete reachability graph")
    wanted = frozenset(done)
    result: set[Atom] = set()
    for i, node in enumerate(graph.nodes):
        if configuration(cn, node).done == wanted:
            result |= urgent_at(graph, i)
    return frozenset(result)


def reachable_configurations(
    cn: ContractNet,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> frozenset[Configuration]:
    graph = _complete_graph(cn, budget, graph)
    return frozenset(configuration(cn, node) for node in graph.nodes)


def honored_done_sets(
    cn: ContractNet,
    budget: int = DEFAULT_BUDGET,
    graph: ReachGraph | None = None,
) -> frozenset[frozenset[Atom]]:
    """Done sets of all reachable honored configurations."""
    graph = _complete_graph(cn, budget, graph)
    return frozenset(
        cfg.done
        for cfg in reachable_configurations(cn, budget, graph)
        if not cfg.credits
    )
