"""Translation of Horn contract theories into contract nets.

Each clause becomes one transition labeled with its head.  Every head atom
``a`` gets a control place that starts marked and is consumed by every
``a``-headed transition, so an atom is granted at most once per run.  For
every atom ``x`` and transition ``t`` there is a delivery place carrying
``x``; ``t`` consumes its own delivery places for its body atoms and feeds
the delivery places of every transition with its head.  Delivery places of a
contractual transition lend, which is what lets a head be granted before its
body and leaves a debt behind until the body arrives.
"""

from __future__ import annotations

from collections.abc import Iterable

from .compose import oplus, trace_equivalent, widen_alphabet
from .contracts import ContractNet, agreement_reachable, urgent
from .errors import ContractError
from .logic import HornClause, PCLContract, clause_atoms, compose_contracts, fact
from .nets import DEFAULT_BUDGET, Atom, LendingNet, Verdict


def clause_tid(clause: HornClause) -> str:
    """Readable, injective transition id for a clause."""
    arrow = "->>" if clause.contractual else "->"
    return "&".join(sorted(clause.body)) + arrow + clause.head


def star_pid(atom: Atom) -> str:
    """Control place spent when ``atom`` is granted."""
    return f"{atom}@*"


def delivery_pid(atom: Atom, clause: HornClause) -> str:
    """Delivery place feeding ``atom`` to the transition of ``clause``."""
    return f"{atom}@{clause_tid(clause)}"


def compile_contract(c: PCLContract, prune: bool = False) -> ContractNet:
    """Build the contract net of a contract.

    The atom universe is everything the contract mentions, ownership map
    included; with ``prune`` the delivery places no transition touches are
    dropped, which changes nothing observable.
    """
    clauses = sorted(c.clauses, key=HornClause.sort_key)
    universe = sorted(c.atoms())
    heads = sorted({cl.head for cl in clauses})

    places: set[str] = {star_pid(a) for a in heads}
    place_labels: dict[str, str] = {}
    lending: set[str] = set()
    for cl in clauses:
        for atom in universe:
            pid = delivery_pid(atom, cl)
            places.add(pid)
            place_labels[pid] = atom
            if cl.contractual:
                lending.add(pid)

    transitions: dict[str, str] = {clause_tid(cl): cl.head for cl in clauses}
    flow: set[tuple[str, str]] = set()
    for cl in clauses:
        tid = clause_tid(cl)
        flow.add((star_pid(cl.head), tid))
        for atom in cl.body:
            flow.add((delivery_pid(atom, cl), tid))
        for target in clauses:
            flow.add((tid, delivery_pid(cl.head, target)))

    if prune:
        touched = {x for arc in flow for x in arc}
        isolated = {p for p in places if p not in touched and p not in {star_pid(a) for a in heads}}
        places -= isolated
        place_labels = {p: a for p, a in place_labels.items() if p in places}
        lending -= isolated

    net = LendingNet(
        places=frozenset(places),
        transitions=frozenset(transitions),
        flow=frozenset(flow),
        place_labels=place_labels,
        transition_labels=transitions,
        initial={star_pid(a): 1 for a in heads},
        lending=frozenset(lending),
        alphabet=frozenset(universe),
    )
    return ContractNet(
        net=net,
        participants=c.participants,
        ownership=c.ownership,
        goals=c.goals,
    )


def extend_with_facts(c: PCLContract, atoms: Iterable[Atom]) -> PCLContract:
    """Add the given atoms as facts, binding their owners where needed."""
    atoms = frozenset(atoms)
    unknown = sorted(a for a in atoms if a not in c.ownership)
    if unknown:
        raise ContractError(f"cannot assume unowned atoms: {unknown}")
    return PCLContract(
        clauses=c.clauses | {fact(a) for a in atoms},
        participants=c.participants | {c.ownership[a] for a in atoms},
        ownership=c.ownership,
        goals=c.goals,
    )


def agreement_via_net(c: PCLContract, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide agreement on the compiled net: reach an honored covering node."""
    return agreement_reachable(compile_contract(c), budget)


def urgent_via_net(c: PCLContract, done: Iterable[Atom], budget: int = DEFAULT_BUDGET) -> frozenset[Atom]:
    """Net-side urgency after ``done``: recompile with the done atoms as facts.

    Granted atoms act as facts from then on; without them the compiled net
    would still owe their justifications and see no way to an honored
    marking.
    """
    done = frozenset(done)
    cn = compile_contract(extend_with_facts(c, done))
    return urgent(cn, done, budget)


def compile_compose_commutes(
    first: PCLContract,
    second: PCLContract,
    budget: int = DEFAULT_BUDGET,
) -> Verdict:
    """Compare compiling the composition against composing the compilations."""
    joint = compile_contract(compose_contracts(first, second)).net
    left, right = widen_alphabet([compile_contract(first).net, compile_contract(second).net])
    return trace_equivalent(joint, oplus(left, right), budget)
