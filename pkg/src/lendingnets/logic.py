"""Horn contract logic: theories, provability, proof traces, urgency.

Clauses come in two kinds.  An intuitionistic clause ``x1 & ... & xn -> a``
yields its head once the whole body is available.  A contractual clause
``x1 & ... & xn ->> a`` may yield its head on credit: the head counts as
available immediately, provided the body becomes provable once the head is
assumed.  Proof traces record the orders in which atoms can be granted; they
are duplicate-free words, and the rule for contractual clauses interleaves
the head anywhere before its own justification.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ContractError
from .nets import Atom

Trace = tuple[Atom, ...]

Participant = str


@dataclass(frozen=True)
class HornClause:
    """One clause; ``contractual`` selects ``->>`` over ``->``.

    A fact is an intuitionistic clause with an empty body; contractual
    clauses must have a non-empty body.
    """

    head: Atom
    body: frozenset[Atom] = frozenset()
    contractual: bool = False

    def __post_init__(self):
        object.__setattr__(self, "body", frozenset(self.body))
        if not self.head or not isinstance(self.head, str):
            raise ContractError(f"bad clause head {self.head!r}")
        if self.contractual and not self.body:
            raise ContractError("a contractual clause needs a non-empty body")

    @property
    def is_fact(self) -> bool:
        return not self.body and not self.contractual

    def atoms(self) -> frozenset[Atom]:
        return self.body | {self.head}

    def sort_key(self) -> tuple:
        return (self.head, self.contractual, tuple(sorted(self.body)))


def fact(atom: Atom) -> HornClause:
    return HornClause(head=atom)


def clause_atoms(clauses: Iterable[HornClause]) -> frozenset[Atom]:
    out: set[Atom] = set()
    for c in clauses:
        out |= c.atoms()
    return frozenset(out)


@dataclass(frozen=True, eq=False)
class PCLContract:
    """A theory, the participants bound by it, atom ownership, and goal sets.

    Ownership must cover every atom the theory or the goals mention, and the
    owner of every clause head must be one of the bound participants: a
    contract can only promise what its own participants control.
    """

    clauses: frozenset[HornClause]
    participants: frozenset[Participant]
    ownership: Mapping[Atom, Participant]
    goals: frozenset[frozenset[Atom]]
    _canon: tuple = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        clauses = frozenset(self.clauses)
        participants = frozenset(self.participants)
        ownership = dict(self.ownership)
        goals = frozenset(frozenset(g) for g in self.goals)
        mentioned = clause_atoms(clauses) | frozenset(a for g in goals for a in g)
        unowned = sorted(mentioned - set(ownership))
        if unowned:
            raise ContractError(f"atoms without an owner: {unowned}")
        for c in sorted(clauses, key=HornClause.sort_key):
            owner = ownership[c.head]
            if owner not in participants:
                raise ContractError(
                    f"head {c.head!r} is owned by {owner!r}, not a bound participant"
                )
        object.__setattr__(self, "clauses", clauses)
        object.__setattr__(self, "participants", participants)
        object.__setattr__(self, "ownership", ownership)
        object.__setattr__(self, "goals", goals)
        object.__setattr__(
            self,
            "_canon",
            (
                tuple(sorted(c.sort_key() for c in clauses)),
                tuple(sorted(participants)),
                tuple(sorted(ownership.items())),
                tuple(sorted(tuple(sorted(g)) for g in goals)),
            ),
        )

    def __eq__(self, other):
        if not isinstance(other, PCLContract):
            return NotImplemented
        return self._canon == other._canon

    def __hash__(self):
        return hash(self._canon)

    def atoms(self) -> frozenset[Atom]:
        return clause_atoms(self.clauses) | frozenset(a for g in self.goals for a in g) | frozenset(self.ownership)


def contract(
    clauses: Iterable[HornClause] = (),
    participants: Iterable[Participant] = (),
    ownership: Mapping[Atom, Participant] | None = None,
    goals: Iterable[Iterable[Atom]] = ((),),
) -> PCLContract:
    """Convenience constructor; the default goal family is the empty goal."""
    return PCLContract(
        clauses=frozenset(clauses),
        participants=frozenset(participants),
        ownership=dict(ownership or {}),
        goals=frozenset(frozenset(g) for g in goals),
    )


def _theory(clauses: Iterable[HornClause]) -> frozenset[HornClause]:
    return frozenset(clauses)


@lru_cache(maxsize=None)
def _provable(theory: frozenset[HornClause]) -> frozenset[Atom]:
    proved: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for c in sorted(theory, key=HornClause.sort_key):
            if c.head in proved:
                continue
            if not c.contractual:
                if c.body <= proved:
                    proved.add(c.head)
                    changed = True
            else:
                assumed = theory | {fact(c.head)}
                if c.body <= _provable(assumed):
                    proved.add(c.head)
                    changed = True
    return frozenset(proved)


def provable_atoms(clauses: Iterable[HornClause]) -> frozenset[Atom]:
    """Least set of atoms derivable from the theory.

    An intuitionistic clause fires once its body is included; a contractual
    clause fires once its body is derivable under the added assumption of its
    own head.
    """
    return _provable(_theory(clauses))


def admits_agreement(c: PCLContract) -> bool:
    """True when some goal set is entirely provable from the theory."""
    proved = provable_atoms(c.clauses)
    return any(goal <= proved for goal in c.goals)


def _merged_ownership(first: PCLContract, second: PCLContract) -> dict[Atom, Participant]:
    merged = dict(first.ownership)
    for atom, owner in second.ownership.items():
        if merged.get(atom, owner) != owner:
            raise ContractError(
                f"atom {atom!r} owned by {merged[atom]!r} on one side and {owner!r} on the other"
            )
        merged[atom] = owner
    known_first = first.participants | frozenset(first.ownership.values())
    known_second = second.participants | frozenset(second.ownership.values())
    for participant in sorted(known_first & known_second):
        left = {a for a, p in first.ownership.items() if p == participant}
        right = {a for a, p in second.ownership.items() if p == participant}
        if left != right:
            raise ContractError(
                f"participant {participant!r} owns {sorted(left)} on one side and {sorted(right)} on the other"
            )
    return merged


def compose_contracts(first: PCLContract, second: PCLContract) -> PCLContract:
    """Union the theories and pair up the goals of two contracts.

    The bound participant sets must be disjoint and the ownership maps must
    agree wherever they overlap.  The composite goals are all unions of one
    goal set from each side.
    """
    overlap = first.participants & second.participants
    if overlap:
        raise ContractError(f"participants bound twice: {sorted(overlap)}")
    merged = _merged_ownership(first, second)
    goals = frozenset(g1 | g2 for g1 in first.goals for g2 in second.goals)
    return PCLContract(
        clauses=first.clauses | second.clauses,
        participants=first.participants | second.participants,
        ownership=merged,
        goals=goals,
    )


def dedupe(word: Iterable[Atom]) -> Trace:
    """Drop repeated atoms, keeping each one's first occurrence."""
    seen: set[Atom] = set()
    out = []
    for a in word:
        if a not in seen:
            seen.add(a)
            out.append(a)
    return tuple(out)


def concat(left: Iterable[Atom], right: Iterable[Atom]) -> Trace:
    """Concatenation followed by duplicate removal from the right."""
    return dedupe(tuple(left) + tuple(right))


def interleave(left: Iterable[Atom], right: Iterable[Atom]) -> frozenset[Trace]:
    """All shuffles of the two words, duplicates removed from the right."""
    u = dedupe(left)
    v = dedupe(right)
    total = len(u) + len(v)
    out: set[Trace] = set()
    for slots in itertools.combinations(range(total), len(u)):
        it_u, it_v = iter(u), iter(v)
        chosen = set(slots)
        word = tuple(next(it_u) if i in chosen else next(it_v) for i in range(total))
        out.add(dedupe(word))
    return frozenset(out)


@lru_cache(maxsize=None)
def _traces(theory: frozenset[HornClause]) -> frozenset[Trace]:
    words: set[Trace] = {()}
    changed = True
    while changed:
        changed = False
        for c in sorted(theory, key=HornClause.sort_key):
            if not c.contractual:
                for word in list(words):
                    if c.head not in word and c.body <= set(word):
                        new = concat(word, (c.head,))
                        if new not in words:
                            words.add(new)
                            changed = True
            else:
                assumed = theory | {fact(c.head)}
                justified = words if assumed == theory else _traces(assumed)
                for word in list(justified):
                    if c.body <= set(word):
                        for new in interleave(word, (c.head,)):
                            if new not in words:
                                words.add(new)
                                changed = True
    return frozenset(words)


def proof_traces(clauses: Iterable[HornClause]) -> frozenset[Trace]:
    """The orders in which the theory can grant its atoms.

    The empty word is always included.  An intuitionistic clause appends its
    head to any word containing its body.  A contractual clause takes a word
    of the theory extended with its head as a fact, requires the body to
    appear in it, and inserts the head at any earlier point.  The result is
    not prefix-closed in general: an atom granted on credit forces its
    justification to show up in the same word.
    """
    return _traces(_theory(clauses))


def trace_atom_sets(clauses: Iterable[HornClause]) -> frozenset[frozenset[Atom]]:
    return frozenset(frozenset(w) for w in proof_traces(clauses))


def with_facts(clauses: Iterable[HornClause], atoms: Iterable[Atom]) -> frozenset[HornClause]:
    return _theory(clauses) | {fact(a) for a in atoms}


def urgent_atoms(clauses: Iterable[HornClause], done: Iterable[Atom]) -> frozenset[Atom]:
    """Atoms that can be granted next once exactly ``done`` has been granted.

    Judged over the theory extended with ``done`` as facts: an atom is urgent
    when some proof trace reaches the fired set and continues with it.
    """
    done = frozenset(done)
    k = len(done)
    out: set[Atom] = set()
    for word in _traces(with_facts(clauses, done)):
        if len(word) > k and set(word[:k]) == done:
            out.add(word[k])
    return frozenset(out)


def urgent_logic(c: PCLContract, done: Iterable[Atom]) -> frozenset[Atom]:
    return urgent_atoms(c.clauses, done)
