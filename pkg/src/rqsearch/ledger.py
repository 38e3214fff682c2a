"""Cost accounting for the simulated Grover model.

Nothing quantum is simulated here: answers always come from a classical scan,
and this module only keeps the books.  A ledger holds three counters: plain
classical work units, Grover-model queries, and amplification invocations.

Charging rule for a search over t items: the model performs ceil(sqrt(t))
queries.  When the scanned items are themselves costly (nested searches), the
evaluated children's ledgers are merged scaled by ceil(sqrt(t))/t, and the
query counter takes the larger of its own ceil(sqrt(t)) and the scaled child
queries, so nested searches multiply (sqrt(t1)*sqrt(t2)) instead of adding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class QueryLedger:
    classical_ops: float = 0.0
    grover_queries: float = 0.0
    amplification_invocations: float = 0.0

    def charge_classical(self, units: float) -> None:
        if units < 0:
            raise ValueError("charges are nonnegative")
        self.classical_ops += units

    def merge(self, other: "QueryLedger") -> None:
        self.classical_ops += other.classical_ops
        self.grover_queries += other.grover_queries
        self.amplification_invocations += other.amplification_invocations

    def is_zero(self) -> bool:
        return (self.classical_ops == 0.0 and self.grover_queries == 0.0
                and self.amplification_invocations == 0.0)

    def total(self) -> float:
        return self.classical_ops + self.grover_queries + self.amplification_invocations

    def copy(self) -> "QueryLedger":
        return QueryLedger(self.classical_ops, self.grover_queries,
                           self.amplification_invocations)

    def as_dict(self) -> dict:
        return {
            "classical_ops": self.classical_ops,
            "grover_queries": self.grover_queries,
            "amplification_invocations": self.amplification_invocations,
            "total": self.total(),
        }


@dataclass(frozen=True)
class AmplificationPolicy:
    """Repeat budget ceil(c_amp / sqrt(epsilon)) for a one-sided-error procedure."""

    epsilon: float
    c_amp: float = 3.0

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def repeats(self) -> int:
        return max(1, math.ceil(self.c_amp / math.sqrt(self.epsilon)))


class ExhaustedRepeats(Exception):
    """All amplification attempts returned Error."""

    def __init__(self, attempts: int):
        super().__init__(f"amplification budget exhausted after {attempts} attempts")
        self.attempts = attempts


class NotFound:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotFound"


NOT_FOUND = NotFound()


def grover_query_count(t: int) -> int:
    return math.ceil(math.sqrt(t))


def grover_find(items, predicate, ledger: QueryLedger):
    """First index whose predicate holds, with Grover-model charging.

    The scan is classical and deterministic (first hit in index order), so the
    cost model never changes answers.  `predicate(item, sub_ledger)` may charge
    its own work to `sub_ledger`; evaluated child costs are merged scaled by
    ceil(sqrt(t))/t.  Returns NOT_FOUND when no item matches.
    """
    t = len(items)
    if t == 0:
        return NOT_FOUND
    m = grover_query_count(t)
    factor = m / t
    children = QueryLedger()
    found = NOT_FOUND
    for i, item in enumerate(items):
        sub = QueryLedger()
        hit = predicate(item, sub)
        children.merge(sub)
        if hit:
            found = i
            break
    ledger.classical_ops += factor * children.classical_ops
    ledger.amplification_invocations += factor * children.amplification_invocations
    ledger.grover_queries += max(m, factor * children.grover_queries)
    return found


class _Error:
    def __repr__(self):
        return "Error"


ERROR = _Error()


def amplify(procedure, policy: AmplificationPolicy, ledger: QueryLedger):
    """Re-run a one-sided-error procedure until it returns a non-Error result.

    `procedure(attempt_index)` must use fresh randomness per call and return
    ERROR on its failure path.  Raises ExhaustedRepeats when the whole budget
    fails; each run charges one amplification invocation.
    """
    budget = policy.repeats
    for attempt in range(budget):
        ledger.amplification_invocations += 1
        result = procedure(attempt)
        if result is not ERROR:
            return result, attempt + 1
    raise ExhaustedRepeats(budget)
