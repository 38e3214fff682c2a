"""The recursive sampled-decomposition search driver.

One attempt: below the size threshold solve exhaustively; otherwise decompose
into O(k^2) subproblems, look for solutions spanning two or more of them
*before* evaluating any subproblem, fail the attempt if any subproblem exceeds
the concentration bound, and otherwise descend with the Grover-model search.
A failed attempt is retried from the root with a fresh sample, up to the
amplification budget.

All ledger charges are model costs (units from the analysis), not measured
instruction counts; answers always come from the classical scan underneath.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .ledger import (AmplificationPolicy, ERROR, ExhaustedRepeats, QueryLedger,
                     amplify, grover_query_count)


@dataclass(frozen=True)
class RqsParams:
    n0: int
    epsilon: float
    delta: float
    c3: float
    alpha: float
    k: int
    base_threshold: int
    k_policy: str = "root"        # "root": k fixed from n0; "per_level": from |M|
    max_depth: int = 8
    c_amp: float = 3.0

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.k_policy not in ("root", "per_level"):
            raise ValueError("k_policy must be 'root' or 'per_level'")

    def k_formula(self, size: int) -> int:
        """ceil(size^(1/alpha) * delta * (ln size + ln 1/epsilon)), natural logs."""
        if size < 2:
            return 2
        return math.ceil(size ** (1.0 / self.alpha) * self.delta
                         * (math.log(size) + math.log(1.0 / self.epsilon)))

    def oversize_bound(self, size: int) -> float:
        """Subproblems larger than (|M|/k) * delta * (ln|M| + ln 1/eps) abort."""
        k = self.k if self.k_policy == "root" else max(2, self.k_formula(size))
        return (size / k) * self.delta * (math.log(max(size, 2)) + math.log(1.0 / self.epsilon))


def choose_params(n: int, epsilon: float, delta: float = 2.0, c3: float = math.e,
                  k_policy: str = "root") -> RqsParams:
    """Parameter selection: alpha = sqrt(2 ln n / (ln c3 + ln ln n)), k from it.

    The size threshold below which the exhaustive path runs equals the k
    formula evaluated at the current size; the threshold is deliberately not
    clamped to the instance size, otherwise no instance could ever reach the
    base case.
    """
    if n < 4:
        n = 4
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    log_n = math.log(n)
    denom = math.log(c3) + math.log(log_n)
    if denom <= 0:
        raise ValueError("c3 too small: ln(c3) + ln ln n must be positive")
    alpha = math.sqrt(2.0 * log_n / denom)
    k = max(2, math.ceil(n ** (1.0 / alpha) * delta * (log_n + math.log(1.0 / epsilon))))
    max_depth = math.ceil(alpha) + 1
    return RqsParams(n0=n, epsilon=epsilon, delta=delta, c3=c3, alpha=alpha,
                     k=k, base_threshold=k, max_depth=max_depth, k_policy=k_policy)


@dataclass
class RqsResult:
    decision: bool
    witness: object
    ledger: QueryLedger
    baseline_ledger: QueryLedger
    retries: int
    failed: bool = False
    max_depth_seen: int = 0

    def __post_init__(self):
        if self.decision and self.witness is None:
            raise ValueError("a yes decision must carry a witness")
        if not self.decision and self.witness is not None:
            raise ValueError("a no decision must not carry a witness")


class _Books:
    """Quantum-model ledger and its unscaled classical-decomposition twin."""

    __slots__ = ("quantum", "classical")

    def __init__(self):
        self.quantum = QueryLedger()
        self.classical = QueryLedger()

    def charge(self, units: float) -> None:
        self.quantum.classical_ops += units
        self.classical.classical_ops += units

    def absorb_descent(self, t: int, child_q: QueryLedger, child_c: QueryLedger) -> None:
        m = grover_query_count(t)
        factor = m / t
        self.quantum.classical_ops += factor * child_q.classical_ops
        self.quantum.amplification_invocations += factor * child_q.amplification_invocations
        self.quantum.grover_queries += max(m, factor * child_q.grover_queries)
        self.classical.merge(child_c)


class _Oversize(Exception):
    def __init__(self, size, bound):
        super().__init__(f"subproblem of size {size} exceeds bound {bound:.2f}")
        self.size = size
        self.bound = bound


def _decompose_charge(size: int, k: int) -> float:
    return size * k * k * max(math.log(max(size, 2)), 1.0)


def _search(adapter, params: RqsParams, depth: int, books: _Books, rng, stats):
    stats["max_depth"] = max(stats["max_depth"], depth)
    if depth > params.max_depth:
        raise AssertionError(f"recursion depth {depth} exceeds alpha-based limit")
    size = adapter.size()
    threshold = params.k if params.k_policy == "root" else params.k_formula(size)
    if size < threshold or size <= 3:
        books.charge(adapter.base_charge())
        return adapter.base_solve()

    k_eff = max(2, min(threshold, size - 1))
    decomposition = adapter.decompose(k_eff, rng)
    books.charge(_decompose_charge(size, k_eff))
    witness = adapter.span_check(decomposition)
    if witness is not None:
        return witness

    subs = decomposition.subproblems
    bound = params.oversize_bound(size)
    for spec in subs:
        if spec.size > bound:
            raise _Oversize(spec.size, bound)

    if not subs:
        return None
    child_q = QueryLedger()
    child_c = QueryLedger()
    found = None
    try:
        for spec in subs:
            child_books = _Books()
            child_rng = random.Random(rng.getrandbits(63))
            sub_adapter = adapter.restrict(spec)
            result = _search(sub_adapter, params, depth + 1, child_books, child_rng, stats)
            child_q.merge(child_books.quantum)
            child_c.merge(child_books.classical)
            if result is not None:
                found = result
                break
    finally:
        books.absorb_descent(len(subs), child_q, child_c)
    return found


def rqs_solve(adapter, params: RqsParams, rng) -> RqsResult:
    """Run the search with root-level amplification.

    ``rng`` is an int seed or a random.Random.  Any oversize subproblem aborts
    the whole attempt and the next attempt redraws the root sample; after
    ceil(c_amp / sqrt(epsilon)) failed attempts the result is flagged failed.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    policy = AmplificationPolicy(params.epsilon, params.c_amp)
    books = _Books()
    stats = {"max_depth": 0}

    def one_attempt(_attempt_index):
        attempt_rng = random.Random(rng.getrandbits(63))
        try:
            return (_search(adapter, params, 0, books, attempt_rng, stats),)
        except _Oversize:
            return ERROR

    try:
        outcome, attempts = amplify(one_attempt, policy, books.quantum)
        books.classical.amplification_invocations = books.quantum.amplification_invocations
    except ExhaustedRepeats as exc:
        books.classical.amplification_invocations = books.quantum.amplification_invocations
        return RqsResult(decision=False, witness=None, ledger=books.quantum,
                         baseline_ledger=books.classical, retries=exc.attempts,
                         failed=True, max_depth_seen=stats["max_depth"])
    witness = outcome[0]
    return RqsResult(decision=witness is not None, witness=witness,
                     ledger=books.quantum, baseline_ledger=books.classical,
                     retries=attempts, failed=False,
                     max_depth_seen=stats["max_depth"])


def verify_witness(adapter, witness) -> bool:
    """Check a witness against the problem's own independent predicate."""
    if witness is None:
        return False
    return bool(adapter.verify(witness))
