"""The directly checkable relations: embedding, first fit, supermajorization.

Embedding of lam into mu assigns every entry of lam to an entry of mu so
that no target is overfilled; deciding it is bin packing, so the exact
search is a budgeted branch-and-bound.  Supermajorization compares tail
sums at every threshold.  For power-of-q partitions the two coincide, and
the witness is built greedily by splitting leftover capacity into base-q
digits.  ``relations`` bundles all four relations into one report and
asserts the implication diagram between them.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core import (
    BaseMismatch,
    Partition,
    PartitionError,
    PowerPartition,
    common_power_base,
    from_base_counts,
    to_base_counts,
    _power_exponent,
)
from .norms import BulkVerdict, dominates_all_s, exact_dominates_powerq

DEFAULT_NODE_BUDGET = 10**7


class BudgetExceeded(PartitionError):
    """The search node limit was hit before the question was resolved.

    This is a first-class outcome distinct from "no embedding".
    """

    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


@dataclass(frozen=True)
class EmbeddingWitness:
    """Assignment of lam-entry indices to mu-entry indices, with bin loads.

    ``assignment[i] = j`` places lam's i-th canonical entry into mu's j-th
    canonical entry; ``loads[j]`` is the resulting total in bin j.
    """

    assignment: tuple[int, ...]
    loads: tuple[int, ...]

    def validate(self, lam: Partition, mu: Partition) -> bool:
        """Recheck every invariant against the exact inputs."""
        if len(self.assignment) != len(lam):
            return False
        if len(self.loads) != len(mu):
            return False
        loads = [0] * len(mu)
        for i, j in enumerate(self.assignment):
            if not 0 <= j < len(mu):
                return False
            loads[j] += lam[i]
        if tuple(loads) != self.loads:
            return False
        return all(loads[j] <= mu[j] for j in range(len(mu)))


def _make_witness(lam: Partition, mu: Partition, assignment: Sequence[int]) -> EmbeddingWitness:
    loads = [0] * len(mu)
    for i, j in enumerate(assignment):
        loads[j] += lam[i]
    return EmbeddingWitness(tuple(assignment), tuple(loads))


class Supermajorization(NamedTuple):
    holds: bool
    failing_x: int | None


def supermajorizes(mu: Partition, lam: Partition) -> Supermajorization:
    """True iff for every threshold x the tail sum of mu dominates lam's.

    The tail sums are step functions that change only at entry values, so the
    checkpoints are the entry values of both partitions plus the point just
    above each value (those are the block starts, which makes the reported
    failing x the smallest failing integer).
    """
    values = set(mu.entries) | set(lam.entries)
    checkpoints = sorted({1} | values | {v + 1 for v in values})
    for x in checkpoints:
        lam_tail = sum(e for e in lam.entries if e >= x)
        mu_tail = sum(e for e in mu.entries if e >= x)
        if mu_tail < lam_tail:
            return Supermajorization(False, x)
    return Supermajorization(True, None)


def is_divisible_chain(lam: Partition) -> bool:
    """True iff every entry divides every larger entry."""
    return all(lam[i] % lam[i + 1] == 0 for i in range(len(lam) - 1))


def first_fit(lam: Partition, mu: Partition,
              bin_order: Sequence[int] | None = None) -> EmbeddingWitness | None:
    """Greedy placement, largest item first, into the first bin with room.

    Bins are scanned in canonical order unless ``bin_order`` (a permutation
    of bin indices) says otherwise.  Returns None at the first item that fits
    nowhere; for divisible-chain lam that is a proof of non-embeddability.
    """
    order = range(len(mu)) if bin_order is None else list(bin_order)
    remaining = list(mu.entries)
    assignment = []
    for item in lam.entries:
        for j in order:
            if remaining[j] >= item:
                remaining[j] -= item
                assignment.append(j)
                break
        else:
            return None
    return _make_witness(lam, mu, assignment)


def _tail_dominates(caps: Sequence[int], items: Sequence[int]) -> bool:
    """Supermajorization of an item multiset by a capacity multiset.

    Necessary for any embedding of the items into bins with those remaining
    capacities; used as a search prune.
    """
    values = sorted(set(items) | {c for c in caps if c > 0})
    for x in values:
        if sum(c for c in caps if c >= x) < sum(e for e in items if e >= x):
            return False
    return True


def embeds(lam: Partition, mu: Partition,
           node_budget: int = DEFAULT_NODE_BUDGET) -> EmbeddingWitness | None:
    """Complete branch-and-bound search for an embedding of lam into mu.

    Items are placed largest first.  Pruning: total and max-entry bounds,
    supermajorization of the remaining suffix against remaining capacities,
    identical items only move rightward across bins, and bins with equal
    remaining capacity are tried once per node.  Deterministic: the witness
    returned is the first under the induced assignment order.

    Raises BudgetExceeded when ``node_budget`` placements were tried without
    resolving the question.
    """
    if lam.total > mu.total or lam.max_entry > mu.max_entry:
        return None
    if not supermajorizes(mu, lam).holds:
        return None
    items = lam.entries
    caps = list(mu.entries)
    n = len(items)
    assignment = [0] * n
    nodes = 0

    def place(idx: int) -> bool:
        nonlocal nodes
        if idx == n:
            return True
        item = items[idx]
        start = assignment[idx - 1] if idx > 0 and items[idx - 1] == item else 0
        seen: set[int] = set()
        for j in range(start, len(caps)):
            cap = caps[j]
            if cap < item or cap in seen:
                continue
            seen.add(cap)
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded(nodes)
            caps[j] -= item
            suffix = items[idx + 1:]
            ok = not suffix or (
                sum(suffix) <= sum(caps)
                and suffix[0] <= max(caps)
                and _tail_dominates(caps, suffix)
            )
            if ok:
                assignment[idx] = j
                if place(idx + 1):
                    caps[j] += item
                    return True
            caps[j] += item
        return False

    if place(0):
        return _make_witness(lam, mu, assignment)
    return None


def embed_powerq(lam: PowerPartition, mu: PowerPartition) -> EmbeddingWitness | None:
    """Embedding decision and witness for same-base power partitions.

    Supermajorization is decisive here.  When it holds, the witness is built
    by repeatedly placing the largest remaining box into the largest remaining
    capacity and splitting the leftover into base-q digit pieces (every piece
    is at least as large as the box just placed, so nothing is stranded).
    Capacities live in a multiset tagged with their original bin, and the
    emitted witness maps back to the original mu indices.
    """
    if lam.base != mu.base:
        raise BaseMismatch(f"bases differ: {lam.base} vs {mu.base}")
    if lam.is_empty:
        return EmbeddingWitness((), tuple([0] * (0 if mu.is_empty else sum(mu.counts))))
    if mu.is_empty:
        return None
    q = lam.base
    lam_p = from_base_counts(lam)
    mu_p = from_base_counts(mu)
    if not supermajorizes(mu_p, lam_p).holds:
        return None

    # Max-heap of (capacity, original bin) with deterministic tie-breaking.
    heap: list[tuple[int, int, int]] = []
    seq = 0
    for j, cap in enumerate(mu_p.entries):
        heap.append((-cap, j, seq))
        seq += 1
    heapq.heapify(heap)

    assignment = []
    for item in lam_p.entries:
        neg_cap, origin, _ = heapq.heappop(heap)
        cap = -neg_cap
        if cap < item:
            raise AssertionError("largest capacity below item despite supermajorization")
        assignment.append(origin)
        s = _power_exponent(item, q)
        t = _power_exponent(cap, q)
        for e in range(s, t):
            piece = q**e
            for _ in range(q - 1):
                heapq.heappush(heap, (-piece, origin, seq))
                seq += 1

    witness = _make_witness(lam_p, mu_p, assignment)
    if not witness.validate(lam_p, mu_p):
        raise AssertionError("greedy witness failed validation")
    return witness


@dataclass
class RelationReport:
    """All four relations for one pair, with certificates.

    ``embeds`` is None when the exact search ran out of budget; every other
    field is always decided (stable may be UNKNOWN with its own budget note).
    """

    embeds: bool | None
    embed_witness: EmbeddingWitness | None
    supermajorized: bool
    supermajorization_failing_x: int | None
    stable: "StableVerdict"
    bulk: BulkVerdict
    base: int | None = None


def relations(lam: Partition, mu: Partition, *,
              node_budget: int = DEFAULT_NODE_BUDGET,
              max_steps: int | None = None,
              tol=None, grid: int = 64,
              max_base: int | None = None) -> RelationReport:
    """Compute all four relations and enforce the implication diagram.

    Power-of-q pairs take the exact fast paths for embedding and bulk.
    BudgetExceeded is reported as an undecided field, never raised.
    Diagram violations (embeds without supermajorization, and so on) are
    internal errors and raise RuntimeError.
    """
    from . import stablep  # deferred: stablep drives its search through this module

    base = common_power_base(lam, mu, max_base)
    emb_unknown = False
    if base is not None:
        witness = embed_powerq(to_base_counts(lam, base), to_base_counts(mu, base))
    else:
        try:
            witness = embeds(lam, mu, node_budget)
        except BudgetExceeded:
            witness = None
            emb_unknown = True
    emb = None if emb_unknown else witness is not None

    sup = supermajorizes(mu, lam)
    if base is not None:
        bulk = exact_dominates_powerq(to_base_counts(lam, base), to_base_counts(mu, base))
    else:
        bulk = dominates_all_s(lam, mu, tol=tol, grid=grid)

    stable = stablep._stable_embeds_given(
        lam, mu, witness, emb_unknown,
        max_steps=max_steps, max_base=max_base, tol=tol, grid=grid,
    )

    if emb is True:
        if not sup.holds:
            raise RuntimeError("implication violated: embeds but not supermajorized")
        if stable.status == stablep.FAILS:
            raise RuntimeError("implication violated: embeds but stable=FAILS")
    if sup.holds and not bulk.holds:
        raise RuntimeError("implication violated: supermajorized but not bulk")
    if stable.status == stablep.HOLDS and not bulk.holds:
        raise RuntimeError("implication violated: stable holds but not bulk")

    return RelationReport(
        embeds=emb,
        embed_witness=witness,
        supermajorized=sup.holds,
        supermajorization_failing_x=sup.failing_x,
        stable=stable,
        bulk=bulk,
        base=base,
    )
