"""Brute-force reference implementations.

Everything fast in this package is tested against these at desk scale.  The
guards are hard errors: an oracle that silently samples is not an oracle.
Performance is a non-goal here.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

from .core import Partition, PartitionError, common_power_base, power, to_base_counts
from .orders import DEFAULT_NODE_BUDGET, embeds
from .stablep import _nu_key

ASSIGNMENT_GUARD = 10**6
CANDIDATE_GUARD = 10**5


class TooLarge(PartitionError):
    """The requested exhaustive search exceeds the oracle guard."""


def brute_embed(lam: Partition, mu: Partition) -> bool:
    """Try every map from lam indices to mu indices."""
    space = len(mu) ** len(lam)
    if space > ASSIGNMENT_GUARD:
        raise TooLarge(f"{space} assignments exceed the guard of {ASSIGNMENT_GUARD}")
    for assignment in itertools.product(range(len(mu)), repeat=len(lam)):
        loads = [0] * len(mu)
        for i, j in enumerate(assignment):
            loads[j] += lam[i]
        if all(loads[j] <= mu[j] for j in range(len(mu))):
            return True
    return False


def brute_supermajorize(mu: Partition, lam: Partition) -> bool:
    """Tail-sum dominance checked at every threshold up to max entry + 1."""
    top = max(mu.max_entry, lam.max_entry)
    for x in range(1, top + 2):
        if sum(e for e in mu.entries if e >= x) < sum(e for e in lam.entries if e >= x):
            return False
    return True


def _candidate_count(max_len: int, max_entry: int) -> int:
    return sum(math.comb(max_entry + l - 1, l) for l in range(1, max_len + 1))


def brute_stable_search(lam: Partition, mu: Partition, max_len: int, max_entry: int,
                        node_budget: int = DEFAULT_NODE_BUDGET) -> Partition | None:
    """Bounded existence search for a catalyst nu with lam x nu embedding in mu x nu.

    Enumerates every nonincreasing candidate within the bounds and returns the
    best valid one: candidates comparable under the catalyst order (power of
    the pair's common base) come first, in that order; remaining ties break on
    total then entries.
    """
    space = _candidate_count(max_len, max_entry)
    if space > CANDIDATE_GUARD:
        raise TooLarge(f"{space} candidates exceed the guard of {CANDIDATE_GUARD}")
    from .core import product  # local import keeps the module head small

    base = common_power_base(lam, mu)
    best = None
    best_key = None
    for length in range(1, max_len + 1):
        for entries in itertools.combinations_with_replacement(range(max_entry, 0, -1), length):
            nu = Partition(entries)
            prod_l = product(lam, nu)
            prod_m = product(mu, nu)
            if prod_l.total > prod_m.total:
                continue
            if embeds(prod_l, prod_m, node_budget) is None:
                continue
            key = _candidate_key(nu, base)
            if best_key is None or key < best_key:
                best, best_key = nu, key
    return best


def _candidate_key(nu: Partition, base: int | None):
    if base is not None:
        try:
            span, ratios = _nu_key(to_base_counts(nu, base))
            return (0, span, ratios, nu.total, nu.entries)
        except PartitionError:
            pass
    return (1, len(nu), (), nu.total, nu.entries)


class BulkSampleRow(NamedTuple):
    n: int
    copies: int
    embedded: bool


def bulk_sample(lam: Partition, mu: Partition, n_max: int, eps) -> list[BulkSampleRow]:
    """Sanity sampling of the bulk definition at small tensor powers.

    For each N up to ``n_max`` reports whether the N-th power of lam embeds
    into the ceil(N*(1+eps))-th power of mu.  A companion to the norm
    characterization, never a decision procedure.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    rows = []
    for n in range(1, n_max + 1):
        copies = math.ceil(n * (1 + eps))
        lam_n = power(lam, n)
        mu_k = power(mu, copies)
        rows.append(BulkSampleRow(n, copies, brute_embed(lam_n, mu_k)))
    return rows
