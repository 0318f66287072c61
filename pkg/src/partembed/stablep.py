"""Stable embeddability: does some catalyst nu make lam x nu embed in mu x nu?

For power-of-q pairs the catalyst is constructed level by level.  After
cancelling common box counts (normalization), the iteration walks box sizes
downward, at each size comparing the demand from lam's side with the room on
mu's side; whenever demand exceeds room, the next nu coefficient is topped up
by a ceiling division against mu's top box count, otherwise the surplus is
carried down (times q) as leftover M.  Once the trailing coefficients are all
zero for long enough that no future demand can appear, the iteration has
proved level-by-level dominance of the products and stops.  A second pass
with the first coefficient scaled to (top count)^(N+1) makes every division
exact, and the result is scaled to an integral partition.  The iteration
need not terminate: it halts exactly on the stable pairs, so the step budget
produces honest UNKNOWN verdicts, never fabricated ones.

Refutations come from prefilters, each with a re-checkable certificate:
failed norm dominance, an exactly certified interior norm equality point for
a pair that is not identical, a top-box-index gap after normalization, and a
valuation gap under tight packing (equal totals force every product bin to
be filled exactly, which is impossible when some prime divides every lam
entry more often than every mu entry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    BaseMismatch,
    ContractViolation,
    EmptyPartition,
    Partition,
    PowerPartition,
    base_digits,
    common_power_base,
    from_base_counts,
    from_entries,
    product,
    to_base_counts,
)
from .norms import BulkVerdict, EqualityPoint, dominates_all_s, exact_dominates_powerq, \
    _eval_poly, _squarefree_part, _trim
from .orders import (
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    EmbeddingWitness,
    embed_powerq,
    embeds,
    supermajorizes,
    _make_witness,
)

HOLDS = "HOLDS"
FAILS = "FAILS"
UNKNOWN = "UNKNOWN"

BULK_FAILS = "BulkFails"
NORM_EQUALITY = "NormEquality"
TOP_INDEX = "TopIndexRule"
TIGHT_VALUATION = "TightValuation"


@dataclass(frozen=True)
class StepRecord:
    """One iteration step: coefficient index decided, demand, room, result."""

    pass_index: int
    step: int
    demand: int
    room: int
    coefficient: int
    leftover: int


@dataclass(frozen=True)
class StableWitness:
    nu: Partition
    embedding: EmbeddingWitness
    construction_log: tuple[StepRecord, ...] = ()


@dataclass(frozen=True)
class StableRefutation:
    """A checkable certificate that no catalyst can exist."""

    rule: str
    bulk: BulkVerdict | None = None
    equality: EqualityPoint | None = None
    base: int | None = None
    top_lam: int | None = None
    top_mu: int | None = None
    prime: int | None = None
    lam_valuation: int | None = None
    mu_valuation: int | None = None

    def verify(self, lam: Partition, mu: Partition) -> bool:
        """Recheck the certificate against the pair it refutes."""
        if self.rule == BULK_FAILS:
            if self.bulk is None or self.bulk.holds:
                return False
            if self.bulk.failure_x is not None and self.base is not None:
                return _profile_poly_at(lam, mu, self.base, self.bulk.failure_x) < 0
            verdict = _bulk_verdict(lam, mu, self.base)
            return not verdict.holds
        if self.rule == NORM_EQUALITY:
            if lam == mu or self.equality is None or not self.equality.exact:
                return False
            if self.equality.x_interval is None or self.base is None:
                return False
            xa, xb = self.equality.x_interval
            q = self.base
            if xa < q or xb < xa:
                return False
            P = _profile_poly(lam, mu, q)
            if xa == xb:
                return _eval_poly(P, xa) == 0
            S = _squarefree_part(P)
            if xa == q and _eval_poly(S, Fraction(q)) == 0:
                return False
            return _eval_poly(S, xa) * _eval_poly(S, xb) < 0
        if self.rule == TOP_INDEX:
            if self.base is None:
                return False
            try:
                lt, mt = normalize_pair(
                    to_base_counts(lam, self.base), to_base_counts(mu, self.base))
            except Exception:
                return False
            if lt.is_empty or mt.is_empty:
                return False
            return mt.top_index < lt.top_index
        if self.rule == TIGHT_VALUATION:
            if self.prime is None or lam.total != mu.total:
                return False
            v_l = _valuation(math.gcd(*lam.entries), self.prime)
            v_m = _valuation(math.gcd(*mu.entries), self.prime)
            return v_l == self.lam_valuation and v_m == self.mu_valuation and v_l > v_m
        return False


@dataclass(frozen=True)
class StableVerdict:
    status: str
    witness: StableWitness | None = None
    reason: StableRefutation | None = None
    budget_spent: int = 0
    detail: str | None = None


def _profile_poly(lam: Partition, mu: Partition, q: int) -> list[int]:
    a = to_base_counts(lam, q).counts
    b = to_base_counts(mu, q).counts
    coeffs = [0] * max(len(a), len(b))
    for i, c in enumerate(b):
        coeffs[i] += c
    for i, c in enumerate(a):
        coeffs[i] -= c
    return _trim(coeffs)


def _profile_poly_at(lam: Partition, mu: Partition, q: int, x: Fraction):
    return _eval_poly(_profile_poly(lam, mu, q), x)


def _bulk_verdict(lam: Partition, mu: Partition, base: int | None) -> BulkVerdict:
    if base is not None:
        return exact_dominates_powerq(to_base_counts(lam, base), to_base_counts(mu, base))
    return dominates_all_s(lam, mu)


def _valuation(n: int, r: int) -> int:
    if n == 0:
        return 0
    v = 0
    while n % r == 0:
        n //= r
        v += 1
    return v


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def normalize_pair(lam: PowerPartition, mu: PowerPartition) -> tuple[PowerPartition, PowerPartition]:
    """Cancel the common box count at every level.

    Afterwards at most one side holds boxes at each level; either side may
    come out empty (everything cancelled), which downstream logic treats as
    trivially stable.  Stability of the pair is unchanged by this.
    """
    if lam.base != mu.base:
        raise BaseMismatch(f"bases differ: {lam.base} vs {mu.base}")
    a = list(lam.counts)
    b = list(mu.counts)
    for i in range(min(len(a), len(b))):
        d = min(a[i], b[i])
        a[i] -= d
        b[i] -= d
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    return PowerPartition(lam.base, tuple(a)), PowerPartition(lam.base, tuple(b))


def prefilter_stable(lam: Partition, mu: Partition, *, tol=None, grid: int = 64,
                     max_base: int | None = None) -> StableRefutation | None:
    """Refutation rules, applied in order; None when no rule fires.

    (a) stability needs full norm dominance; (b) an exactly certified interior
    norm equality with lam != mu is fatal; (c) after normalization lam's top
    box may not outrank mu's; (d) under tight packing (equal totals) a prime
    dividing every lam entry strictly more often than every mu entry is fatal,
    because every product bin would have to be filled exactly by pieces that
    carry more of that prime than the bin does.
    """
    base = common_power_base(lam, mu, max_base)
    bulk = _bulk_verdict(lam, mu, base)
    if not bulk.holds:
        return StableRefutation(BULK_FAILS, bulk=bulk, base=base)
    if lam != mu:
        for eq in bulk.interior_equalities:
            if eq.exact:
                return StableRefutation(NORM_EQUALITY, bulk=bulk, equality=eq, base=base)
    if base is not None:
        lt, mt = normalize_pair(to_base_counts(lam, base), to_base_counts(mu, base))
        if not lt.is_empty and not mt.is_empty and mt.top_index < lt.top_index:
            return StableRefutation(TOP_INDEX, base=base,
                                    top_lam=lt.top_index, top_mu=mt.top_index)
    if lam.total == mu.total:
        g_lam = math.gcd(*lam.entries)
        g_mu = math.gcd(*mu.entries)
        for r in _prime_factors(g_lam):
            v_l = _valuation(g_lam, r)
            v_m = _valuation(g_mu, r)
            if v_l > v_m:
                return StableRefutation(TIGHT_VALUATION, prime=r,
                                        lam_valuation=v_l, mu_valuation=v_m)
    return None


def construct_nu(lam: PowerPartition, mu: PowerPartition,
                 max_steps: int | None = None) -> StableVerdict:
    """Build the catalyst for a normalized, prefiltered power-of-q pair.

    Preconditions (violations raise ContractViolation): same base, common
    counts already cancelled, and mu's top box index strictly above lam's
    whenever both sides are nonempty.  The verdict is HOLDS with a validated
    witness, or UNKNOWN when ``max_steps`` (default 64*(n+m+2)) runs out; the
    iteration halts exactly on stable pairs, so slow halting and divergence
    cannot be told apart within a budget.
    """
    if lam.base != mu.base:
        raise BaseMismatch(f"bases differ: {lam.base} vs {mu.base}")
    q = lam.base
    if lam.is_empty:
        nu = from_entries([1])
        return StableVerdict(HOLDS, StableWitness(nu, EmbeddingWitness((), ())), None, 0)
    if mu.is_empty:
        raise ContractViolation("lam has boxes but mu has none; prefilter should have refuted")
    a = lam.counts
    b = mu.counts
    shared = [i for i in range(min(len(a), len(b))) if a[i] and b[i]]
    if shared:
        raise ContractViolation(f"pair not normalized: both sides hold boxes at level(s) {shared}")
    n = len(a) - 1
    m = len(b) - 1
    if m < n:
        raise ContractViolation("lam's top box outranks mu's; prefilter should have refuted")
    bm = b[m]
    i_min = next(i for i, c in enumerate(a) if c)
    if max_steps is None:
        max_steps = 64 * (n + m + 2)
    # The demand at any level looks back at the last (m - i_min) coefficients,
    # so a zero run of that length can never wake up again.
    run_stop = max(n, m - i_min, 1)
    log: list[StepRecord] = []

    def run_pass(c0: int, pass_index: int):
        c = [c0]
        leftover = bm * c0  # unused top boxes, in units of the level just below them
        zeros = 0
        steps = 0
        while zeros < run_stop:
            if steps >= max_steps:
                return None, steps
            steps += 1
            t = len(c)
            level = m - t
            demand = 0
            for i in range(n + 1):
                k = i - level
                if 0 <= k < t:
                    demand += a[i] * c[k]
            room = q * leftover
            for j in range(m):
                k = j - level
                if 0 <= k < t:
                    room += b[j] * c[k]
            if demand > room:
                ct = -((room - demand) // bm)  # ceil((demand - room) / bm)
                leftover = 0
            else:
                ct = 0
                leftover = room - demand
            c.append(ct)
            zeros = zeros + 1 if ct == 0 else 0
            log.append(StepRecord(pass_index, t, demand, room, ct, leftover))
        while c and c[-1] == 0:
            c.pop()
        return c, steps

    spent = 0
    first, steps1 = run_pass(1, 1)
    spent += steps1
    if first is None:
        return StableVerdict(UNKNOWN, None, None, spent,
                             detail="iteration budget exhausted in the first pass")
    top = len(first) - 1
    second, steps2 = run_pass(bm ** (top + 1), 2)
    spent += steps2
    if second is None:
        return StableVerdict(UNKNOWN, None, None, spent,
                             detail="iteration budget exhausted in the second pass")
    if len(second) - 1 != top:
        raise RuntimeError("internal error: passes disagree on the last nonzero coefficient")
    for k, ck in enumerate(second):
        e = top + 1 - k
        if e > 0 and ck % bm**e:
            raise RuntimeError(
                f"internal error: divisibility of coefficient {k} by top count^{e} failed")

    # second[k] counts boxes of nominal size q^-k; scaling by q^top makes them
    # integral: counts[i] boxes of size q^i with counts[i] = second[top - i].
    nu_pp = PowerPartition(q, tuple(second[top - i] for i in range(top + 1)))
    nu = from_base_counts(nu_pp)
    lam_p = from_base_counts(lam)
    mu_p = from_base_counts(mu)
    prod_l = product(lam_p, nu)
    prod_m = product(mu_p, nu)
    if not supermajorizes(prod_m, prod_l).holds:
        raise RuntimeError("internal error: stop rule fired without product dominance")
    w = embed_powerq(to_base_counts(prod_l, q), to_base_counts(prod_m, q))
    if w is None or not w.validate(prod_l, prod_m):
        raise RuntimeError("internal error: product embedding failed despite dominance")
    return StableVerdict(HOLDS, StableWitness(nu, w, tuple(log)), None, spent)


def refine_witness(lam: Partition, mu: Partition, nu: Partition,
                   w: EmbeddingWitness, q: int) -> tuple[PowerPartition, EmbeddingWitness]:
    """Split every nu entry into base-q digits and rebuild the witness.

    Works for any catalyst nu of a power-of-q pair: each product entry
    refines into its own digit expansion (a power of q times a digit split),
    and per original bin the refined items still sum below the refined
    capacity, so the greedy power-of-q embedding re-embeds them piecewise.
    """
    try:
        to_base_counts(lam, q)
        to_base_counts(mu, q)
    except Exception as exc:
        raise ContractViolation(f"lam and mu must be power-of-{q} partitions") from exc
    prod_l = product(lam, nu)
    prod_m = product(mu, nu)
    if not w.validate(prod_l, prod_m):
        raise ContractViolation("input witness does not validate")

    def pieces_of(value: int) -> list[int]:
        out = []
        digits = base_digits(value, q)
        for e in range(len(digits) - 1, -1, -1):
            out.extend([q**e] * digits[e])
        return out

    nu_t_entries: list[int] = []
    for c in nu.entries:
        nu_t_entries.extend(pieces_of(c))
    nu_t = from_entries(nu_t_entries)
    nu_t_pp = to_base_counts(nu_t, q)

    by_bin: dict[int, list[int]] = {}
    for i, j in enumerate(w.assignment):
        by_bin.setdefault(j, []).append(i)

    target: dict[tuple[int, int], tuple[int, int]] = {}
    for j, item_idxs in by_bin.items():
        x_tagged: list[tuple[int, tuple[int, int]]] = []
        for i in item_idxs:
            for r, piece in enumerate(pieces_of(prod_l[i])):
                x_tagged.append((piece, (i, r)))
        x_tagged.sort(key=lambda t: -t[0])
        y_tagged = [(piece, (j, r)) for r, piece in enumerate(pieces_of(prod_m[j]))]
        x_part = from_entries([p for p, _ in x_tagged])
        y_part = from_entries([p for p, _ in y_tagged])
        local = embed_powerq(to_base_counts(x_part, q), to_base_counts(y_part, q))
        if local is None:
            raise RuntimeError("internal error: refined bin contents failed to embed")
        for li, lj in enumerate(local.assignment):
            target[x_tagged[li][1]] = y_tagged[lj][1]

    item_tags: list[tuple[int, int, int]] = []
    for i in range(len(prod_l)):
        for r, piece in enumerate(pieces_of(prod_l[i])):
            item_tags.append((piece, i, r))
    bin_tags: list[tuple[int, int, int]] = []
    for j in range(len(prod_m)):
        for r, piece in enumerate(pieces_of(prod_m[j])):
            bin_tags.append((piece, j, r))
    item_tags.sort(key=lambda t: (-t[0], t[1], t[2]))
    bin_tags.sort(key=lambda t: (-t[0], t[1], t[2]))

    prod_l_t = product(lam, nu_t)
    prod_m_t = product(mu, nu_t)
    if [t[0] for t in item_tags] != list(prod_l_t.entries):
        raise RuntimeError("internal error: refined item multiset mismatch")
    if [t[0] for t in bin_tags] != list(prod_m_t.entries):
        raise RuntimeError("internal error: refined bin multiset mismatch")

    bin_pos = {(j, r): pos for pos, (_, j, r) in enumerate(bin_tags)}
    assignment = [bin_pos[target[(i, r)]] for _, i, r in item_tags]
    witness = _make_witness(prod_l_t, prod_m_t, assignment)
    if not witness.validate(prod_l_t, prod_m_t):
        raise RuntimeError("internal error: refined witness failed validation")
    return nu_t_pp, witness


def nu_order_compare(u: PowerPartition, v: PowerPartition) -> int:
    """Catalyst quality order: span length first, then count ratios.

    The key is scale-free: multiplying all counts or shifting every box up a
    level leaves it unchanged.  Returns -1, 0, or 1.
    """
    if u.base != v.base:
        raise BaseMismatch(f"bases differ: {u.base} vs {v.base}")
    if u.is_empty or v.is_empty:
        raise EmptyPartition("catalyst order needs nonempty operands")
    ku = _nu_key(u)
    kv = _nu_key(v)
    if ku < kv:
        return -1
    if ku > kv:
        return 1
    return 0


def _nu_key(pp: PowerPartition):
    counts = pp.counts
    first = next(i for i, c in enumerate(counts) if c)
    span = len(counts) - first
    ratios = tuple(Fraction(counts[first + k], counts[first]) for k in range(1, span))
    return span, ratios


def stable_embeds(lam: Partition, mu: Partition, *,
                  node_budget: int = DEFAULT_NODE_BUDGET,
                  max_steps: int | None = None,
                  max_base: int | None = None,
                  tol=None, grid: int = 64) -> StableVerdict:
    """Tri-state stable-embeddability decision.

    Fast path: a direct embedding gives HOLDS with the trivial catalyst [1].
    Then the refutation prefilters run, and for common-power-base pairs the
    catalyst construction; pairs with no common base come back UNKNOWN since
    no decision procedure is available for them.
    """
    base = common_power_base(lam, mu, max_base)
    embed_unknown = False
    if base is not None:
        witness = embed_powerq(to_base_counts(lam, base), to_base_counts(mu, base))
    else:
        try:
            witness = embeds(lam, mu, node_budget)
        except BudgetExceeded:
            witness = None
            embed_unknown = True
    return _stable_embeds_given(lam, mu, witness, embed_unknown,
                                max_steps=max_steps, max_base=max_base, tol=tol, grid=grid)


def _stable_embeds_given(lam: Partition, mu: Partition,
                         embed_witness: EmbeddingWitness | None,
                         embed_unknown: bool, *,
                         max_steps: int | None = None,
                         max_base: int | None = None,
                         tol=None, grid: int = 64) -> StableVerdict:
    if embed_witness is not None:
        return StableVerdict(HOLDS, StableWitness(from_entries([1]), embed_witness), None, 0)
    ref = prefilter_stable(lam, mu, tol=tol, grid=grid, max_base=max_base)
    if ref is not None:
        return StableVerdict(FAILS, None, ref, 0)
    base = common_power_base(lam, mu, max_base)
    if base is None:
        detail = "no common power base, so no catalyst construction applies"
        if embed_unknown:
            detail += "; the direct embedding search also hit its budget"
        return StableVerdict(UNKNOWN, None, None, 0, detail=detail)
    lam_pp = to_base_counts(lam, base)
    mu_pp = to_base_counts(mu, base)
    lt, mt = normalize_pair(lam_pp, mu_pp)
    if lt.is_empty:
        w = embed_powerq(lam_pp, mu_pp)
        if w is None:
            raise RuntimeError("internal error: fully cancelled pair must embed directly")
        return StableVerdict(HOLDS, StableWitness(from_entries([1]), w), None, 0)
    verdict = construct_nu(lt, mt, max_steps)
    if verdict.status != HOLDS:
        return verdict
    nu = verdict.witness.nu
    prod_l = product(lam, nu)
    prod_m = product(mu, nu)
    w = embed_powerq(to_base_counts(prod_l, base), to_base_counts(prod_m, base))
    if w is None or not w.validate(prod_l, prod_m):
        raise RuntimeError("internal error: catalyst for the normalized pair does not extend")
    return StableVerdict(HOLDS, StableWitness(nu, w, verdict.witness.construction_log),
                         None, verdict.budget_spent)
