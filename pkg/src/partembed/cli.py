"""Command-line interface: relation queries, the example battery, generators.

Exit codes: 0 the queried relation holds (or, for ``check all``, everything
was decided), 1 it fails, 2 undecided within budget, 64 usage error,
65 malformed input data.

Partitions travel as JSON documents with exactly one of ``entries`` (a list
of positive integers, any order) or ``counts`` plus ``base`` (the power
count-vector form), and an optional ``name``.  Quick queries can pass a bare
array inline: ``--lhs '[2,2,2,2]'``.  Corpora are newline-delimited JSON.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter
from fractions import Fraction

from .core import (
    Partition,
    PartitionError,
    PowerPartition,
    common_power_base,
    from_base_counts,
    from_entries,
    product,
    to_base_counts,
)
from .norms import BulkVerdict, EqualityPoint, dominates_all_s, exact_dominates_powerq
from .orders import (
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    EmbeddingWitness,
    RelationReport,
    embed_powerq,
    embeds,
    relations,
    supermajorizes,
)
from .stablep import (
    FAILS,
    HOLDS,
    NORM_EQUALITY,
    TIGHT_VALUATION,
    UNKNOWN,
    StableRefutation,
    StableVerdict,
    StableWitness,
    StepRecord,
    construct_nu,
    normalize_pair,
    prefilter_stable,
    stable_embeds,
)

EX_OK = 0
EX_FAILS = 1
EX_UNKNOWN = 2
EX_USAGE = 64
EX_DATA = 65


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# JSON documents for every report type (parse(print(x)) == x)
# ---------------------------------------------------------------------------


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def partition_doc(p: Partition, name: str | None = None) -> dict:
    doc = {"entries": list(p.entries)}
    if name:
        doc["name"] = name
    return doc


def parse_partition_doc(obj) -> tuple[Partition, str | None]:
    if isinstance(obj, list):
        obj = {"entries": obj}
    if not isinstance(obj, dict):
        raise _InputError("partition doc must be a JSON object or array of entries")
    has_entries = "entries" in obj
    has_counts = "counts" in obj
    if has_entries == has_counts:
        raise _InputError("exactly one of 'entries' or 'counts' must be present")
    try:
        if has_entries:
            return from_entries(obj["entries"]), obj.get("name")
        base = obj.get("base")
        if base is None:
            raise _InputError("'counts' form needs a 'base'")
        counts = list(obj["counts"])
        while counts and counts[-1] == 0:
            counts.pop()
        return from_base_counts(PowerPartition(base, tuple(counts))), obj.get("name")
    except PartitionError as exc:
        raise _InputError(str(exc)) from exc
    except TypeError as exc:
        raise _InputError(f"malformed partition doc: {exc}") from exc


def witness_doc(w: EmbeddingWitness) -> dict:
    return {"assignment": list(w.assignment), "loads": list(w.loads)}


def parse_witness(d: dict) -> EmbeddingWitness:
    return EmbeddingWitness(tuple(d["assignment"]), tuple(d["loads"]))


def equality_doc(e: EqualityPoint) -> dict:
    return {
        "s": e.s,
        "exact": e.exact,
        "x_interval": [_frac_str(e.x_interval[0]), _frac_str(e.x_interval[1])]
        if e.x_interval is not None else None,
        "base": e.base,
    }


def parse_equality(d: dict) -> EqualityPoint:
    interval = d.get("x_interval")
    return EqualityPoint(
        s=d["s"],
        exact=d["exact"],
        x_interval=(Fraction(interval[0]), Fraction(interval[1])) if interval else None,
        base=d.get("base"),
    )


def bulk_doc(v: BulkVerdict) -> dict:
    return {
        "holds": v.holds,
        "failure_exponent": v.failure_exponent,
        "failure_x": _frac_str(v.failure_x) if v.failure_x is not None else None,
        "interior_equalities": [equality_doc(e) for e in v.interior_equalities],
        "tight_at_one": v.tight_at_one,
        "tight_at_infinity": v.tight_at_infinity,
    }


def parse_bulk(d: dict) -> BulkVerdict:
    return BulkVerdict(
        holds=d["holds"],
        failure_exponent=d["failure_exponent"],
        failure_x=Fraction(d["failure_x"]) if d.get("failure_x") else None,
        interior_equalities=tuple(parse_equality(e) for e in d["interior_equalities"]),
        tight_at_one=d["tight_at_one"],
        tight_at_infinity=d["tight_at_infinity"],
    )


def refutation_doc(r: StableRefutation) -> dict:
    return {
        "rule": r.rule,
        "bulk": bulk_doc(r.bulk) if r.bulk is not None else None,
        "equality": equality_doc(r.equality) if r.equality is not None else None,
        "base": r.base,
        "top_lam": r.top_lam,
        "top_mu": r.top_mu,
        "prime": r.prime,
        "lam_valuation": r.lam_valuation,
        "mu_valuation": r.mu_valuation,
    }


def parse_refutation(d: dict) -> StableRefutation:
    return StableRefutation(
        rule=d["rule"],
        bulk=parse_bulk(d["bulk"]) if d.get("bulk") else None,
        equality=parse_equality(d["equality"]) if d.get("equality") else None,
        base=d.get("base"),
        top_lam=d.get("top_lam"),
        top_mu=d.get("top_mu"),
        prime=d.get("prime"),
        lam_valuation=d.get("lam_valuation"),
        mu_valuation=d.get("mu_valuation"),
    )


def stable_witness_doc(w: StableWitness) -> dict:
    return {
        "nu": list(w.nu.entries),
        "embedding": witness_doc(w.embedding),
        "construction_log": [
            {"pass": r.pass_index, "step": r.step, "demand": r.demand,
             "room": r.room, "coefficient": r.coefficient, "leftover": r.leftover}
            for r in w.construction_log
        ],
    }


def parse_stable_witness(d: dict) -> StableWitness:
    return StableWitness(
        nu=Partition(tuple(d["nu"])),
        embedding=parse_witness(d["embedding"]),
        construction_log=tuple(
            StepRecord(r["pass"], r["step"], r["demand"], r["room"],
                       r["coefficient"], r["leftover"])
            for r in d["construction_log"]
        ),
    )


def stable_doc(v: StableVerdict) -> dict:
    return {
        "status": v.status,
        "witness": stable_witness_doc(v.witness) if v.witness is not None else None,
        "reason": refutation_doc(v.reason) if v.reason is not None else None,
        "budget_spent": v.budget_spent,
        "detail": v.detail,
    }


def parse_stable(d: dict) -> StableVerdict:
    return StableVerdict(
        status=d["status"],
        witness=parse_stable_witness(d["witness"]) if d.get("witness") else None,
        reason=parse_refutation(d["reason"]) if d.get("reason") else None,
        budget_spent=d["budget_spent"],
        detail=d.get("detail"),
    )


def report_doc(r: RelationReport) -> dict:
    return {
        "embeds": r.embeds,
        "embed_witness": witness_doc(r.embed_witness) if r.embed_witness is not None else None,
        "supermajorized": r.supermajorized,
        "supermajorization_failing_x": r.supermajorization_failing_x,
        "stable": stable_doc(r.stable),
        "bulk": bulk_doc(r.bulk),
        "base": r.base,
    }


def parse_report(d: dict) -> RelationReport:
    return RelationReport(
        embeds=d["embeds"],
        embed_witness=parse_witness(d["embed_witness"]) if d.get("embed_witness") else None,
        supermajorized=d["supermajorized"],
        supermajorization_failing_x=d.get("supermajorization_failing_x"),
        stable=parse_stable(d["stable"]),
        bulk=parse_bulk(d["bulk"]),
        base=d.get("base"),
    )


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _load_doc(inline: str | None, path: str | None, side: str):
    if inline is not None:
        try:
            obj = json.loads(inline)
        except json.JSONDecodeError as exc:
            raise _InputError(f"--{side}: not valid JSON: {exc}") from exc
    elif path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise _InputError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise _InputError(f"{path}: not valid JSON: {exc}") from exc
    else:
        raise _InputError(f"missing {side} partition: give a file or --{side}")
    return parse_partition_doc(obj)


def _decide_embed(lam, mu, node_budget):
    """Witness or None, plus an undecided flag; power-of-q pairs skip the search."""
    base = common_power_base(lam, mu)
    if base is not None:
        return embed_powerq(to_base_counts(lam, base), to_base_counts(mu, base)), False
    try:
        return embeds(lam, mu, node_budget), False
    except BudgetExceeded:
        return None, True


def cmd_check(args) -> int:
    lam, _ = _load_doc(args.lhs, args.lhs_file, "lhs")
    mu, _ = _load_doc(args.rhs, args.rhs_file, "rhs")
    if args.base is not None:
        try:
            to_base_counts(lam, args.base)
            to_base_counts(mu, args.base)
        except PartitionError as exc:
            raise _InputError(f"--base {args.base}: {exc}") from exc

    if args.relation == "embed":
        witness, undecided = _decide_embed(lam, mu, args.budget)
        if args.json:
            doc = {"relation": "embed",
                   "verdict": "UNKNOWN" if undecided else ("HOLDS" if witness else "FAILS"),
                   "witness": witness_doc(witness) if witness else None}
            print(json.dumps(doc, indent=2))
        else:
            if undecided:
                print(f"embed: UNKNOWN (search budget of {args.budget} nodes exhausted)")
            elif witness:
                print(f"embed: HOLDS  assignment={list(witness.assignment)}")
            else:
                print("embed: FAILS (no assignment exists)")
        return EX_UNKNOWN if undecided else (EX_OK if witness else EX_FAILS)

    if args.relation == "supermajorize":
        sup = supermajorizes(mu, lam)
        if args.json:
            print(json.dumps({"relation": "supermajorize", "verdict": "HOLDS" if sup.holds else "FAILS",
                              "failing_x": sup.failing_x}, indent=2))
        else:
            if sup.holds:
                print("supermajorize: HOLDS")
            else:
                print(f"supermajorize: FAILS at threshold x={sup.failing_x}")
        return EX_OK if sup.holds else EX_FAILS

    if args.relation == "bulk":
        base = common_power_base(lam, mu, args.base)
        if base is not None:
            verdict = exact_dominates_powerq(to_base_counts(lam, base), to_base_counts(mu, base))
        else:
            verdict = dominates_all_s(lam, mu, tol=args.tol, grid=args.grid)
        if args.json:
            print(json.dumps({"relation": "bulk", "verdict": "HOLDS" if verdict.holds else "FAILS",
                              "base": base, "report": bulk_doc(verdict)}, indent=2))
        else:
            word = "HOLDS" if verdict.holds else "FAILS"
            path = f"exact, base {base}" if base is not None else "numeric"
            print(f"bulk: {word} ({path})")
            if verdict.failure_exponent is not None:
                print(f"  norm dominance fails near s={verdict.failure_exponent:.6g}")
            for eq in verdict.interior_equalities:
                kind = "exact" if eq.exact else "numeric"
                print(f"  interior equality at s={eq.s:.6g} ({kind})")
        return EX_OK if verdict.holds else EX_FAILS

    if args.relation == "stable":
        verdict = stable_embeds(lam, mu, node_budget=args.budget,
                                max_steps=args.max_steps, tol=args.tol, grid=args.grid)
        if args.json:
            print(json.dumps({"relation": "stable", "verdict": verdict.status,
                              "report": stable_doc(verdict)}, indent=2))
        else:
            print(f"stable: {verdict.status}")
            if verdict.witness is not None:
                print(f"  catalyst nu = {list(verdict.witness.nu.entries)}")
            if verdict.reason is not None:
                print(f"  refutation: {verdict.reason.rule}")
            if verdict.detail:
                print(f"  {verdict.detail}")
        return {HOLDS: EX_OK, FAILS: EX_FAILS, UNKNOWN: EX_UNKNOWN}[verdict.status]

    # all four relations
    report = relations(lam, mu, node_budget=args.budget, max_steps=args.max_steps,
                       tol=args.tol, grid=args.grid)
    if args.json:
        print(json.dumps(report_doc(report), indent=2))
    else:
        emb = "UNKNOWN" if report.embeds is None else ("HOLDS" if report.embeds else "FAILS")
        print(f"embed:          {emb}")
        sup = "HOLDS" if report.supermajorized else f"FAILS at x={report.supermajorization_failing_x}"
        print(f"supermajorize:  {sup}")
        print(f"stable:         {report.stable.status}"
              + (f" (nu={list(report.stable.witness.nu.entries)})" if report.stable.witness else "")
              + (f" ({report.stable.reason.rule})" if report.stable.reason else ""))
        print(f"bulk:           {'HOLDS' if report.bulk.holds else 'FAILS'}")
    decided = report.embeds is not None and report.stable.status != UNKNOWN
    return EX_OK if decided else EX_UNKNOWN


# ---------------------------------------------------------------------------
# repro-example24
# ---------------------------------------------------------------------------


def cmd_repro_example24(args) -> int:
    lam1 = from_entries([2, 2, 2, 2])
    mu1 = from_entries([4] + [1] * 8)
    mu2 = from_entries([3, 3, 3])
    lam2 = from_entries([8, 8, 8, 8, 4, 4, 4, 4])
    mu3 = from_entries([16] + [2] * 16 + [1] * 16)
    lam3 = from_entries([4, 2, 2])
    mu4 = from_entries([5, 3])

    claims: list[dict] = []

    def claim(name: str, ok: bool, detail: str = ""):
        claims.append({"claim": name, "ok": bool(ok), "detail": detail})

    v1 = stable_embeds(lam1, mu1)
    ok1 = (
        v1.status == HOLDS
        and v1.witness is not None
        and list(v1.witness.nu.entries) == [2, 1, 1]
        and v1.witness.embedding.validate(product(lam1, v1.witness.nu),
                                          product(mu1, v1.witness.nu))
    )
    claim("lam1 stably embeds into mu1 with validating catalyst [2,1,1]", ok1,
          f"status={v1.status}")

    sup1 = supermajorizes(mu1, lam1)
    tails = (sum(e for e in lam1 if e >= 2), sum(e for e in mu1 if e >= 2))
    claim("lam1 is not supermajorized by mu1 (threshold 2: 8 > 4)",
          not sup1.holds and sup1.failing_x == 2 and tails == (8, 4),
          f"failing_x={sup1.failing_x}")

    claim("lam1 does not embed into mu1", embeds(lam1, mu1) is None)
    claim("lam1 is supermajorized by mu2", supermajorizes(mu2, lam1).holds)
    claim("lam1 does not embed into mu2", embeds(lam1, mu2) is None)

    bulk23 = exact_dominates_powerq(to_base_counts(lam2, 2), to_base_counts(mu3, 2))
    claim("lam2 bulk-embeds into mu3", bulk23.holds,
          f"equalities={len(bulk23.interior_equalities)}")

    v7 = stable_embeds(lam2, mu3)
    claim("lam2 does not stably embed into mu3 (norm-equality certificate)",
          v7.status == FAILS and v7.reason is not None
          and v7.reason.rule == NORM_EQUALITY and v7.reason.verify(lam2, mu3),
          f"status={v7.status}")

    sup34 = supermajorizes(mu4, lam3)
    v8 = stable_embeds(lam3, mu4)
    claim("lam3 is supermajorized by mu4 yet does not stably embed (valuation certificate)",
          sup34.holds and v8.status == FAILS and v8.reason is not None
          and v8.reason.rule == TIGHT_VALUATION and v8.reason.verify(lam3, mu4),
          f"status={v8.status}")

    ok_all = all(c["ok"] for c in claims)
    if args.json:
        print(json.dumps({"claims": claims, "ok": ok_all}, indent=2))
    else:
        for c in claims:
            tag = "ok  " if c["ok"] else "FAIL"
            print(f"{tag} {c['claim']}")
        print(f"{sum(c['ok'] for c in claims)}/{len(claims)} claims reproduced")
    return EX_OK if ok_all else EX_FAILS


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    for i in range(args.count):
        if args.kind == "random":
            length = rng.randint(1, args.length)
            entries = sorted((rng.randint(1, args.max_value) for _ in range(length)),
                             reverse=True)
            doc = {"entries": entries, "name": f"random-s{args.seed}-{i}"}
        elif args.kind == "powerq":
            counts = [rng.randint(0, args.max_count) for _ in range(args.levels)]
            if not any(counts):
                counts[rng.randrange(len(counts))] = 1
            while counts[-1] == 0:
                counts.pop()
            doc = {"base": args.base, "counts": counts,
                   "name": f"powerq-b{args.base}-s{args.seed}-{i}"}
        else:  # divisible
            entries = []
            v = rng.randint(1, args.max_value)
            for _ in range(rng.randint(1, args.length)):
                entries.append(v)
                divisors = [d for d in range(1, v + 1) if v % d == 0]
                v = rng.choice(divisors)
            doc = {"entries": entries, "name": f"divisible-s{args.seed}-{i}"}
        print(json.dumps(doc))
    return EX_OK


# ---------------------------------------------------------------------------
# conjecture-scan
# ---------------------------------------------------------------------------


def _scan_pair(name: str, lam: Partition, mu: Partition, max_steps: int | None) -> dict:
    """One corpus row: only pairs with norm equality at s=1 and s=oo but strict
    dominance in between are interesting; everything else is excluded."""
    if lam == mu:
        return {"name": name, "status": "excluded", "detail": "identical partitions"}
    base = common_power_base(lam, mu)
    if base is None:
        return {"name": name, "status": "excluded", "detail": "no common power base"}
    bulk = exact_dominates_powerq(to_base_counts(lam, base), to_base_counts(mu, base))
    if not bulk.holds:
        return {"name": name, "status": "excluded", "detail": "norm dominance fails"}
    if not bulk.tight_at_one:
        return {"name": name, "status": "excluded",
                "detail": f"not tight at s=1 ({lam.total} < {mu.total})"}
    if not bulk.tight_at_infinity:
        return {"name": name, "status": "excluded",
                "detail": f"not tight at s=oo ({lam.max_entry} < {mu.max_entry})"}
    if bulk.interior_equalities:
        return {"name": name, "status": "excluded", "detail": "interior equality point"}
    ref = prefilter_stable(lam, mu)
    if ref is not None:
        return {"name": name, "status": "fails", "detail": ref.rule}
    lt, mt = normalize_pair(to_base_counts(lam, base), to_base_counts(mu, base))
    if lt.is_empty:
        return {"name": name, "status": "holds", "steps": 0, "nu": [1]}
    verdict = construct_nu(lt, mt, max_steps)
    if verdict.status == HOLDS:
        return {"name": name, "status": "holds", "steps": verdict.budget_spent,
                "nu": list(verdict.witness.nu.entries)}
    return {"name": name, "status": "unknown", "steps": verdict.budget_spent}


def cmd_conjecture_scan(args) -> int:
    rows = []
    try:
        with open(args.corpus, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    lam, lname = parse_partition_doc(obj["lhs"])
                    mu, _ = parse_partition_doc(obj["rhs"])
                except (KeyError, TypeError, json.JSONDecodeError) as exc:
                    raise _InputError(f"{args.corpus}:{line_no + 1}: {exc}") from exc
                name = obj.get("name") or lname or f"pair-{line_no}"
                rows.append(_scan_pair(name, lam, mu, args.max_steps))
    except OSError as exc:
        raise _InputError(f"cannot read {args.corpus}: {exc}") from exc

    counts = Counter(r["status"] for r in rows)
    if args.json:
        print(json.dumps({"rows": rows, "counts": dict(counts)}, indent=2))
    else:
        for r in rows:
            extra = r.get("detail") or (f"steps={r.get('steps')} nu={r.get('nu')}"
                                        if "steps" in r else "")
            print(f"{r['name']:<28} {r['status']:<9} {extra}")
        print("--")
        if rows:
            print("  ".join(f"{k}={v}" for k, v in sorted(counts.items())))
        else:
            print("empty corpus")
    return EX_OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="partembed",
                     description="Decide and certify embeddability orders on partitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[], help="decide one relation for a pair",
                           description="Decide a relation between two partitions.")
    check.add_argument("relation", choices=["embed", "supermajorize", "bulk", "stable", "all"])
    check.add_argument("lhs_file", nargs="?", help="JSON file with the left partition")
    check.add_argument("rhs_file", nargs="?", help="JSON file with the right partition")
    check.add_argument("--lhs", help="inline JSON for the left partition")
    check.add_argument("--rhs", help="inline JSON for the right partition")
    check.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET,
                       help="search node budget for exact embedding")
    check.add_argument("--max-steps", type=int, default=None,
                       help="iteration budget for the catalyst construction")
    check.add_argument("--base", type=int, default=None,
                       help="require both partitions to be powers of this base")
    check.add_argument("--tol", type=float, default=None,
                       help="tolerance for the numeric norm path")
    check.add_argument("--grid", type=int, default=64,
                       help="sample count for the numeric norm path")
    check.add_argument("--json", action="store_true", help="machine-readable output")
    check.set_defaults(func=cmd_check)

    repro = sub.add_parser("repro-example24",
                           help="reproduce the eight worked counterexample claims")
    repro.add_argument("--json", action="store_true")
    repro.set_defaults(func=cmd_repro_example24)

    gen = sub.add_parser("gen", help="emit reproducible partition documents")
    gen.add_argument("kind", choices=["random", "powerq", "divisible"])
    gen.add_argument("--seed", type=int, default=0, help="RNG seed (echoed in names)")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--len", dest="length", type=int, default=6, help="max length")
    gen.add_argument("--max", dest="max_value", type=int, default=32, help="max entry")
    gen.add_argument("--base", type=int, default=2, help="base for powerq docs")
    gen.add_argument("--levels", type=int, default=4, help="levels for powerq docs")
    gen.add_argument("--max-count", type=int, default=6, help="max count per level")
    gen.set_defaults(func=cmd_gen)

    scan = sub.add_parser("conjecture-scan",
                          help="tabulate catalyst construction on tight strictly-dominant pairs")
    scan.add_argument("corpus", help="newline-delimited JSON of {lhs, rhs, name?} pairs")
    scan.add_argument("--max-steps", type=int, default=None)
    scan.add_argument("--json", action="store_true")
    scan.set_defaults(func=cmd_conjecture_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"partembed: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
