import json

import pytest

from partembed import cli
from partembed.core import from_entries, to_base_counts
from partembed.norms import dominates_all_s, exact_dominates_powerq
from partembed.orders import relations
from partembed.stablep import stable_embeds
from helpers import LAM1, LAM2, LAM3, MU1, MU2, MU3, MU4


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheckCommand:
    def test_stable_holds_exit_zero(self, capsys):
        code, out, _ = run(capsys, "check", "stable",
                           "--lhs", "[2,2,2,2]",
                           "--rhs", '{"base": 2, "counts": [8, 0, 1]}')
        assert code == 0
        assert "HOLDS" in out and "[2, 1, 1]" in out

    def test_embed_fails_exit_one(self, capsys):
        code, out, _ = run(capsys, "check", "embed",
                           "--lhs", "[2,2,2,2]", "--rhs", "[3,3,3]")
        assert code == 1
        assert "FAILS" in out

    def test_bulk_json_reports_equality_interval(self, capsys):
        lhs = json.dumps(list(LAM2.entries))
        rhs = json.dumps(list(MU3.entries))
        code, out, _ = run(capsys, "check", "bulk", "--lhs", lhs, "--rhs", rhs, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "HOLDS"
        eqs = doc["report"]["interior_equalities"]
        assert len(eqs) == 1 and eqs[0]["exact"]
        assert eqs[0]["x_interval"] is not None

    def test_stable_unknown_exit_two(self, capsys):
        code, out, _ = run(capsys, "check", "stable",
                           "--lhs", "[4,4,4]", "--rhs", "[7,6]")
        assert code == 2
        assert "UNKNOWN" in out

    def test_check_all_human(self, capsys):
        code, out, _ = run(capsys, "check", "all",
                           "--lhs", "[4,2,2]", "--rhs", "[5,3]")
        assert code == 0
        assert "supermajorize:  HOLDS" in out
        assert "TightValuation" in out

    def test_files(self, capsys, tmp_path):
        lhs = tmp_path / "lhs.json"
        rhs = tmp_path / "rhs.json"
        lhs.write_text(json.dumps({"entries": [2, 2, 2, 2], "name": "lam1"}))
        rhs.write_text(json.dumps({"entries": [3, 3, 3], "name": "mu2"}))
        code, out, _ = run(capsys, "check", "supermajorize", str(lhs), str(rhs))
        assert code == 0 and "HOLDS" in out

    def test_malformed_doc_exit_65(self, capsys):
        code, _, err = run(capsys, "check", "embed",
                           "--lhs", '{"entries": [2], "counts": [1]}', "--rhs", "[2]")
        assert code == 65
        assert "exactly one" in err

    def test_bad_base_flag_exit_65(self, capsys):
        code, _, err = run(capsys, "check", "embed",
                           "--lhs", "[5]", "--rhs", "[5]", "--base", "2")
        assert code == 65

    def test_usage_error_exit_64(self):
        with pytest.raises(SystemExit) as e:
            cli.main(["check", "nonsense", "--lhs", "[1]", "--rhs", "[1]"])
        assert e.value.code == 64


class TestReproBattery:
    def test_exit_zero_and_eight_claims(self, capsys):
        code, out, _ = run(capsys, "repro-example24")
        assert code == 0
        assert "8/8 claims reproduced" in out

    def test_json_claim_list(self, capsys):
        code, out, _ = run(capsys, "repro-example24", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["ok"] and len(doc["claims"]) == 8
        assert all(c["ok"] for c in doc["claims"])


class TestGen:
    def test_deterministic_under_seed(self, capsys):
        _, out1, _ = run(capsys, "gen", "powerq", "--base", "2", "--levels", "4",
                         "--seed", "7", "--count", "3")
        _, out2, _ = run(capsys, "gen", "powerq", "--base", "2", "--levels", "4",
                         "--seed", "7", "--count", "3")
        assert out1 == out2
        docs = [json.loads(line) for line in out1.splitlines()]
        assert all(d["base"] == 2 for d in docs)
        assert all("s7" in d["name"] for d in docs)

    def test_divisible_chain_invariant(self, capsys):
        _, out, _ = run(capsys, "gen", "divisible", "--len", "5", "--seed", "1",
                        "--count", "10")
        for line in out.splitlines():
            entries = json.loads(line)["entries"]
            assert all(entries[i] % entries[i + 1] == 0 for i in range(len(entries) - 1))

    def test_random_docs_parse(self, capsys):
        _, out, _ = run(capsys, "gen", "random", "--max", "32", "--len", "6",
                        "--seed", "3", "--count", "5")
        for line in out.splitlines():
            part, name = cli.parse_partition_doc(json.loads(line))
            assert part.max_entry <= 32 and len(part) <= 6 and name


class TestConjectureScan:
    def test_empty_corpus(self, capsys, tmp_path):
        corpus = tmp_path / "corpus.ndjson"
        corpus.write_text("")
        code, out, _ = run(capsys, "conjecture-scan", str(corpus))
        assert code == 0
        assert "empty corpus" in out

    def test_rows(self, capsys, tmp_path):
        corpus = tmp_path / "corpus.ndjson"
        lines = [
            # lam1/mu1 is not tight at s=1 (8 < 12): excluded
            {"name": "lam1-mu1", "lhs": [2, 2, 2, 2], "rhs": [4, 1, 1, 1, 1, 1, 1, 1, 1]},
            # tight at both ends with strict interior dominance: a real row
            {"name": "tight", "lhs": [4, 1, 1, 1, 1], "rhs": [4, 2, 2]},
            # no common power base: excluded
            {"name": "mixed", "lhs": [5], "rhs": [3]},
        ]
        corpus.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
        code, out, _ = run(capsys, "conjecture-scan", str(corpus), "--json")
        assert code == 0
        doc = json.loads(out)
        by_name = {r["name"]: r for r in doc["rows"]}
        assert by_name["lam1-mu1"]["status"] == "excluded"
        assert "tight at s=1" in by_name["lam1-mu1"]["detail"]
        assert by_name["tight"]["status"] == "holds"
        assert by_name["mixed"]["status"] == "excluded"


class TestJsonRoundTrips:
    def test_bulk_verdicts(self):
        for verdict in (
            exact_dominates_powerq(to_base_counts(LAM2, 2), to_base_counts(MU3, 2)),
            exact_dominates_powerq(to_base_counts(from_entries([4]), 2),
                                   to_base_counts(from_entries([2, 2]), 2)),
            dominates_all_s(LAM2, MU3),
            dominates_all_s(from_entries([2]), from_entries([1, 1, 1])),
        ):
            doc = json.loads(json.dumps(cli.bulk_doc(verdict)))
            assert cli.parse_bulk(doc) == verdict

    def test_stable_verdicts(self):
        for verdict in (
            stable_embeds(LAM1, MU1),
            stable_embeds(LAM2, MU3),
            stable_embeds(LAM3, MU4),
            stable_embeds(from_entries([4, 4, 4]), from_entries([7, 6])),
        ):
            doc = json.loads(json.dumps(cli.stable_doc(verdict)))
            assert cli.parse_stable(doc) == verdict

    def test_relation_reports(self):
        for lam, mu in ((LAM1, MU1), (LAM3, MU4), (LAM1, MU2)):
            report = relations(lam, mu)
            doc = json.loads(json.dumps(cli.report_doc(report)))
            assert cli.parse_report(doc) == report

    def test_partition_docs(self):
        part, _ = cli.parse_partition_doc(json.loads(json.dumps(cli.partition_doc(MU3))))
        assert part == MU3
