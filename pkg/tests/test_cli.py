"""Command-line behaviour: outputs, formats, exit codes."""

import json

from qident.cli import (
    EXIT_DOMAIN,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_UNKNOWN_NAME,
    main,
)
from qident.profiles import default_catalog, dump_catalog


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEnumerate:
    def test_alternating_listing(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "example-alternating", "--n", "3", "--weight", "18"
        )
        assert code == EXIT_OK
        assert out == "[7,3,3,2,2,1]\n[6,4,3,2,2,1]\n[5,4,4,2,2,1]\n"

    def test_exact_parts_listing(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "example-exact-parts", "--n", "3", "--weight", "18"
        )
        assert code == EXIT_OK
        assert out == "[13,1,1,1,1,1]\n[12,2,1,1,1,1]\n[11,2,2,1,1,1]\n"

    def test_atmost_parts_listing_trims_zeros(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "example-atmost-parts", "--n", "3", "--weight", "18"
        )
        assert code == EXIT_OK
        assert out == "[18]\n[17,1]\n[16,1,1]\n"

    def test_unknown_profile(self, capsys):
        code, _, err = run(capsys, "enumerate", "nope", "--n", "1", "--weight", "1")
        assert code == EXIT_UNKNOWN_NAME
        assert "unknown" in err

    def test_infeasible_weight_gives_empty_listing(self, capsys):
        code, out, _ = run(capsys, "enumerate", "P2", "--n", "1", "--weight", "0")
        assert code == EXIT_OK
        assert out == ""

    def test_two_branch_profile_indexed_by_part_count(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "capparelli-1-6", "--n", "2", "--weight", "5"
        )
        assert code == EXIT_OK
        # chain a1 >= a2 >= 2 at part count 2
        assert out == "[3,2]\n"

    def test_invalid_index(self, capsys):
        code, _, err = run(
            capsys, "enumerate", "capparelli-1-6", "--n", "0", "--weight", "4"
        )
        assert code == EXIT_DOMAIN


class TestBijectionCommand:
    def test_glaisher_with_steps(self, capsys):
        code, out, _ = run(
            capsys, "bijection", "glaisher", "--modulus", "2", "[7,6,4,2,1]"
        )
        assert code == EXIT_OK
        assert out == (
            "input:  [7,6,4,2,1]\n"
            "step:   [7,3,3,2,2,1,1,1]\n"
            "output: [7,3,3,1,1,1,1,1,1,1]\n"
        )

    def test_glaisher_inverse(self, capsys):
        code, out, _ = run(
            capsys,
            "bijection",
            "glaisher-inv",
            "--modulus",
            "2",
            "[7,3,3,1,1,1,1,1,1,1]",
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "input:  [7,3,3,1,1,1,1,1,1,1]"
        assert lines[1] == "step:   [7,6,2,2,2,1]"
        assert lines[-1] == "output: [7,6,4,2,1]"

    def test_rr2_prints_intermediate_and_weights(self, capsys):
        code, out, _ = run(capsys, "bijection", "rr2", "[3,2]")
        assert code == EXIT_OK
        assert out == (
            "input:  [3,2]\n"
            "c:      [6,1]\n"
            "output: [5,2]\n"
            "weight: 7 = 5 + 4 - 2\n"
        )

    def test_rr2_inverse(self, capsys):
        code, out, _ = run(capsys, "bijection", "rr2-inv", "[5,2]")
        assert code == EXIT_OK
        assert "output: [3,2]" in out

    def test_profile_map(self, capsys):
        code, out, _ = run(
            capsys,
            "bijection",
            "profile",
            "--source",
            "P3",
            "--target",
            "P4",
            "--n",
            "2",
            "[5,1]",
        )
        assert code == EXIT_OK
        assert "output: [6,0]" in out

    def test_machine_format(self, capsys):
        code, out, _ = run(
            capsys,
            "bijection",
            "rr2",
            "[3,2]",
            "--format",
            "machine",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["c"] == [6, 1]
        assert payload["output"] == [5, 2]

    def test_malformed_partition_is_domain_error(self, capsys):
        code, _, err = run(capsys, "bijection", "rr2", "[1,2]")
        assert code == EXIT_DOMAIN

    def test_wrong_residue_is_domain_error(self, capsys):
        code, _, err = run(capsys, "bijection", "rr2", "[5]")
        assert code == EXIT_DOMAIN
        assert "congruent" in err


class TestSeriesCommand:
    def test_product_dump(self, capsys):
        code, out, _ = run(
            capsys,
            "series",
            "product",
            "--residues",
            "2,3",
            "--modulus",
            "5",
            "--order",
            "8",
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert len(lines) == 8
        assert lines[0] == "0:1"
        assert lines[-1] == "7:2"

    def test_glaisher_sum_dump(self, capsys):
        code, out, _ = run(
            capsys, "series", "glaisher-sum", "--modulus", "2", "--order", "6"
        )
        assert code == EXIT_OK
        assert out == "0:1\n1:1\n2:1\n3:2\n4:2\n5:3\n"

    def test_machine_format_round_trips(self, capsys):
        code, out, _ = run(
            capsys,
            "series",
            "glaisher-sum",
            "--modulus",
            "2",
            "--order",
            "6",
            "--format",
            "machine",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload == [1, 1, 1, 2, 2, 3]
        assert json.dumps(payload, separators=(",", ":")) == out.strip()

    def test_profile_sum(self, capsys):
        code, out, _ = run(
            capsys, "series", "profile-sum", "--profile", "P2", "--order", "8"
        )
        assert code == EXIT_OK
        assert out == "0:1\n1:0\n2:1\n3:1\n4:1\n5:1\n6:2\n7:2\n"


class TestCatalogCommand:
    def test_lists_at_least_twenty_entries(self, capsys):
        code, out, _ = run(capsys, "catalog")
        assert code == EXIT_OK
        data_rows = out.splitlines()[2:]
        assert len(data_rows) >= 20

    def test_machine_format_matches_shipped_file(self, capsys):
        code, out, _ = run(capsys, "catalog", "--format", "machine")
        assert code == EXIT_OK
        assert out == dump_catalog(default_catalog())


class TestVerifyCommand:
    def test_single_identity_passes(self, capsys):
        code, out, _ = run(
            capsys, "verify", "rr2", "--order", "40", "--max-weight", "12"
        )
        assert code == EXIT_OK
        assert "checks passed" in out

    def test_glaisher_with_modulus(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "glaisher",
            "--modulus",
            "4",
            "--order",
            "40",
            "--max-weight",
            "10",
        )
        assert code == EXIT_OK
        assert "glaisher-4" in out

    def test_unknown_identity_exit_code(self, capsys):
        code, out, _ = run(capsys, "verify", "no-such-identity")
        assert code == EXIT_UNKNOWN_NAME

    def test_machine_output_round_trips(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "rr2",
            "--order",
            "30",
            "--max-weight",
            "10",
            "--format",
            "machine",
        )
        assert code == EXIT_OK
        for line in out.splitlines():
            payload = json.loads(line)
            assert json.dumps(payload, sort_keys=True, separators=(",", ":")) == line

    def test_mismatch_exit_code_with_custom_catalog(self, capsys, tmp_path):
        # a deliberately wrong product side must fail with the mismatch code
        text = dump_catalog(default_catalog())
        payload = json.loads(text)
        broken = [e for e in payload["entries"] if e["name"] == "P2"][0]
        broken = json.loads(json.dumps(broken))
        broken["name"] = "broken-rr2"
        broken["aliases"] = []
        broken["residues"] = [2, 4]
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps({"entries": [broken]}), encoding="utf-8")
        code, out, _ = run(
            capsys,
            "--catalog",
            str(path),
            "verify",
            "broken-rr2",
            "--order",
            "12",
            "--max-weight",
            "8",
        )
        assert code == EXIT_MISMATCH
        assert "mismatch" in out

    def test_env_var_catalog_override(self, capsys, tmp_path, monkeypatch):
        text = dump_catalog(default_catalog())
        path = tmp_path / "catalog.json"
        path.write_text(text, encoding="utf-8")
        monkeypatch.setenv("QIDENT_CATALOG", str(path))
        code, out, _ = run(capsys, "catalog", "--format", "machine")
        assert code == EXIT_OK
        assert out == text
