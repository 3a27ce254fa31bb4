"""Profile rules, the shipped catalog, and chain/series agreement."""

import json
from pathlib import Path

import pytest

from qident.partitions import GapBound
from qident.profiles import (
    PiecewiseCase,
    ProfileBranch,
    ProfileFamily,
    UnknownNameError,
    catalog_list,
    catalog_lookup,
    default_catalog,
    dump_catalog,
    evaluate_rule,
    loads_catalog,
    profile_chain_counts,
    profile_series,
    profile_to_chain,
    validate_profile,
)
from qident.series import product_side, sum_side_standard

CATALOG_PATH = Path(__file__).resolve().parents[1] / "src" / "qident" / "catalog.json"


def family(name, slots, min_weight, offsets, n_min=0):
    cases = tuple(PiecewiseCase(w, v) for w, v in offsets)
    return ProfileFamily(name, (ProfileBranch("all", n_min, slots, min_weight, cases),))


class TestRules:
    def test_arithmetic(self):
        assert evaluate_rule("2*(n + 1 - s)", n=3, s=1) == 6
        assert evaluate_rule("(2*n + 2 + parity(s) - s) // 2", n=3, s=3) == 3

    def test_rejects_unknown_names(self):
        with pytest.raises(ValueError):
            evaluate_rule("__import__", n=1)
        with pytest.raises(ValueError):
            evaluate_rule("m + 1", n=1)

    def test_rejects_calls_other_than_parity(self):
        with pytest.raises(ValueError):
            evaluate_rule("abs(n)", n=1)

    def test_rejects_non_integer_constants(self):
        with pytest.raises(ValueError):
            evaluate_rule("n * 1.5", n=2)
        with pytest.raises(ValueError):
            evaluate_rule("'x'", n=2)


class TestShippedCatalog:
    def test_round_trip_is_byte_exact(self):
        text = CATALOG_PATH.read_text(encoding="utf-8")
        assert dump_catalog(loads_catalog(text)) == text

    def test_expected_entry_count(self):
        assert len(catalog_list()) >= 20

    def test_required_names_present(self):
        catalog = default_catalog()
        for name in ("P2", "P3", "P4", "P5", "euler-staircase", "euler-layers"):
            assert name in catalog
        for letter in "abcdefghijklmn":
            assert f"appendix-{letter}" in catalog

    def test_alias_lookup(self):
        entry = catalog_lookup("appendix-f")
        assert entry.name == "hirschhorn-3"
        assert entry.product.modulus == 16
        assert entry.product.residues == frozenset({1, 4, 6, 7, 9, 10, 12, 15})

    def test_p3_data(self):
        entry = catalog_lookup("P3")
        assert entry.product.modulus == 5
        assert entry.product.residues == frozenset({2, 3})
        assert entry.profile.offsets_at(3) == (10, 1, 1)

    def test_appendix_a_is_staircase(self):
        entry = catalog_lookup("appendix-a")
        assert entry.name == "euler-staircase"
        assert entry.profile.offsets_at(4) == (4, 3, 2, 1)
        assert entry.product.modulus == 2

    def test_unknown_name(self):
        with pytest.raises(UnknownNameError):
            catalog_lookup("no-such-profile")

    def test_every_profile_validates_to_12(self):
        for entry in catalog_list():
            report = validate_profile(entry.profile, 12)
            assert report.ok, report.failures

    # hand-computed minimal weights of the first two terms of each branch
    BRANCH_WEIGHTS = {
        "appendix-a": {"all": (1, 3)},
        "appendix-b": {"even": (4, 10), "odd": (2, 6)},
        "appendix-c": {"even": (3, 8), "odd": (1, 6)},
        "appendix-d": {"even": (3, 8), "odd": (1, 4)},
        "appendix-e": {"even": (2, 6), "odd": (1, 5)},
        "appendix-f": {"even": (4, 12), "odd": (1, 7)},
        "appendix-g": {"even": (4, 12), "odd": (2, 8)},
        "appendix-h": {"even": (4, 10), "odd": (2, 6)},
        "appendix-i": {"all": (4, 12)},
        "appendix-j": {"all": (3, 10)},
        "appendix-k": {"even": (2, 6), "odd": (1, 5)},
        "appendix-l": {"even": (3, 8), "odd": (1, 4)},
        "appendix-m": {"even": (4, 12), "odd": (2, 8)},
        "appendix-n": {"even": (4, 12), "odd": (1, 7)},
    }

    def test_branch_weights_spot_checked(self):
        for alias, branch_weights in self.BRANCH_WEIGHTS.items():
            entry = catalog_lookup(alias)
            for branch in entry.profile.branches:
                expected = branch_weights[branch.parity_label]
                got = (branch.declared_weight(1), branch.declared_weight(2))
                assert got == expected, (alias, branch.parity_label)

    def test_branch_offsets_spot_checked(self):
        # hand-evaluated first offset rows of two even branches
        even_b = catalog_lookup("appendix-b").profile.branches[0]
        assert even_b.offsets_at(1) == (2, 2)
        even_d = catalog_lookup("appendix-d").profile.branches[0]
        assert even_d.offsets_at(1) == (2, 1)

    def test_every_chain_has_nonnegative_gaps_to_12(self):
        for entry in catalog_list():
            for branch in entry.profile.branches:
                for n in range(max(branch.n_min, 1), 13):
                    if branch.slot_count(n) == 0:
                        continue
                    offsets = branch.offsets_at(n)
                    assert all(
                        offsets[s] >= offsets[s + 1] for s in range(len(offsets) - 1)
                    ), (entry.name, n)
                    assert all(v >= 0 for v in offsets), (entry.name, n)


class TestProfileToChain:
    def test_gap_two_family(self):
        chain = profile_to_chain(catalog_lookup("P2").profile, 3)
        assert chain.gaps == (GapBound(2), GapBound(2))
        assert chain.terminal == GapBound(2)

    def test_steep_family(self):
        chain = profile_to_chain(catalog_lookup("P4").profile, 3)
        assert chain.gaps == (GapBound(12), GapBound(0))
        assert chain.terminal == GapBound(0)

    def test_constant_family(self):
        chain = profile_to_chain(catalog_lookup("P5").profile, 3)
        assert chain.gaps == (GapBound(0), GapBound(0))
        assert chain.terminal == GapBound(4)

    def test_two_branch_indexing_by_part_count(self):
        profile = catalog_lookup("capparelli-1-6").profile
        assert len(profile.offsets_at(4)) == 4  # even index -> even branch
        assert len(profile.offsets_at(3)) == 3  # odd index -> odd branch

    def test_increasing_offsets_rejected(self):
        bad = family("bad", "2", "3", [("s == 1", "1"), ("otherwise", "2")])
        with pytest.raises(ValueError):
            profile_to_chain(bad, 1)

    def test_index_below_domain_rejected(self):
        profile = catalog_lookup("capparelli-1-6").profile
        with pytest.raises(ValueError):
            profile.offsets_at(-1)


class TestValidateProfile:
    def test_detects_increase(self):
        bad = family("grows", "2", "3", [("s == 1", "1"), ("otherwise", "2")])
        report = validate_profile(bad, 3)
        assert not report.ok
        assert "increase" in report.failures[0]

    def test_detects_weight_mismatch(self):
        bad = family("off-by-one", "n", "n + 1", [("otherwise", "1")])
        report = validate_profile(bad, 3)
        assert not report.ok
        assert "declared weight" in report.failures[0]

    def test_reports_location(self):
        bad = family("grows", "3", "4", [("s == 1", "1"), ("otherwise", "2")])
        report = validate_profile(bad, 1)
        assert "n=0" in report.failures[0] or "n=1" in report.failures[0]
        assert "s=1" in report.failures[0]


class TestProfileSeries:
    def test_same_slots_and_weights_share_series(self):
        catalog = default_catalog()
        series = {
            name: profile_series(catalog.lookup(name).profile, 30)
            for name in ("P2", "P3", "P4", "P5")
        }
        assert len({tuple(s.to_list()) for s in series.values()}) == 1

    def test_example_family_series(self):
        catalog = default_catalog()
        expected = sum_side_standard(lambda n: n * n + 2 * n, lambda n: 2 * n, 30)
        for name in ("example-alternating", "example-exact-parts", "example-atmost-parts"):
            assert profile_series(catalog.lookup(name).profile, 30) == expected

    def test_staircase_series_is_triangular_family(self):
        got = profile_series(catalog_lookup("euler-staircase").profile, 30)
        expected = sum_side_standard(lambda n: (n * n + n) // 2, lambda n: n, 30)
        assert got == expected

    def test_single_term_counts_match_term_series(self):
        # one fixed index: chain counts equal q^(offset sum)/((1-q)...(1-q^u))
        from qident.partitions import count_chain_by_weight
        from qident.series import pochhammer_inverse

        for name, index in (("P2", 3), ("P5", 4), ("euler-staircase", 5)):
            profile = catalog_lookup(name).profile
            chain = profile_to_chain(profile, index)
            offsets = profile.offsets_at(index)
            term = pochhammer_inverse(len(offsets), 26).shift(sum(offsets))
            assert count_chain_by_weight(chain, 25) == term.to_list(), name

    def test_counts_match_series_for_all_entries(self):
        for entry in catalog_list():
            counts = profile_chain_counts(entry.profile, 30)
            series = profile_series(entry.profile, 31)
            assert counts == series.to_list(), entry.name

    def test_counts_match_product_for_backed_entries(self):
        for entry in catalog_list():
            if entry.product is None:
                continue
            counts = profile_chain_counts(entry.profile, 30)
            series = product_side(entry.product, 31)
            assert counts == series.to_list(), entry.name

    def test_shared_term_families_have_equal_counts(self):
        # group catalog entries by their (slots, weight) value sequences
        catalog = default_catalog()
        signature = {}
        for entry in catalog.entries():
            key = tuple(
                (
                    branch.parity_label,
                    tuple(
                        (branch.slot_count(n), branch.declared_weight(n))
                        for n in range(branch.n_min, branch.n_min + 7)
                    ),
                )
                for branch in entry.profile.branches
            )
            signature.setdefault(key, []).append(entry)
        for group in signature.values():
            if len(group) < 2:
                continue
            sequences = [profile_chain_counts(e.profile, 18) for e in group]
            assert all(seq == sequences[0] for seq in sequences), [
                e.name for e in group
            ]


class TestCatalogFormat:
    def test_loader_rejects_duplicate_names(self):
        text = CATALOG_PATH.read_text(encoding="utf-8")
        payload = json.loads(text)
        payload["entries"].append(dict(payload["entries"][0]))
        with pytest.raises(ValueError):
            loads_catalog(json.dumps(payload))

    def test_loader_requires_final_otherwise(self):
        payload = {
            "entries": [
                {
                    "name": "x",
                    "aliases": [],
                    "source": "",
                    "modulus": None,
                    "residues": None,
                    "branches": [
                        {
                            "parity": "all",
                            "n_min": 0,
                            "slots": "n",
                            "min_weight": "n",
                            "offsets": [{"when": "s == 1", "value": "n"}],
                        }
                    ],
                }
            ]
        }
        with pytest.raises(ValueError):
            loads_catalog(json.dumps(payload))

    def test_loader_rejects_bad_parity_pair(self):
        payload = {
            "entries": [
                {
                    "name": "x",
                    "aliases": [],
                    "source": "",
                    "modulus": None,
                    "residues": None,
                    "branches": [
                        {
                            "parity": "even",
                            "n_min": 0,
                            "slots": "2*n",
                            "min_weight": "n",
                            "offsets": [{"when": "otherwise", "value": "0"}],
                        },
                        {
                            "parity": "even",
                            "n_min": 0,
                            "slots": "2*n",
                            "min_weight": "n",
                            "offsets": [{"when": "otherwise", "value": "0"}],
                        },
                    ],
                }
            ]
        }
        with pytest.raises(ValueError):
            loads_catalog(json.dumps(payload))

    def test_loader_rejects_malicious_rules(self):
        payload = {
            "entries": [
                {
                    "name": "x",
                    "aliases": [],
                    "source": "",
                    "modulus": None,
                    "residues": None,
                    "branches": [
                        {
                            "parity": "all",
                            "n_min": 0,
                            "slots": "n",
                            "min_weight": "__import__('os').system('true')",
                            "offsets": [{"when": "otherwise", "value": "0"}],
                        }
                    ],
                }
            ]
        }
        with pytest.raises(ValueError):
            loads_catalog(json.dumps(payload))
