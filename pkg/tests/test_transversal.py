import random
from fractions import Fraction as F

import pytest

from boxstab.core import box, cube, family_of, flat
from boxstab.counterexample import counterexample_family
from boxstab.transversal import (
    TransversalCert,
    canonical_flats,
    greedy_transversal,
    is_t_heavy,
    min_transversal,
    transversal_violation,
    verify_transversal,
)

from conftest import (
    brute_max_scattered_size,
    brute_min_cover_size,
    brute_min_cover_size_by_subsets,
    random_family,
)


class TestCanonicalFlats:
    def test_points_are_right_endpoints(self):
        fam = family_of([box((0, 1)), box((2, 3))])
        assert [f.fixed for f in canonical_flats(fam, 0)] == [((1, F(1)),), ((1, F(3)),)]

    def test_single_box_lines(self):
        fam = family_of([cube(0, 1, 2)])
        assert canonical_flats(fam, 1) == [flat(2, {1: 1}), flat(2, {2: 1})]

    def test_endpoint_grid(self):
        fam = family_of([cube(0, 1, 2), box((0, 2), (0, 3))])
        points = canonical_flats(fam, 0)
        values = {tuple(v for _, v in f.fixed) for f in points}
        assert values == {(1, 1), (1, 3), (2, 1), (2, 3)}

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            canonical_flats(family_of([box((0, 1))]), 1)


class TestGreedy:
    def test_single_box(self):
        fam = family_of([cube(0, 1, 3)])
        for k in range(3):
            assert len(greedy_transversal(fam, k).flats) == 1

    def test_interval_chain(self):
        fam = family_of([box((0, 1)), box((F(1, 2), 2)), box((3, 4))])
        cert = greedy_transversal(fam, 0)
        assert len(cert.flats) == 2
        assert cert.flats[0] == flat(1, {1: 1})  # covers the first two
        assert cert.flats[1] == flat(1, {1: 4})
        assert verify_transversal(fam, cert)

    def test_disjoint_counterexample_prefix(self):
        fam = counterexample_family(1, 1, 4)
        cert = greedy_transversal(fam, 0)
        assert len(cert.flats) == 4


class TestMinTransversal:
    def test_two_lines(self):
        fam = family_of([cube(0, 1, 2), box((5, 6), (0, 1)), box((0, 1), (5, 6))])
        cert = min_transversal(fam, 1)
        assert cert.optimal and len(cert.flats) == 2
        assert verify_transversal(fam, cert)

    def test_common_point(self):
        fam = family_of([box((-1, 1), (-2, 3)), box((0, 5), (0, 4)), box((-3, 2), (-1, 1))])
        cert = min_transversal(fam, 0)
        assert len(cert.flats) == 1

    def test_counterexample_prefix_needs_one_flat_per_box(self):
        for d in (1, 2):
            fam = counterexample_family(1, d, 4)
            for k in range(d):
                assert len(min_transversal(fam, k).flats) == 4

    def test_deterministic(self):
        rng = random.Random(7)
        for _ in range(20):
            fam = random_family(rng, 2, max_boxes=6)
            a = min_transversal(fam, 1)
            b = min_transversal(fam, 1)
            assert a == b

    def test_cap_refused(self):
        # k=0 in d=2 is below hyperplane level, so the general cap (25) applies
        fam = counterexample_family(1, 2, 26)
        with pytest.raises(ValueError, match="cap"):
            min_transversal(fam, 0)
        assert len(min_transversal(fam, 0, cap=30).flats) == 26
        # in d=1, k=0 is the hyperplane level with the larger cap
        assert len(min_transversal(counterexample_family(1, 1, 26), 0).flats) == 26

    def test_budget_exhaustion_flags_result(self):
        fam = counterexample_family(1, 1, 20)
        cert = min_transversal(fam, 0, budget=3)
        assert cert.budget_exhausted and not cert.optimal
        assert verify_transversal(fam, cert)  # greedy fallback still valid


class TestOracleEquivalence:
    def test_lattice_oracle_matches_literal_subsets(self):
        rng = random.Random(11)
        for _ in range(40):
            d = rng.choice((1, 2))
            fam = random_family(rng, d, max_boxes=4)
            for k in range(d):
                assert brute_min_cover_size(fam, k) == brute_min_cover_size_by_subsets(fam, k)

    def test_min_transversal_matches_oracle(self):
        rng = random.Random(13)
        for _ in range(60):
            d = rng.choice((1, 2, 3))
            fam = random_family(rng, d, max_boxes=6)
            for k in range(d):
                cert = min_transversal(fam, k)
                assert cert.optimal
                assert len(cert.flats) == brute_min_cover_size(fam, k)
                assert verify_transversal(fam, cert)


class TestVerify:
    def test_rejects_missing_assignment(self):
        fam = family_of([box((0, 1)), box((2, 3))])
        cert = min_transversal(fam, 0)
        broken = TransversalCert(cert.k, cert.flats, {1: 1})
        assert transversal_violation(fam, broken) == "box 2 has no assigned flat"

    def test_rejects_wrong_flat_level(self):
        fam = family_of([cube(0, 1, 2)])
        cert = TransversalCert(0, (flat(2, {1: 1}),), {1: 1})
        assert "fixes 1 axes" in transversal_violation(fam, cert)

    def test_rejects_non_stabbing_assignment(self):
        fam = family_of([box((0, 1)), box((5, 6))])
        cert = TransversalCert(0, (flat(1, {1: 1}),), {1: 1, 2: 1})
        assert "does not stab box 2" in transversal_violation(fam, cert)


class TestHeaviness:
    def test_single_box(self):
        fam = family_of([cube(0, 1, 2)])
        for k in (0, 1):
            assert is_t_heavy(fam, k, 0).heavy is True
            report = is_t_heavy(fam, k, 1)
            assert report.heavy is False and report.tau == 1

    def test_disjoint_prefix_heavy(self):
        fam = counterexample_family(1, 2, 6)
        assert is_t_heavy(fam, 1, 5).heavy is True

    def test_tau_pinned_when_within_threshold(self):
        fam = family_of([box((0, 1)), box((F(1, 2), 2)), box((3, 4))])
        report = is_t_heavy(fam, 0, 5)
        assert report.heavy is False and report.tau == 2

    def test_empty_family(self):
        fam = family_of([], dim=2)
        assert is_t_heavy(fam, 0, 0).heavy is False

    def test_unknown_on_tiny_budget(self):
        fam = random_family(random.Random(3), 2, max_boxes=8)
        report = is_t_heavy(fam, 0, 2, budget=0)
        assert report.heavy in (None, True)  # lower bound may decide without search

    def test_heavy_matches_exact_tau(self):
        rng = random.Random(17)
        for _ in range(30):
            d = rng.choice((1, 2))
            fam = random_family(rng, d, max_boxes=6)
            for k in range(d):
                tau = len(min_transversal(fam, k).flats)
                for t in (0, 1, 2, tau - 1, tau, tau + 1):
                    if t < 0:
                        continue
                    report = is_t_heavy(fam, k, t)
                    assert report.heavy == (tau > t)
                    if report.tau is not None:
                        assert report.tau == tau


def test_weak_duality_against_brute_scattered():
    rng = random.Random(23)
    for _ in range(40):
        d = rng.choice((1, 2))
        fam = random_family(rng, d, max_boxes=6)
        for k in range(d):
            assert brute_max_scattered_size(fam, k) <= len(min_transversal(fam, k).flats)
